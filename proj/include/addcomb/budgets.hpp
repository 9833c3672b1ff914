#pragma once

#include <cstdint>

namespace addcomb {

/// Resource limits for the operations whose cost is exponential in their
/// parameters. Every limit is a hard stop: exceeding it raises
/// resource_error (or size_error for group construction) instead of
/// thrashing.
struct Budgets {
    /// Largest admissible group cardinality N.
    std::int64_t max_group_size = std::int64_t{1} << 20;

    /// At or below this N the O(N^2) reference paths (naive DFT, direct
    /// convolution) are used by default; above it the fast transforms take
    /// over.
    std::int64_t naive_cutoff = 4096;

    /// Cap on hash-set tuple storage and on tuple enumeration loops.
    std::int64_t max_tuples = 10'000'000;

    /// Cap on dense arrays over product groups G^k (entry count).
    std::int64_t max_dense = std::int64_t{1} << 22;

    /// Cap on intersection evaluations in the rho_l subset search.
    std::int64_t max_combinations = 5'000'000;

    friend bool operator==(const Budgets&, const Budgets&) = default;
};

inline const Budgets& default_budgets() {
    static const Budgets b{};
    return b;
}

}  // namespace addcomb
