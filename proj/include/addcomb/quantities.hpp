#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "addcomb/budgets.hpp"
#include "addcomb/errors.hpp"
#include "addcomb/group.hpp"
#include "addcomb/spectral.hpp"

namespace addcomb {

namespace detail {

inline std::int64_t narrow_count(__int128 v, const char* what) {
    if (v > static_cast<__int128>(std::numeric_limits<std::int64_t>::max()) || v < 0)
        throw exactness_error(std::string(what) + ": count exceeds the exact integer range");
    return static_cast<std::int64_t>(v);
}

inline __int128 mul_checked(__int128 a, __int128 b, const char* what) {
    if (a == 0 || b == 0) return 0;
    static const __int128 kMax = ~(static_cast<unsigned __int128>(1) << 127) >> 1;
    if (a < 0 || b < 0) throw exactness_error(std::string(what) + ": negative factor");
    if (a > kMax / b) throw exactness_error(std::string(what) + ": product overflows");
    return a * b;
}

inline __int128 pow_checked(__int128 base, int exp, const char* what) {
    __int128 r = 1;
    for (int i = 0; i < exp; ++i) r = mul_checked(r, base, what);
    return r;
}

}  // namespace detail

/// A subset of a finite abelian group as a bit-vector over element indices.
class GroupSubset {
public:
    explicit GroupSubset(GroupSpec group)
        : group_(std::move(group)),
          bits_(static_cast<std::size_t>((group_.size() + 63) / 64), 0),
          card_(0) {}

    static GroupSubset from_indices(GroupSpec group, const std::vector<std::int64_t>& indices) {
        GroupSubset s(std::move(group));
        for (auto i : indices) s.insert(i);
        return s;
    }

    static GroupSubset full(GroupSpec group) {
        GroupSubset s(std::move(group));
        for (std::int64_t i = 0; i < s.group().size(); ++i) s.insert(i);
        return s;
    }

    const GroupSpec& group() const { return group_; }
    std::int64_t size() const { return card_; }
    bool empty() const { return card_ == 0; }

    bool contains(std::int64_t i) const {
        return (bits_[static_cast<std::size_t>(i >> 6)] >> (i & 63)) & 1u;
    }

    void insert(std::int64_t i) {
        if (i < 0 || i >= group_.size()) throw validation_error("element index out of range");
        std::uint64_t& w = bits_[static_cast<std::size_t>(i >> 6)];
        const std::uint64_t m = std::uint64_t{1} << (i & 63);
        if (!(w & m)) {
            w |= m;
            ++card_;
        }
    }

    void erase(std::int64_t i) {
        if (i < 0 || i >= group_.size()) throw validation_error("element index out of range");
        std::uint64_t& w = bits_[static_cast<std::size_t>(i >> 6)];
        const std::uint64_t m = std::uint64_t{1} << (i & 63);
        if (w & m) {
            w &= ~m;
            --card_;
        }
    }

    std::vector<std::int64_t> indices() const {
        std::vector<std::int64_t> out;
        out.reserve(static_cast<std::size_t>(card_));
        for (std::size_t w = 0; w < bits_.size(); ++w) {
            std::uint64_t word = bits_[w];
            while (word) {
                const int b = std::countr_zero(word);
                out.push_back(static_cast<std::int64_t>(w * 64 + static_cast<std::size_t>(b)));
                word &= word - 1;
            }
        }
        return out;
    }

    DenseFunction indicator() const {
        std::vector<cplx> v(static_cast<std::size_t>(group_.size()), cplx{0.0, 0.0});
        for (auto i : indices()) v[static_cast<std::size_t>(i)] = 1.0;
        return DenseFunction(group_, std::move(v), true);
    }

    GroupSubset intersect(const GroupSubset& other) const {
        require_same_group(group_, other.group_);
        GroupSubset out(group_);
        std::int64_t c = 0;
        for (std::size_t w = 0; w < bits_.size(); ++w) {
            out.bits_[w] = bits_[w] & other.bits_[w];
            c += std::popcount(out.bits_[w]);
        }
        out.card_ = c;
        return out;
    }

    std::int64_t intersect_size(const GroupSubset& other) const {
        require_same_group(group_, other.group_);
        std::int64_t c = 0;
        for (std::size_t w = 0; w < bits_.size(); ++w)
            c += std::popcount(bits_[w] & other.bits_[w]);
        return c;
    }

    bool subset_of(const GroupSubset& other) const {
        require_same_group(group_, other.group_);
        for (std::size_t w = 0; w < bits_.size(); ++w)
            if (bits_[w] & ~other.bits_[w]) return false;
        return true;
    }

    friend bool operator==(const GroupSubset& a, const GroupSubset& b) {
        return a.group_ == b.group_ && a.bits_ == b.bits_;
    }

private:
    GroupSpec group_;
    std::vector<std::uint64_t> bits_;
    std::int64_t card_;
};

/// A + g (or A - g with negate_shift).
inline GroupSubset translate(const GroupSubset& a, std::int64_t g) {
    GroupSubset out(a.group());
    for (auto i : a.indices()) out.insert(a.group().add(i, g));
    return out;
}

/// A set of k-tuples of element indices, stored as a hash set of packed
/// keys. The tuple budget is a hard memory cap.
class TupleSet {
public:
    TupleSet(GroupSpec group, int arity, std::int64_t max_tuples = default_budgets().max_tuples)
        : group_(std::move(group)), arity_(arity), max_tuples_(max_tuples) {
        if (arity < 1) throw validation_error("tuple arity must be >= 1");
        double bits = static_cast<double>(arity) * std::log2(static_cast<double>(group_.size()));
        if (bits > 126.0) throw resource_error("tuple arity too large to pack");
    }

    static TupleSet from_subset(const GroupSubset& a,
                                std::int64_t max_tuples = default_budgets().max_tuples) {
        TupleSet t(a.group(), 1, max_tuples);
        for (auto i : a.indices()) t.insert({i});
        return t;
    }

    const GroupSpec& group() const { return group_; }
    int arity() const { return arity_; }
    std::int64_t size() const { return static_cast<std::int64_t>(set_.size()); }

    void insert(const std::vector<std::int64_t>& tuple) {
        if (static_cast<int>(tuple.size()) != arity_) throw validation_error("tuple arity mismatch");
        insert_key(pack(tuple));
    }

    bool contains(const std::vector<std::int64_t>& tuple) const {
        return set_.count(pack(tuple)) != 0;
    }

    template <typename Fn>
    void for_each(Fn&& fn) const {
        std::vector<std::int64_t> t(static_cast<std::size_t>(arity_));
        for (auto key : set_) {
            unpack(key, t);
            fn(t);
        }
    }

    std::vector<std::vector<std::int64_t>> to_sorted_tuples() const {
        std::vector<std::vector<std::int64_t>> out;
        out.reserve(set_.size());
        for_each([&](const std::vector<std::int64_t>& t) { out.push_back(t); });
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Cartesian product (tuple concatenation); arities add.
    TupleSet cartesian(const TupleSet& other) const {
        require_same_group(group_, other.group_);
        TupleSet out(group_, arity_ + other.arity_, std::min(max_tuples_, other.max_tuples_));
        std::vector<std::int64_t> joined(static_cast<std::size_t>(out.arity_));
        for_each([&](const std::vector<std::int64_t>& t) {
            std::copy(t.begin(), t.end(), joined.begin());
            other.for_each([&](const std::vector<std::int64_t>& u) {
                std::copy(u.begin(), u.end(), joined.begin() + arity_);
                out.insert(joined);
            });
        });
        return out;
    }

private:
    using key_t = unsigned __int128;

    struct KeyHash {
        std::size_t operator()(key_t v) const {
            std::uint64_t lo = static_cast<std::uint64_t>(v);
            std::uint64_t hi = static_cast<std::uint64_t>(v >> 64);
            std::uint64_t z = lo ^ (hi + 0x9e3779b97f4a7c15ULL + (lo << 6) + (lo >> 2));
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            return static_cast<std::size_t>(z ^ (z >> 31));
        }
    };

    key_t pack(const std::vector<std::int64_t>& tuple) const {
        key_t key = 0;
        for (auto v : tuple) {
            if (v < 0 || v >= group_.size()) throw validation_error("tuple coordinate out of range");
            key = key * static_cast<key_t>(group_.size()) + static_cast<key_t>(v);
        }
        return key;
    }

    void unpack(key_t key, std::vector<std::int64_t>& out) const {
        for (int j = arity_ - 1; j >= 0; --j) {
            out[static_cast<std::size_t>(j)] =
                static_cast<std::int64_t>(key % static_cast<key_t>(group_.size()));
            key /= static_cast<key_t>(group_.size());
        }
    }

    void insert_key(key_t key) {
        if (static_cast<std::int64_t>(set_.size()) >= max_tuples_ && set_.count(key) == 0)
            throw resource_error("tuple set exceeds the configured budget");
        set_.insert(key);
    }

    GroupSpec group_;
    int arity_;
    std::int64_t max_tuples_;
    std::unordered_set<key_t, KeyHash> set_;
};

// ---------------------------------------------------------------------------
// Sumsets

/// {a + sign*b : a in A, b in B}; sign -1 gives the difference set.
inline GroupSubset sumset(const GroupSubset& a, const GroupSubset& b, int sign,
                          const Budgets& budgets = default_budgets()) {
    require_same_group(a.group(), b.group());
    if (sign != 1 && sign != -1) throw validation_error("sumset sign must be +1 or -1");
    const GroupSpec& g = a.group();
    const std::int64_t pair_cost = a.size() * b.size();
    const std::int64_t sweep_cost = std::min(a.size(), b.size()) * g.size();
    if (std::min(pair_cost, sweep_cost) > 16 * budgets.max_tuples)
        throw resource_error("sumset enumeration exceeds the configured budget");

    GroupSubset out(g);
    if (pair_cost <= sweep_cost) {
        for (auto x : a.indices()) {
            for (auto y : b.indices()) out.insert(g.add(x, sign > 0 ? y : g.neg(y)));
        }
        return out;
    }
    // Sweep the whole group once per element of the smaller set.
    const bool a_small = a.size() <= b.size();
    const GroupSubset& small = a_small ? a : b;
    const GroupSubset& large = a_small ? b : a;
    for (auto s : small.indices()) {
        // out |= large (+/-) s, walking t = base +/- x over the group.
        const std::int64_t base = a_small ? (sign > 0 ? s : s) : (sign > 0 ? s : g.neg(s));
        const int dir = a_small ? sign : 1;
        detail::OffsetWalker walker(g, base, dir);
        std::int64_t x = 0;
        do {
            if (large.contains(x)) out.insert(walker.index());
            ++x;
        } while (walker.next());
    }
    return out;
}

/// sA, sA+A or sA-A by repeated sumsets (tail_sign 0, +1, -1).
inline GroupSubset iterated_sumset(const GroupSubset& a, int s, int tail_sign,
                                   const Budgets& budgets = default_budgets()) {
    if (s < 1) throw validation_error("iterated sumset requires s >= 1");
    GroupSubset acc = a;
    for (int i = 2; i <= s; ++i) acc = sumset(acc, a, +1, budgets);
    if (tail_sign == 0) return acc;
    return sumset(acc, a, tail_sign, budgets);
}

// ---------------------------------------------------------------------------
// Correlation-based scalars

namespace detail {

/// (A o A) as exact integers; entry x is |A intersect (A + x)|.
inline std::vector<std::int64_t> exact_autocorrelation(const GroupSubset& a,
                                                       const Budgets& budgets) {
    const DenseFunction ind = a.indicator();
    const DenseFunction corr = correlate_circ(ind, ind, budgets);
    std::vector<std::int64_t> out(static_cast<std::size_t>(a.group().size()));
    for (std::int64_t i = 0; i < a.group().size(); ++i) out[static_cast<std::size_t>(i)] = corr.integer_at(i);
    return out;
}

}  // namespace detail

/// rho(A) = max_{x != 0} |A intersect (A + x)|.
inline std::int64_t rho(const GroupSubset& a, const Budgets& budgets = default_budgets()) {
    if (a.group().trivial()) throw validation_error("rho needs a group with at least 2 elements");
    if (a.empty()) return 0;
    const auto corr = detail::exact_autocorrelation(a, budgets);
    std::int64_t best = 0;
    for (std::size_t x = 1; x < corr.size(); ++x) best = std::max(best, corr[x]);
    return best;
}

/// M(A) = max_{xi != 0} |Ahat(xi)|.
inline double fourier_bias(const GroupSubset& a, const Budgets& budgets = default_budgets()) {
    if (a.group().trivial())
        throw validation_error("fourier bias needs a group with at least 2 elements");
    return dft(a.indicator(), DftPath::Auto, budgets).max_magnitude_excluding_zero();
}

/// rho^(k)(A) = max_{x != 0} A^(k)(x); rho^(2) = rho.
inline std::int64_t rho_k(const GroupSubset& a, int k, const Budgets& budgets = default_budgets()) {
    if (k < 2) throw validation_error("rho_k requires k >= 2");
    if (a.group().trivial()) throw validation_error("rho_k needs a group with at least 2 elements");
    if (a.empty()) return 0;
    const DenseFunction power = conv_power(a.indicator(), k, budgets);
    std::int64_t best = 0;
    for (std::int64_t x = 1; x < a.group().size(); ++x) best = std::max(best, power.integer_at(x));
    return best;
}

/// rho_l(A) = max over l-element sets X of |(A+x_1) intersect ... intersect
/// (A+x_l)|. A_X translates with X, so the search is normalized to X
/// containing 0 with the remaining shifts drawn from (A-A) \ {0}; other
/// shifts give empty intersections. Branch-and-bound over candidates in
/// decreasing (A o A) order.
inline std::int64_t rho_l(const GroupSubset& a, int l, const Budgets& budgets = default_budgets()) {
    if (l < 2) throw validation_error("rho_l requires l >= 2");
    if (a.empty()) return 0;
    if (a.group().trivial()) throw validation_error("rho_l needs a group with at least 2 elements");

    const auto corr = detail::exact_autocorrelation(a, budgets);
    std::vector<std::int64_t> candidates;
    for (std::int64_t x = 1; x < a.group().size(); ++x)
        if (corr[static_cast<std::size_t>(x)] > 0) candidates.push_back(x);
    std::sort(candidates.begin(), candidates.end(), [&](std::int64_t p, std::int64_t q) {
        return corr[static_cast<std::size_t>(p)] > corr[static_cast<std::size_t>(q)];
    });

    const int need = l - 1;
    if (static_cast<int>(candidates.size()) < need) return 0;

    const GroupSpec& g = a.group();
    // current intersected with (A + x), without materializing the translate.
    auto intersect_translate = [&](const GroupSubset& current, std::int64_t x) {
        GroupSubset out(g);
        for (auto m : current.indices())
            if (a.contains(g.sub(m, x))) out.insert(m);
        return out;
    };

    std::int64_t best = 0;
    std::int64_t nodes = 0;
    const std::int64_t cap = a.size();

    // Depth-first: current = A intersected with `depth` chosen translates.
    auto dfs = [&](auto&& self, std::size_t start, const GroupSubset& current,
                   int depth) -> void {
        if (depth == need) {
            best = std::max(best, current.size());
            return;
        }
        for (std::size_t i = start; i + static_cast<std::size_t>(need - depth) <= candidates.size();
             ++i) {
            if (best == cap) return;
            if (++nodes > budgets.max_combinations)
                throw resource_error("rho_l search exceeded the combination budget", best);
            // Upper bounds: the chosen translate alone, and the current set.
            if (corr[static_cast<std::size_t>(candidates[i])] <= best) return;  // sorted: rest are no better
            if (current.size() <= best) return;
            GroupSubset next = intersect_translate(current, candidates[i]);
            if (next.size() <= best) continue;
            self(self, i + 1, next, depth + 1);
        }
    };
    dfs(dfs, 0, a, 0);
    return best;
}

/// R^(k)_A on G^(k-1): R(x_1..x_{k-1}) = |A cap (A+x_1) cap ... cap
/// (A+x_{k-1})|, materialized densely.
inline DenseFunction representation_fn(const GroupSubset& a, int k,
                                       const Budgets& budgets = default_budgets()) {
    if (k < 2) throw validation_error("representation function requires k >= 2");
    GroupSpec big;
    try {
        big = power_group(a.group(), k - 1, budgets.max_dense);
    } catch (const size_error&) {
        throw resource_error("representation function domain exceeds the dense budget");
    }

    double tuples = std::pow(static_cast<double>(std::max<std::int64_t>(a.size(), 1)),
                             static_cast<double>(k));
    if (tuples > static_cast<double>(budgets.max_tuples))
        throw resource_error("representation function enumeration exceeds the tuple budget");

    const auto members = a.indices();
    std::vector<std::int64_t> counts(static_cast<std::size_t>(big.size()), 0);
    const std::int64_t n = a.group().size();
    std::vector<std::size_t> slot(static_cast<std::size_t>(k - 1), 0);
    if (!members.empty()) {
        for (auto y : members) {
            // enumerate (a_1..a_{k-1}) in A^{k-1}; coordinate j is y - a_j.
            std::fill(slot.begin(), slot.end(), 0);
            for (;;) {
                std::int64_t idx = 0;
                for (int j = 0; j < k - 1; ++j)
                    idx = idx * n + a.group().sub(y, members[slot[static_cast<std::size_t>(j)]]);
                ++counts[static_cast<std::size_t>(idx)];
                int j = k - 2;
                for (; j >= 0; --j) {
                    if (++slot[static_cast<std::size_t>(j)] < members.size()) break;
                    slot[static_cast<std::size_t>(j)] = 0;
                }
                if (j < 0) break;
            }
        }
    }
    return DenseFunction::from_integers(std::move(big), counts);
}

/// E(A,B) = sum_x (A o A)(x) (B o B)(x): the count of quadruples with
/// a_1 - b_1 = a_2 - b_2.
inline std::int64_t energy(const GroupSubset& a, const GroupSubset& b,
                           const Budgets& budgets = default_budgets()) {
    require_same_group(a.group(), b.group());
    const auto ca = detail::exact_autocorrelation(a, budgets);
    const auto cb = detail::exact_autocorrelation(b, budgets);
    __int128 total = 0;
    for (std::size_t x = 0; x < ca.size(); ++x)
        total += static_cast<__int128>(ca[x]) * cb[x];
    return detail::narrow_count(total, "energy");
}

inline std::int64_t energy(const GroupSubset& a, const Budgets& budgets = default_budgets()) {
    return energy(a, a, budgets);
}

/// E_k(A) = sum_x (A o A)^k (x) for integer k >= 2, exactly.
inline std::int64_t exact_energy_k(const GroupSubset& a, int k,
                                   const Budgets& budgets = default_budgets()) {
    if (k < 2) throw validation_error("exact_energy_k requires integer k >= 2");
    const auto corr = detail::exact_autocorrelation(a, budgets);
    __int128 total = 0;
    for (auto v : corr) total += detail::pow_checked(v, k, "energy_k");
    return detail::narrow_count(total, "energy_k");
}

/// E_k(A) = sum_x (A o A)^k (x) for any real k > 1 (exact integers flow
/// through exact_energy_k when k is integral).
inline double energy_k(const GroupSubset& a, double k,
                       const Budgets& budgets = default_budgets()) {
    if (!(k > 1.0)) throw validation_error("energy_k requires k > 1");
    if (k == std::round(k) && k < 64.0)
        return static_cast<double>(exact_energy_k(a, static_cast<int>(k), budgets));
    const auto corr = detail::exact_autocorrelation(a, budgets);
    double total = 0.0;
    for (auto v : corr)
        if (v > 0) total += std::pow(static_cast<double>(v), k);
    return total;
}

/// E_{k,l}(A) = sum over (x_1..x_{k-1}) of R^(k)_A(...)^l, exactly. Uses a
/// sparse tuple->count map built from |A|^k enumeration, so only the support
/// of R^(k) is materialized.
inline std::int64_t energy_kl(const GroupSubset& a, int k, int l,
                              const Budgets& budgets = default_budgets()) {
    if (k < 2 || l < 2) throw validation_error("energy_kl requires k, l >= 2");
    if (a.empty()) return 0;

    double tuples = std::pow(static_cast<double>(a.size()), static_cast<double>(k));
    if (tuples > static_cast<double>(budgets.max_tuples))
        throw resource_error("energy_kl enumeration exceeds the tuple budget");

    const auto members = a.indices();
    const GroupSpec& g = a.group();

    struct KeyHash {
        std::size_t operator()(unsigned __int128 v) const {
            std::uint64_t z = static_cast<std::uint64_t>(v) ^
                              (static_cast<std::uint64_t>(v >> 64) * 0x9e3779b97f4a7c15ULL);
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            return static_cast<std::size_t>(z ^ (z >> 31));
        }
    };
    std::unordered_map<unsigned __int128, std::int64_t, KeyHash> counts;

    std::vector<std::size_t> slot(static_cast<std::size_t>(k - 1), 0);
    for (auto y : members) {
        std::fill(slot.begin(), slot.end(), 0);
        for (;;) {
            unsigned __int128 key = 0;
            for (int j = 0; j < k - 1; ++j)
                key = key * static_cast<unsigned __int128>(g.size()) +
                      static_cast<unsigned __int128>(g.sub(y, members[slot[static_cast<std::size_t>(j)]]));
            ++counts[key];
            int j = k - 2;
            for (; j >= 0; --j) {
                if (++slot[static_cast<std::size_t>(j)] < members.size()) break;
                slot[static_cast<std::size_t>(j)] = 0;
            }
            if (j < 0) break;
        }
    }

    __int128 total = 0;
    for (const auto& [key, c] : counts) {
        (void)key;
        total += detail::pow_checked(c, l, "energy_kl");
    }
    return detail::narrow_count(total, "energy_kl");
}

/// T_k(A): 2k-tuples with equal k-fold sums, via the k-fold *-power of the
/// indicator.
inline std::int64_t t_k_count(const GroupSubset& a, int k,
                              const Budgets& budgets = default_budgets()) {
    if (k < 2) throw validation_error("t_k_count requires k >= 2");
    const DenseFunction ind = a.indicator();
    DenseFunction p = ind;
    for (int i = 2; i <= k; ++i) p = convolve_star(p, ind, budgets);
    __int128 total = 0;
    for (std::int64_t x = 0; x < p.size(); ++x) {
        const __int128 v = p.integer_at(x);
        total += v * v;
    }
    return detail::narrow_count(total, "t_k_count");
}

/// T_k(f) for exact integer f, as an exact count.
inline std::int64_t t_k_fn_exact(const DenseFunction& f, int k,
                                 const Budgets& budgets = default_budgets()) {
    if (k < 1) throw validation_error("t_k_fn requires k >= 1");
    if (!f.exact()) throw exactness_error("t_k_fn_exact requires exact integer values");
    const DenseFunction p = (k == 1) ? f : conv_power(f, k, budgets);
    __int128 total = 0;
    for (std::int64_t x = 0; x < p.size(); ++x) {
        const __int128 v = p.integer_at(x);
        total += v * v;
    }
    return detail::narrow_count(total, "t_k_fn");
}

/// T_k(f) = sum_x (f^(k)(x))^2 for real f; T_1(f) = sum f^2.
inline double t_k_fn(const DenseFunction& f, int k, const Budgets& budgets = default_budgets()) {
    if (k < 1) throw validation_error("t_k_fn requires k >= 1");
    if (!f.is_real()) throw validation_error("t_k_fn requires a real-valued function");
    if (f.exact()) return static_cast<double>(t_k_fn_exact(f, k, budgets));
    const DenseFunction p = (k == 1) ? f : conv_power(f, k, budgets);
    double total = 0.0;
    for (const auto& v : p.values()) total += v.real() * v.real();
    return total;
}

// ---------------------------------------------------------------------------
// Higher difference sets

/// A^k - Delta_k(A) = {(a_1 - a, ..., a_k - a)} as an explicit TupleSet.
inline TupleSet higher_diff(const GroupSubset& a, int k,
                            const Budgets& budgets = default_budgets()) {
    if (k < 1) throw validation_error("higher difference set requires k >= 1");
    double generated = std::pow(static_cast<double>(std::max<std::int64_t>(a.size(), 1)),
                                static_cast<double>(k + 1));
    if (generated > static_cast<double>(budgets.max_tuples))
        throw resource_error("higher difference set enumeration exceeds the tuple budget");

    TupleSet out(a.group(), k, budgets.max_tuples);
    const auto members = a.indices();
    const GroupSpec& g = a.group();
    std::vector<std::int64_t> tuple(static_cast<std::size_t>(k));
    std::vector<std::size_t> slot(static_cast<std::size_t>(k), 0);
    for (auto base : members) {
        std::fill(slot.begin(), slot.end(), 0);
        for (;;) {
            for (int j = 0; j < k; ++j)
                tuple[static_cast<std::size_t>(j)] = g.sub(members[slot[static_cast<std::size_t>(j)]], base);
            out.insert(tuple);
            int j = k - 1;
            for (; j >= 0; --j) {
                if (++slot[static_cast<std::size_t>(j)] < members.size()) break;
                slot[static_cast<std::size_t>(j)] = 0;
            }
            if (j < 0) break;
        }
    }
    return out;
}

/// |A^k - Delta_k(A)| without materializing tuples: depth-first over prefix
/// intersections, counting, for every nonempty A_{x_1..x_j}, the support of
/// (A o A_{x...}), which is exactly the set of admissible next coordinates.
inline std::int64_t higher_diff_size(const GroupSubset& a, int k,
                                     const Budgets& budgets = default_budgets()) {
    if (k < 1) throw validation_error("higher difference set requires k >= 1");
    if (a.empty()) return 0;
    const GroupSpec& g = a.group();
    const Spectrum ahat = dft(a.indicator(), DftPath::Fast, budgets);

    std::int64_t nodes = 0;
    // Support of (A o S): x with S cap (A + x) nonempty, i.e. x in S - A.
    auto next_support = [&](const GroupSubset& s) {
        if (++nodes > budgets.max_combinations)
            throw resource_error("higher difference size exceeded the node budget");
        std::vector<cplx> v = s.indicator().values();
        detail::transform_inplace(v, g, false, DftPath::Fast);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::conj(ahat.values()[i]) * v[i];
        detail::transform_inplace(v, g, true, DftPath::Fast);
        const double scale = 1.0 / static_cast<double>(g.size());
        std::vector<std::int64_t> support;
        for (std::int64_t x = 0; x < g.size(); ++x)
            if (v[static_cast<std::size_t>(x)].real() * scale > 0.5) support.push_back(x);
        return support;
    };

    std::int64_t count = 0;
    auto dfs = [&](auto&& self, const GroupSubset& s, int depth) -> void {
        const auto support = next_support(s);
        if (depth == k - 1) {
            count += static_cast<std::int64_t>(support.size());
            return;
        }
        for (auto x : support) self(self, s.intersect(translate(a, x)), depth + 1);
    };
    dfs(dfs, a, 0);
    return count;
}

/// {(s_1 - t, ..., s_k - t) : s in S, t in T}.
inline TupleSet tuple_diff(const TupleSet& s, const GroupSubset& t,
                           const Budgets& budgets = default_budgets()) {
    require_same_group(s.group(), t.group());
    if (s.size() * std::max<std::int64_t>(t.size(), 1) > budgets.max_tuples)
        throw resource_error("tuple difference enumeration exceeds the tuple budget");
    TupleSet out(s.group(), s.arity(), budgets.max_tuples);
    const GroupSpec& g = s.group();
    std::vector<std::int64_t> shifted(static_cast<std::size_t>(s.arity()));
    s.for_each([&](const std::vector<std::int64_t>& tuple) {
        for (auto x : t.indices()) {
            for (std::size_t j = 0; j < tuple.size(); ++j) shifted[j] = g.sub(tuple[j], x);
            out.insert(shifted);
        }
    });
    return out;
}

// ---------------------------------------------------------------------------
// Sigma diagnostics

/// sigma = sum_x |B_x| |S_x| with S = A + B, computed exactly in the time
/// domain and cross-checked against N^-1 sum |Bhat|^2 |Shat|^2.
inline std::int64_t sigma_sum(const GroupSubset& a, const GroupSubset& b,
                              const Budgets& budgets = default_budgets()) {
    require_same_group(a.group(), b.group());
    const GroupSubset s = sumset(a, b, +1, budgets);
    const auto cb = detail::exact_autocorrelation(b, budgets);
    const auto cs = detail::exact_autocorrelation(s, budgets);
    __int128 total = 0;
    for (std::size_t x = 0; x < cb.size(); ++x)
        total += static_cast<__int128>(cb[x]) * cs[x];
    const std::int64_t exact = detail::narrow_count(total, "sigma_sum");

    const Spectrum bh = dft(b.indicator(), DftPath::Auto, budgets);
    const Spectrum sh = dft(s.indicator(), DftPath::Auto, budgets);
    double spectral = 0.0;
    for (std::size_t i = 0; i < bh.values().size(); ++i)
        spectral += std::norm(bh.values()[i]) * std::norm(sh.values()[i]);
    spectral /= static_cast<double>(a.group().size());
    if (std::abs(spectral - static_cast<double>(exact)) >
        1e-6 * std::max(1.0, static_cast<double>(exact)))
        throw exactness_error("sigma_sum spectral cross-check failed");
    return exact;
}

/// sigma_* = sum_{x in D} |D_x| with D = A - A.
inline std::int64_t sigma_star(const GroupSubset& a, const Budgets& budgets = default_budgets()) {
    const GroupSubset d = sumset(a, a, -1, budgets);
    const auto cd = detail::exact_autocorrelation(d, budgets);
    __int128 total = 0;
    for (auto x : d.indices()) total += cd[static_cast<std::size_t>(x)];
    return detail::narrow_count(total, "sigma_star");
}

/// One dyadic level: the shifts x != 0 whose correlation value lies in
/// (level/2, level], level a power of two.
struct DyadicLevel {
    std::int64_t level;
    GroupSubset shifts;
};

/// Partition of supp(A o A) \ {0} into dyadic levels. The level label is the
/// upper endpoint, so level^(10/7) * |P| bounds the bucket's E_{10/7} mass
/// from above and the pigeonhole witness is exact.
inline std::vector<DyadicLevel> dyadic_level_sets(const GroupSubset& a,
                                                  const Budgets& budgets = default_budgets()) {
    const auto corr = detail::exact_autocorrelation(a, budgets);
    std::map<std::int64_t, GroupSubset> buckets;
    for (std::int64_t x = 1; x < a.group().size(); ++x) {
        const std::int64_t v = corr[static_cast<std::size_t>(x)];
        if (v <= 0) continue;
        const std::int64_t level =
            static_cast<std::int64_t>(std::bit_ceil(static_cast<std::uint64_t>(v)));
        auto it = buckets.find(level);
        if (it == buckets.end()) it = buckets.emplace(level, GroupSubset(a.group())).first;
        it->second.insert(x);
    }
    std::vector<DyadicLevel> out;
    out.reserve(buckets.size());
    for (auto& [level, shifts] : buckets) out.push_back(DyadicLevel{level, std::move(shifts)});
    return out;
}

// ---------------------------------------------------------------------------
// Quantity report

struct ReportOptions {
    std::vector<int> t_orders = {2, 3};
    std::vector<int> eps_orders = {2};
};

/// Flat scalar map; keys are stable and values are exact integers stored in
/// doubles wherever the quantity is integral.
struct QuantityReport {
    std::map<std::string, double> scalars;

    double at(const std::string& key) const {
        auto it = scalars.find(key);
        if (it == scalars.end()) throw validation_error("unknown report scalar: " + key);
        return it->second;
    }
};

inline QuantityReport compute_report(const GroupSubset& a, const GroupSubset* b = nullptr,
                                     const ReportOptions& opts = {},
                                     const Budgets& budgets = default_budgets()) {
    if (a.empty()) throw validation_error("quantity report requires a nonempty set");
    QuantityReport r;
    const double card = static_cast<double>(a.size());
    const std::int64_t n = a.group().size();
    r.scalars["card_A"] = card;
    r.scalars["group_N"] = static_cast<double>(n);
    r.scalars["delta"] = card / static_cast<double>(n);

    const GroupSubset d = sumset(a, a, -1, budgets);
    const double k_doubling = static_cast<double>(d.size()) / card;
    r.scalars["card_D"] = static_cast<double>(d.size());
    r.scalars["K"] = k_doubling;

    const std::int64_t rho_val = rho(a, budgets);
    r.scalars["rho"] = static_cast<double>(rho_val);
    r.scalars["M"] = fourier_bias(a, budgets);
    r.scalars["energy"] = static_cast<double>(energy(a, a, budgets));

    for (int k : opts.t_orders)
        r.scalars["T" + std::to_string(k)] = static_cast<double>(t_k_count(a, k, budgets));
    for (int k : opts.eps_orders) {
        const double size_k = static_cast<double>(higher_diff_size(a, k, budgets));
        const double dk = std::pow(static_cast<double>(d.size()), static_cast<double>(k));
        r.scalars["eps" + std::to_string(k)] = size_k / dk;
    }

    // rho >= |A| / (2K) whenever |A| >= 2.
    r.scalars["rho_simple_lb"] = card / (2.0 * k_doubling);
    r.scalars["rho_simple_lb_ok"] =
        (a.size() < 2 || static_cast<double>(rho_val) >= card / (2.0 * k_doubling)) ? 1.0 : 0.0;

    if (b != nullptr) {
        require_same_group(a.group(), b->group());
        if (b->empty()) throw validation_error("quantity report requires a nonempty B");
        const GroupSubset bb = sumset(*b, *b, -1, budgets);
        const GroupSubset s = sumset(a, *b, +1, budgets);
        const double zeta = static_cast<double>(b->size()) / card;
        const double k_star = static_cast<double>(bb.size()) / static_cast<double>(b->size());
        const double omega = static_cast<double>(s.size()) / static_cast<double>(d.size());
        r.scalars["card_B"] = static_cast<double>(b->size());
        r.scalars["card_BB"] = static_cast<double>(bb.size());
        r.scalars["card_S"] = static_cast<double>(s.size());
        r.scalars["zeta"] = zeta;
        r.scalars["K_star"] = k_star;
        r.scalars["omega"] = omega;
        r.scalars["kappa"] = k_doubling * r.scalars["delta"] * omega;
        r.scalars["kappa_star"] =
            r.scalars["delta"] * k_doubling * k_doubling * static_cast<double>(rho_val) / card;
    }
    return r;
}

}  // namespace addcomb
