#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace addcomb {

/// Base class of every error thrown by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid arguments: mismatched groups, malformed parameters, bad set specs.
class validation_error : public error {
public:
    using error::error;
};

/// A requested group or dense array would exceed the configured maximum size.
class size_error : public validation_error {
public:
    using validation_error::validation_error;
};

/// An enumeration or search ran past its budget. When a partial result is
/// meaningful (a lower bound found before the budget ran out) it rides along.
class resource_error : public error {
public:
    explicit resource_error(const std::string& what,
                            std::optional<std::int64_t> partial = std::nullopt)
        : error(what), partial_lower_bound(partial) {}

    std::optional<std::int64_t> partial_lower_bound;
};

/// An operation that must produce verified exact integers could not: the FFT
/// rounding residual was too large, or a count left the exactly representable
/// range.
class exactness_error : public error {
public:
    using error::error;
};

}  // namespace addcomb
