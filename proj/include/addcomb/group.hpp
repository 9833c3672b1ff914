#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "addcomb/budgets.hpp"
#include "addcomb/errors.hpp"

namespace addcomb {

/// A finite abelian group Z/n_1 x ... x Z/n_r given as an explicit product of
/// cyclic factors. Elements are addressed by a linear index in [0, N): the
/// mixed-radix encoding of the coordinate tuple with the LAST coordinate
/// varying fastest, so for F_2^2 the index order is (0,0),(0,1),(1,0),(1,1).
///
/// The dual group is identified with the group itself through the same index
/// scheme: a character label xi is just another element index, and
/// character(xi, g) = exp(2 pi i * sum_j xi_j g_j / n_j). This makes the
/// pairing symmetric and lets spectra live in plain length-N arrays.
///
/// GroupSpec values are immutable after construction and safe to share across
/// threads; every operation is pure.
class GroupSpec {
public:
    /// The trivial group, N = 1.
    GroupSpec() = default;

    const std::vector<std::int64_t>& orders() const { return orders_; }
    std::int64_t size() const { return size_; }
    int rank() const { return static_cast<int>(orders_.size()); }
    bool trivial() const { return size_ == 1; }

    bool all_orders_two() const {
        for (auto n : orders_)
            if (n != 2) return false;
        return !orders_.empty();
    }

    std::int64_t stride(int axis) const { return strides_[axis]; }
    std::int64_t order(int axis) const { return orders_[axis]; }

    std::int64_t index_of(const std::vector<std::int64_t>& coords) const {
        if (coords.size() != orders_.size())
            throw validation_error("coordinate tuple has wrong rank");
        std::int64_t idx = 0;
        for (std::size_t j = 0; j < coords.size(); ++j) {
            if (coords[j] < 0 || coords[j] >= orders_[j])
                throw validation_error("coordinate out of range");
            idx += coords[j] * strides_[j];
        }
        return idx;
    }

    std::vector<std::int64_t> coords_of(std::int64_t index) const {
        check_index(index);
        std::vector<std::int64_t> c(orders_.size());
        for (std::size_t j = 0; j < orders_.size(); ++j)
            c[j] = (index / strides_[j]) % orders_[j];
        return c;
    }

    std::int64_t add(std::int64_t a, std::int64_t b) const {
        check_index(a);
        check_index(b);
        if (rank() <= 1) {
            std::int64_t s = a + b;
            return s >= size_ ? s - size_ : s;
        }
        std::int64_t out = 0;
        for (std::size_t j = 0; j < orders_.size(); ++j) {
            std::int64_t s = (a / strides_[j]) % orders_[j] + (b / strides_[j]) % orders_[j];
            if (s >= orders_[j]) s -= orders_[j];
            out += s * strides_[j];
        }
        return out;
    }

    std::int64_t neg(std::int64_t a) const {
        check_index(a);
        if (rank() <= 1) return a == 0 ? 0 : size_ - a;
        std::int64_t out = 0;
        for (std::size_t j = 0; j < orders_.size(); ++j) {
            std::int64_t c = (a / strides_[j]) % orders_[j];
            if (c != 0) c = orders_[j] - c;
            out += c * strides_[j];
        }
        return out;
    }

    std::int64_t sub(std::int64_t a, std::int64_t b) const { return add(a, neg(b)); }

    /// Index of the axis unit vector e_axis (coordinate 1 in one factor).
    std::int64_t unit(int axis) const {
        if (axis < 0 || axis >= rank()) throw validation_error("axis out of range");
        return strides_[axis];
    }

    /// character(xi, g) = exp(2 pi i * sum_j xi_j g_j / n_j); |result| = 1.
    std::complex<double> character(std::int64_t xi, std::int64_t g) const {
        check_index(xi);
        check_index(g);
        double frac = 0.0;
        for (std::size_t j = 0; j < orders_.size(); ++j) {
            std::int64_t xj = (xi / strides_[j]) % orders_[j];
            std::int64_t gj = (g / strides_[j]) % orders_[j];
            frac += static_cast<double>((xj * gj) % orders_[j]) / static_cast<double>(orders_[j]);
        }
        return std::polar(1.0, 2.0 * std::numbers::pi * frac);
    }

    std::string name() const {
        if (orders_.empty()) return "Z/1";
        std::string s;
        for (std::size_t j = 0; j < orders_.size(); ++j) {
            if (j) s += "x";
            s += "Z/" + std::to_string(orders_[j]);
        }
        return s;
    }

    friend bool operator==(const GroupSpec&, const GroupSpec&) = default;

    /// Canonical factory: drops factors of order 1, validates positivity and
    /// the size cap. An empty (or all-ones) list yields the trivial group.
    static GroupSpec product(std::vector<std::int64_t> orders,
                             std::int64_t max_size = default_budgets().max_group_size) {
        std::vector<std::int64_t> kept;
        kept.reserve(orders.size());
        std::int64_t n = 1;
        for (auto o : orders) {
            if (o <= 0) throw validation_error("cyclic order must be positive");
            if (o == 1) continue;
            if (n > max_size / o)
                throw size_error("group size exceeds the configured maximum");
            n *= o;
            kept.push_back(o);
        }
        GroupSpec g;
        g.orders_ = std::move(kept);
        g.size_ = n;
        g.strides_.assign(g.orders_.size(), 1);
        for (int j = static_cast<int>(g.orders_.size()) - 2; j >= 0; --j)
            g.strides_[j] = g.strides_[j + 1] * g.orders_[j + 1];
        return g;
    }

private:
    void check_index(std::int64_t i) const {
        if (i < 0 || i >= size_) throw validation_error("element index out of range");
    }

    std::vector<std::int64_t> orders_;
    std::vector<std::int64_t> strides_;
    std::int64_t size_ = 1;
};

inline GroupSpec make_group(std::vector<std::int64_t> orders,
                            std::int64_t max_size = default_budgets().max_group_size) {
    return GroupSpec::product(std::move(orders), max_size);
}

/// G^k as a new GroupSpec (orders repeated k times). Size checked against
/// max_entries.
inline GroupSpec power_group(const GroupSpec& g, int k, std::int64_t max_entries) {
    std::vector<std::int64_t> orders;
    orders.reserve(static_cast<std::size_t>(g.rank()) * k);
    for (int i = 0; i < k; ++i)
        for (auto o : g.orders()) orders.push_back(o);
    return GroupSpec::product(std::move(orders), max_entries);
}

/// A group element tied to its GroupSpec. Thin value wrapper around the
/// linear index; the referenced GroupSpec must outlive the Element.
class Element {
public:
    Element(const GroupSpec& group, std::int64_t index) : group_(&group), index_(index) {
        if (index < 0 || index >= group.size())
            throw validation_error("element index out of range");
    }

    std::int64_t index() const { return index_; }
    const GroupSpec& group() const { return *group_; }
    std::vector<std::int64_t> coords() const { return group_->coords_of(index_); }

    friend bool operator==(const Element& a, const Element& b) {
        return *a.group_ == *b.group_ && a.index_ == b.index_;
    }

private:
    const GroupSpec* group_;
    std::int64_t index_;
};

/// Character labels share the element encoding (the dual group is identified
/// with the group itself).
using DualElement = Element;

inline void require_same_group(const GroupSpec& a, const GroupSpec& b) {
    if (!(a == b)) throw validation_error("operands belong to different groups");
}

inline Element add(const Element& g, const Element& h) {
    require_same_group(g.group(), h.group());
    return Element(g.group(), g.group().add(g.index(), h.index()));
}

inline Element neg(const Element& g) { return Element(g.group(), g.group().neg(g.index())); }

inline std::complex<double> character(const DualElement& xi, const Element& g) {
    require_same_group(xi.group(), g.group());
    return xi.group().character(xi.index(), g.index());
}

namespace detail {

/// Walks t(x) = base + x or t(x) = base - x as x runs through 0..N-1 in index
/// order, amortized O(1) per step. This is the inner-loop engine for the
/// direct convolution paths: the mixed-radix odometer of x is maintained in
/// parallel with the shifted index.
class OffsetWalker {
public:
    OffsetWalker(const GroupSpec& g, std::int64_t base, int sign)
        : group_(&g), sign_(sign), x_coords_(g.rank(), 0), t_coords_(g.coords_of(base)) {
        t_index_ = base;
        base_coords_ = t_coords_;
    }

    std::int64_t index() const { return t_index_; }

    /// Advance x by one; returns false after the last element.
    bool next() {
        const auto& orders = group_->orders();
        int j = group_->rank() - 1;
        for (; j >= 0; --j) {
            if (++x_coords_[j] < orders[j]) {
                step_axis(j);
                return true;
            }
            x_coords_[j] = 0;
            reset_axis(j);
        }
        return false;
    }

private:
    void step_axis(int j) {
        const std::int64_t n = group_->order(j);
        const std::int64_t s = group_->stride(j);
        if (sign_ > 0) {
            if (++t_coords_[j] == n) {
                t_coords_[j] = 0;
                t_index_ -= (n - 1) * s;
            } else {
                t_index_ += s;
            }
        } else {
            if (t_coords_[j] == 0) {
                t_coords_[j] = n - 1;
                t_index_ += (n - 1) * s;
            } else {
                --t_coords_[j];
                t_index_ -= s;
            }
        }
    }

    void reset_axis(int j) {
        const std::int64_t s = group_->stride(j);
        t_index_ += (base_coords_[j] - t_coords_[j]) * s;
        t_coords_[j] = base_coords_[j];
    }

    const GroupSpec* group_;
    int sign_;
    std::int64_t t_index_ = 0;
    std::vector<std::int64_t> x_coords_;
    std::vector<std::int64_t> t_coords_;
    std::vector<std::int64_t> base_coords_;
};

}  // namespace detail

}  // namespace addcomb
