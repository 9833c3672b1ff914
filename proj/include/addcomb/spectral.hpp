#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "addcomb/budgets.hpp"
#include "addcomb/detail/fft.hpp"
#include "addcomb/errors.hpp"
#include "addcomb/group.hpp"

namespace addcomb {

using cplx = std::complex<double>;

/// Largest magnitude a value may reach while still counting as an exact
/// integer stored in a double.
inline constexpr double kExactLimit = 9007199254740992.0;  // 2^53

/// How the transform is evaluated. Auto picks the Walsh-Hadamard kernel when
/// every order is 2, the O(N^2) reference below the naive cutoff, and the
/// mixed-radix FFT otherwise. Naive and Fast force one path (the oracle
/// tests compare them).
enum class DftPath { Auto, Naive, Fast };

/// A complex-valued function on a finite abelian group, stored densely in
/// element-index order. The exact flag records that every value is a real
/// integer; the integer paths of the library keep it alive through
/// convolution and correlation. Immutable after construction.
class DenseFunction {
public:
    DenseFunction(GroupSpec group, std::vector<cplx> values, bool exact = false)
        : group_(std::move(group)), values_(std::move(values)), exact_(exact) {
        if (static_cast<std::int64_t>(values_.size()) != group_.size())
            throw validation_error("value array length must equal the group size");
        if (exact_) verify_exact();
    }

    static DenseFunction zeros(const GroupSpec& g) {
        return DenseFunction(g, std::vector<cplx>(static_cast<std::size_t>(g.size())), true);
    }

    static DenseFunction delta(const GroupSpec& g, std::int64_t at = 0) {
        std::vector<cplx> v(static_cast<std::size_t>(g.size()));
        v.at(static_cast<std::size_t>(at)) = 1.0;
        return DenseFunction(g, std::move(v), true);
    }

    static DenseFunction constant(const GroupSpec& g, cplx c) {
        std::vector<cplx> v(static_cast<std::size_t>(g.size()), c);
        const bool exact = c.imag() == 0.0 && c.real() == std::round(c.real()) &&
                           std::abs(c.real()) < kExactLimit;
        return DenseFunction(g, std::move(v), exact);
    }

    static DenseFunction from_integers(GroupSpec g, const std::vector<std::int64_t>& ints) {
        std::vector<cplx> v(ints.size());
        for (std::size_t i = 0; i < ints.size(); ++i) v[i] = static_cast<double>(ints[i]);
        return DenseFunction(std::move(g), std::move(v), true);
    }

    const GroupSpec& group() const { return group_; }
    const std::vector<cplx>& values() const { return values_; }
    bool exact() const { return exact_; }
    std::int64_t size() const { return group_.size(); }

    std::int64_t integer_at(std::int64_t i) const {
        if (!exact_) throw exactness_error("function does not carry exact integer values");
        return static_cast<std::int64_t>(std::llround(values_[static_cast<std::size_t>(i)].real()));
    }

    bool is_real() const {
        for (const auto& v : values_)
            if (v.imag() != 0.0) return false;
        return true;
    }

    double norm1() const {
        double s = 0.0;
        for (const auto& v : values_) s += std::abs(v);
        return s;
    }

    double norm_inf() const {
        double m = 0.0;
        for (const auto& v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    /// Support size with a relative threshold against the sup norm; exact
    /// functions count plain nonzeros.
    std::int64_t support_size(double rel_threshold = 1e-9) const {
        const double cut = exact_ ? 0.5 : rel_threshold * norm_inf();
        std::int64_t c = 0;
        for (const auto& v : values_)
            if (std::abs(v) > cut) ++c;
        return c;
    }

private:
    void verify_exact() const {
        for (const auto& v : values_) {
            if (v.imag() != 0.0 || v.real() != std::round(v.real()) ||
                std::abs(v.real()) >= kExactLimit)
                throw exactness_error("exact flag set on non-integer values");
        }
    }

    GroupSpec group_;
    std::vector<cplx> values_;
    bool exact_;
};

/// The Fourier transform of a DenseFunction, indexed by the dual group (same
/// index scheme as the group itself). Immutable after construction.
class Spectrum {
public:
    Spectrum(GroupSpec group, std::vector<cplx> values)
        : group_(std::move(group)), values_(std::move(values)) {
        if (static_cast<std::int64_t>(values_.size()) != group_.size())
            throw validation_error("spectrum length must equal the group size");
    }

    const GroupSpec& group() const { return group_; }
    const std::vector<cplx>& values() const { return values_; }
    std::int64_t size() const { return group_.size(); }

    double max_magnitude_excluding_zero() const {
        double m = 0.0;
        for (std::size_t i = 1; i < values_.size(); ++i) m = std::max(m, std::abs(values_[i]));
        return m;
    }

    std::int64_t support_size(double rel_threshold = 1e-9) const {
        double top = 0.0;
        for (const auto& v : values_) top = std::max(top, std::abs(v));
        const double cut = rel_threshold * top;
        std::int64_t c = 0;
        for (const auto& v : values_)
            if (std::abs(v) > cut) ++c;
        return c;
    }

private:
    GroupSpec group_;
    std::vector<cplx> values_;
};

namespace detail {

inline DftPath resolve_path(const GroupSpec& g, DftPath requested, const Budgets& budgets) {
    if (requested != DftPath::Auto) return requested;
    if (g.all_orders_two()) return DftPath::Fast;  // Walsh-Hadamard kernel
    return g.size() <= budgets.naive_cutoff ? DftPath::Naive : DftPath::Fast;
}

inline void transform_inplace(std::vector<cplx>& v, const GroupSpec& g, bool inverse,
                              DftPath path) {
    if (path == DftPath::Naive) {
        v = transform_naive(v.data(), g, inverse);
        return;
    }
    if (g.all_orders_two()) {
        wht_inplace(v.data(), v.size());
        return;
    }
    transform_md(v.data(), g, inverse);
}

/// Rounds every entry to a real integer, verifying the pre-rounding
/// residual. The gate is two-sided: below 1e-6 relative to the largest
/// magnitude, and below 0.25 absolutely (a nearest-integer round with a
/// larger drift could land on the wrong count). This is what lets
/// FFT-computed counts keep the exact flag.
inline void round_verified(std::vector<cplx>& v) {
    double scale = 1.0;
    for (const auto& z : v) scale = std::max(scale, std::abs(z));
    if (scale >= kExactLimit)
        throw exactness_error("values exceed the exactly representable integer range");
    double residual = 0.0;
    for (auto& z : v) {
        const double r = std::round(z.real());
        residual = std::max(residual, std::abs(z.real() - r));
        residual = std::max(residual, std::abs(z.imag()));
        z = cplx{r, 0.0};
    }
    if (residual > 1e-6 * scale || residual > 0.25)
        throw exactness_error("FFT rounding residual too large for an exact result");
}

}  // namespace detail

/// Forward transform: F(xi) = sum_g f(g) * conj(character(xi, g)).
inline Spectrum dft(const DenseFunction& f, DftPath path = DftPath::Auto,
                    const Budgets& budgets = default_budgets()) {
    std::vector<cplx> v = f.values();
    detail::transform_inplace(v, f.group(), false, detail::resolve_path(f.group(), path, budgets));
    return Spectrum(f.group(), std::move(v));
}

/// Inverse transform: f(g) = N^-1 sum_xi F(xi) * character(xi, g).
inline DenseFunction idft(const Spectrum& F, DftPath path = DftPath::Auto,
                          const Budgets& budgets = default_budgets()) {
    std::vector<cplx> v = F.values();
    detail::transform_inplace(v, F.group(), true, detail::resolve_path(F.group(), path, budgets));
    const double scale = 1.0 / static_cast<double>(F.size());
    for (auto& z : v) z *= scale;
    return DenseFunction(F.group(), std::move(v), false);
}

namespace detail {

enum class PairKind { Star, Circ };  // (f*g)(x)=sum f(y)g(x-y), (f o g)(x)=sum f(y)g(y+x)

/// Exact integer path: int64 values, __int128 accumulators, no rounding.
inline DenseFunction pairwise_direct(const DenseFunction& f, const DenseFunction& g,
                                     PairKind kind) {
    const GroupSpec& G = f.group();
    const std::int64_t n = G.size();
    std::vector<std::int64_t> fv(static_cast<std::size_t>(n)), gv(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        fv[static_cast<std::size_t>(i)] = f.integer_at(i);
        gv[static_cast<std::size_t>(i)] = g.integer_at(i);
    }
    std::vector<__int128> acc(static_cast<std::size_t>(n), 0);
    for (std::int64_t y = 0; y < n; ++y) {
        const std::int64_t fy = fv[static_cast<std::size_t>(y)];
        if (fy == 0) continue;
        // star: t = x - y walks with x; circ: t = y + x walks with x.
        OffsetWalker walker(G, kind == PairKind::Star ? G.neg(y) : y, +1);
        std::int64_t x = 0;
        do {
            acc[static_cast<std::size_t>(x)] +=
                static_cast<__int128>(fy) * gv[static_cast<std::size_t>(walker.index())];
            ++x;
        } while (walker.next());
    }
    std::vector<cplx> out(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        const __int128 v = acc[static_cast<std::size_t>(i)];
        if (v >= static_cast<__int128>(kExactLimit) || -v >= static_cast<__int128>(kExactLimit))
            throw exactness_error("convolution values exceed the exact integer range");
        out[static_cast<std::size_t>(i)] = static_cast<double>(static_cast<std::int64_t>(v));
    }
    return DenseFunction(G, std::move(out), true);
}

inline DenseFunction pairwise_fft(const DenseFunction& f, const DenseFunction& g, PairKind kind,
                                  const Budgets& budgets) {
    const GroupSpec& G = f.group();
    std::vector<cplx> a = f.values();
    std::vector<cplx> b = g.values();
    if (kind == PairKind::Circ) {
        // (f o g)^(xi) = conj(fhat_of_conj_f(xi)) * ghat(xi); for real f this
        // is conj(fhat) * ghat.
        for (auto& z : a) z = std::conj(z);
    }
    transform_inplace(a, G, false, DftPath::Fast);
    transform_inplace(b, G, false, DftPath::Fast);
    if (kind == PairKind::Star) {
        for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
    } else {
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::conj(a[i]) * b[i];
    }
    transform_inplace(a, G, true, DftPath::Fast);
    const double scale = 1.0 / static_cast<double>(G.size());
    for (auto& z : a) z *= scale;
    const bool exact = f.exact() && g.exact();
    if (exact) round_verified(a);
    (void)budgets;
    return DenseFunction(G, std::move(a), exact);
}

inline DenseFunction pairwise(const DenseFunction& f, const DenseFunction& g, PairKind kind,
                              const Budgets& budgets) {
    require_same_group(f.group(), g.group());
    if (f.group().size() <= budgets.naive_cutoff && f.exact() && g.exact())
        return pairwise_direct(f, g, kind);
    return pairwise_fft(f, g, kind, budgets);
}

}  // namespace detail

/// (f * g)(x) = sum_y f(y) g(x - y). Exact integer inputs give an exact
/// integer result: by direct summation below the naive cutoff, by FFT with a
/// verified rounding residual above it.
inline DenseFunction convolve_star(const DenseFunction& f, const DenseFunction& g,
                                   const Budgets& budgets = default_budgets()) {
    return detail::pairwise(f, g, detail::PairKind::Star, budgets);
}

/// (f o g)(x) = sum_y f(y) g(y + x). For an indicator A, (A o A)(x) equals
/// |A intersect (A + x)| exactly.
inline DenseFunction correlate_circ(const DenseFunction& f, const DenseFunction& g,
                                    const Budgets& budgets = default_budgets()) {
    return detail::pairwise(f, g, detail::PairKind::Circ, budgets);
}

/// The correlation power f^(k): f^(2) = f o f, f^(k) = f^(k-1) o f (left
/// fold; o is not associative, and this order satisfies A^(4)(0) = E(A) and
/// sum_x (A^(k))^2 = T_k(A)).
inline DenseFunction conv_power(const DenseFunction& f, int k,
                                const Budgets& budgets = default_budgets()) {
    if (k < 2) throw validation_error("correlation power requires k >= 2");
    DenseFunction acc = correlate_circ(f, f, budgets);
    for (int i = 3; i <= k; ++i) acc = correlate_circ(acc, f, budgets);
    return acc;
}

/// |N * sum |f|^2 - sum |fhat|^2| / max(1, N * sum |f|^2).
inline double parseval_residual(const DenseFunction& f, DftPath path = DftPath::Auto,
                                const Budgets& budgets = default_budgets()) {
    double time_side = 0.0;
    for (const auto& v : f.values()) time_side += std::norm(v);
    time_side *= static_cast<double>(f.size());
    const Spectrum F = dft(f, path, budgets);
    double freq_side = 0.0;
    for (const auto& v : F.values()) freq_side += std::norm(v);
    return std::abs(time_side - freq_side) / std::max(1.0, time_side);
}

}  // namespace addcomb
