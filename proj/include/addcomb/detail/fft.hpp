#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <numbers>
#include <unordered_map>
#include <vector>

#include "addcomb/group.hpp"

namespace addcomb::detail {

using cplx = std::complex<double>;

inline bool is_pow2(std::uint64_t n) { return n != 0 && std::has_single_bit(n); }

// ---------------------------------------------------------------------------
// Radix-2 kernel with per-length twiddle tables, cached per thread.

struct Radix2Plan {
    std::vector<cplx> w;  // w[k] = exp(-2 pi i k / n), k < n/2
};

inline const Radix2Plan& radix2_plan(std::size_t n) {
    thread_local std::unordered_map<std::size_t, Radix2Plan> cache;
    auto it = cache.find(n);
    if (it == cache.end()) {
        Radix2Plan p;
        p.w.resize(n / 2);
        for (std::size_t k = 0; k < n / 2; ++k)
            p.w[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) /
                                          static_cast<double>(n));
        it = cache.emplace(n, std::move(p)).first;
    }
    return it->second;
}

inline void bit_reverse_permute(cplx* a, std::size_t n) {
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
}

/// In-place power-of-two FFT. Forward kernel exp(-2 pi i jk / n); the inverse
/// conjugates the twiddles and applies no 1/n scaling (callers own scaling).
inline void fft_pow2(cplx* a, std::size_t n, bool inverse) {
    if (n <= 1) return;
    bit_reverse_permute(a, n);
    const auto& plan = radix2_plan(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t step = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                cplx w = plan.w[j * step];
                if (inverse) w = std::conj(w);
                cplx u = a[i + j];
                cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Bluestein's chirp algorithm: arbitrary-length DFT through one power-of-two
// convolution. The chirp exponent j^2 is reduced mod 2n before entering the
// phase so precision does not decay for large lengths.

struct BluesteinPlan {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<cplx> chirp;  // c_j = exp(-sign * i pi j^2 / n)
    std::vector<cplx> bhat;   // forward FFT of the wrapped conjugate chirp
};

inline const BluesteinPlan& bluestein_plan(std::size_t n, bool inverse) {
    thread_local std::unordered_map<std::uint64_t, BluesteinPlan> cache;
    const std::uint64_t key = (static_cast<std::uint64_t>(n) << 1) | (inverse ? 1u : 0u);
    auto it = cache.find(key);
    if (it == cache.end()) {
        BluesteinPlan p;
        p.n = n;
        p.m = std::bit_ceil(2 * n - 1);
        p.chirp.resize(n);
        const double sign = inverse ? 1.0 : -1.0;
        for (std::size_t j = 0; j < n; ++j) {
            const std::uint64_t sq = (static_cast<std::uint64_t>(j) * j) % (2 * n);
            p.chirp[j] = std::polar(
                1.0, sign * std::numbers::pi * static_cast<double>(sq) / static_cast<double>(n));
        }
        std::vector<cplx> b(p.m, cplx{0.0, 0.0});
        b[0] = std::conj(p.chirp[0]);
        for (std::size_t j = 1; j < n; ++j) {
            b[j] = std::conj(p.chirp[j]);
            b[p.m - j] = std::conj(p.chirp[j]);
        }
        fft_pow2(b.data(), p.m, false);
        p.bhat = std::move(b);
        it = cache.emplace(key, std::move(p)).first;
    }
    return it->second;
}

inline void dft_bluestein(cplx* a, std::size_t n, bool inverse) {
    const auto& plan = bluestein_plan(n, inverse);
    std::vector<cplx> t(plan.m, cplx{0.0, 0.0});
    for (std::size_t j = 0; j < n; ++j) t[j] = a[j] * plan.chirp[j];
    fft_pow2(t.data(), plan.m, false);
    for (std::size_t j = 0; j < plan.m; ++j) t[j] *= plan.bhat[j];
    fft_pow2(t.data(), plan.m, true);
    const double scale = 1.0 / static_cast<double>(plan.m);
    for (std::size_t k = 0; k < n; ++k) a[k] = t[k] * scale * plan.chirp[k];
}

/// Direct O(n^2) evaluation for short lengths, using an exact root table.
inline void dft_direct(cplx* a, std::size_t n, bool inverse) {
    std::vector<cplx> roots(n);
    const double sign = inverse ? 2.0 : -2.0;
    for (std::size_t k = 0; k < n; ++k)
        roots[k] = std::polar(1.0, sign * std::numbers::pi * static_cast<double>(k) /
                                       static_cast<double>(n));
    std::vector<cplx> out(n, cplx{0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) out[k] += a[j] * roots[(j * k) % n];
    for (std::size_t k = 0; k < n; ++k) a[k] = out[k];
}

inline void dft_line(cplx* a, std::size_t n, bool inverse) {
    if (n <= 1) return;
    if (is_pow2(n)) {
        fft_pow2(a, n, inverse);
    } else if (n <= 8) {
        dft_direct(a, n, inverse);
    } else {
        dft_bluestein(a, n, inverse);
    }
}

// ---------------------------------------------------------------------------
// Whole-group drivers. All of them compute, in place,
//   forward:  F(xi) = sum_g f(g) * conj(character(xi, g))
//   inverse:  f(g)  = sum_xi F(xi) * character(xi, g)      (no 1/N scaling)

/// Mixed-radix driver: a 1-D DFT along every axis of the product group.
inline void transform_md(cplx* a, const GroupSpec& g, bool inverse) {
    const std::int64_t n_total = g.size();
    std::vector<cplx> line;
    for (int axis = 0; axis < g.rank(); ++axis) {
        const std::int64_t n = g.order(axis);
        const std::int64_t stride = g.stride(axis);
        if (stride == 1) {
            for (std::int64_t base = 0; base < n_total; base += n)
                dft_line(a + base, static_cast<std::size_t>(n), inverse);
            continue;
        }
        line.resize(static_cast<std::size_t>(n));
        const std::int64_t block = stride * n;
        for (std::int64_t base = 0; base < n_total; base += block) {
            for (std::int64_t off = 0; off < stride; ++off) {
                cplx* p = a + base + off;
                for (std::int64_t t = 0; t < n; ++t) line[static_cast<std::size_t>(t)] = p[t * stride];
                dft_line(line.data(), static_cast<std::size_t>(n), inverse);
                for (std::int64_t t = 0; t < n; ++t) p[t * stride] = line[static_cast<std::size_t>(t)];
            }
        }
    }
}

/// Walsh-Hadamard specialization for groups with every order equal to 2.
/// Uses only +/- butterflies, so integer inputs stay exactly integral.
inline void wht_inplace(cplx* a, std::size_t n) {
    for (std::size_t len = 1; len < n; len <<= 1) {
        for (std::size_t i = 0; i < n; i += 2 * len) {
            for (std::size_t j = i; j < i + len; ++j) {
                cplx u = a[j];
                cplx v = a[j + len];
                a[j] = u + v;
                a[j + len] = u - v;
            }
        }
    }
}

/// O(N^2) reference evaluation straight from the character definition.
/// Per-axis root tables plus an odometer over g keep the inner loop at one
/// complex multiply-add for single-factor groups.
inline std::vector<cplx> transform_naive(const cplx* f, const GroupSpec& g, bool inverse) {
    const std::int64_t n_total = g.size();
    const int r = g.rank();
    std::vector<cplx> out(static_cast<std::size_t>(n_total));
    if (r == 0) {
        out[0] = f[0];
        return out;
    }

    // roots[j][t] = exp(sign * 2 pi i t / n_j)
    std::vector<std::vector<cplx>> roots(static_cast<std::size_t>(r));
    const double sign = inverse ? 2.0 : -2.0;
    for (int j = 0; j < r; ++j) {
        roots[j].resize(static_cast<std::size_t>(g.order(j)));
        for (std::int64_t t = 0; t < g.order(j); ++t)
            roots[j][static_cast<std::size_t>(t)] =
                std::polar(1.0, sign * std::numbers::pi * static_cast<double>(t) /
                                    static_cast<double>(g.order(j)));
    }

    if (r == 1) {  // single factor: step the phase index, no odometer
        const auto& root = roots[0];
        for (std::int64_t xi = 0; xi < n_total; ++xi) {
            cplx acc{0.0, 0.0};
            std::int64_t idx = 0;
            for (std::int64_t gi = 0; gi < n_total; ++gi) {
                acc += f[gi] * root[static_cast<std::size_t>(idx)];
                idx += xi;
                if (idx >= n_total) idx -= n_total;
            }
            out[static_cast<std::size_t>(xi)] = acc;
        }
        return out;
    }

    std::vector<std::int64_t> xi_coords(static_cast<std::size_t>(r), 0);
    std::vector<std::int64_t> g_coords(static_cast<std::size_t>(r));
    std::vector<std::int64_t> phase(static_cast<std::size_t>(r));
    std::vector<cplx> prefix(static_cast<std::size_t>(r));

    for (std::int64_t xi = 0; xi < n_total; ++xi) {
        // phase[j] tracks (xi_j * g_j) mod n_j while g sweeps in index order.
        std::fill(g_coords.begin(), g_coords.end(), 0);
        std::fill(phase.begin(), phase.end(), 0);
        for (int j = 0; j < r; ++j)
            prefix[j] = (j == 0 ? roots[0][0] : prefix[j - 1] * roots[j][0]);

        cplx acc{0.0, 0.0};
        std::int64_t gi = 0;
        for (;;) {
            acc += f[gi] * prefix[static_cast<std::size_t>(r) - 1];
            ++gi;
            if (gi == n_total) break;
            int j = r - 1;
            for (; j >= 0; --j) {
                if (++g_coords[j] < g.order(j)) {
                    phase[j] += xi_coords[j];
                    if (phase[j] >= g.order(j)) phase[j] -= g.order(j);
                    break;
                }
                g_coords[j] = 0;
                phase[j] = 0;
            }
            for (int t = (j < 0 ? 0 : j); t < r; ++t) {
                const cplx root = roots[t][static_cast<std::size_t>(phase[t])];
                prefix[t] = (t == 0 ? root : prefix[t - 1] * root);
            }
        }
        out[static_cast<std::size_t>(xi)] = acc;

        // advance xi odometer
        for (int j = r - 1; j >= 0; --j) {
            if (++xi_coords[j] < g.order(j)) break;
            xi_coords[j] = 0;
        }
    }
    return out;
}

}  // namespace addcomb::detail
