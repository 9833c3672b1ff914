#pragma once

#include <cstdint>
#include <string_view>

namespace addcomb {

/// SplitMix64: the library's only random source. It is tiny, seedable and
/// produces the same stream on every platform, which the std distribution
/// templates do not guarantee. Constructions derive independent streams by
/// hashing a purpose tag into the seed (split_stream below), so adding a new
/// random draw to one builder never shifts another builder's stream.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, bound); unbiased via rejection.
    std::uint64_t below(std::uint64_t bound) {
        std::uint64_t x, r;
        do {
            x = next();
            r = x % bound;
        } while (x - r > ~std::uint64_t{0} - (bound - 1));
        return r;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Bernoulli(q) draw; q outside [0,1] saturates.
    bool bernoulli(double q) {
        if (q <= 0.0) return false;
        if (q >= 1.0) return true;
        return next_unit() < q;
    }

private:
    std::uint64_t state_;
};

/// Derives a child seed for a named stream (FNV-1a over the tag, then one
/// SplitMix64 step to decorrelate).
inline std::uint64_t split_stream(std::uint64_t seed, std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    SplitMix64 mix(seed ^ h);
    return mix.next();
}

}  // namespace addcomb
