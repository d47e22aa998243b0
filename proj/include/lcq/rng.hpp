#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace lcq {

// SplitMix64 generator. Deliberately not std::mt19937 + distributions: the
// standard distributions are implementation-defined, and seeded runs here
// must reproduce bit-identically across platforms and standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Unbiased draw from [0, bound), bound >= 1. Rejection sampling.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold)
                return r % bound;
        }
    }

    // Uniform in [0, 1), 53-bit mantissa.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; consumes draws in pairs.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0)
            u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    // In-place Fisher-Yates shuffle of [first, first + count).
    template <typename T> void shuffle(T *first, std::size_t count) {
        for (std::size_t i = count; i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            T tmp = first[i - 1];
            first[i - 1] = first[j];
            first[j] = tmp;
        }
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Splittable seed derivation: FNV-1a over the base seed, a textual stream
// tag, and any integer parts, then one SplitMix64 scramble. Streams derived
// with different tags are decoupled, so adding a consumer never shifts the
// randomness of existing ones.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag,
                                 std::initializer_list<std::uint64_t> parts = {}) {
    std::uint64_t h = 1469598103934665603ULL;
    const auto mix_byte = [&h](unsigned char b) {
        h ^= b;
        h *= 1099511628211ULL;
    };
    const auto mix_u64 = [&](std::uint64_t v) {
        for (int i = 0; i < 8; ++i)
            mix_byte(static_cast<unsigned char>(v >> (8 * i)));
    };
    mix_u64(base);
    for (char c : tag)
        mix_byte(static_cast<unsigned char>(c));
    for (std::uint64_t p : parts)
        mix_u64(p);
    return Rng(h).next_u64();
}

} // namespace lcq
