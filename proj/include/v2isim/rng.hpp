#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace v2isim {

// 64-bit finalizer from the splitmix64 generator. Bijective, so distinct
// inputs never collide.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15uLL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9uLL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBuLL;
    return x ^ (x >> 31);
}

// Derives an independent substream seed from a parent seed and a tag.
// Chained calls give a seed tree: run -> module -> entity. Every stochastic
// component owns one leaf, which is what makes campaigns reproducible and
// immune to execution order.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
    return mix64(seed ^ mix64(tag));
}

template <typename... Tags>
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, Tags... rest) noexcept {
    return derive_seed(derive_seed(seed, tag), rest...);
}

// Counter-based splitmix64 engine. 8 bytes of state, so a per-link engine
// array stays small. Satisfies UniformRandomBitGenerator, but the samplers
// below are used instead of <random> distributions to keep output sequences
// identical across standard libraries.
class SplitMix64 {
  public:
    using result_type = std::uint64_t;

    constexpr explicit SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~0uLL; }

    constexpr result_type operator()() noexcept { return mix64(state_++); }

  private:
    std::uint64_t state_;
};

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(SplitMix64& rng) noexcept {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(SplitMix64& rng, double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform01(rng);
}

// Standard normal pair via the Marsaglia polar method.
inline std::pair<double, double> normal_pair(SplitMix64& rng) noexcept {
    for (;;) {
        const double u = 2.0 * uniform01(rng) - 1.0;
        const double v = 2.0 * uniform01(rng) - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) {
            const double f = std::sqrt(-2.0 * std::log(s) / s);
            return {u * f, v * f};
        }
    }
}

inline double normal01(SplitMix64& rng) noexcept { return normal_pair(rng).first; }

// Poisson count by the inverse-product method. Exact for the means used here
// (exp(-mean) stays far above double underflow for mean < ~700).
inline int sample_poisson(SplitMix64& rng, double mean) {
    if (mean <= 0.0) {
        return 0;
    }
    const double limit = std::exp(-mean);
    int k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= uniform01(rng);
    } while (p > limit);
    return k - 1;
}

}  // namespace v2isim
