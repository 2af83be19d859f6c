#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace qcredit {

// splitmix64 finalizer, used to derive child seeds from (seed, stream ids).
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

template <typename... Ids>
std::uint64_t derive_seed(std::uint64_t seed, Ids... ids) {
    ((seed = mix_seed(seed ^ mix_seed(static_cast<std::uint64_t>(ids)))), ...);
    return seed;
}

// Deterministic RNG stream. The engine is mt19937_64 (bit-exact per the
// standard); all conversions to doubles/ints are done explicitly here so two
// builds draw identical sequences regardless of the stdlib's distribution
// implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // uniform double in [0, 1), 53 random bits
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Box-Muller; the paired draw is cached
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // uniform integer in [0, bound); modulo bias is irrelevant for our bounds
    std::uint64_t below(std::uint64_t bound) { return engine_() % bound; }

    std::uint64_t raw() { return engine_(); }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Fisher-Yates with explicit draws, deterministic for a given seed.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace qcredit
