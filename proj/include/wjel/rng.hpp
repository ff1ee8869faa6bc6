#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace wjel {

// splitmix64 finalizer: bijective avalanche mix of a 64-bit word.
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
}

// Counter-based generator (splitmix64): output i is a pure hash of seed + i*gamma,
// so streams derived from distinct keys are independent of call order. This is
// what makes replication (run, rep) reproducible regardless of scheduling.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix64(state_);
    }

    // [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // (0, 1]
    double uniform_pos() { return 1.0 - uniform(); }

    // Box-Muller; the spare is cached so consecutive calls use both draws.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform_pos();
        double u2 = uniform();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 6.283185307179586476925286766559 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    double exponential() { return -std::log(uniform_pos()); }

    // Uniform integer in [0, bound) by rejection; exact, no modulo bias.
    std::uint64_t below(std::uint64_t bound) {
        std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Derives an independent stream keyed by (seed, k1, k2); used to give every
// (run, replication) pair its own generator.
inline Rng substream(std::uint64_t seed, std::uint64_t k1, std::uint64_t k2) {
    std::uint64_t h = seed;
    h = mix64(h + 0x9e3779b97f4a7c15ull * (k1 + 1));
    h = mix64(h + 0x9e3779b97f4a7c15ull * (k2 + 1));
    return Rng(h);
}

}  // namespace wjel
