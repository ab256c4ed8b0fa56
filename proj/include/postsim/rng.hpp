#pragma once

#include <cstdint>

namespace postsim {

// Deterministic splittable PRNG (splitmix64). Every sampled quantity in the
// library draws from an explicitly seeded stream, and independent substreams
// are derived by mixing stream labels into the seed, so parallel and serial
// executions of the same work produce bit-identical results.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53 bits of entropy.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0, bound).
    std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

    // Child stream labeled by `label`; streams with distinct labels are
    // independent for all practical purposes.
    Rng split(std::uint64_t label) const {
        Rng child(mix(state_, label));
        return child;
    }

    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t state_;
};

// Stream for repetition `rep` of sweep point `i` under `seed`; used by the
// sampled deciders so the (i, rep) loops can run in any order.
inline Rng stream_for(std::uint64_t seed, std::int64_t i, std::uint64_t rep) {
    return Rng(Rng::mix(Rng::mix(seed, static_cast<std::uint64_t>(i) + 0x100), rep));
}

}  // namespace postsim
