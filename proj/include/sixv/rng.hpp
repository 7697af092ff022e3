#pragma once

#include <cstdint>

namespace sixv {

/// Counter-based random stream. Every draw is a pure hash of
/// (seed, replica, step, x, y, draw), so trajectories are reproducible
/// bit-for-bit and replicas can run concurrently without shared state.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Uniform double in [0,1) for the given key.
    double uniform(std::uint64_t replica, std::uint64_t step, std::int64_t x,
                   std::int64_t y, std::uint64_t draw = 0) const {
        std::uint64_t h = seed_;
        h = mix(h ^ (0x9e3779b97f4a7c15ULL + replica));
        h = mix(h ^ (0xbf58476d1ce4e5b9ULL + step));
        h = mix(h ^ static_cast<std::uint64_t>(x));
        h = mix(h ^ static_cast<std::uint64_t>(y) * 0x94d049bb133111ebULL);
        h = mix(h ^ draw);
        return static_cast<double>(h >> 11) * 0x1.0p-53;
    }

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t seed_;
};

} // namespace sixv
