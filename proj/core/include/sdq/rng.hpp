#pragma once

#include <cstdint>

namespace sdq {

// Deterministic splitmix64 stream. Used instead of <random> distributions so
// identical seeds give bit-identical draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a survival target.
  double uniform_positive() { return 1.0 - uniform(); }

  // Decorrelated per-task substream of a base seed.
  static Rng substream(std::uint64_t seed, std::uint64_t index) {
    Rng mixer(seed ^ (0xD1342543DE82EF95ull * (index + 1)));
    mixer.next();
    mixer.next();
    return Rng(mixer.next());
  }

 private:
  std::uint64_t state_;
};

}  // namespace sdq
