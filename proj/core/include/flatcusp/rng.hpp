#pragma once

#include <cstdint>

namespace flatcusp {

// Counter-based pseudo-random generator with independent streams.
//
// Output for (seed, stream, counter) is
//     out = mix(base + counter * 0x9E3779B97F4A7C15)
//     base = mix(seed ^ (stream * 0x9E3779B97F4A7C15 + 0xD1B54A32D192ED03))
// where mix() is the splitmix64 finalizer. The generator has no hidden
// state beyond the counter, so any position in any stream can be reached
// in O(1); parallel workers draw from disjoint streams of the same seed
// and results are reproducible independent of scheduling.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : base_(mix(seed ^ (stream * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull))) {}

  std::uint64_t next_u64() { return mix(base_ + (ctr_++) * 0x9E3779B97F4A7C15ull); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  std::uint64_t counter() const { return ctr_; }
  void seek(std::uint64_t counter) { ctr_ = counter; }

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t base_;
  std::uint64_t ctr_ = 0;
};

}  // namespace flatcusp
