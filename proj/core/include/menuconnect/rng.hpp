#pragma once

#include <cstdint>

namespace menuconnect {

// SplitMix64 output function.
constexpr std::uint64_t mix_u64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Counter-based uniform stream: the value at position i is a pure function
// of (seed, i), so any (seed, position) pair reproduces the same draw on any
// platform and workers can jump to disjoint substreams without shared state.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t start = 0)
      : seed_(seed), counter_(start) {}

  std::uint64_t next_u64() {
    return mix_u64(seed_ + (++counter_) * 0x9E3779B97F4A7C15ull);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  std::uint64_t position() const { return counter_; }

  // Independent stream derived from (seed, stream_id).
  static CounterRng substream(std::uint64_t seed, std::uint64_t stream_id) {
    return CounterRng(mix_u64(seed ^ ((stream_id + 1) * 0xD1B54A32D192ED03ull)));
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

}  // namespace menuconnect
