#pragma once

// Counter-based random stream: output n of a stream with key k is
// mix64(k + n * golden). Streams split deterministically by index, so a
// trial's randomness depends only on (seed, trial index) and never on
// scheduling.

#include <cstdint>
#include <limits>

namespace qfdiv {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  explicit CounterRng(std::uint64_t seed) : key_(mix64(seed ^ 0x6a09e667f3bcc909ULL)) {}

  /// Independent child stream; depends only on this stream's key and index.
  CounterRng split(std::uint64_t index) const {
    CounterRng child(0);
    child.key_ = mix64(key_ ^ mix64(index + kGolden));
    child.counter_ = 0;
    return child;
  }

  result_type operator()() { return mix64(key_ + (counter_++) * kGolden); }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace qfdiv
