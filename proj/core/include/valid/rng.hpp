#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>

namespace valid {

/// Stream tags. Each (seed, agent, round, purpose) tuple names an independent
/// stream so that e.g. changing the attack never shifts honest mini-batches.
enum class StreamPurpose : uint64_t {
  kMinibatch = 1,
  kHashKey = 2,
  kAttackNoise = 3,
  kGraph = 4,
  kDataset = 5,
  kCalibration = 6,
};

/// 64-bit finalizer from SplitMix64.
uint64_t mix64(uint64_t x);

/// Folds a list of words into one well-mixed 64-bit key.
uint64_t derive_key(std::initializer_list<uint64_t> words);

/// Counter-based generator: output i is mix64(key + (i + 1) * golden).
/// Satisfies UniformRandomBitGenerator. The normal() transform is Box-Muller
/// written out here so the stream does not depend on the standard library's
/// distribution implementations.
class CounterRng {
 public:
  using result_type = uint64_t;

  explicit CounterRng(uint64_t key) : key_(key) {}
  CounterRng(uint64_t seed, uint64_t agent, uint64_t round, StreamPurpose purpose)
      : key_(derive_key({seed, agent, round, static_cast<uint64_t>(purpose)})) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01();
  /// Uniform integer in [0, n); unbiased (rejection sampling).
  uint64_t uniform_below(uint64_t n);
  /// Standard normal deviate.
  double normal();

  uint64_t key() const { return key_; }
  uint64_t counter() const { return counter_; }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
  std::optional<double> spare_;
};

}  // namespace valid
