#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace kitaev {

/// Counter-based random stream keyed by (seed, label).
///
/// Every output is a pure function of (key, counter), so two streams forked
/// with different labels never share state and a run is reproducible from
/// the 64-bit seed alone. Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::string_view label = "root");

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Uniform integer in [lo, hi] (inclusive).
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Standard normal via Box-Muller.
  double normal();

  /// Independent stream derived from this stream's key and a label.
  Rng fork(std::string_view label) const;

  std::uint64_t key() const { return key_; }

 private:
  Rng(std::uint64_t key, std::uint64_t counter, bool) : key_(key), counter_(counter) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace kitaev
