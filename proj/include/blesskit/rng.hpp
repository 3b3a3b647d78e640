#pragma once

#include <cstdint>
#include <span>

namespace blesskit {

/// Counter-based 64-bit generator.
///
/// Output k of stream s under seed x is a pure function of (x, s, k): the
/// key is derived by mixing (x, s) and each draw hashes key + k with the
/// SplitMix64 finalizer. Results are identical on every platform, and
/// distinct streams are statistically independent, so a sampler can give
/// each level its own stream without the draws of one level shifting
/// another.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Uniform integer in [0, bound), unbiased. bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller (one variate per call, the pair's
  /// second value is discarded so the stream position stays simple).
  double normal();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Draws an index in [0, cumulative.size()) with probability proportional
/// to the increments of `cumulative` (a non-decreasing prefix-sum array
/// whose last entry is the total mass).
std::size_t draw_from_cumulative(CounterRng& rng, std::span<const double> cumulative);

}  // namespace blesskit
