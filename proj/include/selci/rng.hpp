#pragma once

// Deterministic, counter-derived random streams.
//
// Monte Carlo results in this library must be byte-identical for a given seed
// regardless of how replications are scheduled across threads, and across
// compilers. That rules out std::shuffle and the std <random> distributions
// (both implementation-defined), so draws are produced by a small splitmix64
// walk and transformed through this library's own inverse CDFs. Each
// replication gets its own stream derived from (seed, stream, substream), so
// a replication's draws never depend on which worker executed it.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace selci {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(mix(seed + kGamma)) {}

  Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream)
      : state_(mix(mix(mix(seed + kGamma) ^ (stream + kGamma)) ^ (substream + kGamma))) {}

  std::uint64_t next_u64() {
    state_ += kGamma;
    return mix(state_);
  }

  /// Uniform draw strictly inside (0,1) with 53 usable bits.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via this library's inverse CDF (portable).
  double normal();

  /// Unbiased uniform integer in [0, n); n must be > 0.
  std::uint64_t uniform_below(std::uint64_t n);

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

/// Fisher-Yates permutation of {0,...,n-1} driven by `rng`.
std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng);

}  // namespace selci
