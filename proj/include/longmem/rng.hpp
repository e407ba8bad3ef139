// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The longmem Authors

#ifndef LONGMEM_RNG_HPP
#define LONGMEM_RNG_HPP

#include <cstdint>

namespace longmem {

// SplitMix64 finalizer: bijective 64-bit avalanche mix.
std::uint64_t mix64(std::uint64_t z) noexcept;

// Derive an independent child seed from a master seed and an index.
// Used to give each Monte Carlo replication its own reproducible stream.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

// Inverse of the standard normal CDF (Wichura's AS 241, double precision).
// Accepts p in (0, 1); accurate to ~1e-15 relative over the full range.
double inverse_normal_cdf(double p);

// Counter-based Gaussian/uniform generator.
//
// Stateless by design: the value at a given counter depends only on
// (seed, stream, counter), so draws can be produced in any order and in
// parallel while remaining bit-identical across platforms and runs.
// std::normal_distribution is deliberately avoided because its output
// sequence is implementation-defined.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  // Raw 64-bit word at the given counter position.
  std::uint64_t raw(std::uint64_t counter) const noexcept;

  // Uniform variate strictly inside (0, 1).
  double uniform(std::uint64_t counter) const noexcept;

  // Standard normal variate via inverse-CDF transform of uniform().
  double normal(std::uint64_t counter) const;

 private:
  std::uint64_t key_;
};

}  // namespace longmem

#endif  // LONGMEM_RNG_HPP
