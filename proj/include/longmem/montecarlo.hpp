// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The longmem Authors

#ifndef LONGMEM_MONTECARLO_HPP
#define LONGMEM_MONTECARLO_HPP

#include <cstdint>
#include <string>

#include "longmem/estimator.hpp"
#include "longmem/synthesis.hpp"
#include "longmem/wavelet.hpp"

namespace longmem {

// Worker threads to use: LONGMEM_THREADS if set, else hardware concurrency.
int thread_count();

// Monte Carlo study configuration: replicate simulate -> dwt -> estimate
// and aggregate bias, variance and CI coverage.
struct McConfig {
  ProcessModel model;
  long n = 0;
  std::string wavelet = "db2";
  double beta = 1.0;         // scale-selection smoothness when L unset
  int L_override = -1;       // fixed L (otherwise select_scales)
  int U_override = -1;       // fixed U (otherwise max scale)
  int reps = 100;
  std::uint64_t seed = 0;
  double level = 0.90;       // per-replication CI coverage target
  bool ell_infinite = false; // use the infinite-bandwidth variance
};

struct McResult {
  double d0 = 0.0;
  double mean_d_hat = 0.0;
  double bias = 0.0;
  // Sample variance of sqrt(n 2^{-L}) (d_hat - d0) across replications.
  double empirical_var_scaled = 0.0;
  double theoretical_var = 0.0;  // V(d0, U - L) for the band used
  double coverage = 0.0;         // fraction of CIs containing d0
  int reps = 0;
  double runtime_s = 0.0;
  ScaleRange range;
  long n = 0;
};

// Run the study. Replications are distributed over worker threads, each
// seeded independently from (seed, replication index), and reduced in
// replication order, so every field except runtime_s is bit-for-bit
// reproducible regardless of thread count.
McResult run_mc(const McConfig& config);

}  // namespace longmem

#endif  // LONGMEM_MONTECARLO_HPP
