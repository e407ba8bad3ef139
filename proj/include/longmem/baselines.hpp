// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The longmem Authors

#ifndef LONGMEM_BASELINES_HPP
#define LONGMEM_BASELINES_HPP

#include <string>

#include <Eigen/Dense>

#include "longmem/estimator.hpp"
#include "longmem/pyramid.hpp"

namespace longmem {

// Output of a Fourier- or scale-domain reference estimator.
struct BaselineResult {
  std::string method;       // "gph", "lwf", "logscale"
  double d_hat = 0.0;
  long bandwidth = 0;       // Fourier ordinate count or scale count
  double nominal_var = 0.0; // asymptotic variance constant (unscaled)
  bool at_boundary = false; // optimizer stopped at the search bracket edge
};

// Periodogram ordinates I(2 pi k / n) = |DFT(x)_k|^2 / (2 pi n) for
// k = 1..floor(n/2). Satisfies the Parseval identity: (2 pi / n) times the
// full-grid sum equals the biased sample variance.
Eigen::ArrayXd periodogram(const Eigen::ArrayXd& x);

// Default Fourier bandwidth floor(n^{0.65}).
long default_bandwidth(long n);

// Log-periodogram regression: least-squares slope of log I(lambda_k) on
// -2 log|1 - e^{-i lambda_k}| over k = 1..m. nominal_var = pi^2 / 24.
BaselineResult gph(const Eigen::ArrayXd& x, long m = 0);

// Local Whittle Fourier estimator: minimizes
//   R(d) = log(m^{-1} sum lambda_k^{2d} I_k) - 2d mean(log lambda_k)
// over d in [-1, 1] by golden-section search with Newton polish.
// nominal_var = 1/4; at_boundary flags a bracket-edge minimizer.
BaselineResult lwf(const Eigen::ArrayXd& x, long m = 0);

// Log-scale regression: weighted least squares of log2(mean W_{j,.}^2) on
// j over the band, inverse-variance weighted (weight proportional to the
// coefficient count n_j); d_hat = slope / 2.
BaselineResult logscale_regression(const Pyramid& p, ScaleRange range);

}  // namespace longmem

#endif  // LONGMEM_BASELINES_HPP
