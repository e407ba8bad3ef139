// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The longmem Authors

#ifndef LONGMEM_SYNTHESIS_HPP
#define LONGMEM_SYNTHESIS_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "longmem/pyramid.hpp"

namespace longmem {

// Short-memory spectral factor f* of the model.
enum class SpectrumKind {
  kConstant,    // f*(lambda) = constant > 0
  kAr1Modulus,  // f*(lambda) = |1 - rho e^{-i lambda}|^{-2}
  kGrid,        // symmetric piecewise-linear user grid on [0, pi]
};

// Gaussian process with generalized spectral density
// |1 - e^{-i lambda}|^{-2 d0} f*(lambda): d0 may be any real; values at or
// beyond +-1/2 are realized by integer-order integration or differencing of
// the stationary fractional core.
struct ProcessModel {
  double d0 = 0.0;
  SpectrumKind kind = SpectrumKind::kConstant;
  double constant = 1.0;  // f* level for kConstant
  double rho = 0.0;       // AR parameter for kAr1Modulus, |rho| < 1
  Eigen::ArrayXd grid_lambda;  // kGrid nodes, increasing in [0, pi]
  Eigen::ArrayXd grid_value;   // f* at the nodes, positive
  double beta = 1.0;  // local smoothness exponent of f* near 0, in (0, 2]
};

// Number of integrations k separating d0 from its stationary remainder:
// the smallest integer exceeding d0 - 1/2, so d0 - k lies in [-1/2, 1/2).
int integration_order(double d0);

// d0 - integration_order(d0), the memory parameter of the stationary core.
double fractional_d(const ProcessModel& m);

// Short-memory factor f*(lambda) alone (symmetric, positive).
double short_memory_density(const ProcessModel& m, double lambda);

// Full generalized spectral density at lambda in [-pi, pi]. At lambda = 0
// the value is +infinity, f*(0), or 0 as the fractional exponent is
// positive, zero, or negative.
double spectral_density(const ProcessModel& m, double lambda);

// Autocovariance gamma(0..max_lag) of the stationary core,
//   gamma(k) = (2 pi)^{-1} integral e^{i k lambda} |2 sin(lambda/2)|^{-2d}
//              f*(lambda) d lambda.
// The power-law singularity is split off and integrated in closed form;
// the smooth remainder uses an end-corrected trapezoid rule with one FFT
// for all cosine moments. Errors when |fractional d| >= 1/2 (half-integer
// d0) or max_lag > 2^21.
Eigen::ArrayXd autocovariance(const ProcessModel& m, long max_lag);

// Closed-form fractional-noise autocovariance (f* = 1):
// gamma(0) = Gamma(1-2d)/Gamma(1-d)^2, gamma(k)/gamma(k-1) = (k-1+d)/(k-d).
Eigen::ArrayXd fractional_noise_autocovariance(double d, long max_lag);

// Exact Gaussian sample of length n: circulant embedding of the stationary
// core (embedding doubled until nonnegative-definite, at most 4 times),
// then k-fold cumulative sums (start value 0) or |k|-fold differences to
// reach d0. Deterministic and bit-reproducible given (model, n, seed).
Eigen::ArrayXd simulate(const ProcessModel& m, long n, std::uint64_t seed);

// Reusable generator caching the embedding spectrum for repeated draws of
// the same (model, n) -- the Monte Carlo hot path.
class Simulator {
 public:
  Simulator(const ProcessModel& m, long n);
  Eigen::ArrayXd draw(std::uint64_t seed) const;
  long size() const { return n_; }

 private:
  ProcessModel model_;
  long n_;             // requested output length
  long core_n_;        // stationary-core length before integration steps
  Eigen::ArrayXd eigenvalues_;  // circulant eigenvalues, nonnegative
};

// Scalogram: (scale j, log2 of mean squared coefficient) for every scale
// with at least one coefficient. Doubles as a finite-sample scaling
// diagnostic (slope approx 2 d) and as the log-scale regression input.
struct ScalePoint {
  int scale = 0;
  double log2_mean_square = 0.0;
};
std::vector<ScalePoint> scaling_diagnostic(const Pyramid& p);

}  // namespace longmem

#endif  // LONGMEM_SYNTHESIS_HPP
