// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The longmem Authors

#ifndef LONGMEM_ESTIMATOR_HPP
#define LONGMEM_ESTIMATOR_HPP

#include <optional>
#include <vector>

#include "longmem/pyramid.hpp"
#include "longmem/wavelet.hpp"

namespace longmem {

// Scale band [L, U] consumed by the estimator (1 <= L < U <= max scale).
struct ScaleRange {
  int L = 1;
  int U = 1;
};

struct ConfidenceInterval {
  double low = 0.0;
  double high = 0.0;
  double level = 0.0;  // nominal two-sided coverage, e.g. 0.90
};

// Output of the wavelet Whittle fit.
struct EstimateResult {
  double d_hat = 0.0;       // memory parameter estimate
  double sigma2_hat = 0.0;  // profile scale estimate at d_hat
  ScaleRange range;         // scales used
  double mean_scale = 0.0;  // coefficient-count-weighted mean scale <I>
  long n_eff = 0;           // total coefficient count over [L, U]
  long n = 0;               // original sample count
  int ell = 0;              // U - L, band width driving the variance
  int iterations = 0;       // Newton steps taken
  double asymp_var = 0.0;   // filled in by confidence_interval
  std::optional<ConfidenceInterval> ci;
};

// Count-weighted mean scale over the band: sum_j j n_j / sum_j n_j.
// counts[i] is the coefficient count at scale L + i.
double mean_scale(const std::vector<long>& counts, int L);

// Profile log-likelihood contrast
//   C(d) = log sum_{j,k in band} 2^{2d(<I> - j)} W_{j,k}^2,
// evaluated stably via log-sum-exp. Convex in d.
double contrast(const Pyramid& p, ScaleRange range, double d);

// Weighted centered-scale score sum_{j,k} (j - <I>) 2^{-2jd} W_{j,k}^2.
// The contrast derivative is -2 log(2) times this over the unweighted
// 2^{-2jd} energy, so the estimator is its root.
double score(const Pyramid& p, ScaleRange range, double d);

// Minimize the contrast over d by safeguarded Newton iteration with
// analytic first and second derivatives, starting from d = 0, falling back
// to bisection when a step leaves the current bracket. Converges to
// |step| < 1e-10 (cap 100 iterations).
EstimateResult estimate(const Pyramid& p, ScaleRange range);

// Default scale band: L = round(log2(n) / (1 + 2 beta)) clamped to
// [1, max_scale - 2], U = max_scale(n, T). Larger beta (smoother
// short-memory spectrum) admits finer scales.
ScaleRange select_scales(long n, int support, double beta);

// Two-sided asymptotic confidence interval
//   d_hat -+ z_{(1+level)/2} sqrt(V(d_hat, ell) / (n 2^{-L})),
// with ell = U - L (or infinite when ell_infinite is set). Stores the
// variance in result.asymp_var and the interval in result.ci. Errors when
// d_hat falls outside the variance formula's admissible domain.
ConfidenceInterval confidence_interval(EstimateResult& result,
                                       const WaveletSpec& w, double level,
                                       bool ell_infinite = false);

}  // namespace longmem

#endif  // LONGMEM_ESTIMATOR_HPP
