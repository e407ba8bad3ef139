// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The longmem Authors

#ifndef LONGMEM_PYRAMID_HPP
#define LONGMEM_PYRAMID_HPP

#include <vector>

#include <Eigen/Dense>

#include "longmem/wavelet.hpp"

namespace longmem {

// Decimated wavelet coefficient pyramid.
//
// Scale j >= 1 holds the output of j filter-bank iterations on the raw
// samples (j-1 lowpass/decimate stages followed by one highpass/decimate),
// equivalently a single filtering by the composed scale-j filter followed by
// decimation at stride 2^j. Only coefficients whose filter support lies
// entirely inside the sample window are kept, anchored at the left edge:
//   W_{j,k} = sum_m c_j[m] x[2^j k + m],  k = 0 .. num_coeffs(n, T, j) - 1.
// Row 0 is a placeholder of num_coeffs(n, T, 0) zeros: for an orthonormal
// pair the scale-0 detail filter is identically zero (psi is orthogonal to
// the sample space), so these coefficients vanish and estimation always
// starts at scale >= 1.
struct Pyramid {
  std::vector<Eigen::ArrayXd> coeffs;  // coeffs[j], j = 0..max_level()
  long n = 0;                          // input sample count
  int support = 0;                     // filter support T of the family used

  int max_level() const { return static_cast<int>(coeffs.size()) - 1; }
};

// Number of fully supported coefficients at scale j for sample count n and
// filter support T: max(floor(2^{-j}(n - T + 1) - T + 1), 0).
long num_coeffs(long n, int support, int j);

// Largest scale with at least one fully supported coefficient.
int max_scale(long n, int support);

// Full pyramid of x up to j_max (default: max_scale(n, T)).
// Computed by the decimating filter-bank recursion in O(n) total work.
Pyramid dwt(const Eigen::ArrayXd& x, const WaveletSpec& w, int j_max = -1);

// Scale-j composed filter c_j, built explicitly by upsample-and-convolve:
// the scale-(j-1) lowpass chain convolved with g upsampled by 2^{j-1}.
// Length T (2^j - 1) + 1 for j >= 1.
Eigen::ArrayXd composed_filter(const WaveletSpec& w, int j);

// Single coefficient via the composed filter -- an independent route used to
// cross-check dwt. j = 0 returns 0 by the orthogonality argument above.
double direct_coeff(const Eigen::ArrayXd& x, const WaveletSpec& w, int j,
                    long k);

}  // namespace longmem

#endif  // LONGMEM_PYRAMID_HPP
