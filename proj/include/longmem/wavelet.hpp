// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The longmem Authors

#ifndef LONGMEM_WAVELET_HPP
#define LONGMEM_WAVELET_HPP

#include <complex>
#include <string>

#include <Eigen/Dense>

namespace longmem {

// Compactly supported orthonormal wavelet family, described by its conjugate
// quadrature filter pair, plus the "shannon" band-pass reference which has no
// filters and is handled analytically wherever it is accepted.
struct WaveletSpec {
  std::string name;            // "haar", "db2", ..., or "shannon"
  int vanishing_moments = 0;   // M: polynomial degrees annihilated by psi
  double alpha = 0.0;          // polynomial decay exponent of |psi_hat|
  int support = 0;             // T: filter length minus one (0 for shannon)
  Eigen::ArrayXd lowpass;      // h, length 2M, sums to sqrt(2)
  Eigen::ArrayXd highpass;     // g_k = (-1)^k h_{2M-1-k}

  // True for the filterless analytic reference family.
  bool analytic() const { return lowpass.size() == 0; }
};

// Build a family by name: "haar" (alias "db1"), "db2".."db10", or "shannon".
// Daubechies filters are generated at startup by spectral factorization of
// the half-band polynomial, not read from hard-coded tables; haar is the
// closed-form special case. Unknown names raise std::invalid_argument.
WaveletSpec make_wavelet(const std::string& name);

// Minimum-phase Daubechies lowpass filter with M vanishing moments
// (length 2M, normalized to sum sqrt(2)). Exposed for testing the
// factorization independently of make_wavelet.
Eigen::ArrayXd daubechies_lowpass(int M);

// Transfer functions m0/m1 of the filter pair, normalized so m0(0) = 1:
//   m0(xi) = 2^{-1/2} sum_k h_k e^{-i k xi},  m1 likewise for g.
std::complex<double> lowpass_transfer(const WaveletSpec& w, double xi);
std::complex<double> highpass_transfer(const WaveletSpec& w, double xi);

// Fourier transform of the scaling function: phi_hat(xi) = prod_{r>=1}
// m0(xi 2^{-r}). The infinite product is truncated adaptively (at least 25
// factors past the point where the argument drops below pi) and the final
// factor is verified to be within 1e-12 of modulus one.
std::complex<double> phi_hat(const WaveletSpec& w, double xi);

// Fourier transform of the wavelet: psi_hat(xi) = m1(xi/2) phi_hat(xi/2).
// For "shannon" this is the indicator of pi <= |xi| <= 2 pi.
std::complex<double> psi_hat(const WaveletSpec& w, double xi);

// Vectorized psi_hat over a grid of frequencies.
Eigen::VectorXcd psi_hat(const WaveletSpec& w, const Eigen::ArrayXd& grid);

}  // namespace longmem

#endif  // LONGMEM_WAVELET_HPP
