// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The longmem Authors

#ifndef LONGMEM_FFT_HPP
#define LONGMEM_FFT_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace longmem {

// In-place discrete Fourier transform of arbitrary length.
// Power-of-two sizes use an iterative radix-2 kernel; other sizes fall back
// to Bluestein's chirp-z algorithm. The inverse transform includes the 1/n
// normalization, so fft(fft(a), inverse=true) == a.
void fft(std::vector<std::complex<double>>& a, bool inverse = false);

// Full complex spectrum of a real series (length n, forward transform).
std::vector<std::complex<double>> dft_real(const Eigen::ArrayXd& x);

}  // namespace longmem

#endif  // LONGMEM_FFT_HPP
