// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The longmem Authors

#ifndef LONGMEM_ASYMPTOTICS_HPP
#define LONGMEM_ASYMPTOTICS_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "longmem/wavelet.hpp"

namespace longmem {

// Marker for the infinite-bandwidth limit in every routine taking ell.
inline constexpr int kEllInfinity = -1;

// Mean and variance of the geometric weight distribution over scales
// 0..ell: eta = sum j 2^{-j} / (2 - 2^{-ell}), kappa the matching central
// second moment. ell = kEllInfinity gives the limits (1, 2).
struct EtaKappa {
  double eta = 0.0;
  double kappa = 0.0;
};
EtaKappa eta_kappa(int ell);

// Scaling constant K(d) = integral over xi of |xi|^{-2d} |psi_hat(xi)|^2,
// the variance constant of coefficients at one scale. Admissible d in
// (1/2 - alpha, M + 1/2); orthonormal families give K(0) = 2 pi.
double scaling_constant(double d, const WaveletSpec& w);

// Limiting cross-scale spectral density vector D_u(lambda; d): the 2^u
// complex components couple a coarse scale with one u levels finer,
//   D_u(lambda)_r = sum_l |xi_l|^{-2d} 2^{-u/2} e^{-i r 2^{-u} xi_l}
//                   conj(psi_hat(xi_l)) psi_hat(2^{-u} xi_l),
// xi_l = lambda + 2 pi l, truncated so the neglected tail is < 1e-8.
// Admissible d in (1/2 - alpha, M].
Eigen::VectorXcd cross_scale_density(int u, double lambda, double d,
                                     const WaveletSpec& w);

// Cross-scale energy I_u(d) = integral over (-pi, pi) of the squared norm
// of D_u. Computed from the equivalent coefficient-covariance sum
//   (2 pi)^{-1} sum_tau Cov^2(W_{0,0}, W_{-u,tau})
// whose terms come from a single frequency integral each; this converges
// much faster in u than quadrature of |D_u|^2. Orthonormal families give
// I_u(0) = 2 pi when u = 0, else 0.
double cross_scale_energy(int u, double d, const WaveletSpec& w);

// Same quantity by composite Gauss-Legendre quadrature of |D_u|^2 on a
// 2^12-node lambda-grid (all nodes interior, so band-edge indicator values
// cannot bias the result) -- the independent route used for cross-checking.
double cross_scale_energy_quadrature(int u, double d, const WaveletSpec& w);

// CLT variance of sqrt(n 2^{-L}) (d_hat - d) when ell = U - L scales are
// pooled (ell = kEllInfinity for the limit). Combines eta_kappa,
// scaling_constant and cross_scale_energy; for orthonormal families
// V(d, infinity) >= (8 log^2 2)^{-1} with equality at d = 0.
double clt_variance(double d, int ell, const WaveletSpec& w);

// Closed-form variance for the shannon band-pass reference:
//   pi g(-4d) / (2 (2 - 2^{-ell}) kappa_ell log^2(2) g^2(-2d)),
// g(x) = integral of lambda^x over [pi, 2 pi].
double shannon_clt_variance(double d, int ell);

// Shannon variance via the generic quadrature pipeline using the analytic
// band-indicator psi_hat -- validates the closed form independently.
double shannon_clt_variance_quadrature(double d, int ell);

// Variance table over a d-grid and a set of bandwidths, for CSV export.
struct VarianceRow {
  double d = 0.0;
  int ell = 0;  // kEllInfinity for the limit rows
  double variance = 0.0;
  std::string family;
};
struct VarianceTable {
  std::vector<VarianceRow> rows;
};
VarianceTable variance_table(const WaveletSpec& w,
                             const std::vector<double>& d_grid,
                             const std::vector<int>& ells);

}  // namespace longmem

#endif  // LONGMEM_ASYMPTOTICS_HPP
