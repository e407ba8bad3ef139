// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The longmem Authors

#include "longmem/wavelet.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/Polynomials>

namespace longmem {
namespace {

using cd = std::complex<double>;

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

// Stop peeling phi_hat's product once the argument is this small: the
// remaining factors differ from one by a phase of order the argument, which
// is below 1e-13, and by a modulus deviation of order its square.
constexpr double kProductCutoff = 0x1.0p-45 * kPi;

std::vector<long> binomial_row_sums(int M) {
  // Coefficients of the half-band polynomial: C(M-1+k, k), k = 0..M-1.
  std::vector<long> c(static_cast<std::size_t>(M));
  c[0] = 1;
  for (int k = 1; k < M; ++k) {
    // C(M-1+k, k) = C(M-2+k, k-1) * (M-1+k) / k, exact in integers.
    c[static_cast<std::size_t>(k)] =
        c[static_cast<std::size_t>(k - 1)] * (M - 1 + k) / k;
  }
  return c;
}

// Multiply the ascending-coefficient polynomial by (z - z0) / (1 - z0).
void multiply_root_factor(std::vector<cd>& poly, cd z0) {
  const cd scale = 1.0 / (1.0 - z0);
  std::vector<cd> next(poly.size() + 1, cd(0.0, 0.0));
  for (std::size_t i = 0; i < poly.size(); ++i) {
    next[i] += -z0 * scale * poly[i];
    next[i + 1] += scale * poly[i];
  }
  poly = std::move(next);
}

// Largest modulus on the unit circle of the residual factor q in
// |m0(w)|^2 = cos^{2M}(w/2) |q(w)|^2: since |q(w)|^2 = P(sin^2(w/2)) with
// the half-band polynomial P having positive coefficients, the sup sits at
// w = pi and equals P(1) = sum_k C(M-1+k, k) exactly.
double sup_residual_modulus(int M) {
  const std::vector<long> c = binomial_row_sums(M);
  long total = 0;
  for (long v : c) total += v;
  return std::sqrt(static_cast<double>(total));
}

double decay_exponent(int M) {
  switch (M) {
    // Tabulated decay exponents for the families used throughout.
    case 1:
      return 1.0;
    case 2:
      return 1.3390;
    case 4:
      return 1.9125;
    default:
      // Lower bound M - log2 sup|q|; conservative (never overstates decay),
      // so domain checks based on it stay valid.
      return static_cast<double>(M) - std::log2(sup_residual_modulus(M));
  }
}

void verify_filter(const Eigen::ArrayXd& h, int M) {
  if (std::abs(h.sum() - kSqrt2) > 1e-9) {
    throw std::logic_error("daubechies_lowpass: filter sum is not sqrt(2)");
  }
  if (std::abs((h * h).sum() - 1.0) > 1e-10) {
    throw std::logic_error("daubechies_lowpass: filter energy is not 1");
  }
  for (int m = 1; m < M; ++m) {
    double dot = 0.0;
    for (Eigen::Index k = 0; k + 2 * m < h.size(); ++k) dot += h[k] * h[k + 2 * m];
    if (std::abs(dot) > 1e-10) {
      throw std::logic_error("daubechies_lowpass: shifted filters not orthogonal");
    }
  }
}

}  // namespace

Eigen::ArrayXd daubechies_lowpass(int M) {
  if (M < 1 || M > 10) {
    throw std::invalid_argument("daubechies_lowpass: order must be in 1..10");
  }
  if (M == 1) {
    Eigen::ArrayXd h(2);
    h << 1.0 / kSqrt2, 1.0 / kSqrt2;
    return h;
  }
  // Roots of the half-band polynomial P(y) = sum C(M-1+k, k) y^k.
  const std::vector<long> pc = binomial_row_sums(M);
  Eigen::VectorXd coeffs(M);
  for (int k = 0; k < M; ++k) coeffs[k] = static_cast<double>(pc[static_cast<std::size_t>(k)]);
  Eigen::PolynomialSolver<double, Eigen::Dynamic> solver;
  solver.compute(coeffs);
  // Each y-root maps to a reciprocal z-pair via y = (2 - z - 1/z)/4; keep
  // the representative inside the unit disc (minimum-phase choice).
  std::vector<cd> zroots;
  for (const auto& y : solver.roots()) {
    const cd b = 2.0 - 4.0 * cd(y);
    const cd disc = std::sqrt(b * b - 4.0);
    const cd z1 = (b + disc) / 2.0;
    const cd z2 = (b - disc) / 2.0;
    zroots.push_back(std::abs(z1) < std::abs(z2) ? z1 : z2);
  }
  if (static_cast<int>(zroots.size()) != M - 1) {
    throw std::logic_error("daubechies_lowpass: root count mismatch");
  }
  // ((1+z)/2)^M times the normalized root factors, ascending in z.
  std::vector<cd> poly{cd(1.0, 0.0)};
  for (int r = 0; r < M; ++r) {
    std::vector<cd> next(poly.size() + 1, cd(0.0, 0.0));
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i] += 0.5 * poly[i];
      next[i + 1] += 0.5 * poly[i];
    }
    poly = std::move(next);
  }
  for (const cd& z0 : zroots) multiply_root_factor(poly, z0);
  Eigen::ArrayXd h(static_cast<Eigen::Index>(poly.size()));
  for (std::size_t i = 0; i < poly.size(); ++i) {
    h[static_cast<Eigen::Index>(i)] = kSqrt2 * poly[i].real();
  }
  verify_filter(h, M);
  return h;
}

WaveletSpec make_wavelet(const std::string& name) {
  if (name == "shannon") {
    WaveletSpec w;
    w.name = name;
    w.vanishing_moments = 0;
    w.alpha = std::numeric_limits<double>::infinity();
    w.support = 0;
    return w;
  }
  int M = 0;
  if (name == "haar") {
    M = 1;
  } else if (name.size() > 2 && name.compare(0, 2, "db") == 0) {
    try {
      std::size_t pos = 0;
      M = std::stoi(name.substr(2), &pos);
      if (pos != name.size() - 2) M = 0;
    } catch (const std::exception&) {
      M = 0;
    }
  }
  if (M < 1 || M > 10) {
    throw std::invalid_argument("make_wavelet: unknown family '" + name + "'");
  }
  WaveletSpec w;
  w.name = name;
  w.vanishing_moments = M;
  w.lowpass = daubechies_lowpass(M);
  w.support = static_cast<int>(w.lowpass.size()) - 1;
  w.highpass = Eigen::ArrayXd(w.lowpass.size());
  for (Eigen::Index k = 0; k < w.lowpass.size(); ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    w.highpass[k] = sign * w.lowpass[w.lowpass.size() - 1 - k];
  }
  w.alpha = decay_exponent(M);
  return w;
}

namespace {

cd transfer(const Eigen::ArrayXd& f, double xi) {
  cd sum(0.0, 0.0);
  // Incremental rotation instead of per-tap trig: e^{-i k xi}.
  const cd step = std::polar(1.0, -xi);
  cd rot(1.0, 0.0);
  for (Eigen::Index k = 0; k < f.size(); ++k) {
    sum += f[k] * rot;
    rot *= step;
  }
  return sum / kSqrt2;
}

void require_filters(const WaveletSpec& w, const char* who) {
  if (w.analytic()) {
    throw std::invalid_argument(std::string(who) +
                                ": family has no filters (analytic)");
  }
}

}  // namespace

cd lowpass_transfer(const WaveletSpec& w, double xi) {
  require_filters(w, "lowpass_transfer");
  return transfer(w.lowpass, xi);
}

cd highpass_transfer(const WaveletSpec& w, double xi) {
  require_filters(w, "highpass_transfer");
  return transfer(w.highpass, xi);
}

cd phi_hat(const WaveletSpec& w, double xi) {
  require_filters(w, "phi_hat");
  cd prod(1.0, 0.0);
  double arg = xi / 2.0;
  cd last(1.0, 0.0);
  while (std::abs(arg) > kProductCutoff) {
    last = transfer(w.lowpass, arg);
    prod *= last;
    arg /= 2.0;
  }
  if (std::abs(std::abs(last) - 1.0) > 1e-12 && std::abs(xi) > 1.0) {
    // The product factors must approach modulus one as the argument
    // shrinks; anything else means the recursion depth logic is broken.
    throw std::logic_error("phi_hat: truncated product did not converge");
  }
  return prod;
}

cd psi_hat(const WaveletSpec& w, double xi) {
  if (w.analytic()) {
    const double a = std::abs(xi);
    return (a >= kPi && a <= 2.0 * kPi) ? cd(1.0, 0.0) : cd(0.0, 0.0);
  }
  return highpass_transfer(w, xi / 2.0) * phi_hat(w, xi / 2.0);
}

Eigen::VectorXcd psi_hat(const WaveletSpec& w, const Eigen::ArrayXd& grid) {
  Eigen::VectorXcd out(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) out[i] = psi_hat(w, grid[i]);
  return out;
}

}  // namespace longmem
