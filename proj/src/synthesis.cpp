// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The longmem Authors

#include "longmem/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "longmem/fft.hpp"
#include "longmem/rng.hpp"

namespace longmem {
namespace {

constexpr double kPi = 3.14159265358979324;

void check_model(const ProcessModel& m) {
  switch (m.kind) {
    case SpectrumKind::kConstant:
      if (!(m.constant > 0.0)) {
        throw std::invalid_argument("model: constant level must be positive");
      }
      break;
    case SpectrumKind::kAr1Modulus:
      if (!(std::abs(m.rho) < 1.0)) {
        throw std::invalid_argument("model: autoregressive root must satisfy |rho| < 1");
      }
      break;
    case SpectrumKind::kGrid:
      if (m.grid_lambda.size() != m.grid_value.size() ||
          m.grid_lambda.size() < 2) {
        throw std::invalid_argument("model: grid needs two or more matched points");
      }
      for (long i = 0; i < m.grid_lambda.size(); ++i) {
        if (i > 0 && !(m.grid_lambda[i] > m.grid_lambda[i - 1])) {
          throw std::invalid_argument("model: grid frequencies must increase");
        }
        if (!(m.grid_value[i] > 0.0)) {
          throw std::invalid_argument("model: grid values must be positive");
        }
      }
      break;
  }
}

// Gauss quadrature for the weight (1 + t)^b on (-1, 1), via the Jacobi matrix
// of the monic orthogonal polynomials.
struct PowerRule {
  Eigen::ArrayXd x;
  Eigen::ArrayXd w;
};

PowerRule power_rule(int n, double b) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  jac(0, 0) = b / (b + 2.0);
  for (int k = 1; k < n; ++k) {
    jac(k, k) = b * b / ((2.0 * k + b) * (2.0 * k + b + 2.0));
    double beta;
    if (k == 1) {
      beta = 4.0 * (1.0 + b) / ((2.0 + b) * (2.0 + b) * (3.0 + b));
    } else {
      const double s = 2.0 * k + b;
      beta = 4.0 * k * k * (k + b) * (k + b) / (s * s * (s + 1.0) * (s - 1.0));
    }
    const double off = std::sqrt(beta);
    jac(k, k - 1) = off;
    jac(k - 1, k) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  PowerRule r;
  r.x = es.eigenvalues().array();
  const double mu0 = std::exp2(b + 1.0) / (b + 1.0);
  r.w = mu0 * es.eigenvectors().row(0).array().square();
  return r;
}

// Integral of u^-c cos(u) over (x, infinity) at integer multiples x = k pi,
// where the sine boundary terms vanish; five terms of the integration-by-parts
// series leave a remainder below ~1e-13 for x >= 100.
double cosine_tail(double c, long k, double x) {
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  double term = c / std::pow(x, c + 1.0);
  double acc = 0.0;
  double f = c;
  for (int j = 0; j < 5; ++j) {
    acc += (j % 2 == 0 ? term : -term);
    // advance the falling product (c)(c+1)... and the power of x
    const double next = (f + 1.0) * (f + 2.0) / (x * x);
    term *= next;
    f += 2.0;
  }
  return sign * acc;
}

// Integral of lambda^-c cos(k lambda) over (0, pi), c < 1.
double singular_cosine(double c, long lag, const PowerRule& rule) {
  if (c == 0.0) return lag == 0 ? kPi : 0.0;
  if (lag == 0) return std::pow(kPi, 1.0 - c) / (1.0 - c);
  if (lag < 32) {
    double acc = 0.0;
    for (int i = 0; i < rule.x.size(); ++i) {
      const double lambda = 0.5 * kPi * (1.0 + rule.x[i]);
      acc += rule.w[i] * std::cos(lag * lambda);
    }
    return std::pow(0.5 * kPi, 1.0 - c) * acc;
  }
  const double whole =
      std::tgamma(1.0 - c) * std::sin(0.5 * kPi * c);
  const double x = lag * kPi;
  return std::pow(static_cast<double>(lag), c - 1.0) *
         (whole - cosine_tail(c, lag, x));
}

long next_pow2(long v) {
  long p = 1;
  while (p < v) p <<= 1;
  return p;
}

}  // namespace

int integration_order(double d0) {
  const double shifted = d0 + 0.5;
  const double fl = std::floor(shifted);
  if (shifted == fl) {
    throw std::invalid_argument(
        "integration_order: fractional part must satisfy |d| < 1/2");
  }
  return static_cast<int>(fl);
}

double fractional_d(const ProcessModel& m) {
  return m.d0 - integration_order(m.d0);
}

double short_memory_density(const ProcessModel& m, double lambda) {
  check_model(m);
  const double a = std::abs(lambda);
  if (a > kPi + 1e-12) {
    throw std::invalid_argument("short_memory_density: frequency outside [-pi, pi]");
  }
  switch (m.kind) {
    case SpectrumKind::kConstant:
      return m.constant;
    case SpectrumKind::kAr1Modulus: {
      const double mod2 = 1.0 - 2.0 * m.rho * std::cos(a) + m.rho * m.rho;
      return 1.0 / mod2;
    }
    case SpectrumKind::kGrid: {
      const auto& xs = m.grid_lambda;
      const auto& ys = m.grid_value;
      if (a <= xs[0]) return ys[0];
      const long last = xs.size() - 1;
      if (a >= xs[last]) return ys[last];
      long hi = 1;
      while (xs[hi] < a) ++hi;
      const double t = (a - xs[hi - 1]) / (xs[hi] - xs[hi - 1]);
      return ys[hi - 1] + t * (ys[hi] - ys[hi - 1]);
    }
  }
  throw std::logic_error("short_memory_density: unknown spectrum kind");
}

double spectral_density(const ProcessModel& m, double lambda) {
  const double frac = fractional_d(m);
  const double base = std::abs(2.0 * std::sin(0.5 * lambda));
  return std::pow(base, -2.0 * frac) * short_memory_density(m, lambda);
}

Eigen::ArrayXd fractional_noise_autocovariance(double d, long max_lag) {
  if (!(std::abs(d) < 0.5)) {
    throw std::invalid_argument(
        "fractional_noise_autocovariance: need |d| < 1/2");
  }
  if (max_lag < 0) {
    throw std::invalid_argument("fractional_noise_autocovariance: negative lag");
  }
  Eigen::ArrayXd gamma(max_lag + 1);
  gamma[0] = std::exp(std::lgamma(1.0 - 2.0 * d) - 2.0 * std::lgamma(1.0 - d));
  for (long k = 1; k <= max_lag; ++k) {
    gamma[k] = gamma[k - 1] * (k - 1.0 + d) / (k - d);
  }
  return gamma;
}

Eigen::ArrayXd autocovariance(const ProcessModel& m, long max_lag) {
  check_model(m);
  if (max_lag < 0) {
    throw std::invalid_argument("autocovariance: negative lag");
  }
  if (max_lag > (1L << 21)) {
    throw std::invalid_argument("autocovariance: lag range beyond 2^21 unsupported");
  }
  const double frac = fractional_d(m);
  const double c = 2.0 * frac;
  const double g0 = short_memory_density(m, 0.0);

  // Subtract the exact power-law component at the origin; the remainder is
  // differentiable enough for an end-corrected trapezoid rule, and one FFT
  // yields every cosine moment of it at once.
  const long grid = std::max(1L << 20, next_pow2(2 * std::max(max_lag, 1L)));
  const double h = kPi / grid;
  std::vector<std::complex<double>> ext(2 * static_cast<std::size_t>(grid));
  std::vector<double> rem(static_cast<std::size_t>(grid) + 1);
  rem[0] = 0.0;
  for (long i = 1; i <= grid; ++i) {
    const double lambda = i * h;
    const double ratio = lambda / (2.0 * std::sin(0.5 * lambda));
    const double smooth =
        std::pow(ratio, c) * short_memory_density(m, lambda) - g0;
    rem[static_cast<std::size_t>(i)] = std::pow(lambda, -c) * smooth;
  }
  for (long i = 0; i < grid; ++i) ext[static_cast<std::size_t>(i)] = rem[static_cast<std::size_t>(i)];
  ext[static_cast<std::size_t>(grid)] = rem[static_cast<std::size_t>(grid)];
  for (long i = grid + 1; i < 2 * grid; ++i) {
    ext[static_cast<std::size_t>(i)] = rem[static_cast<std::size_t>(2 * grid - i)];
  }
  fft(ext);

  const double rp =
      (3.0 * rem[static_cast<std::size_t>(grid)] -
       4.0 * rem[static_cast<std::size_t>(grid - 1)] +
       rem[static_cast<std::size_t>(grid - 2)]) /
      (2.0 * h);  // one-sided slope at the upper endpoint

  const PowerRule rule = power_rule(128, -c);
  Eigen::ArrayXd gamma(max_lag + 1);
  for (long k = 0; k <= max_lag; ++k) {
    double smooth_part = 0.5 * h * ext[static_cast<std::size_t>(k)].real();
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    smooth_part -= h * h / 12.0 * rp * sign;
    const double model_part = g0 * singular_cosine(c, k, rule);
    gamma[k] = (smooth_part + model_part) / kPi;
  }
  return gamma;
}

Simulator::Simulator(const ProcessModel& m, long n) : model_(m), n_(n) {
  check_model(m);
  if (n < 1) throw std::invalid_argument("simulate: need n >= 1");
  const int order = integration_order(m.d0);
  core_n_ = order < 0 ? n - order : n;

  long half = next_pow2(std::max(core_n_ - 1, 1L));
  for (int attempt = 0;; ++attempt) {
    const Eigen::ArrayXd gamma = autocovariance(m, half);
    std::vector<std::complex<double>> c(2 * static_cast<std::size_t>(half));
    for (long i = 0; i <= half; ++i) c[static_cast<std::size_t>(i)] = gamma[i];
    for (long i = half + 1; i < 2 * half; ++i) {
      c[static_cast<std::size_t>(i)] = gamma[2 * half - i];
    }
    fft(c);
    eigenvalues_.resize(2 * half);
    double lo = 0.0, hi = 0.0;
    for (long i = 0; i < 2 * half; ++i) {
      const double e = c[static_cast<std::size_t>(i)].real();
      eigenvalues_[i] = e;
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
    if (lo >= -1e-8 * hi) {
      for (long i = 0; i < 2 * half; ++i) {
        if (eigenvalues_[i] < 0.0) eigenvalues_[i] = 0.0;
      }
      break;
    }
    if (attempt >= 4) {
      throw std::runtime_error("simulate: circulant embedding is not nonnegative");
    }
    half *= 2;  // enlarge the embedding and retry
  }
}

Eigen::ArrayXd Simulator::draw(std::uint64_t seed) const {
  const long n_emb = eigenvalues_.size();
  const long half = n_emb / 2;
  CounterRng rng(seed);
  std::vector<std::complex<double>> y(static_cast<std::size_t>(n_emb));
  y[0] = std::sqrt(eigenvalues_[0]) * rng.normal(0);
  y[static_cast<std::size_t>(half)] =
      std::sqrt(eigenvalues_[half]) * rng.normal(2 * static_cast<std::uint64_t>(half));
  for (long k = 1; k < half; ++k) {
    const double s = std::sqrt(0.5 * eigenvalues_[k]);
    const std::uint64_t c0 = 2 * static_cast<std::uint64_t>(k);
    y[static_cast<std::size_t>(k)] =
        std::complex<double>(s * rng.normal(c0), s * rng.normal(c0 + 1));
    y[static_cast<std::size_t>(n_emb - k)] = std::conj(y[static_cast<std::size_t>(k)]);
  }
  fft(y);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n_emb));

  const int order = integration_order(model_.d0);
  Eigen::ArrayXd x(core_n_);
  for (long i = 0; i < core_n_; ++i) {
    x[i] = y[static_cast<std::size_t>(i)].real() * norm;
  }
  if (order > 0) {
    for (int r = 0; r < order; ++r) {
      for (long i = 1; i < core_n_; ++i) x[i] += x[i - 1];
    }
  } else if (order < 0) {
    for (int r = 0; r < -order; ++r) {
      const long len = x.size() - 1;
      Eigen::ArrayXd diff(len);
      for (long i = 0; i < len; ++i) diff[i] = x[i + 1] - x[i];
      x = std::move(diff);
    }
  }
  return x;
}

Eigen::ArrayXd simulate(const ProcessModel& m, long n, std::uint64_t seed) {
  return Simulator(m, n).draw(seed);
}

std::vector<ScalePoint> scaling_diagnostic(const Pyramid& p) {
  std::vector<ScalePoint> points;
  for (int j = 1; j <= p.max_level(); ++j) {
    const Eigen::ArrayXd& row = p.coeffs[static_cast<std::size_t>(j)];
    if (row.size() == 0) continue;
    const double mean_sq = row.square().sum() / static_cast<double>(row.size());
    if (!(mean_sq > 0.0)) continue;
    points.push_back(ScalePoint{j, std::log2(mean_sq)});
  }
  return points;
}

}  // namespace longmem
