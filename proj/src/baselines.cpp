// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The longmem Authors

#include "longmem/baselines.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "longmem/fft.hpp"

namespace longmem {
namespace {

constexpr double kPi = 3.14159265358979324;
constexpr double kLog2 = 0.69314718055994531;

struct Ordinates {
  std::vector<double> log_freq;   // log lambda_k for retained ordinates
  std::vector<double> log_power;  // log I_k
};

Ordinates gather_ordinates(const Eigen::ArrayXd& x, long m, const char* who) {
  const long n = x.size();
  if (n < 8) throw std::invalid_argument(std::string(who) + ": series too short");
  if (m == 0) m = default_bandwidth(n);
  if (m < 2 || m > n / 2) {
    throw std::invalid_argument(std::string(who) + ": bandwidth out of range");
  }
  const Eigen::ArrayXd pgram = periodogram(x);
  Ordinates o;
  for (long k = 1; k <= m; ++k) {
    const double ik = pgram[k - 1];
    if (!(ik > 0.0)) continue;  // exact zeros carry no log information
    o.log_freq.push_back(std::log(2.0 * kPi * k / n));
    o.log_power.push_back(std::log(ik));
  }
  if (o.log_freq.size() < 2) {
    throw std::invalid_argument(std::string(who) + ": too few usable ordinates");
  }
  return o;
}

// Whittle objective derivatives in the frequency band; weights lambda^{2d} I_k
// handled in log space.
struct FreqMoments {
  double mean = 0.0;      // weighted mean of log lambda
  double variance = 0.0;  // weighted variance of log lambda
};

FreqMoments freq_moments(const Ordinates& o, double d) {
  double peak = -std::numeric_limits<double>::infinity();
  std::vector<double> expo(o.log_freq.size());
  for (std::size_t i = 0; i < expo.size(); ++i) {
    expo[i] = 2.0 * d * o.log_freq[i] + o.log_power[i];
    peak = std::max(peak, expo[i]);
  }
  double w = 0.0, s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < expo.size(); ++i) {
    const double wi = std::exp(expo[i] - peak);
    w += wi;
    s1 += wi * o.log_freq[i];
    s2 += wi * o.log_freq[i] * o.log_freq[i];
  }
  FreqMoments fm;
  fm.mean = s1 / w;
  fm.variance = std::max(s2 / w - fm.mean * fm.mean, 0.0);
  return fm;
}

}  // namespace

Eigen::ArrayXd periodogram(const Eigen::ArrayXd& x) {
  const long n = x.size();
  if (n < 2) throw std::invalid_argument("periodogram: series too short");
  const auto spectrum = dft_real(x);
  const long m = n / 2;
  Eigen::ArrayXd out(m);
  const double scale = 1.0 / (2.0 * kPi * n);
  for (long k = 1; k <= m; ++k) {
    out[k - 1] = std::norm(spectrum[static_cast<std::size_t>(k)]) * scale;
  }
  return out;
}

long default_bandwidth(long n) {
  const long m = static_cast<long>(std::floor(std::pow(static_cast<double>(n), 0.65)));
  return std::max(2L, std::min(m, n / 2));
}

BaselineResult gph(const Eigen::ArrayXd& x, long m) {
  const Ordinates o = gather_ordinates(x, m, "gph");
  // Regress log I_k on -2 log |2 sin(lambda_k / 2)|; for the retained
  // low frequencies the regressor is -2 log lambda_k corrected by the exact
  // sine term, kept in full rather than approximated.
  const std::size_t count = o.log_freq.size();
  std::vector<double> reg(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double lambda = std::exp(o.log_freq[i]);
    reg[i] = -2.0 * std::log(2.0 * std::sin(0.5 * lambda));
  }
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    xm += reg[i];
    ym += o.log_power[i];
  }
  xm /= static_cast<double>(count);
  ym /= static_cast<double>(count);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    sxx += (reg[i] - xm) * (reg[i] - xm);
    sxy += (reg[i] - xm) * (o.log_power[i] - ym);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("gph: degenerate regressor");

  BaselineResult r;
  r.method = "gph";
  r.d_hat = sxy / sxx;
  r.bandwidth = static_cast<long>(count);
  r.nominal_var = kPi * kPi / 24.0;
  r.at_boundary = false;
  return r;
}

BaselineResult lwf(const Eigen::ArrayXd& x, long m) {
  const Ordinates o = gather_ordinates(x, m, "lwf");
  double lf_mean = 0.0;
  for (double lf : o.log_freq) lf_mean += lf;
  lf_mean /= static_cast<double>(o.log_freq.size());

  // The objective is convex with derivative 2 (weighted mean - plain mean)
  // of log lambda; locate the root of the derivative on [-1, 1].
  auto slope = [&](double d) { return freq_moments(o, d).mean - lf_mean; };

  BaselineResult r;
  r.method = "lwf";
  r.bandwidth = static_cast<long>(o.log_freq.size());
  r.nominal_var = 0.25;

  double lo = -1.0, hi = 1.0;
  if (slope(-1.0) >= 0.0) {
    r.d_hat = -1.0;
    r.at_boundary = true;
    return r;
  }
  if (slope(1.0) <= 0.0) {
    r.d_hat = 1.0;
    r.at_boundary = true;
    return r;
  }
  double d = 0.0;
  for (int it = 0; it < 200; ++it) {
    const FreqMoments fm = freq_moments(o, d);
    const double g = fm.mean - lf_mean;
    if (g < 0.0) {
      lo = d;  // derivative negative: minimum to the right
    } else {
      hi = d;
    }
    // Newton step on the derivative: delta = -R'(d)/R''(d) = -g / (2 var)
    double next = fm.variance > 0.0 ? d - g / (2.0 * fm.variance) : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double delta = next - d;
    d = next;
    if (std::abs(delta) < 1e-12) break;
  }
  r.d_hat = d;
  r.at_boundary = std::abs(std::abs(d) - 1.0) < 1e-6;
  return r;
}

BaselineResult logscale_regression(const Pyramid& p, ScaleRange range) {
  if (range.L < 1 || range.U < range.L || range.U > p.max_level()) {
    throw std::invalid_argument("logscale_regression: bad scale range");
  }
  std::vector<double> js, ys, ws;
  for (int j = range.L; j <= range.U; ++j) {
    const Eigen::ArrayXd& row = p.coeffs[static_cast<std::size_t>(j)];
    if (row.size() == 0) continue;
    const double energy = row.square().sum();
    if (!(energy > 0.0)) continue;
    js.push_back(j);
    ys.push_back(std::log2(energy / static_cast<double>(row.size())));
    // chi-square log variance ~ 2/n_j: weight by the coefficient count
    ws.push_back(static_cast<double>(row.size()));
  }
  if (js.size() < 2) {
    throw std::invalid_argument("logscale_regression: need two or more usable scales");
  }
  double wsum = 0.0, jm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < js.size(); ++i) {
    wsum += ws[i];
    jm += ws[i] * js[i];
    ym += ws[i] * ys[i];
  }
  jm /= wsum;
  ym /= wsum;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < js.size(); ++i) {
    sxx += ws[i] * (js[i] - jm) * (js[i] - jm);
    sxy += ws[i] * (js[i] - jm) * (ys[i] - ym);
  }
  if (!(sxx > 0.0)) {
    throw std::invalid_argument("logscale_regression: degenerate scale spread");
  }

  BaselineResult r;
  r.method = "logscale";
  r.d_hat = 0.5 * sxy / sxx;
  r.bandwidth = static_cast<long>(js.size());
  // Errors of the log2 mean square are approximately 2 / (n_j log^2 2);
  // propagate through the weighted least squares slope and halve for d.
  r.nominal_var = 2.0 / (kLog2 * kLog2) / sxx / 4.0;
  r.at_boundary = false;
  return r;
}

}  // namespace longmem
