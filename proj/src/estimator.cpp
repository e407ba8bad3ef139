// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The longmem Authors

#include "longmem/estimator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "longmem/asymptotics.hpp"
#include "longmem/rng.hpp"

namespace longmem {
namespace {

constexpr double kLog2 = 0.69314718055994531;

struct BandData {
  std::vector<double> log_energy;  // log sum of squared coefficients, by scale
  std::vector<long> counts;
  std::vector<int> scales;
  double mean_scale = 0.0;
  long n_eff = 0;
};

BandData gather(const Pyramid& p, ScaleRange range) {
  if (range.L < 1 || range.U <= range.L || range.U > p.max_level()) {
    throw std::invalid_argument("estimate: scale range must satisfy 1 <= L < U <= max level");
  }
  BandData b;
  double weighted = 0.0;
  int populated = 0;
  for (int j = range.L; j <= range.U; ++j) {
    const Eigen::ArrayXd& row = p.coeffs[static_cast<std::size_t>(j)];
    const long nj = row.size();
    if (nj == 0) continue;
    const double energy = row.square().sum();
    b.scales.push_back(j);
    b.counts.push_back(nj);
    b.log_energy.push_back(energy > 0.0 ? std::log(energy)
                                        : -std::numeric_limits<double>::infinity());
    b.n_eff += nj;
    weighted += static_cast<double>(j) * static_cast<double>(nj);
    if (energy > 0.0) ++populated;
  }
  if (b.n_eff <= 0) {
    throw std::invalid_argument("estimate: no coefficients in the selected scales");
  }
  if (populated < 2) {
    throw std::invalid_argument("estimate: need positive energy at two scales or more");
  }
  b.mean_scale = weighted / static_cast<double>(b.n_eff);
  return b;
}

struct Moments {
  double mean = 0.0;      // energy-weighted mean scale at the current d
  double variance = 0.0;  // energy-weighted variance of the scale index
};

// Weights proportional to 2^{-2 d j} * energy_j, computed in log space.
Moments weighted_moments(const BandData& b, double d) {
  double peak = -std::numeric_limits<double>::infinity();
  std::vector<double> expo(b.scales.size());
  for (std::size_t i = 0; i < b.scales.size(); ++i) {
    expo[i] = b.log_energy[i] - 2.0 * d * kLog2 * b.scales[i];
    if (expo[i] > peak) peak = expo[i];
  }
  double w_sum = 0.0, j_sum = 0.0, jj_sum = 0.0;
  for (std::size_t i = 0; i < b.scales.size(); ++i) {
    if (!std::isfinite(expo[i])) continue;
    const double w = std::exp(expo[i] - peak);
    const double j = b.scales[i];
    w_sum += w;
    j_sum += w * j;
    jj_sum += w * j * j;
  }
  Moments m;
  m.mean = j_sum / w_sum;
  m.variance = jj_sum / w_sum - m.mean * m.mean;
  if (m.variance < 0.0) m.variance = 0.0;
  return m;
}

}  // namespace

double mean_scale(const std::vector<long>& counts, int L) {
  double total = 0.0, weighted = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    total += static_cast<double>(counts[i]);
    weighted += static_cast<double>(L + static_cast<int>(i)) *
                static_cast<double>(counts[i]);
  }
  if (total <= 0.0) {
    throw std::invalid_argument("mean_scale: counts must have positive total");
  }
  return weighted / total;
}

double contrast(const Pyramid& p, ScaleRange range, double d) {
  const BandData b = gather(p, range);
  double peak = -std::numeric_limits<double>::infinity();
  std::vector<double> expo(b.scales.size());
  for (std::size_t i = 0; i < b.scales.size(); ++i) {
    expo[i] =
        b.log_energy[i] + 2.0 * d * kLog2 * (b.mean_scale - b.scales[i]);
    if (expo[i] > peak) peak = expo[i];
  }
  double acc = 0.0;
  for (double e : expo) {
    if (std::isfinite(e)) acc += std::exp(e - peak);
  }
  return peak + std::log(acc);
}

double score(const Pyramid& p, ScaleRange range, double d) {
  const BandData b = gather(p, range);
  double acc = 0.0;
  for (std::size_t i = 0; i < b.scales.size(); ++i) {
    if (!std::isfinite(b.log_energy[i])) continue;
    acc += (b.scales[i] - b.mean_scale) *
           std::exp(b.log_energy[i] - 2.0 * d * kLog2 * b.scales[i]);
  }
  return acc;
}

EstimateResult estimate(const Pyramid& p, ScaleRange range) {
  const BandData b = gather(p, range);

  // The contrast is convex with derivative 2 log2 * (mean_scale - m(d));
  // solving m(d) = mean_scale is a monotone root problem since the
  // energy-weighted mean m(d) decreases in d.
  auto gap = [&](double d) { return weighted_moments(b, d).mean - b.mean_scale; };

  double lo = 0.0, hi = 0.0;
  const double g0 = gap(0.0);
  if (g0 > 0.0) {
    hi = 1.0;
    int tries = 0;
    while (gap(hi) > 0.0) {
      lo = hi;
      hi *= 2.0;
      if (++tries > 70) throw std::runtime_error("estimate: contrast has no minimizer");
    }
  } else if (g0 < 0.0) {
    lo = -1.0;
    int tries = 0;
    while (gap(lo) < 0.0) {
      hi = lo;
      lo *= 2.0;
      if (++tries > 70) throw std::runtime_error("estimate: contrast has no minimizer");
    }
  }

  double d = 0.0;
  int iterations = 0;
  if (g0 != 0.0) {
    d = 0.5 * (lo + hi);
    for (iterations = 1; iterations <= 100; ++iterations) {
      const Moments m = weighted_moments(b, d);
      const double g = m.mean - b.mean_scale;
      if (g > 0.0) {
        lo = d;  // root lies above
      } else {
        hi = d;
      }
      double step;
      if (m.variance > 0.0) {
        step = g / (2.0 * kLog2 * m.variance);
      } else {
        step = 0.0;
      }
      double next = d + step;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      const double delta = next - d;
      d = next;
      if (std::abs(delta) < 1e-10) break;
    }
  }

  EstimateResult r;
  r.d_hat = d;
  r.range = range;
  r.mean_scale = b.mean_scale;
  r.n_eff = b.n_eff;
  r.n = p.n;
  r.ell = range.U - range.L;
  r.iterations = iterations;
  double q = 0.0;
  for (std::size_t i = 0; i < b.scales.size(); ++i) {
    if (!std::isfinite(b.log_energy[i])) continue;
    q += std::exp(b.log_energy[i] - 2.0 * d * kLog2 * b.scales[i]);
  }
  r.sigma2_hat = q / static_cast<double>(b.n_eff);
  return r;
}

ScaleRange select_scales(long n, int support, double beta) {
  if (beta <= 0.0) {
    throw std::invalid_argument("select_scales: smoothness exponent must be positive");
  }
  const int J = max_scale(n, support);
  if (J < 2) {
    throw std::invalid_argument("select_scales: series too short for two usable scales");
  }
  long L = std::lround(std::log2(static_cast<double>(n)) / (1.0 + 2.0 * beta));
  const long top = J - 2 > 1 ? J - 2 : 1;
  if (L < 1) L = 1;
  if (L > top) L = top;
  return ScaleRange{static_cast<int>(L), J};
}

ConfidenceInterval confidence_interval(EstimateResult& result, const WaveletSpec& w,
                                       double level, bool ell_infinite) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("confidence_interval: level must be in (0, 1)");
  }
  const int ell = ell_infinite ? kEllInfinity : result.ell;
  const double v = clt_variance(result.d_hat, ell, w);
  const double n_scaled =
      static_cast<double>(result.n) * std::pow(2.0, -result.range.L);
  const double z = inverse_normal_cdf(0.5 * (1.0 + level));
  const double half = z * std::sqrt(v / n_scaled);
  ConfidenceInterval ci;
  ci.low = result.d_hat - half;
  ci.high = result.d_hat + half;
  ci.level = level;
  result.asymp_var = v;
  result.ci = ci;
  return ci;
}

}  // namespace longmem
