// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The longmem Authors

#include "longmem/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

#include "longmem/asymptotics.hpp"
#include "longmem/estimator.hpp"
#include "longmem/pyramid.hpp"
#include "longmem/rng.hpp"

namespace longmem {
namespace {

constexpr double kPi = 3.14159265358979324;

// Degree-16 Chebyshev proxy for d -> V(d, ell), fitted over the span of the
// replication estimates so per-replication interval variances cost nothing.
struct VarianceProxy {
  double a = 0.0, b = 0.0;
  std::vector<double> coeff;
  bool flat = false;
  double flat_value = 0.0;

  double eval(double x) const {
    if (flat) return flat_value;
    const double t = std::clamp((2.0 * x - a - b) / (b - a), -1.0, 1.0);
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = coeff.size(); k-- > 1;) {
      const double b0 = 2.0 * t * b1 - b2 + coeff[k];
      b2 = b1;
      b1 = b0;
    }
    return t * b1 - b2 + 0.5 * coeff[0];
  }
};

VarianceProxy fit_proxy(double lo, double hi, int ell, const WaveletSpec& w) {
  VarianceProxy p;
  const double edge = 0.5 - w.alpha + 1e-6;
  double a = std::max(lo, edge);
  double b = w.analytic() ? hi : std::min(hi, static_cast<double>(w.vanishing_moments));
  if (!(b - a > 1e-8)) {
    p.flat = true;
    const double at = std::clamp(0.5 * (lo + hi), edge, b > a ? b : a);
    p.flat_value = clt_variance(at, ell, w);
    return p;
  }
  constexpr int kNodes = 16;
  p.a = a;
  p.b = b;
  double values[kNodes];
  for (int j = 0; j < kNodes; ++j) {
    const double theta = kPi * (j + 0.5) / kNodes;
    const double x = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(theta);
    values[j] = clt_variance(x, ell, w);
  }
  p.coeff.resize(kNodes);
  for (int k = 0; k < kNodes; ++k) {
    double acc = 0.0;
    for (int j = 0; j < kNodes; ++j) {
      acc += values[j] * std::cos(k * kPi * (j + 0.5) / kNodes);
    }
    p.coeff[static_cast<std::size_t>(k)] = 2.0 * acc / kNodes;
  }
  return p;
}

}  // namespace

int thread_count() {
  if (const char* env = std::getenv("LONGMEM_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw >= 1 ? static_cast<int>(hw) : 1;
}

McResult run_mc(const McConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  if (config.reps < 2) throw std::invalid_argument("mc: need two or more replications");
  const WaveletSpec w = make_wavelet(config.wavelet);

  ScaleRange range = select_scales(config.n, w.support, config.model.beta);
  if (config.L_override >= 1) range.L = config.L_override;
  if (config.U_override >= 1) range.U = config.U_override;
  if (!(range.L >= 1 && range.L < range.U)) {
    throw std::invalid_argument("mc: scale range must satisfy 1 <= L < U");
  }

  const Simulator sim(config.model, config.n);
  const long reps = config.reps;
  std::vector<double> d_hat(static_cast<std::size_t>(reps));

  const int workers = std::min<long>(thread_count(), reps);
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mu;
  const long chunk = (reps + workers - 1) / workers;
  for (int t = 0; t < workers; ++t) {
    const long lo = t * chunk;
    const long hi = std::min(reps, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        for (long i = lo; i < hi; ++i) {
          const Eigen::ArrayXd x = sim.draw(derive_seed(config.seed, static_cast<std::uint64_t>(i)));
          const Pyramid p = dwt(x, w, range.U);
          d_hat[static_cast<std::size_t>(i)] = estimate(p, range).d_hat;
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);

  double mean = 0.0;
  for (double v : d_hat) mean += v;
  mean /= static_cast<double>(reps);
  double var = 0.0;
  for (double v : d_hat) var += (v - mean) * (v - mean);
  var /= static_cast<double>(reps - 1);

  const double scale_n = static_cast<double>(config.n) * std::pow(2.0, -range.L);
  const int ell = config.ell_infinite ? kEllInfinity : range.U - range.L;

  const auto [lo_it, hi_it] = std::minmax_element(d_hat.begin(), d_hat.end());
  const VarianceProxy proxy = fit_proxy(*lo_it, *hi_it, ell, w);
  const double z = inverse_normal_cdf(0.5 * (1.0 + config.level));
  const double d_lo = 0.5 - w.alpha;
  const double d_hi =
      w.analytic() ? std::numeric_limits<double>::infinity()
                   : static_cast<double>(w.vanishing_moments);
  long hits = 0;
  for (double v : d_hat) {
    if (!(v > d_lo && v <= d_hi)) continue;  // no valid interval: a miss
    const double half = z * std::sqrt(proxy.eval(v) / scale_n);
    if (config.model.d0 >= v - half && config.model.d0 <= v + half) ++hits;
  }

  McResult r;
  r.d0 = config.model.d0;
  r.mean_d_hat = mean;
  r.bias = mean - config.model.d0;
  r.empirical_var_scaled = scale_n * var;
  try {
    r.theoretical_var = clt_variance(config.model.d0, ell, w);
  } catch (const std::exception&) {
    r.theoretical_var = std::numeric_limits<double>::quiet_NaN();
  }
  r.coverage = static_cast<double>(hits) / static_cast<double>(reps);
  r.reps = reps;
  r.range = range;
  r.n = config.n;
  r.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace longmem
