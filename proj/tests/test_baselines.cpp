// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The longmem Authors

#include "longmem/baselines.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "longmem/rng.hpp"
#include "longmem/synthesis.hpp"

using longmem::BaselineResult;
using longmem::CounterRng;
using longmem::Pyramid;
using longmem::ScaleRange;
using longmem::default_bandwidth;
using longmem::gph;
using longmem::logscale_regression;
using longmem::lwf;
using longmem::periodogram;

namespace {
constexpr double kPi = std::numbers::pi;

Eigen::ArrayXd gaussian_series(long n, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  Eigen::ArrayXd x(n);
  for (long t = 0; t < n; ++t) x[t] = rng.normal(static_cast<std::uint64_t>(t));
  return x;
}

// Rows with constant coefficient value s * 2^{d j}: mean squares lie exactly
// on a line of slope 2 d in (j, log2).
Pyramid power_law_pyramid(double d, double s, const std::vector<long>& counts) {
  Pyramid p;
  p.n = 1 << 10;
  p.support = 1;
  p.coeffs.emplace_back(Eigen::ArrayXd::Zero(counts.empty() ? 1 : counts[0]));
  for (std::size_t j = 1; j <= counts.size(); ++j) {
    const double value = s * std::pow(2.0, d * static_cast<double>(j));
    p.coeffs.emplace_back(
        Eigen::ArrayXd::Constant(counts[j - 1], value));
  }
  return p;
}
}  // namespace

TEST_CASE("periodogram matches a brute-force transform") {
  const Eigen::ArrayXd x = gaussian_series(24, 5);
  const Eigen::ArrayXd pg = periodogram(x);
  REQUIRE(pg.size() == 12);
  for (long k = 1; k <= 12; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (long t = 0; t < 24; ++t) {
      const double phase = -2.0 * kPi * static_cast<double>(k * t) / 24.0;
      acc += x[t] * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    const double want = std::norm(acc) / (2.0 * kPi * 24.0);
    CHECK(pg[k - 1] == doctest::Approx(want).epsilon(1e-12).scale(1e-12));
  }
}

TEST_CASE("periodogram satisfies the Parseval identity") {
  for (long n : {64L, 37L}) {
    const Eigen::ArrayXd x = gaussian_series(n, 7 + static_cast<std::uint64_t>(n));
    const Eigen::ArrayXd pg = periodogram(x);
    // Reconstruct the full-grid sum from the half grid: every interior
    // ordinate appears twice by conjugate symmetry, the Nyquist one once.
    double full = 2.0 * pg.sum();
    if (n % 2 == 0) full -= pg[pg.size() - 1];
    const double biased_var = (x - x.mean()).square().sum() / static_cast<double>(n);
    CHECK(2.0 * kPi / static_cast<double>(n) * full ==
          doctest::Approx(biased_var).epsilon(1e-12));
  }
}

TEST_CASE("default bandwidth is floor(n^0.65) with clamping") {
  CHECK(default_bandwidth(8192) == 349);
  CHECK(default_bandwidth(16384) == 548);
  CHECK(default_bandwidth(100) == 19);
  CHECK(default_bandwidth(8) == 3);
  CHECK(default_bandwidth(4) == 2);  // floor(4^0.65) = 2 = n / 2
}

TEST_CASE("nominal variance constants") {
  const Eigen::ArrayXd x = gaussian_series(256, 3);
  CHECK(gph(x, 32).nominal_var == doctest::Approx(kPi * kPi / 24.0).epsilon(1e-15));
  CHECK(lwf(x, 32).nominal_var == 0.25);
  CHECK(gph(x, 32).method == "gph");
  CHECK(lwf(x, 32).method == "lwf");
  CHECK(gph(x, 32).bandwidth == 32);
  CHECK_FALSE(gph(x, 32).at_boundary);
}

TEST_CASE("bandwidth validation") {
  const Eigen::ArrayXd x = gaussian_series(64, 1);
  CHECK_THROWS_AS((void)gph(x, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)gph(x, 33), std::invalid_argument);
  CHECK_THROWS_AS((void)lwf(x, -3), std::invalid_argument);
  CHECK_THROWS_AS((void)gph(gaussian_series(7, 1), 3), std::invalid_argument);
  CHECK_THROWS_AS((void)periodogram(Eigen::ArrayXd::Ones(1)),
                  std::invalid_argument);
}

TEST_CASE("constant input leaves no usable ordinates") {
  const Eigen::ArrayXd flat = Eigen::ArrayXd::Constant(64, 3.25);
  CHECK_THROWS_AS((void)gph(flat, 16), std::invalid_argument);
  CHECK_THROWS_AS((void)lwf(flat, 16), std::invalid_argument);
}

TEST_CASE("location and scale changes do not move the estimates") {
  const Eigen::ArrayXd x = gaussian_series(512, 9);
  const BaselineResult g0 = gph(x, 64);
  const BaselineResult l0 = lwf(x, 64);
  // Power-of-two scaling is exact in floating point.
  const BaselineResult g1 = gph(4.0 * x, 64);
  const BaselineResult l1 = lwf(4.0 * x, 64);
  CHECK(g1.d_hat == doctest::Approx(g0.d_hat).epsilon(1e-12));
  CHECK(l1.d_hat == doctest::Approx(l0.d_hat).epsilon(1e-10));
  const BaselineResult g2 = gph(x + 100.0, 64);
  const BaselineResult l2 = lwf(x + 100.0, 64);
  CHECK(g2.d_hat == doctest::Approx(g0.d_hat).epsilon(1e-8).scale(1.0));
  CHECK(l2.d_hat == doctest::Approx(l0.d_hat).epsilon(1e-8).scale(1.0));
}

TEST_CASE("both Fourier estimators recover a known memory parameter") {
  longmem::ProcessModel m;
  m.d0 = 0.4;
  const Eigen::ArrayXd x = longmem::simulate(m, 1L << 14, 2026);
  const BaselineResult g = gph(x, 0);
  const BaselineResult l = lwf(x, 0);
  CHECK(g.bandwidth == 548);
  CHECK(std::abs(g.d_hat - 0.4) < 4.5 * std::sqrt(g.nominal_var / 548.0));
  CHECK(std::abs(l.d_hat - 0.4) < 4.5 * std::sqrt(l.nominal_var / 548.0));
  CHECK_FALSE(l.at_boundary);
}

TEST_CASE("over-differenced input drives the Whittle search to the bracket edge") {
  // Noise differenced four times (circularly, so the low-frequency transfer
  // is exact rather than leakage-limited) has spectral slope +8 at the
  // origin, far below the d = -1 end of the search interval.
  const long n = 512;
  const Eigen::ArrayXd e = gaussian_series(n, 21);
  const double kernel[] = {1.0, -4.0, 6.0, -4.0, 1.0};
  Eigen::ArrayXd x = Eigen::ArrayXd::Zero(n);
  for (long t = 0; t < n; ++t) {
    for (int s = 0; s < 5; ++s) x[t] += kernel[s] * e[(t + s) % n];
  }
  const BaselineResult l = lwf(x, 64);
  CHECK(l.at_boundary);
  CHECK(l.d_hat == doctest::Approx(-1.0));
}

TEST_CASE("log-scale regression is exact on power-law rows") {
  for (double d : {-0.5, 0.0, 0.65, 1.3}) {
    const Pyramid p = power_law_pyramid(d, 1.4, {256, 128, 64, 32, 16, 8});
    const BaselineResult r = logscale_regression(p, ScaleRange{1, 6});
    CHECK(r.method == "logscale");
    CHECK(r.bandwidth == 6);
    CHECK(r.d_hat == doctest::Approx(d).epsilon(1e-12).scale(1.0));
    CHECK_FALSE(r.at_boundary);
  }
}

TEST_CASE("log-scale regression equals a hand-rolled weighted fit") {
  // Irregular, non-collinear mean squares so the weighting actually matters.
  Pyramid p;
  p.n = 512;
  p.support = 1;
  p.coeffs.emplace_back(Eigen::ArrayXd::Zero(256));
  const std::vector<long> counts = {200, 90, 40, 17};
  const std::vector<double> values = {1.0, 2.5, 3.1, 9.7};
  for (std::size_t i = 0; i < counts.size(); ++i) {
    p.coeffs.emplace_back(Eigen::ArrayXd::Constant(counts[i], values[i]));
  }
  const BaselineResult r = logscale_regression(p, ScaleRange{1, 4});

  double wsum = 0.0, jm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double w = static_cast<double>(counts[i]);
    const double y = std::log2(values[i] * values[i]);
    wsum += w;
    jm += w * static_cast<double>(i + 1);
    ym += w * y;
  }
  jm /= wsum;
  ym /= wsum;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double w = static_cast<double>(counts[i]);
    const double jdev = static_cast<double>(i + 1) - jm;
    sxx += w * jdev * jdev;
    sxy += w * jdev * (std::log2(values[i] * values[i]) - ym);
  }
  CHECK(r.d_hat == doctest::Approx(0.5 * sxy / sxx).epsilon(1e-14));
  const double ln2 = std::log(2.0);
  CHECK(r.nominal_var == doctest::Approx(0.5 / (ln2 * ln2 * sxx)).epsilon(1e-14));
}

TEST_CASE("log-scale regression rejects unusable ranges") {
  const Pyramid p = power_law_pyramid(0.3, 1.0, {64, 32, 16});
  CHECK_THROWS_AS((void)logscale_regression(p, ScaleRange{0, 2}),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)logscale_regression(p, ScaleRange{2, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)logscale_regression(p, ScaleRange{1, 9}),
                  std::invalid_argument);
  // A single usable scale is not a regression.
  Pyramid single = power_law_pyramid(0.3, 1.0, {64, 32});
  single.coeffs[2].setZero();
  CHECK_THROWS_AS((void)logscale_regression(single, ScaleRange{1, 2}),
                  std::invalid_argument);
}

TEST_CASE("scale- and Fourier-domain estimates agree on the same draw") {
  longmem::ProcessModel m;
  m.d0 = 0.3;
  const Eigen::ArrayXd x = longmem::simulate(m, 1L << 13, 5150);
  const longmem::WaveletSpec w = longmem::make_wavelet("db2");
  const Pyramid p = longmem::dwt(x, w);
  const ScaleRange range =
      longmem::select_scales(static_cast<long>(x.size()), w.support, 1.0);
  const BaselineResult scale_fit = logscale_regression(p, range);
  const BaselineResult fourier_fit = lwf(x, 0);
  CHECK(std::abs(scale_fit.d_hat - fourier_fit.d_hat) < 0.2);
  CHECK(std::abs(scale_fit.d_hat - 0.3) < 0.25);
}
