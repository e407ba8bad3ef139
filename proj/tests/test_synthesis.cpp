// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The longmem Authors

#include "longmem/synthesis.hpp"

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "longmem/baselines.hpp"
#include "longmem/rng.hpp"
#include "reference_values.hpp"

namespace R = longmem::ref;
using longmem::ProcessModel;
using longmem::SpectrumKind;
using longmem::autocovariance;
using longmem::fractional_d;
using longmem::fractional_noise_autocovariance;
using longmem::integration_order;
using longmem::short_memory_density;
using longmem::simulate;
using longmem::spectral_density;

namespace {
constexpr double kPi = std::numbers::pi;

ProcessModel constant_model(double d0, double c = 1.0) {
  ProcessModel m;
  m.d0 = d0;
  m.constant = c;
  return m;
}
}  // namespace

TEST_CASE("integration order splits d0 into integer and fractional parts") {
  CHECK(integration_order(0.0) == 0);
  CHECK(integration_order(0.3) == 0);
  CHECK(integration_order(-0.49) == 0);
  CHECK(integration_order(0.7) == 1);
  CHECK(integration_order(1.2) == 1);
  CHECK(integration_order(2.0) == 2);
  CHECK(integration_order(-0.8) == -1);
  CHECK(integration_order(-1.6) == -2);
  CHECK_THROWS_AS((void)integration_order(0.5), std::invalid_argument);
  CHECK_THROWS_AS((void)integration_order(-0.5), std::invalid_argument);
  CHECK_THROWS_AS((void)integration_order(1.5), std::invalid_argument);
  CHECK(fractional_d(constant_model(1.2)) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(fractional_d(constant_model(-0.8)) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("spectral densities take their closed-form values") {
  const ProcessModel flat = constant_model(0.3, 2.5);
  CHECK(short_memory_density(flat, 1.0) == doctest::Approx(2.5));
  CHECK(spectral_density(flat, kPi) ==
        doctest::Approx(2.5 * std::pow(2.0, -0.6)).epsilon(1e-12));
  CHECK(std::isinf(spectral_density(flat, 0.0)));
  CHECK(spectral_density(constant_model(-0.3), 0.0) == 0.0);
  CHECK(spectral_density(constant_model(0.0, 4.0), 0.0) == doctest::Approx(4.0));

  ProcessModel ar;
  ar.d0 = 0.0;
  ar.kind = SpectrumKind::kAr1Modulus;
  ar.rho = 0.5;
  // |1 - rho e^{-i lambda}|^{-2} at pi: (1 + rho)^{-2}.
  CHECK(short_memory_density(ar, kPi) == doctest::Approx(1.0 / 2.25).epsilon(1e-12));
  CHECK(short_memory_density(ar, 0.0) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("model validation") {
  ProcessModel m = constant_model(0.2, -1.0);
  CHECK_THROWS_AS((void)autocovariance(m, 4), std::invalid_argument);
  m = constant_model(0.2);
  m.kind = SpectrumKind::kAr1Modulus;
  m.rho = 1.0;
  CHECK_THROWS_AS((void)autocovariance(m, 4), std::invalid_argument);
  m = constant_model(0.2);
  CHECK_THROWS_AS((void)autocovariance(m, 1L << 22), std::invalid_argument);
}

TEST_CASE("autocovariance matches closed-form fractional noise") {
  Eigen::ArrayXd g = autocovariance(constant_model(0.3), 5);
  for (int i = 0; i < 6; ++i)
    CHECK(g[i] == doctest::Approx(R::kGammaD03[i]).epsilon(1e-11).scale(1.0));
  g = autocovariance(constant_model(-0.3), 3);
  for (int i = 0; i < 4; ++i)
    CHECK(g[i] == doctest::Approx(R::kGammaDm03[i]).epsilon(1e-11).scale(1.0));
  g = autocovariance(constant_model(0.45), 1024);
  for (int i = 0; i < 6; ++i) {
    const long lag = static_cast<long>(R::kGammaD045Lags[i]);
    CHECK(g[lag] == doctest::Approx(R::kGammaD045[i]).epsilon(1e-9));
  }
}

TEST_CASE("autocovariance with a short-memory factor matches the series sum") {
  ProcessModel m = constant_model(0.3);
  m.kind = SpectrumKind::kAr1Modulus;
  m.rho = 0.5;
  const Eigen::ArrayXd g = autocovariance(m, 4);
  for (int i = 0; i < 5; ++i)
    CHECK(g[i] == doctest::Approx(R::kGammaD03Ar05[i]).epsilon(1e-10));
}

TEST_CASE("quadrature route equals the Gamma-function route on a long range") {
  for (double d : {0.4, -0.2, 0.1}) {
    const Eigen::ArrayXd quad = autocovariance(constant_model(d), 300);
    const Eigen::ArrayXd exact = fractional_noise_autocovariance(d, 300);
    for (long k = 0; k <= 300; ++k) {
      CHECK(quad[k] == doctest::Approx(exact[k]).epsilon(1e-9).scale(1e-3));
    }
  }
}

TEST_CASE("pure AR(1) autocovariance comes out in closed form") {
  ProcessModel m = constant_model(0.0);
  m.kind = SpectrumKind::kAr1Modulus;
  m.rho = -0.6;
  const Eigen::ArrayXd g = autocovariance(m, 12);
  const double denom = 1.0 - 0.36;
  for (long k = 0; k <= 12; ++k) {
    CHECK(g[k] ==
          doctest::Approx(std::pow(-0.6, static_cast<double>(k)) / denom)
              .epsilon(1e-10)
              .scale(1.0));
  }
}

TEST_CASE("piecewise-linear grid factor reduces to the constant model") {
  ProcessModel grid = constant_model(0.25);
  grid.kind = SpectrumKind::kGrid;
  grid.grid_lambda = Eigen::ArrayXd::LinSpaced(5, 0.1, kPi);
  grid.grid_value = Eigen::ArrayXd::Constant(5, 3.0);
  const Eigen::ArrayXd a = autocovariance(grid, 16);
  const Eigen::ArrayXd b = autocovariance(constant_model(0.25, 3.0), 16);
  for (long k = 0; k <= 16; ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-9));

  grid.grid_lambda[2] = 0.05;  // not increasing
  CHECK_THROWS_AS((void)autocovariance(grid, 4), std::invalid_argument);
}

TEST_CASE("closed-form fractional autocovariance sanity") {
  // gamma(0) = Gamma(1-2d)/Gamma(1-d)^2 at d = 0.3.
  const Eigen::ArrayXd g = fractional_noise_autocovariance(0.3, 2);
  CHECK(g[0] == doctest::Approx(std::exp(std::lgamma(0.4) -
                                         2.0 * std::lgamma(0.7)))
                    .epsilon(1e-13));
  CHECK(g[1] == doctest::Approx(g[0] * 0.3 / 0.7).epsilon(1e-13));
  CHECK_THROWS_AS((void)fractional_noise_autocovariance(0.5, 2),
                  std::invalid_argument);
}

TEST_CASE("draws are reproducible and seed-sensitive") {
  const ProcessModel m = constant_model(0.4);
  const Eigen::ArrayXd a = simulate(m, 512, 11);
  const Eigen::ArrayXd b = simulate(m, 512, 11);
  const Eigen::ArrayXd c = simulate(m, 512, 12);
  REQUIRE(a.size() == 512);
  CHECK((a - b).abs().maxCoeff() == 0.0);
  CHECK((a - c).abs().maxCoeff() > 1e-3);
}

TEST_CASE("integrated draws difference back to the stationary core") {
  // d0 = 1.2 integrates the d = 0.2 core once with zero start value, so the
  // first difference must reproduce the d = 0.2 draw shifted by one.
  const Eigen::ArrayXd hi = simulate(constant_model(1.2), 256, 31);
  const Eigen::ArrayXd lo = simulate(constant_model(0.2), 256, 31);
  for (long t = 1; t < 256; ++t) {
    CHECK(hi[t] - hi[t - 1] == doctest::Approx(lo[t]).epsilon(1e-12).scale(1.0));
  }
  CHECK(hi[0] == doctest::Approx(lo[0]).epsilon(1e-12).scale(1.0));

  // d0 = -0.8 differences a d = 0.2 core of length n + 1.
  const Eigen::ArrayXd anti = simulate(constant_model(-0.8), 255, 31);
  const Eigen::ArrayXd core = simulate(constant_model(0.2), 256, 31);
  for (long t = 0; t < 255; ++t) {
    CHECK(anti[t] ==
          doctest::Approx(core[t + 1] - core[t]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("sample moments match the target autocovariance") {
  const ProcessModel m = constant_model(0.35);
  const Eigen::ArrayXd g = autocovariance(m, 1);
  const int reps = 400;
  const long n = 256;
  double mean_acc = 0.0, var_acc = 0.0, lag1_acc = 0.0;
  for (int r = 0; r < reps; ++r) {
    const Eigen::ArrayXd x = simulate(m, n, 1000 + static_cast<std::uint64_t>(r));
    mean_acc += x.mean();
    var_acc += x.square().mean();
    lag1_acc += (x.head(n - 1) * x.tail(n - 1)).mean();
  }
  mean_acc /= reps;
  var_acc /= reps;
  lag1_acc /= reps;
  // Long-memory samples correlate strongly within a draw, so allow generous
  // Monte Carlo bands (about 4 standard errors each).
  CHECK(std::abs(mean_acc) < 0.12);
  CHECK(var_acc == doctest::Approx(g[0]).epsilon(0.05));
  CHECK(lag1_acc == doctest::Approx(g[1]).epsilon(0.12));
}

TEST_CASE("spectral slope of integrated draws matches the target memory") {
  // A Fourier log-regression on one long draw should land near d0.
  const Eigen::ArrayXd x = simulate(constant_model(0.45), 1L << 14, 99);
  const longmem::BaselineResult r = longmem::gph(x, 0);
  CHECK(std::abs(r.d_hat - 0.45) < 0.12);
}

TEST_CASE("per-scale energy diagnostic slopes with 2 d0 j") {
  const Eigen::ArrayXd x = simulate(constant_model(0.4), 1L << 13, 17);
  const longmem::Pyramid p = longmem::dwt(x, longmem::make_wavelet("db2"));
  const auto rows = longmem::scaling_diagnostic(p);
  REQUIRE(rows.size() >= 6);
  // Regress log2 mean square on scale over the mid band.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (const auto& row : rows) {
    if (row.scale < 3 || row.scale > 8) continue;
    sx += row.scale;
    sy += row.log2_mean_square;
    sxx += row.scale * row.scale;
    sxy += row.scale * row.log2_mean_square;
    ++count;
  }
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  CHECK(std::abs(slope - 0.8) < 0.25);
}
