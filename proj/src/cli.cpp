// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The longmem Authors

#include "longmem/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "longmem/asymptotics.hpp"
#include "longmem/baselines.hpp"
#include "longmem/csv.hpp"
#include "longmem/estimator.hpp"
#include "longmem/montecarlo.hpp"
#include "longmem/pyramid.hpp"
#include "longmem/rng.hpp"
#include "longmem/synthesis.hpp"
#include "longmem/wavelet.hpp"

namespace longmem {
namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

ProcessModel parse_model(const std::string& text, double d0) {
  ProcessModel m;
  m.d0 = d0;
  if (text == "constant") {
    m.kind = SpectrumKind::kConstant;
    return m;
  }
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string head = text.substr(0, colon);
    const std::string arg = text.substr(colon + 1);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == arg.size() && !arg.empty()) {
      if (head == "constant") {
        m.kind = SpectrumKind::kConstant;
        m.constant = value;
        return m;
      }
      if (head == "ar1") {
        m.kind = SpectrumKind::kAr1Modulus;
        m.rho = value;
        return m;
      }
    }
  }
  throw std::invalid_argument("unknown model '" + text +
                              "' (expected constant, constant:<c>, or ar1:<rho>)");
}

struct EllChoice {
  bool infinite = false;
  int value = -1;  // -1: default band count U - L
};

EllChoice parse_ell(const std::string& text) {
  EllChoice c;
  if (text.empty()) return c;
  if (text == "inf") {
    c.infinite = true;
    return c;
  }
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || v < 1) {
    throw std::invalid_argument("--ell expects a positive integer or 'inf'");
  }
  c.value = v;
  return c;
}

std::vector<int> parse_ell_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const EllChoice c = parse_ell(item);
    out.push_back(c.infinite ? kEllInfinity : c.value);
    if (!c.infinite && c.value < 1) {
      throw std::invalid_argument("--ell entries must be positive or 'inf'");
    }
  }
  if (out.empty()) throw std::invalid_argument("--ell list is empty");
  return out;
}

Eigen::ArrayXd load_series(const std::string& path) {
  if (path == "-") return read_series_csv(std::cin, "<stdin>");
  return read_series_csv(path);
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty() || output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(output);
  if (!out) throw std::runtime_error("cannot open output file: " + output);
  out << text;
}

std::string ell_label(int ell) {
  return ell == kEllInfinity ? "inf" : std::to_string(ell);
}

ScaleRange resolve_range(long n, const WaveletSpec& w, double beta, int L, int U) {
  ScaleRange range = select_scales(n, w.support, beta);
  if (L >= 1) range.L = L;
  if (U >= 1) range.U = U;
  if (!(range.L >= 1 && range.L < range.U)) {
    throw std::invalid_argument("scale overrides must satisfy 1 <= L < U");
  }
  return range;
}

int cmd_estimate(const std::string& input, const std::string& output,
                 const std::string& wavelet, double beta, int L, int U,
                 double level, const std::string& ell_text) {
  const Eigen::ArrayXd x = load_series(input);
  const WaveletSpec w = make_wavelet(wavelet);
  const ScaleRange range = resolve_range(x.size(), w, beta, L, U);
  const Pyramid p = dwt(x, w, range.U);
  EstimateResult res = estimate(p, range);

  const EllChoice ell = parse_ell(ell_text);
  int ell_used = res.ell;
  if (ell.infinite) {
    confidence_interval(res, w, level, true);
    ell_used = kEllInfinity;
  } else if (ell.value >= 1 && ell.value != res.ell) {
    const double v = clt_variance(res.d_hat, ell.value, w);
    const double scale_n = static_cast<double>(res.n) * std::pow(2.0, -range.L);
    const double z = inverse_normal_cdf(0.5 * (1.0 + level));
    const double half = z * std::sqrt(v / scale_n);
    res.asymp_var = v;
    res.ci = ConfidenceInterval{res.d_hat - half, res.d_hat + half, level};
    ell_used = ell.value;
  } else {
    confidence_interval(res, w, level, false);
  }

  json out = {
      {"schema_version", kSchemaVersion},
      {"command", "estimate"},
      {"wavelet", w.name},
      {"d_hat", res.d_hat},
      {"sigma2_hat", res.sigma2_hat},
      {"L", res.range.L},
      {"U", res.range.U},
      {"ell", ell_label(ell_used)},
      {"mean_scale", res.mean_scale},
      {"n_eff", res.n_eff},
      {"asymp_var", res.asymp_var},
      {"ci", {res.ci->low, res.ci->high}},
      {"level", res.ci->level},
  };
  emit(out.dump(2) + "\n", output);
  return 0;
}

int cmd_simulate(const std::string& output, const std::string& model_text,
                 double d0, long n, std::uint64_t seed) {
  if (output.empty()) {
    throw std::invalid_argument("simulate requires --output for the series");
  }
  const ProcessModel m = parse_model(model_text, d0);
  const Eigen::ArrayXd x = simulate(m, n, seed);
  write_series_csv(output, x);
  json echo = {
      {"schema_version", kSchemaVersion},
      {"command", "simulate"},
      {"model", model_text},
      {"d0", d0},
      {"n", n},
      {"seed", seed},
      {"output", output},
  };
  std::cout << echo.dump(2) << "\n";
  return 0;
}

int cmd_mc(const std::string& output, const std::string& model_text, double d0,
           long n, long reps, std::uint64_t seed, const std::string& wavelet,
           double beta, int L, int U, double level,
           const std::string& ell_text) {
  const EllChoice ell = parse_ell(ell_text);
  if (ell.value >= 1) {
    throw std::invalid_argument("mc supports --ell inf or the default band count");
  }
  McConfig config;
  config.model = parse_model(model_text, d0);
  config.n = n;
  config.wavelet = wavelet;
  config.beta = beta;
  config.L_override = L;
  config.U_override = U;
  config.reps = static_cast<int>(reps);
  config.seed = seed;
  config.level = level;
  config.ell_infinite = ell.infinite;
  const McResult r = run_mc(config);
  json out = {
      {"schema_version", kSchemaVersion},
      {"command", "mc"},
      {"d0", r.d0},
      {"mean_d_hat", r.mean_d_hat},
      {"bias", r.bias},
      {"empirical_var_scaled", r.empirical_var_scaled},
      {"theoretical_var", r.theoretical_var},
      {"coverage", r.coverage},
      {"reps", r.reps},
      {"runtime_s", r.runtime_s},
      {"L", r.range.L},
      {"U", r.range.U},
      {"n", r.n},
  };
  emit(out.dump(2) + "\n", output);
  return 0;
}

int cmd_vartable(const std::string& output, const std::string& wavelet,
                 double d_min, double d_max, double d_step,
                 const std::string& ells_text, const std::string& format) {
  if (!(d_step > 0.0)) throw std::invalid_argument("--d-step must be positive");
  std::vector<double> grid;
  for (double d = d_min; d <= d_max + 1e-9; d += d_step) grid.push_back(d);
  const std::vector<int> ells = parse_ell_list(ells_text);

  VarianceTable table = variance_table(make_wavelet(wavelet), grid, ells);
  const VarianceTable shannon =
      variance_table(make_wavelet("shannon"), grid, ells);
  table.rows.insert(table.rows.end(), shannon.rows.begin(), shannon.rows.end());

  if (format == "json") {
    json rows = json::array();
    for (const VarianceRow& r : table.rows) {
      rows.push_back({{"d", r.d},
                      {"ell", ell_label(r.ell)},
                      {"variance", r.variance},
                      {"family", r.family}});
    }
    json out = {{"schema_version", kSchemaVersion},
                {"command", "vartable"},
                {"rows", rows}};
    emit(out.dump(2) + "\n", output);
    return 0;
  }
  std::ostringstream csv;
  csv << "d,ell,variance,family\n";
  for (const VarianceRow& r : table.rows) {
    csv << format_value(r.d) << ',' << ell_label(r.ell) << ','
        << format_value(r.variance) << ',' << r.family << '\n';
  }
  emit(csv.str(), output);
  return 0;
}

int cmd_compare(const std::string& input, const std::string& output,
                const std::string& wavelet, double beta, int L, int U,
                long bandwidth, const std::string& format) {
  const Eigen::ArrayXd x = load_series(input);
  const WaveletSpec w = make_wavelet(wavelet);
  const ScaleRange range = resolve_range(x.size(), w, beta, L, U);
  const Pyramid p = dwt(x, w, range.U);
  const EstimateResult res = estimate(p, range);
  const double v = clt_variance(res.d_hat, res.ell, w);
  const double scale_n = static_cast<double>(res.n) * std::pow(2.0, -range.L);

  const BaselineResult g = gph(x, bandwidth);
  const BaselineResult l = lwf(x, bandwidth);
  const BaselineResult s = logscale_regression(p, range);

  struct Row {
    std::string method;
    double d_hat;
    double se;
    long bandwidth;
  };
  const std::vector<Row> rows = {
      {"lwwe", res.d_hat, std::sqrt(v / scale_n), range.U - range.L + 1L},
      {g.method, g.d_hat, std::sqrt(g.nominal_var / g.bandwidth), g.bandwidth},
      {l.method, l.d_hat, std::sqrt(l.nominal_var / l.bandwidth), l.bandwidth},
      {s.method, s.d_hat, std::sqrt(s.nominal_var), s.bandwidth},
  };
  if (format == "json") {
    json jrows = json::array();
    for (const Row& r : rows) {
      jrows.push_back({{"method", r.method},
                       {"d_hat", r.d_hat},
                       {"se", r.se},
                       {"bandwidth", r.bandwidth}});
    }
    json out = {{"schema_version", kSchemaVersion},
                {"command", "compare"},
                {"rows", jrows}};
    emit(out.dump(2) + "\n", output);
    return 0;
  }
  std::ostringstream csv;
  csv << "method,d_hat,se,bandwidth\n";
  for (const Row& r : rows) {
    csv << r.method << ',' << format_value(r.d_hat) << ',' << format_value(r.se)
        << ',' << r.bandwidth << '\n';
  }
  emit(csv.str(), output);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Wavelet-domain estimation of the memory parameter"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "longmem 0.1.0");

  std::string input, output, wavelet = "db2", model_text = "constant";
  std::string ell_text, ells_text = "8", format = "csv";
  double beta = 1.0, level = 0.90, d0 = 0.0;
  double d_min = -0.5, d_max = 1.5, d_step = 0.25;
  int L = -1, U = -1;
  long n = 0, reps = 100, bandwidth = 0;
  std::uint64_t seed = 0;

  CLI::App* estimate_cmd =
      app.add_subcommand("estimate", "Estimate d from a CSV series");
  estimate_cmd->add_option("--input", input, "series CSV ('-' for stdin)")
      ->required();
  estimate_cmd->add_option("--output", output, "JSON destination (default stdout)");
  estimate_cmd->add_option("--wavelet", wavelet, "wavelet family (haar, dbN)");
  estimate_cmd->add_option("--beta", beta, "smoothness exponent for scale selection");
  estimate_cmd->add_option("--L", L, "finest scale override");
  estimate_cmd->add_option("--U", U, "coarsest scale override");
  estimate_cmd->add_option("--level", level, "confidence level in (0,1)");
  estimate_cmd->add_option("--ell", ell_text, "bandwidth for the variance ('inf' allowed)");

  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "Draw an exact Gaussian sample path");
  simulate_cmd->add_option("--output", output, "series CSV destination")->required();
  simulate_cmd->add_option("--model", model_text,
                           "constant | constant:<c> | ar1:<rho>");
  simulate_cmd->add_option("--d0", d0, "memory parameter of the sample");
  simulate_cmd->add_option("--n", n, "series length")->required();
  simulate_cmd->add_option("--seed", seed, "RNG seed");

  CLI::App* mc_cmd = app.add_subcommand("mc", "Monte Carlo bias/variance/coverage study");
  mc_cmd->add_option("--output", output, "JSON destination (default stdout)");
  mc_cmd->add_option("--model", model_text, "constant | constant:<c> | ar1:<rho>");
  mc_cmd->add_option("--d0", d0, "memory parameter of the sample");
  mc_cmd->add_option("--n", n, "series length")->required();
  mc_cmd->add_option("--reps", reps, "number of replications");
  mc_cmd->add_option("--seed", seed, "master seed");
  mc_cmd->add_option("--wavelet", wavelet, "wavelet family");
  mc_cmd->add_option("--beta", beta, "smoothness exponent for scale selection");
  mc_cmd->add_option("--L", L, "finest scale override");
  mc_cmd->add_option("--U", U, "coarsest scale override");
  mc_cmd->add_option("--level", level, "confidence level in (0,1)");
  mc_cmd->add_option("--ell", ell_text, "variance bandwidth ('inf' allowed)");

  CLI::App* vartable_cmd =
      app.add_subcommand("vartable", "Asymptotic variance table as CSV");
  vartable_cmd->add_option("--output", output, "destination (default stdout)");
  vartable_cmd->add_option("--wavelet", wavelet, "wavelet family");
  vartable_cmd->add_option("--d-min", d_min, "grid start");
  vartable_cmd->add_option("--d-max", d_max, "grid end (inclusive)");
  vartable_cmd->add_option("--d-step", d_step, "grid step");
  vartable_cmd->add_option("--ell", ells_text, "comma list of bandwidths ('inf' allowed)");
  vartable_cmd->add_option("--format", format, "csv | json");

  CLI::App* compare_cmd =
      app.add_subcommand("compare", "Wavelet and Fourier estimates side by side");
  compare_cmd->add_option("--input", input, "series CSV ('-' for stdin)")->required();
  compare_cmd->add_option("--output", output, "destination (default stdout)");
  compare_cmd->add_option("--wavelet", wavelet, "wavelet family");
  compare_cmd->add_option("--beta", beta, "smoothness exponent for scale selection");
  compare_cmd->add_option("--L", L, "finest scale override");
  compare_cmd->add_option("--U", U, "coarsest scale override");
  compare_cmd->add_option("--bandwidth", bandwidth,
                          "Fourier bandwidth m (default floor(n^0.65))");
  compare_cmd->add_option("--format", format, "csv | json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (estimate_cmd->parsed()) {
      return cmd_estimate(input, output, wavelet, beta, L, U, level, ell_text);
    }
    if (simulate_cmd->parsed()) {
      return cmd_simulate(output, model_text, d0, n, seed);
    }
    if (mc_cmd->parsed()) {
      return cmd_mc(output, model_text, d0, n, reps, seed, wavelet, beta, L, U,
                    level, ell_text);
    }
    if (vartable_cmd->parsed()) {
      return cmd_vartable(output, wavelet, d_min, d_max, d_step, ells_text, format);
    }
    if (compare_cmd->parsed()) {
      return cmd_compare(input, output, wavelet, beta, L, U, bandwidth, format);
    }
    throw std::logic_error("no command selected");
  } catch (const std::exception& e) {
    std::cerr << "longmem: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace longmem
