// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The longmem Authors

#include "longmem/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "longmem/asymptotics.hpp"
#include "longmem/baselines.hpp"
#include "longmem/csv.hpp"
#include "longmem/rng.hpp"
#include "longmem/synthesis.hpp"
#include "longmem/wavelet.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Captures std::cout and std::cerr (and optionally feeds std::cin) around an
// in-process run_cli call.
struct CliRun {
  int status = 0;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args, const std::string& stdin_text = "") {
  std::vector<std::string> full = {"longmem"};
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(full.size());
  for (const std::string& a : full) argv.push_back(a.c_str());

  std::ostringstream captured_out, captured_err;
  std::istringstream fed_in(stdin_text);
  std::streambuf* old_out = std::cout.rdbuf(captured_out.rdbuf());
  std::streambuf* old_err = std::cerr.rdbuf(captured_err.rdbuf());
  std::streambuf* old_in = std::cin.rdbuf(fed_in.rdbuf());

  CliRun r;
  try {
    r.status = longmem::run_cli(static_cast<int>(argv.size()), argv.data());
  } catch (...) {
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    std::cin.rdbuf(old_in);
    throw;
  }
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  std::cin.rdbuf(old_in);
  r.out = captured_out.str();
  r.err = captured_err.str();
  return r;
}

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "longmem_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json slurp_json(const fs::path& p) { return json::parse(slurp(p)); }

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

// One simulated series shared by the estimate/compare cases.
fs::path series_path(double d0, long n, std::uint64_t seed) {
  const fs::path p = work_dir() / ("series_d" + std::to_string(d0) + "_n" +
                                   std::to_string(n) + ".csv");
  const CliRun r = run({"simulate", "--output", p.string(), "--d0",
                        std::to_string(d0), "--n", std::to_string(n), "--seed",
                        std::to_string(seed)});
  REQUIRE(r.status == 0);
  return p;
}

}  // namespace

TEST_CASE("version and help exit cleanly") {
  const CliRun v = run({"--version"});
  CHECK(v.status == 0);
  CHECK(v.out.find("longmem 0.1.0") != std::string::npos);

  const CliRun h = run({"--help"});
  CHECK(h.status == 0);
  CHECK(h.out.find("estimate") != std::string::npos);
  CHECK(h.out.find("vartable") != std::string::npos);
}

TEST_CASE("a subcommand is required and unknown ones are rejected") {
  CHECK(run({}).status != 0);
  CHECK(run({"frobnicate"}).status != 0);
}

TEST_CASE("simulate is deterministic in the seed and echoes the model") {
  const fs::path a = work_dir() / "sim_a.csv";
  const fs::path b = work_dir() / "sim_b.csv";
  const fs::path c = work_dir() / "sim_c.csv";
  const CliRun ra =
      run({"simulate", "--output", a.string(), "--d0", "0.4", "--n", "256",
           "--seed", "11"});
  const CliRun rb =
      run({"simulate", "--output", b.string(), "--d0", "0.4", "--n", "256",
           "--seed", "11"});
  const CliRun rc =
      run({"simulate", "--output", c.string(), "--d0", "0.4", "--n", "256",
           "--seed", "12"});
  REQUIRE(ra.status == 0);
  REQUIRE(rb.status == 0);
  REQUIRE(rc.status == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a) != slurp(c));

  const json echo = json::parse(ra.out);
  CHECK(echo["schema_version"] == 1);
  CHECK(echo["command"] == "simulate");
  CHECK(echo["model"] == "constant");
  CHECK(echo["d0"] == doctest::Approx(0.4));
  CHECK(echo["n"] == 256);
  CHECK(echo["seed"] == 11);

  const Eigen::ArrayXd series = longmem::read_series_csv(a.string());
  REQUIRE(series.size() == 256);
  const Eigen::ArrayXd direct = longmem::simulate(
      longmem::ProcessModel{.d0 = 0.4}, 256, 11);
  CHECK((series - direct).abs().maxCoeff() == 0.0);
}

TEST_CASE("simulate validation failures") {
  const fs::path p = work_dir() / "sim_bad.csv";
  // --output and --n are required.
  CHECK(run({"simulate", "--n", "64"}).status != 0);
  CHECK(run({"simulate", "--output", p.string()}).status != 0);
  // Half-integer d0 has no stationary core.
  const CliRun half = run({"simulate", "--output", p.string(), "--d0", "2.5",
                           "--n", "64"});
  CHECK(half.status == 1);
  CHECK(half.err.find("longmem:") != std::string::npos);
  // Unknown short-memory model.
  const CliRun bad = run({"simulate", "--output", p.string(), "--model",
                          "garbage", "--n", "64"});
  CHECK(bad.status == 1);
  CHECK(bad.err.find("unknown model") != std::string::npos);
  // AR parameter out of range surfaces from the model check.
  const CliRun rho = run({"simulate", "--output", p.string(), "--model",
                          "ar1:1.5", "--n", "64"});
  CHECK(rho.status == 1);
}

TEST_CASE("estimate emits the documented JSON schema") {
  const fs::path series = series_path(0.4, 8192, 7);
  const fs::path out = work_dir() / "est.json";
  const CliRun r = run({"estimate", "--input", series.string(), "--output",
                        out.string(), "--level", "0.99"});
  REQUIRE(r.status == 0);
  const json j = slurp_json(out);

  CHECK(j["schema_version"] == 1);
  CHECK(j["command"] == "estimate");
  CHECK(j["wavelet"] == "db2");
  CHECK(j["L"] == 4);
  CHECK(j["U"] == 11);
  CHECK(j["ell"] == "7");
  CHECK(j["level"] == doctest::Approx(0.99));
  CHECK(j["n_eff"].get<long>() > 0);
  CHECK(j["sigma2_hat"].get<double>() > 0.0);
  CHECK(j["asymp_var"].get<double>() > 0.0);

  const double d_hat = j["d_hat"].get<double>();
  const double lo = j["ci"][0].get<double>();
  const double hi = j["ci"][1].get<double>();
  CHECK(lo < d_hat);
  CHECK(d_hat < hi);
  // The generating parameter sits inside its own 99% interval.
  CHECK(lo < 0.4);
  CHECK(0.4 < hi);

  // The reported variance is the library value for the reported band.
  const longmem::WaveletSpec w = longmem::make_wavelet("db2");
  CHECK(j["asymp_var"].get<double>() ==
        doctest::Approx(longmem::clt_variance(d_hat, 7, w)).epsilon(1e-12));
  // And the interval half-width follows from it.
  const double z = longmem::inverse_normal_cdf(0.5 * (1.0 + 0.99));
  const double half = z * std::sqrt(j["asymp_var"].get<double>() /
                                    (8192.0 * std::pow(2.0, -4)));
  CHECK(hi - d_hat == doctest::Approx(half).epsilon(1e-10));
}

TEST_CASE("estimate honors the bandwidth override") {
  const fs::path series = series_path(0.4, 8192, 7);
  const fs::path out = work_dir() / "est_ell.json";
  const longmem::WaveletSpec w = longmem::make_wavelet("db2");

  const CliRun fixed = run({"estimate", "--input", series.string(), "--output",
                            out.string(), "--ell", "12"});
  REQUIRE(fixed.status == 0);
  json j = slurp_json(out);
  CHECK(j["ell"] == "12");
  CHECK(j["asymp_var"].get<double>() ==
        doctest::Approx(longmem::clt_variance(j["d_hat"].get<double>(), 12, w))
            .epsilon(1e-12));

  const CliRun inf = run({"estimate", "--input", series.string(), "--output",
                          out.string(), "--ell", "inf"});
  REQUIRE(inf.status == 0);
  j = slurp_json(out);
  CHECK(j["ell"] == "inf");
  CHECK(j["asymp_var"].get<double>() ==
        doctest::Approx(longmem::clt_variance(j["d_hat"].get<double>(),
                                              longmem::kEllInfinity, w))
            .epsilon(1e-12));

  const CliRun bad = run({"estimate", "--input", series.string(), "--ell", "nope"});
  CHECK(bad.status == 1);
  CHECK(bad.err.find("--ell") != std::string::npos);
}

TEST_CASE("estimate accepts scale overrides and rejects bad ones") {
  const fs::path series = series_path(0.4, 8192, 7);
  const fs::path out = work_dir() / "est_lu.json";
  const CliRun r = run({"estimate", "--input", series.string(), "--output",
                        out.string(), "--L", "2", "--U", "9"});
  REQUIRE(r.status == 0);
  const json j = slurp_json(out);
  CHECK(j["L"] == 2);
  CHECK(j["U"] == 9);
  CHECK(j["ell"] == "7");

  const CliRun bad = run({"estimate", "--input", series.string(), "--L", "9",
                          "--U", "3"});
  CHECK(bad.status == 1);
  CHECK(bad.err.find("1 <= L < U") != std::string::npos);
}

TEST_CASE("estimate reads stdin when the input is '-'") {
  const Eigen::ArrayXd x =
      longmem::simulate(longmem::ProcessModel{.d0 = 0.2}, 512, 3);
  std::ostringstream csv;
  longmem::write_series_csv(csv, x);
  const CliRun r = run({"estimate", "--input", "-"}, csv.str());
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);
  CHECK(j["command"] == "estimate");
  CHECK(std::isfinite(j["d_hat"].get<double>()));
}

TEST_CASE("estimate error reporting") {
  const CliRun missing = run({"estimate", "--input", "/nonexistent/file.csv"});
  CHECK(missing.status == 1);
  CHECK(missing.err.find("longmem:") != std::string::npos);

  const fs::path bad_csv = work_dir() / "bad.csv";
  std::ofstream(bad_csv) << "value\n1.0\n2.0\nbanana\n5.0\n";
  const CliRun parse = run({"estimate", "--input", bad_csv.string()});
  CHECK(parse.status == 1);
  CHECK(parse.err.find(":4:") != std::string::npos);
  CHECK(parse.err.find("not a number") != std::string::npos);
}

TEST_CASE("vartable emits the grid plus band-pass reference rows") {
  const fs::path out = work_dir() / "vt.csv";
  const CliRun r = run({"vartable", "--wavelet", "db2", "--d-min", "0",
                        "--d-max", "0.5", "--d-step", "0.25", "--ell", "4,inf",
                        "--output", out.string()});
  REQUIRE(r.status == 0);
  const std::vector<std::string> rows = lines_of(slurp(out));
  REQUIRE(rows.size() == 13);  // header + 3 d x 2 ell x 2 families
  CHECK(rows[0] == "d,ell,variance,family");

  const longmem::WaveletSpec w = longmem::make_wavelet("db2");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const std::vector<std::string> f = split_csv(rows[i]);
    REQUIRE(f.size() == 4);
    const double d = std::stod(f[0]);
    const int ell = f[1] == "inf" ? longmem::kEllInfinity : std::stoi(f[1]);
    const double v = std::stod(f[2]);
    if (i <= 6) {
      CHECK(f[3] == "db2");
      CHECK(v == doctest::Approx(longmem::clt_variance(d, ell, w)).epsilon(1e-12));
    } else {
      CHECK(f[3] == "shannon");
      CHECK(v ==
            doctest::Approx(longmem::shannon_clt_variance(d, ell)).epsilon(1e-12));
    }
  }
  // Spot value against the independent closed form at d = 0, ell = 4.
  const std::vector<std::string> first = split_csv(rows[1]);
  CHECK(std::stod(first[0]) == 0.0);
  CHECK(first[1] == "4");
  CHECK(std::stod(first[2]) == doctest::Approx(0.46005303679981346).epsilon(1e-4));

  const CliRun js = run({"vartable", "--d-min", "0", "--d-max", "0.25",
                         "--d-step", "0.25", "--ell", "6", "--format", "json"});
  REQUIRE(js.status == 0);
  const json jtable = json::parse(js.out);
  CHECK(jtable["command"] == "vartable");
  REQUIRE(jtable["rows"].size() == 4);
  CHECK(jtable["rows"][0]["family"] == "db2");
  CHECK(jtable["rows"][2]["family"] == "shannon");
  CHECK(jtable["rows"][0]["variance"].get<double>() ==
        doctest::Approx(longmem::clt_variance(0.0, 6, w)).epsilon(1e-12));

  CHECK(run({"vartable", "--d-step", "-0.1"}).status == 1);
  CHECK(run({"vartable", "--ell", "0"}).status == 1);
}

TEST_CASE("compare lists the wavelet fit beside the Fourier baselines") {
  const fs::path series = series_path(0.3, 4096, 19);
  const fs::path out = work_dir() / "cmp.csv";
  const CliRun r = run({"compare", "--input", series.string(), "--output",
                        out.string()});
  REQUIRE(r.status == 0);
  const std::vector<std::string> rows = lines_of(slurp(out));
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "method,d_hat,se,bandwidth");
  const std::vector<std::string> methods = {"lwwe", "gph", "lwf", "logscale"};
  for (int i = 1; i <= 4; ++i) {
    const std::vector<std::string> f = split_csv(rows[static_cast<std::size_t>(i)]);
    REQUIRE(f.size() == 4);
    CHECK(f[0] == methods[static_cast<std::size_t>(i - 1)]);
    const double d_hat = std::stod(f[1]);
    const double se = std::stod(f[2]);
    CHECK(std::isfinite(d_hat));
    CHECK(se > 0.0);
    CHECK(std::abs(d_hat - 0.3) < 0.35);  // same draw, all in the ballpark
    if (f[0] == "gph" || f[0] == "lwf") {
      CHECK(std::stol(f[3]) == longmem::default_bandwidth(4096));
    }
  }
}

TEST_CASE("mc reports a reproducible summary independent of thread count") {
  const fs::path out = work_dir() / "mc.json";
  const std::vector<std::string> args = {
      "mc",     "--d0",   "0.25", "--n",    "1024", "--reps",
      "24",     "--seed", "5",    "--level", "0.9",  "--output",
      out.string()};

  setenv("LONGMEM_THREADS", "2", 1);
  const CliRun r1 = run(args);
  REQUIRE(r1.status == 0);
  const json a = slurp_json(out);

  setenv("LONGMEM_THREADS", "5", 1);
  const CliRun r2 = run(args);
  REQUIRE(r2.status == 0);
  const json b = slurp_json(out);
  unsetenv("LONGMEM_THREADS");

  CHECK(a["command"] == "mc");
  CHECK(a["d0"] == doctest::Approx(0.25));
  CHECK(a["reps"] == 24);
  CHECK(a["n"] == 1024);
  CHECK(a["theoretical_var"].get<double>() > 0.0);
  const double coverage = a["coverage"].get<double>();
  CHECK(coverage >= 0.0);
  CHECK(coverage <= 1.0);
  CHECK(a["bias"].get<double>() ==
        doctest::Approx(a["mean_d_hat"].get<double>() - 0.25).epsilon(1e-14));

  // Every statistical field agrees bit for bit across thread counts.
  for (const char* key : {"mean_d_hat", "bias", "empirical_var_scaled",
                          "theoretical_var", "coverage"}) {
    CHECK(a[key].get<double>() == b[key].get<double>());
  }

  const CliRun bad_ell = run({"mc", "--d0", "0.25", "--n", "1024", "--ell", "9"});
  CHECK(bad_ell.status == 1);
  CHECK(bad_ell.err.find("mc supports") != std::string::npos);
}
