// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The longmem Authors

#include "longmem/csv.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace longmem {
namespace {

// Locale-independent double parse of a full trimmed field.
bool parse_double(const std::string& field, double& out) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

Eigen::ArrayXd read_series_csv(std::istream& in, const std::string& label) {
  std::vector<double> values;
  std::string line;
  long line_no = 0;
  bool saw_data = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string field = trim(line);
    if (field.empty()) continue;
    double v = 0.0;
    if (parse_double(field, v)) {
      values.push_back(v);
      saw_data = true;
      continue;
    }
    if (line_no == 1 && !saw_data) continue;  // header line
    std::ostringstream msg;
    msg << label << ":" << line_no << ": not a number: '" << field << "'";
    throw std::runtime_error(msg.str());
  }
  if (values.empty()) {
    throw std::runtime_error(label + ": no numeric rows");
  }
  Eigen::ArrayXd x(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    x[static_cast<Eigen::Index>(i)] = values[i];
  }
  return x;
}

Eigen::ArrayXd read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_series_csv(in, path);
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_series_csv(std::ostream& out, const Eigen::ArrayXd& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    out << format_value(x[i]) << '\n';
  }
}

void write_series_csv(const std::string& path, const Eigen::ArrayXd& x) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_series_csv(out, x);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace longmem
