// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The longmem Authors

#ifndef LONGMEM_CSV_HPP
#define LONGMEM_CSV_HPP

#include <iosfwd>
#include <string>

#include <Eigen/Dense>

namespace longmem {

// Read a single-column CSV series. An optional header line is auto-detected
// (a first line that does not parse as a number). Any other non-numeric row
// raises std::runtime_error naming the offending line number. Decimal
// separator is '.', independent of locale.
Eigen::ArrayXd read_series_csv(const std::string& path);
Eigen::ArrayXd read_series_csv(std::istream& in, const std::string& label);

// Write a series as single-column CSV with 17 significant digits, enough to
// round-trip IEEE doubles exactly.
void write_series_csv(const std::string& path, const Eigen::ArrayXd& x);
void write_series_csv(std::ostream& out, const Eigen::ArrayXd& x);

// Format one double with 17 significant digits (shared by all CSV output).
std::string format_value(double v);

}  // namespace longmem

#endif  // LONGMEM_CSV_HPP
