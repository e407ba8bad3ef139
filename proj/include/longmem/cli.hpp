// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The longmem Authors

#ifndef LONGMEM_CLI_HPP
#define LONGMEM_CLI_HPP

namespace longmem {

// Entry point of the command-line front end. Commands:
//   estimate  read a CSV series, fit d, emit JSON result
//   simulate  write a synthetic series as CSV, echo the model as JSON
//   mc        Monte Carlo bias/variance/coverage study, JSON result
//   vartable  asymptotic-variance table as CSV
//   compare   wavelet Whittle vs Fourier baselines on one input
// Returns the process exit status (0 iff no error).
int run_cli(int argc, const char* const* argv);

}  // namespace longmem

#endif  // LONGMEM_CLI_HPP
