// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The longmem Authors

#include "longmem/pyramid.hpp"

#include <stdexcept>

namespace longmem {
namespace {

void require_discrete(const WaveletSpec& w, const char* who) {
  if (w.analytic()) {
    throw std::invalid_argument(std::string(who) +
                                ": analytic family has no discrete transform");
  }
}

}  // namespace

long num_coeffs(long n, int support, int j) {
  if (n < 0 || support < 1 || j < 0 || j > 62) {
    throw std::invalid_argument("num_coeffs: bad arguments");
  }
  const long usable = n - support + 1;
  if (usable <= 0) return 0;
  const long count = (usable >> j) - support + 1;
  return count > 0 ? count : 0;
}

int max_scale(long n, int support) {
  int j = 0;
  while (j < 62 && num_coeffs(n, support, j + 1) >= 1) ++j;
  return j;
}

Pyramid dwt(const Eigen::ArrayXd& x, const WaveletSpec& w, int j_max) {
  require_discrete(w, "dwt");
  const long n = x.size();
  const int T = w.support;
  int J = max_scale(n, T);
  if (j_max >= 0 && j_max < J) J = j_max;

  Pyramid p;
  p.n = n;
  p.support = T;
  p.coeffs.resize(static_cast<std::size_t>(J) + 1);
  // Scale 0 is identically zero for an orthonormal pair; store the
  // placeholder row so indexing by scale stays direct.
  p.coeffs[0] = Eigen::ArrayXd::Zero(num_coeffs(n, T, 0));

  const Eigen::ArrayXd& h = w.lowpass;
  const Eigen::ArrayXd& g = w.highpass;
  // Each stage streams its input once, producing the detail row and the next
  // approximation in the same pass (the two filters share every load, which
  // keeps the cost linear even when the input no longer fits in cache).
  const Eigen::ArrayXd* source = &x;
  Eigen::ArrayXd approx;
  for (int j = 1; j <= J; ++j) {
    const Eigen::ArrayXd& in = *source;
    const long nj = num_coeffs(n, T, j);
    // Full-support outputs available from this stage's input.
    const long avail = (in.size() - T + 1) / 2;
    if (nj > avail) {
      throw std::logic_error("dwt: coefficient count exceeds recursion output");
    }
    Eigen::ArrayXd detail(nj);
    if (j == J) {
      for (long k = 0; k < nj; ++k) {
        double acc = 0.0;
        const long base = 2 * k;
        for (int r = 0; r <= T; ++r) acc += g[r] * in[base + r];
        detail[k] = acc;
      }
      p.coeffs[static_cast<std::size_t>(j)] = std::move(detail);
      break;
    }
    Eigen::ArrayXd next(avail);
    for (long k = 0; k < nj; ++k) {
      double acc_g = 0.0, acc_h = 0.0;
      const long base = 2 * k;
      for (int r = 0; r <= T; ++r) {
        const double v = in[base + r];
        acc_g += g[r] * v;
        acc_h += h[r] * v;
      }
      detail[k] = acc_g;
      next[k] = acc_h;
    }
    for (long k = nj; k < avail; ++k) {
      double acc = 0.0;
      const long base = 2 * k;
      for (int r = 0; r <= T; ++r) acc += h[r] * in[base + r];
      next[k] = acc;
    }
    p.coeffs[static_cast<std::size_t>(j)] = std::move(detail);
    approx = std::move(next);
    source = &approx;
  }
  return p;
}

Eigen::ArrayXd composed_filter(const WaveletSpec& w, int j) {
  require_discrete(w, "composed_filter");
  if (j < 1 || j > 30) {
    throw std::invalid_argument("composed_filter: scale must be in 1..30");
  }
  const int T = w.support;
  // Convolve the lowpass chain h(z) h(z^2) ... h(z^{2^{j-2}}), then the
  // upsampled highpass g(z^{2^{j-1}}).
  Eigen::ArrayXd filt(1);
  filt << 1.0;
  for (int stage = 0; stage < j; ++stage) {
    const bool last = (stage == j - 1);
    const Eigen::ArrayXd& f = last ? w.highpass : w.lowpass;
    const long up = 1L << stage;
    Eigen::ArrayXd next = Eigen::ArrayXd::Zero(filt.size() + T * up);
    for (long i = 0; i < filt.size(); ++i) {
      for (int r = 0; r <= T; ++r) {
        next[i + up * r] += filt[i] * f[r];
      }
    }
    filt = std::move(next);
  }
  return filt;
}

double direct_coeff(const Eigen::ArrayXd& x, const WaveletSpec& w, int j,
                    long k) {
  require_discrete(w, "direct_coeff");
  if (j == 0) return 0.0;  // scale-0 detail filter vanishes identically
  const long nj = num_coeffs(x.size(), w.support, j);
  if (k < 0 || k >= nj) {
    throw std::out_of_range("direct_coeff: coefficient index out of range");
  }
  const Eigen::ArrayXd filt = composed_filter(w, j);
  const long base = k << j;
  double acc = 0.0;
  for (long m = 0; m < filt.size(); ++m) acc += filt[m] * x[base + m];
  return acc;
}

}  // namespace longmem
