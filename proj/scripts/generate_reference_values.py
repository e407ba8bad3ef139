#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
# Copyright 2026 The longmem Authors
"""Generate frozen reference values for the C++ test suite.

Every quantity here is computed by an independent route (mpmath arbitrary
precision, exact rationals, scipy adaptive quadrature, or a from-scratch
Python port of the counter RNG) and written to tests/reference_values.hpp.
The header is committed; this script is only re-run when a reference needs
to change, so the tests always pin against a fixed, reviewed artifact.

Run from the repository root:  python3 scripts/generate_reference_values.py
"""

import math
from fractions import Fraction

import mpmath as mp
import numpy as np
from scipy import integrate

mp.mp.dps = 40

OUT_PATH = "tests/reference_values.hpp"

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


# ----------------------------------------------------------------- RNG port
def mix64(z):
    z &= MASK
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & MASK
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & MASK
    z ^= z >> 31
    return z


def rng_key(seed, stream):
    return mix64((seed + GOLDEN) & MASK) ^ mix64((stream + 2 * GOLDEN) & MASK)


def rng_raw(seed, stream, counter):
    key = rng_key(seed, stream)
    return mix64((key + GOLDEN * ((counter + 1) & MASK)) & MASK)


def rng_uniform(seed, stream, counter):
    # 53-bit mantissa plus a half-ulp offset keeps the value inside (0, 1).
    return (rng_raw(seed, stream, counter) >> 11) * 2.0**-53 + 2.0**-54


def derive_seed(master, index):
    return mix64((master + GOLDEN * ((index + 1) & MASK)) & MASK)


def normal_quantile_mp(p):
    return mp.sqrt(2) * mp.erfinv(2 * mp.mpf(p) - 1)


def rng_normal(seed, stream, counter):
    u = rng_uniform(seed, stream, counter)
    return float(normal_quantile_mp(u))


# ------------------------------------------------- Daubechies factorization
def daubechies_lowpass_mp(M):
    """Length-2M lowpass filter via spectral factorization, 40-digit mpmath.

    Half-band polynomial P(y) = sum_{k<M} C(M-1+k,k) y^k; its roots are
    mapped through y = (2 - z - 1/z)/4 and the z-roots inside the unit disc
    are kept, giving m0(z) = ((1+z)/2)^M prod (z - z_i)/(1 - z_i).
    """
    if M == 1:
        return [mp.mpf(1) / mp.sqrt(2)] * 2
    coeffs = [mp.binomial(M - 1 + k, k) for k in range(M - 1, -1, -1)]
    yroots = mp.polyroots(coeffs, maxsteps=200, extraprec=200)
    zroots = []
    for y0 in yroots:
        # z^2 - (2 - 4 y0) z + 1 = 0; the two roots are reciprocal.
        b = 2 - 4 * y0
        disc = mp.sqrt(b * b - 4)
        for z in ((b + disc) / 2, (b - disc) / 2):
            if abs(z) < 1 - mp.mpf("1e-12"):
                zroots.append(z)
    assert len(zroots) == M - 1, (M, zroots)
    # Polynomial coefficients of ((1+z)/2)^M * prod (z - z_i)/(1 - z_i),
    # ascending in z.
    poly = [mp.mpf(1)]
    for _ in range(M):
        nxt = [mp.mpf(0)] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i] += c / 2
            nxt[i + 1] += c / 2
        poly = nxt
    for z0 in zroots:
        nxt = [mp.mpc(0)] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i] += -z0 * c / (1 - z0)
            nxt[i + 1] += c / (1 - z0)
        poly = nxt
    h = [mp.sqrt(2) * c for c in poly]
    assert all(abs(mp.im(c)) < mp.mpf("1e-30") for c in h)
    h = [mp.re(c) for c in h]
    # Conjugate-quadrature-filter sanity: unit energy, orthogonal shifts.
    assert abs(sum(h) - mp.sqrt(2)) < mp.mpf("1e-30")
    assert abs(sum(c * c for c in h) - 1) < mp.mpf("1e-30")
    for m in range(1, M):
        dot = sum(h[k] * h[k + 2 * m] for k in range(len(h) - 2 * m))
        assert abs(dot) < mp.mpf("1e-30"), (M, m, dot)
    return h


def highpass_from_lowpass(h):
    F = len(h)
    return [((-1) ** k) * h[F - 1 - k] for k in range(F)]


# ------------------------------------------------------- composed-filter DWT
def upsample(f, factor):
    out = [mp.mpf(0)] * ((len(f) - 1) * factor + 1)
    for i, c in enumerate(f):
        out[i * factor] = c
    return out


def convolve(a, b):
    out = [mp.mpf(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def composed_filter(h, g, j):
    """Scale-j detail filter: lowpass chain of length j-1, then highpass."""
    filt = [mp.mpf(1)]
    for r in range(j - 1):
        filt = convolve(filt, upsample(h, 2**r))
    return convolve(filt, upsample(g, 2 ** (j - 1)))


def num_coeffs(n, T, j):
    return max((n - T + 1) // (2**j) - T + 1, 0) if n - T + 1 >= 0 else 0


def brute_force_dwt(x, h, g, j):
    T = len(h) - 1
    c = composed_filter(h, g, j)
    assert len(c) == T * (2**j - 1) + 1
    nj = num_coeffs(len(x), T, j)
    out = []
    for k in range(nj):
        out.append(sum(c[m] * x[2**j * k + m] for m in range(len(c))))
    return out


# ----------------------------------------------------------- band constants
def eta_kappa_exact(ell):
    tot = Fraction(2) - Fraction(1, 2**ell)
    eta = sum(Fraction(j, 2**j) for j in range(ell + 1)) / tot
    kap = sum((Fraction(j) - eta) ** 2 * Fraction(1, 2**j)
              for j in range(ell + 1)) / tot
    # Closed form for eta doubles as a self-check.
    closed = (1 - Fraction(1, 2**ell) * (1 + Fraction(ell, 2))) / \
        (1 - Fraction(1, 2 ** (ell + 1)))
    assert eta == closed, ell
    return eta, kap


def v0_closed(ell):
    _, kap = eta_kappa_exact(ell)
    tot = Fraction(2) - Fraction(1, 2**ell)
    return 1 / (2 * mp.mpf(tot.numerator) / tot.denominator *
                (mp.mpf(kap.numerator) / kap.denominator) * mp.log(2) ** 2)


def g_exact(x):
    x = mp.mpf(x)
    if abs(x + 1) < mp.mpf("1e-30"):
        return mp.log(2)
    return ((2 * mp.pi) ** (x + 1) - mp.pi ** (x + 1)) / (x + 1)


def shannon_v(d, ell):
    _, kap = eta_kappa_exact(ell)
    kapm = mp.mpf(kap.numerator) / kap.denominator
    tot = 2 - mp.mpf(2) ** (-ell)
    return mp.pi * g_exact(-4 * d) / \
        (2 * tot * kapm * mp.log(2) ** 2 * g_exact(-2 * d) ** 2)


# -------------------------------------------------- fractional-noise gammas
def fractional_gamma(d, kmax):
    d = mp.mpf(d)
    out = [mp.gamma(1 - 2 * d) / mp.gamma(1 - d) ** 2]
    for k in range(1, kmax + 1):
        out.append(out[-1] * (k - 1 + d) / (k - d))
    return out


def ar1_times_fractional_gamma(d, rho, kmax):
    """gamma of |1-e^{-il}|^{-2d} |1-rho e^{-il}|^{-2} via series convolution."""
    rho = mp.mpf(rho)
    window = 220
    gf = fractional_gamma(d, kmax + window)
    out = []
    for k in range(kmax + 1):
        s = mp.mpf(0)
        for m in range(k - window, k + window + 1):
            s += gf[abs(m)] * rho ** abs(k - m) / (1 - rho * rho)
        out.append(s)
    return out


def check_gamma_convention():
    """Pin gamma(k) = (2 pi)^{-1} int e^{ikl} |2 sin(l/2)|^{-2d} dl."""
    d = mp.mpf("0.3")
    for k in (0, 1, 3):
        val = mp.quad(
            lambda lam: mp.cos(k * lam) * (2 * mp.sin(lam / 2)) ** (-2 * d),
            [0, mp.pi]) / mp.pi
        ref = fractional_gamma(d, k)[k]
        assert abs(val - ref) < mp.mpf("1e-15"), (k, val, ref)


# -------------------------------------------------------- psi_hat reference
def psi_hat_mp(h, g, xi, depth=90):
    xi = mp.mpf(xi)

    def m0(lam):
        return sum(c * mp.e ** (-1j * k * lam)
                   for k, c in enumerate(h)) / mp.sqrt(2)

    def m1(lam):
        return sum(c * mp.e ** (-1j * k * lam)
                   for k, c in enumerate(g)) / mp.sqrt(2)

    prod = m1(xi / 2)
    for r in range(2, depth + 2):
        prod *= m0(xi / 2**r)
    return prod


def psi_hat_np(h, xi):
    """Vectorized float64 psi_hat used by the scipy quadrature oracle."""
    h = np.asarray(h, dtype=float)
    g = np.array([(-1) ** k * h[len(h) - 1 - k] for k in range(len(h))])
    xi = np.atleast_1d(np.asarray(xi, dtype=float))

    def transfer(coeffs, lam):
        k = np.arange(len(coeffs))
        return (np.exp(-1j * np.outer(lam, k)) @ coeffs) / math.sqrt(2)

    out = transfer(g, xi / 2)
    arg = xi / 2
    for _ in range(80):
        arg = arg / 2
        out = out * transfer(h, arg)
        if np.max(np.abs(arg)) < 1e-20:
            break
    return out


def k_oracle(h, d, octaves=30):
    """K(d) by QUADPACK on [0, pi] plus dyadic octaves, independent of the
    C++ Gauss-Legendre cache."""

    def f(xi):
        return abs(psi_hat_np(h, xi)[0]) ** 2 * xi ** (-2 * d)

    total, _ = integrate.quad(f, 1e-9, math.pi, limit=400)
    for m in range(octaves):
        a, b = (2**m) * math.pi, (2 ** (m + 1)) * math.pi
        val, _ = integrate.quad(f, a, b, limit=400)
        total += val
    return 2.0 * total


def i_u_oracle(h, d, u, n_lambda=1024, l_max=1500):
    """I_u by midpoint quadrature of the folded |D_u|^2 on (0, pi)."""
    M = len(h) // 2
    lam = (np.arange(n_lambda) + 0.5) * math.pi / n_lambda
    total = 0.0
    ls = np.arange(-l_max, l_max + 1)
    for q in range(n_lambda):
        xi = lam[q] + 2 * math.pi * ls
        a = np.abs(xi) ** (-2 * d) * np.conj(psi_hat_np(h, xi)) * \
            psi_hat_np(h, xi / 2**u)
        bins = np.zeros(2**u, dtype=complex)
        np.add.at(bins, ls % 2**u, a)
        total += np.sum(np.abs(bins) ** 2)
    return 2.0 * total * math.pi / n_lambda


# ------------------------------------------------------------------ output
def fmt(x):
    return f"{float(x):.17g}"


def emit_array(lines, name, values, per_line=3):
    lines.append(f"inline constexpr double {name}[] = {{")
    row = []
    for v in values:
        row.append(fmt(v))
        if len(row) == per_line:
            lines.append("    " + ", ".join(row) + ",")
            row = []
    if row:
        lines.append("    " + ", ".join(row) + ",")
    lines.append("};")


def emit_u64_array(lines, name, values, per_line=3):
    lines.append(f"inline constexpr std::uint64_t {name}[] = {{")
    row = []
    for v in values:
        row.append(f"0x{v:016x}ULL")
        if len(row) == per_line:
            lines.append("    " + ", ".join(row) + ",")
            row = []
    if row:
        lines.append("    " + ", ".join(row) + ",")
    lines.append("};")


def main():
    lines = [
        "// SPDX-License-Identifier: Apache-2.0",
        "// Copyright 2026 The longmem Authors",
        "//",
        "// Frozen reference values for the test suite.",
        "// Generated by scripts/generate_reference_values.py -- do not edit.",
        "",
        "#ifndef LONGMEM_TESTS_REFERENCE_VALUES_HPP",
        "#define LONGMEM_TESTS_REFERENCE_VALUES_HPP",
        "",
        "#include <cstdint>",
        "",
        "namespace longmem::ref {",
        "",
    ]

    # --- filters -----------------------------------------------------------
    filters = {}
    for M in (1, 2, 3, 4):
        filters[M] = daubechies_lowpass_mp(M)
    # db2 closed form: coefficients are (1 +- sqrt 3)-combinations.
    s3 = mp.sqrt(3)
    db2_closed = [(1 - s3), (3 - s3), (3 + s3), (1 + s3)]
    db2_closed = [c / (4 * mp.sqrt(2)) for c in db2_closed]
    for a, b in zip(filters[2], db2_closed):
        assert abs(a - b) < mp.mpf("1e-30"), (a, b)
    lines.append("// Daubechies lowpass filters (spectral factorization,")
    lines.append("// roots inside the unit disc; 40-digit arithmetic).")
    for M in (2, 3, 4):
        emit_array(lines, f"kDb{M}Lowpass", filters[M])
    lines.append("")

    # --- RNG cross-language vectors ---------------------------------------
    lines.append("// Counter RNG vectors from the independent Python port.")
    raw_1 = [rng_raw(1, 0, c) for c in range(4)]
    raw_42 = [rng_raw(42, 7, c) for c in range(4)]
    emit_u64_array(lines, "kRawSeed1Stream0", raw_1)
    emit_u64_array(lines, "kRawSeed42Stream7", raw_42)
    emit_u64_array(lines, "kDerivedSeeds9",
                   [derive_seed(9, i) for i in range(4)])
    emit_array(lines, "kUniformSeed42", [rng_uniform(42, 0, c)
                                         for c in range(6)])
    lines.append("")

    # --- normal quantiles --------------------------------------------------
    probs = [0.3, 0.5, 0.9, 0.95, 0.975, 0.995, 0.999, 1e-10]
    lines.append("// Standard normal quantiles (mpmath erfinv).")
    emit_array(lines, "kQuantileProbs", probs)
    emit_array(lines, "kQuantileValues",
               [normal_quantile_mp(p) for p in probs])
    lines.append("")

    # --- fixture series (seed 42) and its brute-force DWT ------------------
    x32 = [rng_normal(42, 0, c) for c in range(32)]
    x32_mp = [mp.mpf(repr(v)) for v in x32]
    lines.append("// 32-point Gaussian fixture (seed 42, stream 0) and its")
    lines.append("// brute-force composed-filter coefficients.")
    emit_array(lines, "kFixture32", x32)
    for name, M in (("Haar", 1), ("Db2", 2)):
        h = filters[M]
        g = highpass_from_lowpass(h)
        for j in (1, 2, 3):
            w = brute_force_dwt(x32_mp, h, g, j)
            if w:
                emit_array(lines, f"k{name}Scale{j}Of32", w)
    emit_array(lines, "kDb2Composed2",
               composed_filter(filters[2], highpass_from_lowpass(filters[2]), 2))
    emit_array(lines, "kDb2Composed3",
               composed_filter(filters[2], highpass_from_lowpass(filters[2]), 3))
    lines.append("")

    # --- eta/kappa and closed-form variances -------------------------------
    ells = [1, 2, 3, 5, 10, 30]
    lines.append("// Band-weight constants from exact rationals.")
    emit_array(lines, "kEtaKappaElls", ells)
    emit_array(lines, "kEtaValues",
               [mp.mpf(e.numerator) / e.denominator
                for e, _ in map(eta_kappa_exact, ells)])
    emit_array(lines, "kKappaValues",
               [mp.mpf(k.numerator) / k.denominator
                for _, k in map(eta_kappa_exact, ells)])
    v0_ells = [1, 4, 6, 8, 10, 20]
    emit_array(lines, "kV0Ells", v0_ells)
    emit_array(lines, "kV0Values", [v0_closed(l) for l in v0_ells])
    lines.append(f"inline constexpr double kV0Infinity = "
                 f"{fmt(1 / (8 * mp.log(2) ** 2))};")
    lines.append("")

    # --- Shannon closed-form variances -------------------------------------
    sh_d = [-1.0, 0.0, 0.25, 1.5, 0.4]
    sh_ell = [4, 10, 6]
    vals = []
    for dd in sh_d:
        for ll in sh_ell:
            vals.append(shannon_v(mp.mpf(repr(dd)), ll))
    lines.append("// Shannon band-pass variances, d-major over the two grids.")
    emit_array(lines, "kShannonD", sh_d)
    emit_array(lines, "kShannonEll", sh_ell)
    emit_array(lines, "kShannonV", vals)
    lines.append("")

    # --- fractional-noise autocovariances ----------------------------------
    check_gamma_convention()
    lines.append("// Fractional-noise autocovariances (closed form).")
    emit_array(lines, "kGammaD03", fractional_gamma(mp.mpf("0.3"), 5))
    g45 = fractional_gamma(mp.mpf("0.45"), 1024)
    emit_array(lines, "kGammaD045Lags", [0, 1, 2, 10, 100, 1024])
    emit_array(lines, "kGammaD045",
               [g45[k] for k in (0, 1, 2, 10, 100, 1024)])
    emit_array(lines, "kGammaDm03", fractional_gamma(mp.mpf("-0.3"), 3))
    lines.append("// With an AR(1)-modulus factor, rho = 0.5 (series")
    lines.append("// convolution of the two exact autocovariances).")
    emit_array(lines, "kGammaD03Ar05",
               ar1_times_fractional_gamma(mp.mpf("0.3"), mp.mpf("0.5"), 4))
    lines.append("")

    # --- psi_hat probes -----------------------------------------------------
    probe_xi = [0.7, 3.0, 9.42, 50.0]
    lines.append("// db2 psi_hat probes (90-level mpmath product).")
    emit_array(lines, "kPsiHatXi", probe_xi)
    vals = [psi_hat_mp(filters[2], highpass_from_lowpass(filters[2]), x)
            for x in probe_xi]
    emit_array(lines, "kPsiHatDb2Re", [mp.re(v) for v in vals])
    emit_array(lines, "kPsiHatDb2Im", [mp.im(v) for v in vals])
    lines.append("")

    # --- K and I_u quadrature oracles --------------------------------------
    lines.append("// Scaling-constant oracle (QUADPACK adaptive quadrature).")
    k_db2_04 = k_oracle(filters[2], 0.4)
    k_db2_m03 = k_oracle(filters[2], -0.3)
    k_db4_04 = k_oracle(filters[4], 0.4)
    k_db4_12 = k_oracle(filters[4], 1.2)
    lines.append(f"inline constexpr double kKDb2D04 = {fmt(k_db2_04)};")
    lines.append(f"inline constexpr double kKDb2Dm03 = {fmt(k_db2_m03)};")
    lines.append(f"inline constexpr double kKDb4D04 = {fmt(k_db4_04)};")
    lines.append(f"inline constexpr double kKDb4D12 = {fmt(k_db4_12)};")
    sanity = k_oracle(filters[2], 0.0)
    assert abs(sanity - 2 * math.pi) < 1e-7, sanity
    lines.append("// Cross-scale energy oracle (folded-density midpoint rule).")
    i0 = i_u_oracle(filters[2], 0.4, 0)
    i1 = i_u_oracle(filters[2], 0.4, 1)
    lines.append(f"inline constexpr double kIDb2D04U0 = {fmt(i0)};")
    lines.append(f"inline constexpr double kIDb2D04U1 = {fmt(i1)};")
    i0_check = i_u_oracle(filters[2], 0.0, 0)
    i1_check = i_u_oracle(filters[2], 0.0, 1)
    assert abs(i0_check - 2 * math.pi) < 2e-3, i0_check
    assert abs(i1_check) < 2e-3, i1_check
    lines.append("")

    lines += ["}  // namespace longmem::ref", "",
              "#endif  // LONGMEM_TESTS_REFERENCE_VALUES_HPP", ""]

    with open(OUT_PATH, "w") as f:
        f.write("\n".join(lines))
    print(f"wrote {OUT_PATH}")
    print("spot checks:")
    print("  db2 h =", [fmt(v) for v in filters[2]])
    print("  K(0.4, db2) =", fmt(k_db2_04))
    print("  K(-0.3, db2) =", fmt(k_db2_m03))
    print("  I_0(0.4, db2) =", fmt(i0), " I_1 =", fmt(i1))
    print("  gamma_ar1[0..2] =",
          [fmt(v) for v in
           ar1_times_fractional_gamma(mp.mpf('0.3'), mp.mpf('0.5'), 2)])


if __name__ == "__main__":
    main()
