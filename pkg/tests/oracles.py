"""Independent high-precision oracles used to freeze expected test values.

Everything here is computed from first principles (power series, asymptotic
expansions, quadrature) with mpmath, deliberately avoiding the code paths
under test in ``qfit``.
"""

from __future__ import annotations

import math

import mpmath

mpmath.mp.dps = 40

_TOL = mpmath.mpf("1e-45")


def mp_i0(x):
    """I0 by its power series sum_k (x/2)^{2k} / (k!)^2 in arbitrary precision."""
    x = mpmath.mpf(x)
    q = (x / 2) ** 2
    term = mpmath.mpf(1)
    total = mpmath.mpf(1)
    k = 0
    while True:
        k += 1
        term *= q / (k * k)
        total += term
        if term < total * _TOL:
            return total


def mp_i1(x):
    """I1 by its power series sum_k (x/2)^{2k+1} / (k! (k+1)!)."""
    x = mpmath.mpf(x)
    q = (x / 2) ** 2
    term = x / 2
    total = term
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + 1))
        total += term
        if abs(term) < abs(total) * _TOL:
            return total


def mp_i0e(x):
    return mp_i0(x) * mpmath.exp(-mpmath.mpf(x))


def mp_i1e(x):
    return mp_i1(x) * mpmath.exp(-mpmath.mpf(x))


def mp_log_i0(x):
    return mpmath.log(mp_i0(x))


def asym_i0e(x):
    """Three-term asymptotic oracle for exp(-x) I0(x) at large x."""
    return (1.0 + 1.0 / (8.0 * x) + 9.0 / (128.0 * x * x)) / math.sqrt(2.0 * math.pi * x)


def asym_i1e(x):
    """Two-term asymptotic oracle for exp(-x) I1(x) at large x."""
    return (1.0 - 3.0 / (8.0 * x)) / math.sqrt(2.0 * math.pi * x)


def asym_log_i0(x):
    """Hankel-style asymptotic oracle for log I0(x) at large x."""
    return x - 0.5 * math.log(2.0 * math.pi * x) + math.log1p(1.0 / (8.0 * x) + 9.0 / (128.0 * x * x))


def mp_rician_pdf(m, a, sigma):
    m, a, sigma = mpmath.mpf(m), mpmath.mpf(a), mpmath.mpf(sigma)
    s2 = sigma * sigma
    return m / s2 * mpmath.exp(-(m * m + a * a) / (2 * s2)) * mpmath.besseli(0, m * a / s2)


def rician_mean_quad(a, sigma, n_sigmas=12):
    """E[M | A, sigma] by quadrature of m * p(m) over (0, A + n_sigmas * sigma)."""
    hi = mpmath.mpf(a) + n_sigmas * mpmath.mpf(sigma)
    return mpmath.quad(lambda m: m * mp_rician_pdf(m, a, sigma), [0, hi])


def rician_norm_quad(a, sigma, n_sigmas=12):
    """Integral of p(m) over (0, A + n_sigmas * sigma); should be ~1."""
    hi = mpmath.mpf(a) + n_sigmas * mpmath.mpf(sigma)
    return mpmath.quad(lambda m: mp_rician_pdf(m, a, sigma), [0, hi])
