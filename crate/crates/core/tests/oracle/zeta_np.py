"""Vectorised Euler-Maclaurin Hurwitz zeta in numpy.

Independent of the Rust code: different cut rule, fixed number of
correction terms, complex128 throughout.
"""
import math

import numpy as np
from mpmath import bernoulli, factorial

K_TERMS = 20
COEF = np.array([float(bernoulli(2 * j) / factorial(2 * j)) for j in range(1, K_TERMS + 1)])


def cut(smax):
    return int(math.ceil(smax / math.pi)) + 20


def hurwitz_shifted(points, taus, alpha=1.0, n_cut=None):
    """zeta(p + i tau, alpha) for every tau (rows) and point p (columns)."""
    points = np.asarray(points, dtype=complex)
    taus = np.asarray(taus, dtype=float)
    s = points[None, :] + 1j * taus[:, None]
    n = n_cut or cut(np.abs(s).max())
    k = np.arange(n) + alpha
    lk = np.log(k)
    # main sum: sum_k k^{-p} e^{-i tau ln k}
    base = np.exp(-np.outer(lk, points))  # (n, P)
    phase = np.exp(-1j * np.outer(taus, lk))  # (T, n)
    main = phase @ base
    a = n + alpha
    la = math.log(a)
    out = main + np.exp((1 - s) * la) / (s - 1) + 0.5 * np.exp(-s * la)
    poch = s.copy()  # s (s+1) ... (s+2j-2)
    term_pow = np.exp(-(s + 1) * la)
    for j in range(K_TERMS):
        out += COEF[j] * poch * term_pow
        poch = poch * (s + 2 * j + 1) * (s + 2 * j + 2)
        term_pow = term_pow / (a * a)
    return out
