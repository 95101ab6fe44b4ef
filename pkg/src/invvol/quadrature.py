"""Gauss rules on finite intervals, including endpoint power singularities."""

from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

N_NODES = 64


@lru_cache(maxsize=None)
def _legendre(n):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=None)
def _jacobi_left(n, beta):
    # weight (1 + x)^beta on [-1, 1]
    x, w = roots_jacobi(n, 0.0, beta)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(a, b, n=N_NODES):
    """Nodes and weights of the ``n``-point Gauss-Legendre rule on ``[a, b]``."""
    x, w = _legendre(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def gauss_jacobi_left(length, power, n=N_NODES):
    """Rule for ``int_0^length w^power h(w) dw``; returns nodes and weights for ``h``.

    ``power > -1``.  The weights already include ``w^power``.
    """
    if power == 0.0:
        return gauss_legendre(0.0, length, n)
    x, w = _jacobi_left(n, float(power))
    half = 0.5 * length
    return half * (x + 1.0), half ** (power + 1.0) * w
