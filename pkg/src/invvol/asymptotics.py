"""Short-maturity ATM level and skew of the inverse-call implied volatility.

The level tends to ``sigma0``.  The skew satisfies::

    lim T^{max(1/2 - H, 0)} dI/dk
        = lim T^{max(1/2 - H, 0)} rho / (sigma0 T^2) int_0^T int_r^T E(D_r sigma_u) du dr
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .models import Bergomi, ConstVol, ModelParams, Sabr, malliavin_kernel
from .quadrature import gauss_legendre


@dataclass(frozen=True)
class SkewLimit:
    value: float
    scaling_exponent: float


def atm_level_limit(model: ModelParams) -> float:
    return float(model.sigma0)


def skew_limit(model: ModelParams) -> SkewLimit:
    """Closed-form limit of ``T^{exponent} * skew`` as ``T -> 0``."""
    if isinstance(model, ConstVol):
        return SkewLimit(0.0, 0.0)
    if isinstance(model, Sabr):
        return SkewLimit(0.5 * model.rho * model.alpha, 0.0)
    if isinstance(model, Bergomi):
        H, v, rho = model.H, model.v, model.rho
        if H > 0.5:
            return SkewLimit(0.0, 0.0)
        if H == 0.5:
            return SkewLimit(rho * v / 4.0, 0.0)
        return SkewLimit(2.0 * rho * v * np.sqrt(2 * H) / (3.0 + 4.0 * H * (2.0 + H)), 0.5 - H)
    raise TypeError(f"unknown model {model!r}")


def skew_integral(model: ModelParams, T: float, n: int = 64) -> float:
    """Finite-``T`` value of ``rho / (sigma0 T^2) int_0^T int_r^T E(D_r sigma_u) du dr``.

    Nested ``n x n`` Gauss-Legendre.  With ``a = H - 1/2`` the inner variable is
    ``u = r + (T - r) s^{1/(a+1)}``, which cancels the ``(u - r)^a`` endpoint
    singularity of the Bergomi kernel; the outer variable
    ``T - r = T w^{1/(a+2)}`` does the same for the resulting ``(T - r)^{a+1}``.
    """
    if not (np.isfinite(T) and T > 0):
        raise DomainError(f"T must be > 0, got {T}")
    if model.rho == 0 or isinstance(model, ConstVol):
        return 0.0
    a = model.hurst - 0.5
    p_in, p_out = a + 1.0, a + 2.0
    w, ww = gauss_legendre(0.0, 1.0, n)
    s, ws = gauss_legendre(0.0, 1.0, n)

    q = T * w ** (1.0 / p_out)  # T - r
    dq = T / p_out * w ** (1.0 / p_out - 1.0)
    r = T - q
    u = r[:, None] + q[:, None] * s[None, :] ** (1.0 / p_in)
    du = q[:, None] / p_in * s[None, :] ** (1.0 / p_in - 1.0)
    u = np.minimum(u, T)
    inner = (malliavin_kernel(model, np.broadcast_to(r[:, None], u.shape), u) * du) @ ws
    total = float((inner * dq) @ ww)
    return model.rho / (model.sigma0 * T * T) * total


def approx_smile(level: float, skew: float, k_star: float, k):
    """First-order smile ``I(k) ~ level + skew (k - k*)``."""
    out = level + skew * (np.asarray(k, dtype=float) - k_star)
    if np.any(out <= 0):
        warnings.warn("linear smile approximation is non-positive", RuntimeWarning, stacklevel=2)
    return out[()] if np.ndim(out) == 0 else out
