"""Black-Scholes valuation of Inverse European calls.

Prices are quoted as a fraction of one unit of the underlying, i.e. the
value of the payoff ``((S_T - K) / S_T)_+``.  The interest rate is zero.

All normal CDFs are evaluated through ``erfc``; terms of the form
``exp(a) * erfc(z)`` with large ``z`` are rewritten with the scaled
function ``erfcx`` so that nothing overflows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erfc, erfcx

from .errors import DomainError

SQRT2 = np.sqrt(2.0)
SQRT_2PI = np.sqrt(2.0 * np.pi)


@dataclass(frozen=True)
class BsPoint:
    """A single evaluation point of the inverse Black-Scholes price.

    ``tau`` is time to maturity, ``x`` log-spot, ``k`` log-strike.
    """

    tau: float
    x: float
    k: float
    sigma: float

    def __post_init__(self):
        _check_finite(tau=self.tau, x=self.x, k=self.k, sigma=self.sigma)
        if self.tau < 0:
            raise DomainError(f"tau must be >= 0, got {self.tau}")
        if self.sigma <= 0:
            raise DomainError(f"sigma must be > 0, got {self.sigma}")


def _check_finite(**values):
    for name, v in values.items():
        if not np.all(np.isfinite(v)):
            raise DomainError(f"{name} must be finite")


def payoff(x, k):
    """Inverse call payoff ``(1 - e^{k-x})_+`` in log coordinates."""
    return np.maximum(-np.expm1(np.subtract(k, x)), 0.0)


def _ncdf(d):
    return 0.5 * erfc(-d / SQRT2)


def bs_price(p: BsPoint | None = None, *, tau=None, x=None, k=None, sigma=None):
    """Inverse call price ``N(d2) - e^{sigma^2 tau} e^{k-x} N(d1)``.

    Accepts either a :class:`BsPoint` or keyword arrays (broadcast with numpy).
    At ``tau == 0`` the payoff is returned exactly.
    """
    if p is not None:
        tau, x, k, sigma = p.tau, p.x, p.k, p.sigma
    tau, x, k, sigma = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (tau, x, k, sigma)))
    _check_finite(tau=tau, x=x, k=k, sigma=sigma)
    if np.any(tau < 0):
        raise DomainError("tau must be >= 0")
    if np.any(sigma <= 0):
        raise DomainError("sigma must be > 0")

    out = np.empty(tau.shape)
    expired = tau == 0
    out[expired] = payoff(x[expired], k[expired])

    live = ~expired
    s = sigma[live] * np.sqrt(tau[live])
    m = x[live] - k[live]
    d2 = m / s - 0.5 * s
    d1 = d2 - s
    # e^{s^2 - m} N(d1); for d1 < 0 use erfcx to keep the exponent bounded
    z = -d1 / SQRT2
    second = np.where(
        z > 0,
        0.5 * np.exp(-s * s / 8.0 + 0.5 * m - m * m / (2.0 * s * s)) * erfcx(np.maximum(z, 0.0)),
        0.5 * np.exp(np.minimum(s * s - m, 700.0)) * erfc(z),
    )
    out[live] = np.clip(_ncdf(d2) - second, 0.0, 1.0)
    return out[()] if out.ndim == 0 else out


def _scaled_third(y):
    """``e^{y^2} erfc(3y / (2 sqrt 2))`` without overflow."""
    y = np.asarray(y, dtype=float)
    return np.exp(-y * y / 8.0) * erfcx(3.0 * y / (2.0 * SQRT2))


def atm_price_y(y):
    """ATM price as a function of total volatility ``y = sigma sqrt(T)``."""
    y = np.asarray(y, dtype=float)
    return 0.5 * (erfc(y / (2.0 * SQRT2)) - _scaled_third(y))


def vega_profile(y):
    """``g(y)``: the ATM vega divided by ``sqrt(T)``.

    ``g(y) = -y e^{y^2} erfc(3y/(2 sqrt 2)) + e^{-y^2/8} / sqrt(2 pi)``,
    which is also the derivative of :func:`atm_price_y`.
    """
    y = np.asarray(y, dtype=float)
    return np.exp(-y * y / 8.0) * (1.0 / SQRT_2PI - y * erfcx(3.0 * y / (2.0 * SQRT2)))


def _check_T_sigma(T, sigma):
    _check_finite(T=T, sigma=sigma)
    if np.any(np.asarray(T) <= 0):
        raise DomainError("T must be > 0")
    if np.any(np.asarray(sigma) <= 0):
        raise DomainError("sigma must be > 0")


def atm_price(T, sigma):
    _check_T_sigma(T, sigma)
    return atm_price_y(np.asarray(sigma) * np.sqrt(T))


def atm_vega(T, sigma):
    """d(price)/d(sigma) at the money: ``g(sigma sqrt T) sqrt T``."""
    _check_T_sigma(T, sigma)
    return vega_profile(np.asarray(sigma) * np.sqrt(T)) * np.sqrt(T)


def atm_dk(T, sigma):
    """d(price)/d(log-strike) at ``k = x``.

    Equal to ``atm_price - erfc(y / (2 sqrt 2)) / 2``; evaluated in the
    cancelled form ``-e^{y^2} erfc(3y/(2 sqrt 2)) / 2``.
    """
    _check_T_sigma(T, sigma)
    return -0.5 * _scaled_third(np.asarray(sigma) * np.sqrt(T))


def atm_digital(T, sigma):
    """Closed-form ``E[e^{k-X_T} 1{X_T >= k}]`` at ``k = X_0`` under constant vol.

    Equals ``e^{sigma^2 T} N(d1)``; identically ``-atm_dk``.
    """
    _check_T_sigma(T, sigma)
    return 0.5 * _scaled_third(np.asarray(sigma) * np.sqrt(T))
