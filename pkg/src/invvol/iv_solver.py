"""Implied volatility of inverse calls on the monotone branch.

The ATM price ``m(y)`` with ``y = sigma sqrt(T)`` increases only up to the
turning point ``y*`` where its derivative ``g`` vanishes (``y* ~ 0.9163``).
Inversion is restricted to ``[0, safety_factor * y*]``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .black_scholes import atm_price_y, bs_price, vega_profile
from .errors import DomainError, NoConvergence

SAFETY_FACTOR = 0.95
SIGMA_LO = 1e-8
XTOL = 1e-12
MAXITER = 200

_lock = threading.Lock()
_y_star: float | None = None


def turning_point() -> float:
    """Unique positive root of ``g``; computed once per process."""
    global _y_star
    if _y_star is None:
        with _lock:
            if _y_star is None:
                lo, hi = 0.0, 4.0
                if not vega_profile(lo) > 0 > vega_profile(hi):
                    raise RuntimeError("g does not change sign on [0, 4]")
                _y_star = brentq(lambda y: float(vega_profile(y)), lo, hi, xtol=1e-15, maxiter=500)
    return _y_star


@dataclass(frozen=True)
class MonotoneDomain:
    y_star: float
    safety_factor: float = SAFETY_FACTOR

    @property
    def y_cap(self) -> float:
        return self.safety_factor * self.y_star

    @property
    def price_cap(self) -> float:
        return float(atm_price_y(self.y_cap))

    def sigma_cap(self, T: float) -> float:
        return self.y_cap / np.sqrt(T)


def monotone_domain(safety_factor: float = SAFETY_FACTOR) -> MonotoneDomain:
    if not 0 < safety_factor < 1:
        raise DomainError("safety_factor must lie in (0, 1)")
    return MonotoneDomain(turning_point(), safety_factor)


def _brent(f, lo, hi):
    try:
        root, info = brentq(f, lo, hi, xtol=XTOL, maxiter=MAXITER, full_output=True, disp=False)
    except ValueError as exc:  # no sign change
        raise DomainError(str(exc)) from exc
    if not info.converged:
        raise NoConvergence(f"Brent did not converge in {MAXITER} iterations")
    return root


def implied_vol_atm(price: float, T: float, safety_factor: float = SAFETY_FACTOR) -> float:
    """Invert the ATM inverse-call price for volatility.

    Raises
    ------
    DomainError
        If ``price <= 0`` or ``price`` is at or above the monotone cap.
    NoConvergence
        If Brent exceeds ``MAXITER`` iterations.
    """
    if not np.isfinite(price) or not np.isfinite(T):
        raise DomainError("price and T must be finite")
    if T <= 0:
        raise DomainError(f"T must be > 0, got {T}")
    if price <= 0:
        raise DomainError(f"price must be > 0, got {price}")
    dom = monotone_domain(safety_factor)
    if price >= dom.price_cap:
        raise DomainError(f"price {price} is beyond the monotone cap {dom.price_cap:.6g}")

    sqrt_T = np.sqrt(T)

    def f(sigma):
        return float(atm_price_y(sigma * sqrt_T)) - price

    lo = SIGMA_LO if f(SIGMA_LO) < 0 else 0.0
    return _brent(f, lo, dom.sigma_cap(T))


def implied_vol(price: float, T: float, x: float, k: float, safety_factor: float = SAFETY_FACTOR) -> float:
    """Near-the-money inversion at a general log-strike.

    Uses the same volatility bracket as :func:`implied_vol_atm`; meant for
    strikes close to ``x`` (finite-difference skew checks), where the price
    is still increasing in sigma over the bracket.
    """
    if T <= 0:
        raise DomainError(f"T must be > 0, got {T}")
    dom = monotone_domain(safety_factor)

    def f(sigma):
        return float(bs_price(tau=T, x=x, k=k, sigma=sigma)) - price

    return _brent(f, SIGMA_LO, dom.sigma_cap(T))
