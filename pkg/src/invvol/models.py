"""Volatility models: path generation and Malliavin-derivative kernels.

Three models share the price dynamics ``dX = sigma dW - sigma^2 dt / 2`` with
``W = rho W' + sqrt(1 - rho^2) B``:

* :class:`ConstVol` -- deterministic ``sigma_t = sigma0``;
* :class:`Sabr` (beta = 1) -- ``sigma_t = sigma0 exp(alpha W'_t - alpha^2 t / 2)``;
* :class:`Bergomi` -- ``sigma_t^2 = sigma0^2 exp(v sqrt(2H) Z_t - v^2 t^{2H} / 2)``
  with ``Z_t = int_0^t (t - s)^{H - 1/2} dW'_s``.

Bergomi paths are simulated exactly on the grid from the joint Gaussian law
of ``(Z_{t_1..t_n}, dW'_{1..n})``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .errors import CovarianceError, DomainError
from .quadrature import gauss_jacobi_left, gauss_legendre

N_STEPS_DEFAULT = 50


def _require(cond, msg):
    if not cond:
        raise DomainError(msg)


@dataclass(frozen=True)
class ConstVol:
    sigma0: float

    def __post_init__(self):
        _require(np.isfinite(self.sigma0) and self.sigma0 > 0, "sigma0 must be > 0")

    rho = 0.0
    hurst = 0.5

    def n_gaussians(self, n_steps):
        return 2 * n_steps


@dataclass(frozen=True)
class Sabr:
    sigma0: float
    alpha: float
    rho: float

    def __post_init__(self):
        _require(np.isfinite(self.sigma0) and self.sigma0 > 0, "sigma0 must be > 0")
        _require(np.isfinite(self.alpha) and self.alpha > 0, "alpha must be > 0")
        _require(-1.0 <= self.rho <= 1.0, "rho must lie in [-1, 1]")

    hurst = 0.5

    def n_gaussians(self, n_steps):
        return 2 * n_steps


@dataclass(frozen=True)
class Bergomi:
    sigma0: float
    v: float
    H: float
    rho: float

    def __post_init__(self):
        _require(np.isfinite(self.sigma0) and self.sigma0 > 0, "sigma0 must be > 0")
        _require(np.isfinite(self.v) and self.v > 0, "v must be > 0")
        _require(0.0 < self.H < 1.0, "H must lie in (0, 1)")
        _require(-1.0 <= self.rho <= 1.0, "rho must lie in [-1, 1]")

    @property
    def hurst(self):
        return self.H

    def n_gaussians(self, n_steps):
        return 3 * n_steps


ModelParams = Union[ConstVol, Sabr, Bergomi]


@dataclass(frozen=True)
class TimeGrid:
    T: float
    n_steps: int = N_STEPS_DEFAULT

    def __post_init__(self):
        _require(np.isfinite(self.T) and self.T > 0, "T must be > 0")
        _require(int(self.n_steps) == self.n_steps and self.n_steps >= 1, "n_steps must be an integer >= 1")

    @property
    def dt(self):
        return self.T / self.n_steps

    @property
    def nodes(self):
        """``t_0 = 0, ..., t_n = T``."""
        return np.arange(self.n_steps + 1) * self.dt


# ---------------------------------------------------------------------------
# Bergomi covariance


def volterra_cov(s, d, H, n=64):
    """``int_0^s w^a (w + d)^a dw`` with ``a = H - 1/2``.

    This is ``Cov(Z_{t_i}, Z_{t_j})`` for ``s = min(t_i, t_j)`` and
    ``d = |t_i - t_j|``.  The ``w^a`` endpoint factor is absorbed by a
    Gauss-Jacobi rule on ``[0, min(d, s)]``; the rest of ``[0, s]`` is cut
    into panels ``[d 2^j, d 2^{j+1}]`` so that the nearby singularity of
    ``(w + d)^a`` at ``w = -d`` stays a fixed relative distance away.
    """
    a = H - 0.5
    if s <= 0:
        return 0.0
    if d == 0:
        _, w = gauss_jacobi_left(s, 2 * a, n)
        return float(w.sum())
    first = min(d, s)
    x, w = gauss_jacobi_left(first, a, n)
    total = float(w @ (x + d) ** a)
    lo = first
    while lo < s:
        hi = min(2.0 * lo, s)
        x, w = gauss_legendre(lo, hi, n)
        total += float(w @ (x**a * (x + d) ** a))
        lo = hi
    return total


def _check_hurst(H):
    if not (0.0 < H < 1.0):
        raise DomainError(f"H must lie in (0, 1), got {H}")


@lru_cache(maxsize=32)
def _blocks(T, n_steps, H):
    grid = TimeGrid(T, n_steps)
    t = grid.nodes[1:]
    dt = grid.dt
    hp = H + 0.5
    czz = np.empty((n_steps, n_steps))
    for i in range(n_steps):
        for j in range(i + 1):
            czz[i, j] = czz[j, i] = volterra_cov(t[j], t[i] - t[j], H)
    # Cov(Z_{t_i}, dW'_j): nonzero only when t_{j-1} < t_i
    left = t[None, :] - dt
    upper = np.minimum(t[None, :], t[:, None])
    ti = t[:, None]
    active = left < ti
    czw = np.where(
        active,
        (np.clip(ti - left, 0, None) ** hp - np.clip(ti - upper, 0, None) ** hp) / hp,
        0.0,
    )
    for a in (czz, czw):
        a.setflags(write=False)
    return czz, czw


def bergomi_joint_covariance(grid: TimeGrid, H: float) -> np.ndarray:
    """Covariance of ``(Z_{t_1}, ..., Z_{t_n}, dW'_1, ..., dW'_n)``, shape ``(2n, 2n)``."""
    _check_hurst(H)
    czz, czw = _blocks(float(grid.T), int(grid.n_steps), float(H))
    n = grid.n_steps
    cov = np.empty((2 * n, 2 * n))
    cov[:n, :n] = czz
    cov[:n, n:] = czw
    cov[n:, :n] = czw.T
    cov[n:, n:] = np.eye(n) * grid.dt
    return cov


@lru_cache(maxsize=32)
def _factor(T, n_steps, H):
    czz, czw = _blocks(T, n_steps, H)
    dt = T / n_steps
    # Cholesky of the joint matrix ordered (dW', Z): the dW' block is sqrt(dt) I,
    # so only the Schur complement needs factoring.
    l21 = czw / np.sqrt(dt)
    if H == 0.5:
        l22 = np.zeros_like(czz)  # Z = W' exactly
    else:
        schur = czz - l21 @ l21.T
        schur = 0.5 * (schur + schur.T)
        try:
            l22 = np.linalg.cholesky(schur)
        except np.linalg.LinAlgError:
            jitter = 1e-12 * (np.trace(czz) + n_steps * dt) / (2 * n_steps)
            try:
                l22 = np.linalg.cholesky(schur + jitter * np.eye(n_steps))
            except np.linalg.LinAlgError as exc:
                raise CovarianceError(f"Cholesky failed for H={H}, n={n_steps}") from exc
    for a in (l21, l22):
        a.setflags(write=False)
    return l21, l22


def bergomi_factor(grid: TimeGrid, H: float):
    """Lower-triangular factor ``L`` with ``L L^T`` equal to the joint covariance
    ordered as ``(dW'_1..n, Z_{t_1..n})``."""
    _check_hurst(H)
    l21, l22 = _factor(float(grid.T), int(grid.n_steps), float(H))
    n = grid.n_steps
    L = np.zeros((2 * n, 2 * n))
    L[:n, :n] = np.eye(n) * np.sqrt(grid.dt)
    L[n:, :n] = l21
    L[n:, n:] = l22
    return L


# ---------------------------------------------------------------------------
# Path generation


def simulate_vol_and_noise(model: ModelParams, grid: TimeGrid, gaussians: np.ndarray):
    """Map standard normals to left-endpoint volatilities and price-driver increments.

    Parameters
    ----------
    model : ModelParams
    grid : TimeGrid
    gaussians : ndarray, shape (m, model.n_gaussians(n))
        I.i.d. standard normals, one row per path.  Columns ``[0, n)`` drive
        ``W'`` (for Bergomi, together with ``[2n, 3n)`` through the Cholesky
        factor); columns ``[n, 2n)`` drive ``B``.

    Returns
    -------
    sigma : ndarray, shape (m, n)
        Volatility at ``t_0, ..., t_{n-1}``.
    dW : ndarray, shape (m, n)
        Increments ``rho dW' + sqrt(1 - rho^2) dB``.
    """
    n = grid.n_steps
    g = np.atleast_2d(np.asarray(gaussians, dtype=float))
    if g.shape[1] != model.n_gaussians(n):
        raise DomainError(f"expected {model.n_gaussians(n)} gaussians per path, got {g.shape[1]}")
    m = g.shape[0]
    dt = grid.dt
    sqdt = np.sqrt(dt)
    t_left = grid.nodes[:-1]

    dWp = sqdt * g[:, :n]
    dB = sqdt * g[:, n : 2 * n]

    if isinstance(model, ConstVol):
        return np.full((m, n), model.sigma0), dB

    if isinstance(model, Sabr):
        Wp = np.zeros((m, n))
        np.cumsum(dWp[:, :-1], axis=1, out=Wp[:, 1:])
        sigma = model.sigma0 * np.exp(model.alpha * Wp - 0.5 * model.alpha**2 * t_left)
    elif isinstance(model, Bergomi):
        l21, l22 = _factor(float(grid.T), int(n), float(model.H))
        Z = g[:, :n] @ l21.T
        if model.H != 0.5:
            Z += g[:, 2 * n :] @ l22.T
        var = np.zeros((m, n))
        t = t_left[1:]
        var[:, 1:] = model.v * np.sqrt(2 * model.H) * Z[:, :-1] - 0.5 * model.v**2 * t ** (2 * model.H)
        sigma = model.sigma0 * np.exp(0.5 * var)
    else:
        raise TypeError(f"unknown model {model!r}")

    rho = model.rho
    dW = rho * dWp + np.sqrt(1.0 - rho * rho) * dB
    return sigma, dW


# ---------------------------------------------------------------------------
# Malliavin kernels


def malliavin_kernel(model: ModelParams, r, u):
    """``E(D_r^{W'} sigma_u)`` for ``0 <= r <= u``."""
    r, u = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(u, dtype=float))
    if np.any(r > u) or np.any(r < 0):
        raise DomainError("malliavin_kernel requires 0 <= r <= u")
    if isinstance(model, ConstVol):
        out = np.zeros(r.shape)
    elif isinstance(model, Sabr):
        out = np.full(r.shape, model.alpha * model.sigma0)
    elif isinstance(model, Bergomi):
        H, v = model.H, model.v
        with np.errstate(divide="ignore"):
            out = np.exp(-(v**2) * u ** (2 * H) / 8.0) * 0.5 * model.sigma0 * v * np.sqrt(2 * H) * (u - r) ** (H - 0.5)
    else:
        raise TypeError(f"unknown model {model!r}")
    return out[()] if out.ndim == 0 else out
