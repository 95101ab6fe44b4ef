"""Monte Carlo pricing of Inverse and Quanto-Inverse calls.

Paths are generated in fixed-size chunks.  Chunk ``c`` draws its normals from
a Philox counter-based generator keyed by ``(seed, c)``, so results do not
depend on how chunks are spread over threads.  With antithetic sampling each
base path is paired with the path driven by the negated normals (all drivers
negated) and statistics are taken over pair averages.

The ATM skew estimator avoids finite differences in strike::

    dI/dk = (-dBS/dk(I) - E[e^{k* - X_T} 1{X_T >= k*}]) / dBS/dsigma(I)

with ``I`` the Monte Carlo ATM implied vol.  Price, digital term and implied
vol are computed from one set of simulated terminals.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import black_scholes as bs
from .errors import DegenerateVega, DomainError
from .iv_solver import implied_vol, implied_vol_atm
from .models import N_STEPS_DEFAULT, ModelParams, TimeGrid, simulate_vol_and_noise

CHUNK = 1 << 14
VEGA_FLOOR = 1e-14
_U64 = (1 << 64) - 1


@dataclass(frozen=True)
class OptionSpec:
    """Inverse call on spot ``S0`` with strike ``K``; Quanto-Inverse when ``R`` is set."""

    S0: float
    K: float
    T: float
    R: float | None = None

    def __post_init__(self):
        for name in ("S0", "K", "T"):
            val = getattr(self, name)
            if not (np.isfinite(val) and val > 0):
                raise DomainError(f"{name} must be > 0, got {val}")
        if self.R is not None and not (np.isfinite(self.R) and self.R > 0):
            raise DomainError(f"R must be > 0, got {self.R}")

    @property
    def scale(self) -> float:
        return 1.0 if self.R is None else float(self.R)

    @property
    def x0(self) -> float:
        return float(np.log(self.S0))

    @property
    def k(self) -> float:
        return float(np.log(self.K))

    @property
    def is_atm(self) -> bool:
        return abs(self.k - self.x0) <= 1e-14 * max(1.0, abs(self.x0))


@dataclass(frozen=True)
class SimConfig:
    n_paths: int = 200_000
    n_steps: int = N_STEPS_DEFAULT
    seed: int = 0
    antithetic: bool = True

    def __post_init__(self):
        if int(self.n_paths) != self.n_paths or self.n_paths < 2:
            raise DomainError("n_paths must be an integer >= 2")
        if self.antithetic and self.n_paths % 2:
            raise DomainError("n_paths must be even with antithetic sampling")
        if int(self.n_steps) != self.n_steps or self.n_steps < 1:
            raise DomainError("n_steps must be an integer >= 1")
        if not 0 <= int(self.seed) <= _U64:
            raise DomainError("seed must be an unsigned 64-bit integer")

    @property
    def n_base(self) -> int:
        return self.n_paths // 2 if self.antithetic else self.n_paths


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    n: int


@dataclass(frozen=True)
class Terminals:
    """Simulated terminal log-prices; ``x_anti[i]`` mirrors ``x[i]``."""

    x: np.ndarray
    x_anti: np.ndarray | None

    def samples(self, fn):
        """Per-sample values of ``fn(X_T)``, pair-averaged when antithetic."""
        if self.x_anti is None:
            return fn(self.x)
        return 0.5 * (fn(self.x) + fn(self.x_anti))


def n_workers() -> int:
    cap = os.environ.get("INVVOL_THREADS")
    n = os.cpu_count() or 1
    if cap:
        n = min(n, max(1, int(cap)))
    return n


def chunk_normals(seed: int, chunk: int, shape) -> np.ndarray:
    gen = np.random.Generator(np.random.Philox(key=(int(chunk) << 64) | (int(seed) & _U64)))
    return gen.standard_normal(shape)


def _terminal(model, grid, x0, g):
    sigma, dW = simulate_vol_and_noise(model, grid, g)
    return x0 + np.sum(sigma * dW - 0.5 * grid.dt * sigma * sigma, axis=1)


def simulate_terminal_logprice(model: ModelParams, spec: OptionSpec, cfg: SimConfig) -> Terminals:
    """Log-Euler terminals ``X_T`` (and antithetic mirrors) starting from ``ln S0``."""
    grid = TimeGrid(spec.T, cfg.n_steps)
    d = model.n_gaussians(cfg.n_steps)
    x0 = spec.x0
    n = cfg.n_base
    starts = list(range(0, n, CHUNK))

    def run(c):
        m = min(CHUNK, n - starts[c])
        g = chunk_normals(cfg.seed, c, (m, d))
        xa = _terminal(model, grid, x0, -g) if cfg.antithetic else None
        return _terminal(model, grid, x0, g), xa

    workers = min(n_workers(), len(starts))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, range(len(starts))))
    else:
        parts = [run(c) for c in range(len(starts))]
    x = np.concatenate([p[0] for p in parts])
    xa = np.concatenate([p[1] for p in parts]) if cfg.antithetic else None
    return Terminals(x, xa)


def _estimate(samples) -> McEstimate:
    n = samples.shape[0]
    se = float(samples.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    return McEstimate(float(samples.mean()), se, n)


def _paths(model, spec, cfg, paths):
    return simulate_terminal_logprice(model, spec, cfg) if paths is None else paths


def _payoff_samples(paths: Terminals, k: float):
    return paths.samples(lambda x: bs.payoff(x, k))


def _digital_samples(paths: Terminals, k: float):
    return paths.samples(lambda x: np.where(x >= k, np.exp(np.minimum(k - x, 0.0)), 0.0))


def price_option(model: ModelParams, spec: OptionSpec, cfg: SimConfig, paths: Terminals | None = None) -> McEstimate:
    """Antithetic MC value of the (Quanto-)Inverse call, in units of the underlying
    (times ``R`` for Quanto-Inverse)."""
    est = _estimate(_payoff_samples(_paths(model, spec, cfg, paths), spec.k))
    if spec.R is None:
        return est
    return McEstimate(spec.scale * est.mean, spec.scale * est.stderr, est.n)


def _require_atm(spec):
    if not spec.is_atm:
        raise DomainError("ATM estimator requires K == S0")


def digital_term(model: ModelParams, spec: OptionSpec, cfg: SimConfig, paths: Terminals | None = None) -> McEstimate:
    """MC estimate of ``E[e^{k* - X_T} 1{X_T >= k*}]`` with ``k* = ln S0``."""
    _require_atm(spec)
    return _estimate(_digital_samples(_paths(model, spec, cfg, paths), spec.x0))


def atm_iv_mc(model: ModelParams, spec: OptionSpec, cfg: SimConfig, paths: Terminals | None = None) -> McEstimate:
    """ATM implied vol of the MC price; stderr by the delta method (1 / vega)."""
    _require_atm(spec)
    price = price_option(model, spec, cfg, paths)
    iv = implied_vol_atm(price.mean / spec.scale, spec.T)
    vega = float(bs.atm_vega(spec.T, iv))
    if vega < VEGA_FLOOR:
        raise DegenerateVega(f"ATM vega {vega:.3g} below {VEGA_FLOOR}")
    return McEstimate(iv, price.stderr / spec.scale / vega, price.n)


def skew_from_terms(T: float, iv: float, digital: float) -> float:
    """Assemble the ATM skew from the implied vol and the digital expectation."""
    vega = float(bs.atm_vega(T, iv))
    if vega < VEGA_FLOOR:
        raise DegenerateVega(f"ATM vega {vega:.3g} below {VEGA_FLOOR}")
    return float((-bs.atm_dk(T, iv) - digital) / vega)


def delta_method(fn, samples: np.ndarray, rel_step: float = 1e-6) -> McEstimate:
    """Value and stderr of ``fn(*means)`` for i.i.d. rows of ``samples``.

    The gradient is taken by central differences.
    """
    n, dim = samples.shape
    mu = samples.mean(axis=0)
    cov = np.atleast_2d(np.cov(samples, rowvar=False)) / n
    value = fn(*mu)
    grad = np.empty(dim)
    for j in range(dim):
        h = rel_step * max(abs(mu[j]), np.sqrt(cov[j, j]), 1e-12)
        up, dn = mu.copy(), mu.copy()
        up[j] += h
        dn[j] -= h
        grad[j] = (fn(*up) - fn(*dn)) / (2 * h)
    return McEstimate(float(value), float(np.sqrt(max(grad @ cov @ grad, 0.0))), n)


def atm_skew_mc(model: ModelParams, spec: OptionSpec, cfg: SimConfig, paths: Terminals | None = None) -> McEstimate:
    """ATM implied-vol skew ``dI/dk`` from one simulation pass."""
    _require_atm(spec)
    paths = _paths(model, spec, cfg, paths)
    T = spec.T
    samples = np.column_stack([_payoff_samples(paths, spec.k), _digital_samples(paths, spec.k)])

    def fn(price, digital):
        return skew_from_terms(T, implied_vol_atm(price, T), digital)

    return delta_method(fn, samples)


def fd_skew_mc(
    model: ModelParams,
    spec: OptionSpec,
    cfg: SimConfig,
    h: float = 0.01,
    paths: Terminals | None = None,
) -> McEstimate:
    """Central-difference skew ``(I(k*+h) - I(k*-h)) / 2h`` on common paths."""
    _require_atm(spec)
    paths = _paths(model, spec, cfg, paths)
    x, T = spec.x0, spec.T
    samples = np.column_stack([_payoff_samples(paths, x + h), _payoff_samples(paths, x - h)])

    def fn(up, dn):
        return (implied_vol(up, T, x, x + h) - implied_vol(dn, T, x, x - h)) / (2 * h)

    return delta_method(fn, samples)
