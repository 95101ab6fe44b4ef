"""Delta-bucketed quote ingestion and power-law fits of the ATM skew term structure.

Quote files are CSV with header ``maturity_years,iv_put_d25,iv_call_d25,iv_call_d50``.
The skew proxy per maturity is the normalized risk reversal
``(iv_put_d25 - iv_call_d25) / iv_call_d50``.  Note that this is not literally
a log-strike derivative; it is used verbatim as the market skew estimate.
"""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .errors import InsufficientData, QuoteParseError, QuoteValidationError, SignError

HEADER = ("maturity_years", "iv_put_d25", "iv_call_d25", "iv_call_d50")


@dataclass(frozen=True)
class QuoteRow:
    maturity_years: float
    iv_put_d25: float
    iv_call_d25: float
    iv_call_d50: float


@dataclass(frozen=True)
class SkewPoint:
    maturity_years: float
    skew: float


@dataclass(frozen=True)
class PowerLawFit:
    c: float
    alpha: float
    h_implied: float
    r_squared: float

    def to_dict(self):
        return asdict(self)


def load_quotes(path) -> list[QuoteRow]:
    """Parse and validate a quote file; rows come back sorted by maturity."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise QuoteParseError(f"{path}: not UTF-8") from exc
    reader = csv.reader(text.splitlines())
    try:
        header = next(reader)
    except StopIteration:
        raise QuoteParseError(f"{path}: empty file") from None
    if tuple(h.strip() for h in header) != HEADER:
        raise QuoteParseError(f"expected header {','.join(HEADER)}", row=1)

    rows = []
    for lineno, rec in enumerate(reader, start=2):
        if not rec or all(not f.strip() for f in rec):
            continue
        if len(rec) != len(HEADER):
            raise QuoteParseError(f"expected {len(HEADER)} fields, got {len(rec)}", row=lineno)
        try:
            vals = [float(f) for f in rec]
        except ValueError as exc:
            raise QuoteParseError(str(exc), row=lineno) from None
        if not all(math.isfinite(v) for v in vals):
            raise QuoteParseError("non-finite value", row=lineno)
        if any(v <= 0 for v in vals):
            raise QuoteValidationError(f"row {lineno}: all values must be > 0")
        rows.append(QuoteRow(*vals))
    if not rows:
        raise QuoteParseError(f"{path}: no data rows")

    rows.sort(key=lambda r: r.maturity_years)
    mats = [r.maturity_years for r in rows]
    if len(set(mats)) != len(mats):
        raise QuoteValidationError("duplicate maturities")
    return rows


def delta_skew(row: QuoteRow) -> SkewPoint:
    if row.iv_call_d50 == 0:
        raise ZeroDivisionError("iv_call_d50 is zero")
    return SkewPoint(row.maturity_years, (row.iv_put_d25 - row.iv_call_d25) / row.iv_call_d50)


def fit_power_law(points) -> PowerLawFit:
    """OLS of ``ln|skew|`` on ``ln T``: ``skew ~ c T^alpha`` and ``H = alpha + 1/2``."""
    points = sorted(points, key=lambda p: p.maturity_years)
    if len(points) < 3:
        raise InsufficientData(f"need at least 3 points, got {len(points)}")
    T = np.array([p.maturity_years for p in points], dtype=float)
    skew = np.array([p.skew for p in points], dtype=float)
    if np.any(skew == 0) or not (np.all(skew > 0) or np.all(skew < 0)):
        raise SignError("skews must be nonzero and share one sign")
    if np.any(T <= 0):
        raise InsufficientData("maturities must be > 0")

    lx = np.log(T)
    ly = np.log(np.abs(skew))
    xm, ym = lx.mean(), ly.mean()
    sxx = np.sum((lx - xm) ** 2)
    if sxx == 0:
        raise InsufficientData("maturities must not all coincide")
    slope = float(np.sum((lx - xm) * (ly - ym)) / sxx)
    intercept = float(ym - slope * xm)
    resid = ly - (intercept + slope * lx)
    sst = float(np.sum((ly - ym) ** 2))
    ssr = float(np.sum(resid**2))
    # a flat term structure leaves only rounding noise in sst
    noise = ly.size * (64 * np.finfo(float).eps * max(1.0, abs(ym))) ** 2
    if sst <= noise:
        r2 = 1.0 if ssr <= noise else 0.0
    else:
        r2 = max(0.0, 1.0 - ssr / sst)
    return PowerLawFit(
        c=float(np.sign(skew[0]) * np.exp(intercept)),
        alpha=slope,
        h_implied=slope + 0.5,
        r_squared=r2,
    )
