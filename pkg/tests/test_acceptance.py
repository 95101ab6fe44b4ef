"""Acceptance criteria A1-A10, each at its stated tolerance.

Every criterion prints one ``A<n> PASS|FAIL`` line; the lines are also
collected in ``RESULTS`` and echoed in the pytest terminal summary.  Monte
Carlo criteria use seed 0 throughout.  Run directly with
``python3 tests/test_acceptance.py`` for the summary alone.
"""

import math
from pathlib import Path

import numpy as np
import pytest

from invvol.asymptotics import skew_integral, skew_limit
from invvol.black_scholes import atm_digital, atm_price_y, bs_price
from invvol.iv_solver import implied_vol_atm, turning_point
from invvol.market import SkewPoint, delta_skew, fit_power_law, load_quotes
from invvol.mc import (
    OptionSpec,
    SimConfig,
    atm_iv_mc,
    atm_skew_mc,
    fd_skew_mc,
    price_option,
    simulate_terminal_logprice,
    skew_from_terms,
)
from invvol.models import Bergomi, ConstVol, Sabr

RESULTS: list[str] = []
SEED = 0
FIX = Path(__file__).parent / "fixtures"
MATS = [0.0027, 0.0082, 0.0301, 0.0493, 0.0685, 0.1452, 0.2219, 0.3945, 0.6438, 0.8932]


def report(tag, ok, detail):
    line = f"{tag} {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)
    return ok


def atm(T):
    return OptionSpec(100.0, 100.0, T)


@pytest.mark.slow
@pytest.mark.parametrize("rho", [0.3, -0.3])
def test_a1_sabr_skew_limit(rho):
    model = Sabr(0.3, 0.3, rho)
    est = atm_skew_mc(model, atm(0.001), SimConfig(500_000, 50, SEED))
    target = 0.5 * rho * 0.3
    err = abs(est.mean - target)
    ok = report(
        f"A1[rho={rho:+.1f}]", err <= 0.010, f"skew={est.mean:.5f} se={est.stderr:.5f} target={target:+.3f} |err|={err:.5f} tol=0.010"
    )
    assert ok


@pytest.mark.slow
def test_a2_atm_level():
    models = [("SABR", lambda s: Sabr(s, 0.3, -0.3)), ("Bergomi", lambda s: Bergomi(s, 0.5, 0.7, -0.3))]
    worst, where = 0.0, ""
    for name, make in models:
        for s0 in (0.1, 0.3, 0.7, 1.4):
            iv = atm_iv_mc(make(s0), atm(0.001), SimConfig(200_000, 50, SEED))
            dev = abs(iv.mean - s0)
            if dev >= worst:
                worst, where = dev, f"{name} sigma0={s0}"
    ok = report("A2", worst <= 0.005, f"max|iv-sigma0|={worst:.5f} at {where} tol=0.005")
    assert ok


@pytest.mark.slow
def test_a3a_bergomi_smooth_skew_vanishes():
    est = atm_skew_mc(Bergomi(0.3, 0.5, 0.7, -0.3), atm(0.001), SimConfig(500_000, 50, SEED))
    ok = report("A3a", abs(est.mean) <= 0.010, f"H=0.7 skew={est.mean:.5f} se={est.stderr:.5f} tol=0.010")
    assert ok


@pytest.mark.slow
def test_a3b_bergomi_rough_scaled_skew():
    T = 0.001
    est = atm_skew_mc(Bergomi(0.3, 0.5, 0.4, -0.3), atm(T), SimConfig(500_000, 50, SEED))
    scaled = T**0.1 * est.mean
    err = abs(scaled - (-0.03923))
    ok = report("A3b", err <= 0.010, f"H=0.4 T^0.1*skew={scaled:.5f} target=-0.03923 |err|={err:.5f} tol=0.010")
    assert ok


def test_a4_quadrature_vs_closed_form():
    sabr = Sabr(0.3, 0.3, 0.3)
    e_sabr = max(abs(skew_integral(sabr, T) - 0.045) for T in (1e-4, 1e-2, 1.0))
    e_berg = 0.0
    for H in (0.1, 0.3, 0.45):
        m = Bergomi(0.3, 0.5, H, -0.3)
        lim = skew_limit(m)
        e_berg = max(e_berg, abs(1e-5**lim.scaling_exponent * skew_integral(m, 1e-5) - lim.value))
    ok = report("A4", e_sabr < 1e-12 and e_berg < 1e-3, f"sabr_err={e_sabr:.2e} (tol 1e-12) bergomi_err={e_berg:.2e} (tol 1e-3)")
    assert ok


def test_a5_inversion_round_trip():
    ys = np.linspace(0.001, 0.8 * turning_point(), 400)
    worst = 0.0
    for T in (1e-4, 1e-3, 1e-2):
        for y in ys:
            sigma = y / math.sqrt(T)
            worst = max(worst, abs(implied_vol_atm(float(atm_price_y(y)), T) - sigma))
    ok = report("A5", worst < 1e-10, f"max|iv-sigma|={worst:.2e} tol=1e-10")
    assert ok


def _partials(t, x, sigma, T=1.0, k=0.0):
    f = lambda t_, x_, s_=sigma: bs_price(tau=T - t_, x=x_, k=k, sigma=s_)  # noqa: E731
    ht, hx, hs = 1e-5, 1e-4, 1e-6
    d_t = (f(t + ht, x) - f(t - ht, x)) / (2 * ht)
    d_x = (f(t, x + hx) - f(t, x - hx)) / (2 * hx)
    d_xx = (f(t, x + hx) - 2 * f(t, x) + f(t, x - hx)) / hx**2
    d_s = (f(t, x, sigma + hs) - f(t, x, sigma - hs)) / (2 * hs)
    return d_t, d_x, d_xx, d_s


def test_a6_identities():
    pde, gvd = 0.0, 0.0
    for t in (0.0, 0.3, 0.6, 0.8):
        for x in (-0.3, -0.1, 0.0, 0.1, 0.3):
            for s in (0.2, 0.35, 0.5, 0.8, 1.0):
                d_t, d_x, d_xx, d_s = _partials(t, x, s)
                terms = (d_t, 0.5 * s * s * d_x, 0.5 * s * s * d_xx)
                pde = max(pde, abs(terms[0] - terms[1] + terms[2]) / max(map(abs, terms)))
                lhs, rhs = d_s / (s * (1.0 - t)), d_xx - d_x
                gvd = max(gvd, abs(lhs - rhs) / max(abs(lhs), abs(rhs)))
    ok = report("A6", pde < 1e-5 and gvd < 1e-5, f"pde_rel={pde:.2e} gvd_rel={gvd:.2e} tol=1e-5 (100 points)")
    assert ok


def test_a7_quanto_scaling():
    model, cfg = Sabr(0.3, 0.3, -0.3), SimConfig(200_000, 50, SEED)
    inv = price_option(model, atm(0.001), cfg)
    q = price_option(model, OptionSpec(100.0, 100.0, 0.001, R=2.5), cfg)
    ok = report("A7", q.mean == 2.5 * inv.mean, f"quanto={q.mean!r} 2.5*inverse={2.5 * inv.mean!r}")
    assert ok


def test_a8_power_law_fit():
    worst = 0.0
    for c0, a0 in [(0.05, 0.3), (1.0, -0.5), (0.003, 0.5), (2.0, 0.0), (0.2, -0.123)]:
        fit = fit_power_law([SkewPoint(T, c0 * T**a0) for T in MATS])
        worst = max(worst, abs(fit.alpha - a0), abs(fit.c - c0) / c0)
    points = [delta_skew(r) for r in load_quotes(FIX / "anchored_skew.csv")]
    fit = fit_power_law(points)
    ok_fix = abs(fit.h_implied - 0.8) < 1e-10 and abs(points[0].skew - 0.014) < 1e-12
    ok = report(
        "A8",
        worst < 1e-10 and ok_fix,
        f"recovery_err={worst:.1e} fixture h={fit.h_implied:.12f} shortest_skew={points[0].skew:.12f}",
    )
    assert ok


@pytest.mark.slow
def test_a9_constvol_zero_skew():
    T, s = 0.01, 0.3
    exact = skew_from_terms(T, s, float(atm_digital(T, s)))
    est = atm_skew_mc(ConstVol(s), atm(T), SimConfig(1_000_000, 50, SEED))
    ok = report(
        "A9",
        exact == 0.0 and abs(est.mean) < 4 * est.stderr,
        f"closed_form={exact!r} mc={est.mean:.5f} se={est.stderr:.5f}",
    )
    assert ok


@pytest.mark.slow
def test_a10_fd_equivalence():
    model, spec = Sabr(0.3, 0.3, -0.3), atm(0.01)
    cfg = SimConfig(1_000_000, 50, SEED)
    paths = simulate_terminal_logprice(model, spec, cfg)
    a = atm_skew_mc(model, spec, cfg, paths)
    b = fd_skew_mc(model, spec, cfg, h=0.01, paths=paths)
    comb = math.hypot(a.stderr, b.stderr)
    diff = abs(a.mean - b.mean)
    ok = report("A10", diff <= 3 * comb, f"malliavin={a.mean:.5f} fd={b.mean:.5f} |diff|={diff:.5f} 3*se={3 * comb:.5f}")
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
