"""Command-line front end.

Exit codes: 0 success, 2 configuration or input data, 3 numerical failure,
4 mixed-sign skews in a market fit.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from dataclasses import replace

from . import asymptotics, market
from .config import ConfigError, build, merge, read_manifest
from .errors import InsufficientData, InvVolError, QuoteParseError, QuoteValidationError, SignError
from .mc import atm_iv_mc, atm_skew_mc, price_option, simulate_terminal_logprice

EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_SIGN = 4

DEFAULT_SIGMA0_GRID = tuple(round(0.1 * i, 1) for i in range(1, 15))
DEFAULT_MATURITIES = (0.0005, 0.001, 0.002, 0.005, 0.01)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def _float_list(text):
    items = [t for t in (s.strip() for s in text.split(",")) if t]
    return [float(t) for t in items]


def _common(p):
    p.add_argument("--config", help="JSON run manifest")
    p.add_argument("--seed", type=int)
    p.add_argument("--paths", type=int)
    p.add_argument("--steps", type=int)
    p.add_argument("--no-antithetic", dest="antithetic", action="store_const", const=False)
    p.add_argument("--model", choices=("sabr", "bergomi", "constvol"))
    for name in ("sigma0", "alpha", "rho", "v", "hurst", "spot", "strike", "maturity"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--rate-R", dest="rate_R", type=float)
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("--out", help="write output here instead of stdout")


def make_parser():
    parser = _Parser(prog="invvol", description="Inverse option implied-volatility toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("price", help="MC price of an (Quanto-)Inverse call")
    _common(p)

    p = sub.add_parser("iv-level", help="ATM implied vol across a sigma0 grid")
    _common(p)
    p.add_argument("--grid", type=_float_list, help="comma-separated sigma0 values")

    p = sub.add_parser("skew", help="ATM skew estimate against its short-maturity limit")
    _common(p)
    p.add_argument("--scaled", action="store_true", help="multiply by T^max(1/2-H,0)")

    p = sub.add_parser("term-structure", help="ATM skew per maturity")
    _common(p)
    p.add_argument("--maturities", type=_float_list, help="comma-separated maturities in years")
    p.add_argument("--scaled", action="store_true")

    p = sub.add_parser("fit-market", help="power-law fit of the market delta skew")
    p.add_argument("quotes", help="CSV quote file")
    p.add_argument("--format", choices=("json",), default="json")
    p.add_argument("--out")
    return parser


def _run_config(args):
    manifest = read_manifest(args.config) if args.config else None
    merged = merge(
        manifest,
        {
            "model.kind": args.model,
            **{f"model.{k}": getattr(args, k) for k in ("sigma0", "alpha", "rho", "v", "hurst")},
            "option.spot": args.spot,
            "option.strike": args.strike,
            "option.maturity": args.maturity,
            "option.rate_R": args.rate_R,
            "sim.paths": args.paths,
            "sim.steps": args.steps,
            "sim.seed": args.seed,
            "sim.antithetic": args.antithetic,
            "format": args.format,
        },
    )
    return build(merged)


def _render(rows, fmt, columns):
    if fmt == "json":
        payload = rows[0] if len(rows) == 1 and columns is None else rows
        return json.dumps(payload) + "\n"
    buf = io.StringIO()
    cols = columns or list(rows[0])
    buf.write(",".join(cols) + "\n")
    for r in rows:
        buf.write(",".join(repr(float(r[c])) if r[c] is not None else "" for c in cols) + "\n")
    return buf.getvalue()


def cmd_price(cfg):
    est = price_option(cfg.model, cfg.option, cfg.sim)
    return [{"price": est.mean, "stderr": est.stderr, "n": est.n}], None


def cmd_iv_level(cfg, grid):
    if not grid or any(not s0 > 0 for s0 in grid):
        raise ConfigError("sigma0 grid must be non-empty and positive")
    rows = []
    for s0 in grid:
        model = replace(cfg.model, sigma0=s0)
        iv = atm_iv_mc(model, cfg.option, cfg.sim)
        rows.append(
            {"sigma0": s0, "iv_mc": iv.mean, "iv_stderr": iv.stderr, "iv_limit": asymptotics.atm_level_limit(model)}
        )
    return rows, ["sigma0", "iv_mc", "iv_stderr", "iv_limit"]


def _skew_row(model, option, sim, scaled):
    paths = simulate_terminal_logprice(model, option, sim)
    est = atm_skew_mc(model, option, sim, paths)
    lim = asymptotics.skew_limit(model)
    factor = option.T**lim.scaling_exponent if scaled else 1.0
    return {
        "T": option.T,
        "skew_mc": factor * est.mean,
        "skew_stderr": factor * est.stderr,
        "skew_limit": lim.value,
        "scaling_exponent": lim.scaling_exponent,
        "scaled": scaled,
    }


def cmd_skew(cfg, scaled):
    return [_skew_row(cfg.model, cfg.option, cfg.sim, scaled)], None


def cmd_term_structure(cfg, maturities, scaled):
    if not maturities:
        raise ConfigError("maturity list is empty")
    if any(not T > 0 for T in maturities):
        raise ConfigError("maturities must be > 0")
    rows = []
    for T in maturities:
        option = replace(cfg.option, T=T)
        r = _skew_row(cfg.model, option, cfg.sim, scaled)
        rows.append({"T": T, "skew_mc": r["skew_mc"], "skew_stderr": r["skew_stderr"]})
    return rows, ["T", "skew_mc", "skew_stderr"]


def cmd_fit_market(path):
    quotes = market.load_quotes(path)
    points = [market.delta_skew(q) for q in quotes]
    fit = market.fit_power_law(points)
    out = fit.to_dict()
    out["sigma0_estimate"] = quotes[0].iv_call_d50
    out["shortest_maturity"] = points[0].maturity_years
    out["shortest_skew"] = points[0].skew
    out["n_points"] = len(points)
    return [out], None


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "fit-market":
            rows, cols = cmd_fit_market(args.quotes)
            _emit(_render(rows, "json", cols), args.out)
            return 0
        cfg = _run_config(args)
        default_fmt = "csv" if args.command in ("iv-level", "term-structure") else "json"
        fmt = cfg.output_format or default_fmt
        if args.command == "price":
            rows, cols = cmd_price(cfg)
        elif args.command == "iv-level":
            rows, cols = cmd_iv_level(cfg, args.grid if args.grid is not None else DEFAULT_SIGMA0_GRID)
        elif args.command == "skew":
            rows, cols = cmd_skew(cfg, args.scaled)
        else:
            mats = args.maturities if args.maturities is not None else DEFAULT_MATURITIES
            rows, cols = cmd_term_structure(cfg, mats, args.scaled)
        if not rows:
            raise ConfigError("nothing to compute")
        _emit(_render(rows, fmt, cols), args.out)
        return 0
    except (ConfigError, QuoteParseError, QuoteValidationError, InsufficientData, ZeroDivisionError) as exc:
        print(f"invvol: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SignError as exc:
        print(f"invvol: {exc}", file=sys.stderr)
        return EXIT_SIGN
    except (InvVolError, ArithmeticError, ValueError) as exc:
        print(f"invvol: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"invvol: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
