"""Spread of the MC skew estimator across seeds for the acceptance configurations.

Useful for judging how far a single-seed result sits from the estimator mean.
"""

import argparse

import numpy as np

from invvol.mc import OptionSpec, SimConfig, atm_skew_mc
from invvol.models import Bergomi, Sabr

CASES = {
    "sabr+": (Sabr(0.3, 0.3, 0.3), 0.0),
    "sabr-": (Sabr(0.3, 0.3, -0.3), 0.0),
    "bergomi_h07": (Bergomi(0.3, 0.5, 0.7, -0.3), 0.0),
    "bergomi_h04": (Bergomi(0.3, 0.5, 0.4, -0.3), 0.1),
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=12)
    ap.add_argument("--paths", type=int, default=500_000)
    ap.add_argument("--T", type=float, default=0.001)
    ap.add_argument("--cases", default=",".join(CASES))
    args = ap.parse_args(argv)

    spec = OptionSpec(100.0, 100.0, args.T)
    for name in args.cases.split(","):
        model, expo = CASES[name]
        vals = np.array([
            args.T**expo * atm_skew_mc(model, spec, SimConfig(args.paths, 50, s)).mean for s in range(args.seeds)
        ])
        print(f"{name:12s} mean={vals.mean():+.5f} sd={vals.std(ddof=1):.5f} seed0={vals[0]:+.5f}")


if __name__ == "__main__":
    main()
