#!/usr/bin/env python3
"""Cross-check the delay solver against the field-mode oracle.

Runs the five-point validation battery at one or more oracle resolutions
and prints a plain-text table of amplitude deviations and norm drift.  The
dominant error is the switch-on ringing of the truncated band, which falls
off like 1/K; quadrupling the bandwidth (with the mode density and step
scaled along) should shrink every deviation by roughly 4x, and watching
that happen is the point of the --fine run.

Usage:
    python scripts/validate_against_oracle.py            # default resolution
    python scripts/validate_against_oracle.py --fine     # add a K=100 pass
    python scripts/validate_against_oracle.py --quick    # coarse smoke run
    python scripts/validate_against_oracle.py --budget 5e-3   # exit 1 if worse
"""

import argparse
import sys
import time

import numpy as np

from qmirror import simulate
from qmirror.kspace import OracleSettings, compare, integrate_kspace, oracle_validation_configs

#: (name, bandwidth_K, n_modes, step_h) resolution ladders.
LEVELS = {
    "quick": ("K=10", 10.0, 1001, 1e-3),
    "default": ("K=40", 40.0, 4001, 2e-4),
    "fine": ("K=100", 100.0, 10001, 8e-5),
}


def parse_args():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--horizon", type=float, default=8.0, help="run length")
    parser.add_argument(
        "--quick", action="store_true", help="coarse resolution only (fast)"
    )
    parser.add_argument(
        "--fine", action="store_true", help="also run the K=100 resolution"
    )
    parser.add_argument(
        "--budget",
        type=float,
        default=None,
        help="exit nonzero when the worst deviation exceeds this",
    )
    return parser.parse_args()


def main():
    args = parse_args()
    if args.quick:
        levels = [LEVELS["quick"]]
    elif args.fine:
        levels = [LEVELS["default"], LEVELS["fine"]]
    else:
        levels = [LEVELS["default"]]

    header = f"{'config':35s} {'band':6s} {'max|d_alpha|':>12s} {'max|d_beta|':>12s} {'norm drift':>10s} {'secs':>6s}"
    print(header)
    print("-" * len(header))
    worst = 0.0
    for name, bandwidth, n_modes, step in levels:
        settings = OracleSettings(
            horizon_T=args.horizon,
            bandwidth_K=bandwidth,
            n_modes=n_modes,
            step_h=step,
        )
        for label, config in oracle_validation_configs():
            started = time.perf_counter()
            traj = simulate(config, horizon_T=args.horizon)
            oracle, norms = integrate_kspace(config, settings)
            report = compare(traj, oracle)
            drift = float(np.max(np.abs(norms - 1.0)))
            elapsed = time.perf_counter() - started
            worst = max(worst, report.max_dev)
            print(
                f"{label:35s} {name:6s} {report.max_dev_alpha:12.3e} "
                f"{report.max_dev_beta:12.3e} {drift:10.1e} {elapsed:6.1f}"
            )
    print(f"worst deviation: {worst:.3e}")
    if args.budget is not None and worst > args.budget:
        print(f"exceeds budget {args.budget:g}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
