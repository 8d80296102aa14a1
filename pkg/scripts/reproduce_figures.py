#!/usr/bin/env python3
"""Rebuild every canned figure table (and optionally plots) in one go.

Each preset is deterministic, so the CSVs this writes are byte-identical
across runs; rebuild times per figure are printed as a rough progress bar.
The placement scan (fig4b) dominates the cost -- expect a couple of minutes
total with a handful of workers.

Usage:
    python scripts/reproduce_figures.py --out figures --formats csv,svg
    python scripts/reproduce_figures.py --only fig3b,fig3c --workers 8
"""

import argparse
import sys
import time
from pathlib import Path

from qmirror.presets import PRESET_IDS, PRESETS, run_preset


def parse_args():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--out", type=Path, default=Path("figures"), help="output directory"
    )
    parser.add_argument(
        "--formats",
        default="csv",
        help="comma-separated output formats (csv, json, svg)",
    )
    parser.add_argument(
        "--only",
        default=None,
        help="comma-separated preset ids (default: all of them)",
    )
    parser.add_argument(
        "--workers", type=int, default=4, help="worker processes per preset"
    )
    return parser.parse_args()


def main():
    args = parse_args()
    formats = tuple(f.strip() for f in args.formats.split(",") if f.strip())
    wanted = (
        tuple(p.strip() for p in args.only.split(",") if p.strip())
        if args.only
        else PRESET_IDS
    )
    unknown = [p for p in wanted if p not in PRESETS]
    if unknown:
        print(f"unknown preset ids: {', '.join(unknown)}", file=sys.stderr)
        print(f"available: {', '.join(PRESET_IDS)}", file=sys.stderr)
        return 1

    total = time.perf_counter()
    for preset_id in wanted:
        started = time.perf_counter()
        paths = run_preset(
            preset_id, out_dir=args.out, formats=formats, max_workers=args.workers
        )
        elapsed = time.perf_counter() - started
        names = ", ".join(p.name for p in paths)
        print(f"{preset_id:6s} {elapsed:6.1f}s  {PRESETS[preset_id].description}")
        print(f"       -> {names}")
    print(f"done in {time.perf_counter() - total:.1f}s, output in {args.out}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
