"""Command-line front end.

Subcommands: ``simulate`` (one trajectory), ``sweep`` (metric grids),
``preset`` (canned figures), ``oracle-check`` (delay solver vs field-mode
integrator), ``analyze`` (metrics and reduced-dynamics diagnostics for one
configuration).

Exit codes: 0 on success, 1 for configuration problems (bad flags, bad
config file, unwritable output), 2 for numerical failures.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from .analysis import (
    build_matrix_A,
    concurrence_series,
    death_time,
    effective_params,
    equilibrium_ratio,
    find_peak,
    trajectory_metrics,
)
from .config import ConfigError, SystemConfig, load_config
from .dde import IntegrationError, simulate
from .kspace import OracleSettings, compare, integrate_kspace, oracle_validation_configs
from .presets import PRESET_IDS, run_preset
from .sweep import AxisSpec, SweepSpec, run_sweep
from .tableio import FORMATS, PlotSpec, ResultTable, emit


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with the config-error code."""

    def error(self, message: str) -> None:  # pragma: no cover - argparse plumbing
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="qmirror", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: _Parser) -> None:
        p.add_argument("--config", type=Path, default=None, help="config file path")
        p.add_argument("--out", type=Path, default=Path("."), help="output directory")
        p.add_argument(
            "--format", choices=FORMATS, default="csv", help="output format"
        )
        p.add_argument("--horizon", type=float, default=None, help="horizon (1/gamma)")
        p.add_argument("--step", type=float, default=None, help="integration step")
        p.add_argument("--threads", type=int, default=1, help="worker processes")

    p = sub.add_parser("simulate", help="integrate one trajectory")
    common(p)

    p = sub.add_parser("sweep", help="sweep metrics over a parameter grid")
    common(p)
    p.add_argument(
        "--axis",
        action="append",
        required=True,
        metavar="PARAM:MIN:MAX:COUNT[:SCALE]",
        help="sweep axis (repeat for a second axis)",
    )
    p.add_argument(
        "--metric",
        action="append",
        default=None,
        help="metric to record (repeatable; default c_max tau_peak t_death)",
    )

    p = sub.add_parser("preset", help="run a canned figure preset")
    common(p)
    p.add_argument("preset_id", choices=PRESET_IDS, help="which figure to build")

    p = sub.add_parser("oracle-check", help="compare delay solver with field modes")
    common(p)
    p.add_argument("--bandwidth-K", type=float, default=40.0, help="band half-width")
    p.add_argument("--n-modes", type=int, default=4001, help="mode count (odd)")
    p.add_argument("--oracle-step", type=float, default=2e-4, help="oracle RK4 step")
    p.add_argument(
        "--all", action="store_true", help="run the whole validation battery"
    )

    p = sub.add_parser("analyze", help="metrics and diagnostics for one config")
    common(p)
    p.add_argument("--eps", type=float, default=1e-3, help="death-time threshold")
    return parser


def _load(args: argparse.Namespace) -> tuple:
    """Resolve (config, horizon, step) from flags and optional config file."""
    horizon = args.horizon
    step = args.step
    if args.config is not None:
        loaded = load_config(args.config)
        config = loaded.system
        if horizon is None:
            horizon = loaded.horizon_T
        if step is None:
            step = loaded.step_h
    else:
        config = SystemConfig(gamma_L=0.5, gamma_R=0.5)
    if horizon is None:
        horizon = 40.0
    return config, horizon, step


def _trajectory_table(traj) -> ResultTable:
    series = concurrence_series(traj)
    table = ResultTable(
        columns=["t", "alpha_re", "alpha_im", "beta_re", "beta_im", "concurrence", "norm"]
    )
    norms = np.abs(traj.alpha) ** 2 + np.abs(traj.beta) ** 2
    for i, t in enumerate(traj.times):
        table.append(
            (
                float(t),
                float(traj.alpha[i].real),
                float(traj.alpha[i].imag),
                float(traj.beta[i].real),
                float(traj.beta[i].imag),
                float(series[i]),
                float(norms[i]),
            )
        )
    return table


def _cmd_simulate(args: argparse.Namespace) -> int:
    config, horizon, step = _load(args)
    traj = simulate(config, horizon_T=horizon, step_h=step)
    metrics = trajectory_metrics(traj, config=config)
    args.out.mkdir(parents=True, exist_ok=True)
    plot = PlotSpec(kind="line", x="t", y="concurrence", title="trajectory")
    path = emit(
        _trajectory_table(traj), args.format, args.out / f"trajectory.{args.format}",
        plot=plot,
    )
    print(f"c_max={metrics.c_max:.6g} tau_peak={metrics.tau_peak:.6g}")
    print(f"t_death={'none' if metrics.t_death is None else f'{metrics.t_death:.6g}'}")
    print(f"quasi_steady={'true' if metrics.quasi_steady else 'false'}")
    print(f"wrote {path}")
    return 0


def _parse_axis(text: str) -> AxisSpec:
    parts = text.split(":")
    if len(parts) not in (4, 5):
        raise ConfigError(
            f"bad axis {text!r}; expected PARAM:MIN:MAX:COUNT[:SCALE]"
        )
    name, lo, hi, count = parts[:4]
    scale = parts[4] if len(parts) == 5 else "linear"
    try:
        return AxisSpec(name, float(lo), float(hi), int(count), scale=scale)
    except ValueError as exc:
        raise ConfigError(f"bad axis {text!r}: {exc}") from None


def _sweep_plot(spec: SweepSpec) -> PlotSpec:
    if spec.wants_trajectory:
        return PlotSpec(
            kind="line", x="t", y="concurrence", series=spec.axes[0].parameter
        )
    metric = spec.scalar_metrics[0]
    if len(spec.axes) == 2:
        return PlotSpec(
            kind="heatmap",
            x=spec.axes[0].parameter,
            y=spec.axes[1].parameter,
            value=metric,
            logx=spec.axes[0].scale == "log",
            logy=spec.axes[1].scale == "log",
        )
    return PlotSpec(
        kind="line",
        x=spec.axes[0].parameter,
        y=metric,
        logx=spec.axes[0].scale == "log",
    )


def _cmd_sweep(args: argparse.Namespace) -> int:
    config, horizon, step = _load(args)
    axes = tuple(_parse_axis(text) for text in args.axis)
    metrics = tuple(args.metric) if args.metric else ("c_max", "tau_peak", "t_death")
    spec = SweepSpec(
        base=config, axes=axes, metrics=metrics, horizon_T=horizon, step_h=step
    )
    table = run_sweep(spec, max_workers=args.threads)
    args.out.mkdir(parents=True, exist_ok=True)
    path = emit(
        table, args.format, args.out / f"sweep.{args.format}", plot=_sweep_plot(spec)
    )
    failed = sum(1 for status in table.column("status") if status != "ok")
    print(f"{len(table)} rows ({failed} failed points), wrote {path}")
    return 0


def _cmd_preset(args: argparse.Namespace) -> int:
    formats = ("csv",) if args.format == "csv" else ("csv", args.format)
    paths = run_preset(
        args.preset_id, out_dir=args.out, formats=formats, max_workers=args.threads
    )
    for path in paths:
        print(f"wrote {path}")
    return 0


def _cmd_oracle_check(args: argparse.Namespace) -> int:
    settings = OracleSettings(
        horizon_T=args.horizon if args.horizon is not None else 8.0,
        bandwidth_K=args.bandwidth_K,
        n_modes=args.n_modes,
        step_h=args.oracle_step,
    )
    if args.all and args.config is None:
        cases = oracle_validation_configs()
    elif args.config is not None:
        config, _, _ = _load(args)
        cases = [(str(args.config), config)]
    else:
        cases = oracle_validation_configs()[:1]
    worst = 0.0
    for label, config in cases:
        traj = simulate(config, horizon_T=settings.horizon_T, step_h=args.step)
        oracle, norms = integrate_kspace(config, settings)
        report = compare(traj, oracle)
        drift = float(np.max(np.abs(norms - 1.0)))
        worst = max(worst, report.max_dev)
        print(
            f"{label}: max|d_alpha|={report.max_dev_alpha:.3e} "
            f"max|d_beta|={report.max_dev_beta:.3e} norm_drift={drift:.3e}"
        )
    print(f"worst deviation {worst:.3e}")
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    config, horizon, step = _load(args)
    traj = simulate(config, horizon_T=horizon, step_h=step)
    metrics = trajectory_metrics(traj, config=config, eps=args.eps)
    matrix = build_matrix_A(config)
    params = effective_params(config)
    ratio = equilibrium_ratio(matrix)
    print(f"c_max={metrics.c_max:.6g}")
    print(f"tau_peak={metrics.tau_peak:.6g}")
    print(f"t_death={'none' if metrics.t_death is None else f'{metrics.t_death:.6g}'}")
    print(f"quasi_steady={'true' if metrics.quasi_steady else 'false'}")
    print(f"abs_det_A={abs(matrix.det):.6g}")
    if ratio is None:
        print("equilibrium_ratio=none")
    else:
        print(f"equilibrium_ratio={ratio.real:.6g}{ratio.imag:+.6g}j")
    print(f"gamma_eff={params.gamma_eff:.6g}")
    print(f"g_eff={params.g_eff:.6g}")
    if params.ratio is None:
        print("g_over_gamma=none")
    else:
        print(f"g_over_gamma={params.ratio:.6g}")
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "preset": _cmd_preset,
    "oracle-check": _cmd_oracle_check,
    "analyze": _cmd_analyze,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"qmirror: config error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"qmirror: {exc}", file=sys.stderr)
        return 1
    except IntegrationError as exc:
        print(f"qmirror: integration failed: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
