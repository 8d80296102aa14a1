"""Parameter sweeps over the entanglement metrics.

A sweep is a grid over one or two config parameters, evaluated point by
point with the delay solver and reduced to the requested metrics.  Points
are independent, so they may be farmed out to a process pool; the output
row order is row-major over the axes regardless of how the work was
scheduled, and a parallel run is row-identical to a serial one.

A failed integration at one grid point does not abort the sweep: the row is
flagged in the ``status`` column and its metrics are NaN.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .analysis import concurrence_series, death_time, find_peak
from .config import TWO_PI, ConfigError, SystemConfig
from .dde import IntegrationError, simulate
from .tableio import Cell, ResultTable

#: Scalar metrics a sweep can record.  ``trajectory`` is special: it expands
#: each grid point into one row per (down)sampled time.
SCALAR_METRICS = ("c_max", "tau_peak", "t_death")
METRICS = SCALAR_METRICS + ("trajectory",)


def _apply_chirality(config: SystemConfig, value: float) -> SystemConfig:
    return SystemConfig.from_chirality(
        value,
        gamma=config.gamma,
        theta1=config.theta1,
        theta_d=config.theta_d,
        tau_fb=config.tau_fb,
        tau_dd=config.tau_dd,
        delta=config.delta,
        variant=config.variant,
    )


def _apply_separation(config: SystemConfig, value: float) -> SystemConfig:
    # Separation is measured in carrier wavelengths; only the dipole-dipole
    # phase moves, the travel time stays whatever the config says (the two
    # are independent inputs for good reason -- see the config module).
    return replace(config, theta_d=TWO_PI * value)


def _field_applier(name: str) -> Callable[[SystemConfig, float], SystemConfig]:
    def apply(config: SystemConfig, value: float) -> SystemConfig:
        return replace(config, **{name: value})

    return apply


#: Sweepable parameters: direct config fields plus two derived conveniences.
PARAMETERS: Dict[str, Callable[[SystemConfig, float], SystemConfig]] = {
    "gamma_L": _field_applier("gamma_L"),
    "gamma_R": _field_applier("gamma_R"),
    "theta1": _field_applier("theta1"),
    "theta_d": _field_applier("theta_d"),
    "tau_fb": _field_applier("tau_fb"),
    "tau_dd": _field_applier("tau_dd"),
    "delta": _field_applier("delta"),
    "chirality": _apply_chirality,
    "separation": _apply_separation,
}


@dataclass(frozen=True)
class AxisSpec:
    """One sweep axis: a named parameter over a linear or log grid."""

    parameter: str
    minimum: float
    maximum: float
    count: int
    scale: str = "linear"

    def __post_init__(self) -> None:
        if self.parameter not in PARAMETERS:
            raise ConfigError(
                f"unknown sweep parameter {self.parameter!r}; "
                f"expected one of {sorted(PARAMETERS)}"
            )
        if self.count < 2:
            raise ConfigError(f"axis {self.parameter}: count must be >= 2")
        if self.scale not in ("linear", "log"):
            raise ConfigError(f"axis {self.parameter}: scale must be linear or log")
        if not (math.isfinite(self.minimum) and math.isfinite(self.maximum)):
            raise ConfigError(f"axis {self.parameter}: bounds must be finite")
        if self.minimum > self.maximum:
            raise ConfigError(f"axis {self.parameter}: minimum exceeds maximum")
        if self.scale == "log" and self.minimum <= 0.0:
            raise ConfigError(f"axis {self.parameter}: log scale needs positive bounds")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.minimum, self.maximum, self.count)
        return np.linspace(self.minimum, self.maximum, self.count)


@dataclass(frozen=True)
class SweepSpec:
    """A full sweep: base configuration, axes, and metrics to record."""

    base: SystemConfig
    axes: Tuple[AxisSpec, ...]
    metrics: Tuple[str, ...] = SCALAR_METRICS
    horizon_T: float = 40.0
    step_h: Optional[float] = None
    eps: float = 1e-3
    sample_dt: float = 0.025
    breakpoint_cap: int = 10_000

    def __post_init__(self) -> None:
        object.__setattr__(self, "axes", tuple(self.axes))
        object.__setattr__(self, "metrics", tuple(self.metrics))
        if int(self.breakpoint_cap) < 1:
            raise ConfigError(
                f"breakpoint_cap must be >= 1, got {self.breakpoint_cap!r}"
            )
        if not 1 <= len(self.axes) <= 2:
            raise ConfigError(f"sweeps take 1 or 2 axes, got {len(self.axes)}")
        names = [axis.parameter for axis in self.axes]
        if len(set(names)) != len(names):
            raise ConfigError(f"duplicate sweep axes {names}")
        for metric in self.metrics:
            if metric not in METRICS:
                raise ConfigError(
                    f"unknown metric {metric!r}; expected one of {METRICS}"
                )
        if len(set(self.metrics)) != len(self.metrics):
            raise ConfigError(f"duplicate metrics {self.metrics}")
        if not self.metrics:
            raise ConfigError("a sweep needs at least one metric")

    @property
    def scalar_metrics(self) -> Tuple[str, ...]:
        return tuple(m for m in self.metrics if m != "trajectory")

    @property
    def wants_trajectory(self) -> bool:
        return "trajectory" in self.metrics

    def table_columns(self) -> List[str]:
        columns = [axis.parameter for axis in self.axes]
        columns.append("status")
        columns.extend(self.scalar_metrics)
        if self.wants_trajectory:
            columns.extend(["t", "concurrence"])
        return columns


def _evaluate_point(
    args: Tuple[SweepSpec, Tuple[float, ...]],
) -> List[Tuple[Cell, ...]]:
    """Evaluate one grid point; returns the finished row(s).

    Top-level (not a closure) so process pools can pickle it.
    """
    spec, values = args
    config = spec.base
    prefix: List[Cell] = [float(value) for value in values]
    try:
        for axis, value in zip(spec.axes, values):
            config = PARAMETERS[axis.parameter](config, float(value))
        traj = simulate(
            config,
            horizon_T=spec.horizon_T,
            step_h=spec.step_h,
            breakpoint_cap=spec.breakpoint_cap,
        )
        series = concurrence_series(traj)
        scalars: List[Cell] = []
        for metric in spec.scalar_metrics:
            if metric == "c_max":
                scalars.append(find_peak(traj)[0])
            elif metric == "tau_peak":
                scalars.append(find_peak(traj)[1])
            else:
                scalars.append(death_time(traj, eps=spec.eps))
        if not spec.wants_trajectory:
            return [tuple(prefix) + ("ok",) + tuple(scalars)]
        n = max(2, int(round(spec.horizon_T / spec.sample_dt)) + 1)
        ts = np.linspace(0.0, traj.times[-1], n)
        cs = np.interp(ts, traj.times, series)
        return [
            tuple(prefix) + ("ok",) + tuple(scalars) + (float(t), float(c))
            for t, c in zip(ts, cs)
        ]
    except (ConfigError, IntegrationError, FloatingPointError):
        row = tuple(prefix) + ("failed",)
        row += tuple(math.nan for _ in spec.scalar_metrics)
        if spec.wants_trajectory:
            row += (math.nan, math.nan)
        return [row]


def run_sweep(spec: SweepSpec, max_workers: Optional[int] = None) -> ResultTable:
    """Evaluate the sweep grid and return one table.

    Row order is row-major over the axes (first axis outermost).  With
    ``max_workers`` > 1 the points run on a process pool; the rows are
    assembled in grid order either way.
    """
    grids = [axis.values() for axis in spec.axes]
    points = [(spec, values) for values in itertools.product(*grids)]
    table = ResultTable(columns=spec.table_columns())
    if max_workers is None or max_workers <= 1:
        results = map(_evaluate_point, points)
        for rows in results:
            table.extend(rows)
        return table
    with ProcessPoolExecutor(max_workers=max_workers) as pool:
        chunk = max(1, len(points) // (4 * max_workers))
        for rows in pool.map(_evaluate_point, points, chunksize=chunk):
            table.extend(rows)
    return table
