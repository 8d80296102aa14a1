"""Two distant qubits coupled through a mirror-terminated chiral waveguide.

The package simulates the single-excitation dynamics of a pair of two-level
emitters that exchange photons through a one-dimensional waveguide closed off
by a mirror on one side.  Emission that bounces off the mirror returns after a
finite delay, which turns the equations of motion into delay differential
equations.  Everything here works in units where the total decay rate of one
qubit is 1 and the photon travel time sets the delay scale.

Entry points:

* :func:`qmirror.dde.simulate` -- integrate a configuration and get a
  trajectory of the two excitation amplitudes.
* :mod:`qmirror.analysis` -- concurrence, peak finding, death times,
  quasi-steady-state diagnostics.
* :mod:`qmirror.kspace` -- an independent discretized-field solver used to
  cross-check the delay-equation results.
* :mod:`qmirror.presets` -- canned parameter studies, also reachable through
  the ``qmirror`` command line tool.
"""

from .config import (
    ConfigError,
    PhaseDelaySet,
    SystemConfig,
    Variant,
    derive_phase_delay_set,
    load_config,
)
from .model import AmplitudePair, DelayTerm, delay_terms, markov_matrix, ode_matrix
from .dde import (
    HistoryBuffer,
    IntegrationError,
    SolverSettings,
    Trajectory,
    breakpoints,
    default_step,
    integrate,
    simulate,
)
from .analysis import (
    EffectiveParams,
    EntanglementMetrics,
    MatrixA,
    build_matrix_A,
    concurrence,
    concurrence_series,
    death_time,
    effective_params,
    equilibrium_ratio,
    find_peak,
    rho12,
    trajectory_metrics,
)
from .kspace import OracleSettings, compare, integrate_kspace, oracle_validation_configs
from .tableio import PlotSpec, ResultTable, emit, read_csv, write_csv, write_json, write_svg
from .sweep import AxisSpec, SweepSpec, run_sweep
from .presets import PRESET_IDS, FigurePreset, run_preset

__version__ = "0.1.0"

__all__ = [
    "AmplitudePair",
    "AxisSpec",
    "ConfigError",
    "DelayTerm",
    "EffectiveParams",
    "EntanglementMetrics",
    "FigurePreset",
    "HistoryBuffer",
    "IntegrationError",
    "MatrixA",
    "OracleSettings",
    "PRESET_IDS",
    "PhaseDelaySet",
    "PlotSpec",
    "ResultTable",
    "SolverSettings",
    "SweepSpec",
    "SystemConfig",
    "Trajectory",
    "Variant",
    "breakpoints",
    "build_matrix_A",
    "compare",
    "concurrence",
    "concurrence_series",
    "death_time",
    "default_step",
    "delay_terms",
    "derive_phase_delay_set",
    "effective_params",
    "emit",
    "equilibrium_ratio",
    "find_peak",
    "integrate",
    "integrate_kspace",
    "load_config",
    "markov_matrix",
    "ode_matrix",
    "oracle_validation_configs",
    "read_csv",
    "rho12",
    "run_preset",
    "run_sweep",
    "simulate",
    "trajectory_metrics",
    "write_csv",
    "write_json",
    "write_svg",
]
