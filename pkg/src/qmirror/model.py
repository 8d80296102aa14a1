"""Equations of motion in the single-excitation sector.

With at most one excitation shared between the qubits and the field, the
state is fully described by two complex amplitudes: ``alpha`` for qubit 1
excited and ``beta`` for qubit 2 excited.  Emission that comes back -- either
straight across the qubit-qubit separation or via the mirror -- shows up as
source terms evaluated at earlier times, so the amplitudes obey delay
differential equations:

    d(alpha)/dt = -(gamma/2 + i*delta/2) * alpha(t)
                  - gamma_L * e^{i*phi_dd}    * beta(t - t_dd)
                  + c * e^{i*phi_fb1}         * alpha(t - t_fb1)
                  + c * e^{i*phi_cross}       * beta(t - t_cross)

    d(beta)/dt  = -(gamma/2 - i*delta/2) * beta(t)
                  - gamma_R * e^{i*phi_dd}    * alpha(t - t_dd)
                  + c * e^{i*phi_fb2}         * beta(t - t_fb2)
                  + c * e^{i*phi_cross}       * alpha(t - t_cross)

with ``c = sqrt(gamma_L * gamma_R)`` and every retarded term switched on by a
Heaviside step ``theta(t - t_delay)`` with the convention ``theta(0) = 1``.
The open-waveguide variant keeps only the direct terms; the Markov limit
collapses everything into the constant matrix of :func:`markov_matrix`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Tuple

import numpy as np

from .config import ConfigError, SystemConfig, Variant, derive_phase_delay_set


@dataclass(frozen=True)
class AmplitudePair:
    """Excitation amplitudes of the two qubits.

    Also reused for derivatives and interpolated history values, so no
    normalization is enforced here.
    """

    alpha: complex
    beta: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))

    @property
    def norm_sq(self) -> float:
        """Population stored in the qubits, ``|alpha|^2 + |beta|^2``."""
        return abs(self.alpha) ** 2 + abs(self.beta) ** 2


class DelayTerm(NamedTuple):
    """One retarded source term: ``d(y[row])/dt += coeff * y[col](t - delay)``."""

    row: int
    col: int
    coeff: complex
    delay: float


HistoryLookup = Callable[[float], AmplitudePair]


def _cis(phi: float) -> complex:
    return cmath.exp(1j * phi)


def delay_terms(
    config: SystemConfig, variant: Optional[Variant] = None
) -> Tuple[DelayTerm, ...]:
    """List the retarded source terms for a configuration.

    The semi-infinite guide has six: the two direct exchange terms, one
    mirror round trip per qubit, and the two mirror-assisted cross terms.
    The open guide keeps only the direct pair, and the Markov limit has none
    (everything is instantaneous there).  Terms whose coefficient vanishes,
    e.g. every mirror term at full chirality, are dropped.
    """
    variant = Variant.coerce(variant) if variant is not None else config.variant
    if variant is Variant.MARKOV_LIMIT:
        return ()
    pd = derive_phase_delay_set(config)
    c = math.sqrt(config.gamma_L * config.gamma_R)
    terms = [
        DelayTerm(0, 1, -config.gamma_L * _cis(pd.phi_dd), pd.t_dd),
        DelayTerm(1, 0, -config.gamma_R * _cis(pd.phi_dd), pd.t_dd),
    ]
    if variant is Variant.SEMI_INFINITE:
        terms += [
            DelayTerm(0, 0, c * _cis(pd.phi_fb1), pd.t_fb1),
            DelayTerm(1, 1, c * _cis(pd.phi_fb2), pd.t_fb2),
            DelayTerm(0, 1, c * _cis(pd.phi_cross), pd.t_cross),
            DelayTerm(1, 0, c * _cis(pd.phi_cross), pd.t_cross),
        ]
    return tuple(term for term in terms if term.coeff != 0.0)


def local_matrix(config: SystemConfig) -> np.ndarray:
    """Instantaneous part of the generator: decay plus detuning."""
    half = 0.5 * config.gamma
    half_delta = 0.5j * config.delta
    return np.array(
        [[-half - half_delta, 0.0], [0.0, -half + half_delta]], dtype=complex
    )


def markov_matrix(config: SystemConfig) -> np.ndarray:
    """Generator of the zero-delay mirror dynamics.

    Sending all travel times to zero while the mirror phases stay fully
    constructive renormalizes the rates: the qubits decay at
    ``gamma_eff = (sqrt(gamma_R) - sqrt(gamma_L))^2`` and exchange excitation
    coherently at ``sqrt(gamma_L or R) * (sqrt(gamma_R) - sqrt(gamma_L))``.
    At equal rates this shuts off decay entirely.
    """
    root_L = math.sqrt(config.gamma_L)
    root_R = math.sqrt(config.gamma_R)
    d = root_R - root_L
    half_eff = 0.5 * d * d
    half_delta = 0.5j * config.delta
    return np.array(
        [
            [-half_eff - half_delta, root_L * d],
            [-root_R * d, -half_eff + half_delta],
        ],
        dtype=complex,
    )


def ode_matrix(config: SystemConfig, variant: Optional[Variant] = None) -> np.ndarray:
    """Constant generator for configurations with no genuine retardation.

    Valid when every retarded term has zero delay (the terms then act
    instantaneously and fold into one matrix) or in the Markov limit.  Raises
    :class:`ConfigError` if a positive delay is present, because no constant
    matrix generates those dynamics.
    """
    variant = Variant.coerce(variant) if variant is not None else config.variant
    if variant is Variant.MARKOV_LIMIT:
        return markov_matrix(config)
    matrix = local_matrix(config)
    for term in delay_terms(config, variant):
        if term.delay > 0.0:
            raise ConfigError(
                "ode_matrix needs all delays to be zero; "
                f"found a retarded term at delay {term.delay}"
            )
        matrix[term.row, term.col] += term.coeff
    return matrix


def _rhs_from_terms(
    t: float,
    now: AmplitudePair,
    lookup: HistoryLookup,
    config: SystemConfig,
    variant: Variant,
) -> AmplitudePair:
    """Literal evaluation of the equations of motion at time ``t``.

    Each retarded term contributes if and only if ``t >= delay`` (the step
    function convention ``theta(0) = 1``); ``lookup`` is only ever called
    with arguments in ``[0, t]``.
    """
    half = 0.5 * config.gamma
    half_delta = 0.5j * config.delta
    d_alpha = -(half + half_delta) * now.alpha
    d_beta = -(half - half_delta) * now.beta
    for row, col, coeff, delay in delay_terms(config, variant):
        if t < delay:
            continue
        past = now if delay == 0.0 else lookup(t - delay)
        value = past.alpha if col == 0 else past.beta
        if row == 0:
            d_alpha += coeff * value
        else:
            d_beta += coeff * value
    return AmplitudePair(d_alpha, d_beta)


def rhs_semi_infinite(
    t: float, now: AmplitudePair, lookup: HistoryLookup, config: SystemConfig
) -> AmplitudePair:
    """Time derivative for the mirror-terminated guide (all six channels)."""
    return _rhs_from_terms(t, now, lookup, config, Variant.SEMI_INFINITE)


def rhs_infinite(
    t: float, now: AmplitudePair, lookup: HistoryLookup, config: SystemConfig
) -> AmplitudePair:
    """Time derivative for the open guide (direct exchange only)."""
    return _rhs_from_terms(t, now, lookup, config, Variant.INFINITE)


def rhs_markov_limit(now: AmplitudePair, config: SystemConfig) -> AmplitudePair:
    """Time derivative in the zero-delay limit (no history needed)."""
    m = markov_matrix(config)
    return AmplitudePair(
        m[0, 0] * now.alpha + m[0, 1] * now.beta,
        m[1, 0] * now.alpha + m[1, 1] * now.beta,
    )
