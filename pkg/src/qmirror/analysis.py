"""Entanglement measures and long-time diagnostics.

For a pure state in the one-excitation sector the two-qubit reduced density
matrix is fully determined by the amplitudes, and its concurrence collapses
to ``2|alpha||beta|``.  On top of that this module provides peak extraction
and death times for concurrence curves, the constant coefficient matrix that
governs the zero-delay dynamics at long times (whose near-vanishing
determinant signals a slowly decaying entangled direction), and the
renormalized rates of the zero-delay limit.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .config import SystemConfig, Variant, derive_phase_delay_set
from .dde import Trajectory
from .model import AmplitudePair

#: Quasi-steady classification: |det A| below this fraction of gamma^2.
QUASI_STEADY_DET_FRACTION = 0.03


def concurrence(amps: AmplitudePair) -> float:
    """Concurrence ``2|alpha||beta|`` of a one-excitation pure state.

    Assumes ``|alpha|^2 + |beta|^2 <= 1`` (the remainder being the shared
    ground state); the result then lies in ``[0, 1]``.
    """
    return 2.0 * abs(amps.alpha) * abs(amps.beta)


def concurrence_series(traj: Trajectory) -> np.ndarray:
    """Concurrence at every trajectory sample; cached on the trajectory."""
    if traj.concurrence is None:
        traj.concurrence = 2.0 * np.abs(traj.alpha) * np.abs(traj.beta)
    return traj.concurrence


def rho12(amps: AmplitudePair) -> np.ndarray:
    """Two-qubit reduced density matrix in the basis ``{ee, eg, ge, gg}``.

    The one-excitation block carries the populations and the coherence
    ``conj(alpha)*beta``; the leftover weight ``1 - |alpha|^2 - |beta|^2``
    sits in ``gg``.  Hermitian, unit trace, positive semidefinite for any
    normalized input.
    """
    a = amps.alpha
    b = amps.beta
    pop_a = abs(a) ** 2
    pop_b = abs(b) ** 2
    rho = np.zeros((4, 4), dtype=complex)
    rho[1, 1] = pop_a
    rho[2, 2] = pop_b
    rho[1, 2] = a.conjugate() * b
    rho[2, 1] = a * b.conjugate()
    rho[3, 3] = 1.0 - pop_a - pop_b
    return rho


def find_peak(traj: Trajectory) -> Tuple[float, float]:
    """Global concurrence maximum ``(c_max, tau_peak)``.

    The discrete argmax (earliest sample on ties) is refined by the vertex of
    the parabola through the three surrounding samples; the refinement is
    clamped to the bracketing interval and never below the sampled maximum.
    Boundary maxima are returned unrefined.
    """
    series = concurrence_series(traj)
    times = traj.times
    p = int(np.argmax(series))
    c_p = float(series[p])
    t_p = float(times[p])
    if p == 0 or p == series.size - 1:
        return c_p, t_p
    x0 = float(times[p - 1]) - t_p
    x2 = float(times[p + 1]) - t_p
    y0 = float(series[p - 1])
    y2 = float(series[p + 1])
    denom = x0 * x2 * (x0 - x2)
    if denom == 0.0:
        return c_p, t_p
    # Parabola through (x0,y0), (0,c_p), (x2,y2) in local coordinates.
    a_coef = (x2 * (y0 - c_p) - x0 * (y2 - c_p)) / denom
    b_coef = (x0 * x0 * (y2 - c_p) - x2 * x2 * (y0 - c_p)) / denom
    if a_coef >= 0.0:
        return c_p, t_p
    x_star = -b_coef / (2.0 * a_coef)
    x_star = min(max(x_star, x0), x2)
    c_star = c_p + b_coef * x_star + a_coef * x_star * x_star
    c_star = min(max(c_star, c_p), 1.0)
    return c_star, t_p + x_star


def death_time(traj: Trajectory, eps: float = 1e-3) -> Optional[float]:
    """First sampled time after the peak from which concurrence stays below ``eps``.

    Sustained-below semantics: a single dip under the threshold does not
    count if the concurrence later revives.  Returns ``None`` (undetermined)
    when the final tenth of the trajectory still reaches ``eps`` -- the
    horizon was too short to support the claim, and guessing a number would
    be worse than admitting that.
    """
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    series = concurrence_series(traj)
    n = series.size
    tail = max(1, n // 10)
    if np.any(series[n - tail :] >= eps):
        return None
    p = int(np.argmax(series))
    above = np.nonzero(series[p:] >= eps)[0]
    if above.size == 0:
        return float(traj.times[p])
    j = p + int(above[-1])
    return float(traj.times[j + 1])


@dataclass(frozen=True)
class MatrixA:
    """Constant coefficient matrix of the zero-delay equations of motion."""

    a11: complex
    a12: complex
    a21: complex
    a22: complex

    @property
    def det(self) -> complex:
        return self.a11 * self.a22 - self.a12 * self.a21

    def as_array(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a21, self.a22]], dtype=complex)


def build_matrix_A(config: SystemConfig) -> MatrixA:
    """Coefficient matrix combining decay, direct coupling and mirror terms.

    In the regime where all travel times are negligible the amplitudes obey
    ``d/dt (alpha, beta) = A (alpha, beta)`` with the entries below; a nearly
    singular ``A`` has an almost-conserved direction along which an entangled
    superposition survives far longer than ``1/gamma``.
    """
    pd = derive_phase_delay_set(config)
    c = math.sqrt(config.gamma_L * config.gamma_R)
    half = 0.5 * config.gamma
    return MatrixA(
        a11=-half + c * cmath.exp(1j * pd.phi_fb1),
        a12=-config.gamma_L * cmath.exp(1j * pd.phi_dd) + c * cmath.exp(1j * pd.phi_cross),
        a21=-config.gamma_R * cmath.exp(1j * pd.phi_dd) + c * cmath.exp(1j * pd.phi_cross),
        a22=-half + c * cmath.exp(1j * pd.phi_fb2),
    )


def equilibrium_ratio(matrix: MatrixA) -> Optional[complex]:
    """Amplitude ratio ``alpha/beta`` of the slowly decaying direction.

    Setting ``d(alpha)/dt = 0`` in the zero-delay equations gives
    ``alpha_e / beta_e = -a12/a11``.  Returns ``None`` when ``a11``
    (de)generates to zero -- at perfectly balanced rates there is no unique
    equilibrium ratio.  The zero test allows roundoff at the scale of the
    other entries.
    """
    scale = max(abs(matrix.a12), abs(matrix.a21), abs(matrix.a22), 1e-300)
    if abs(matrix.a11) <= 1e-13 * scale:
        return None
    return -matrix.a12 / matrix.a11


@dataclass(frozen=True)
class EffectiveParams:
    """Renormalized rates of the zero-delay mirror dynamics.

    ``ratio`` is ``None`` at perfectly balanced rates, where the effective
    decay vanishes and the ratio is formally infinite.
    """

    g_eff: float
    gamma_eff: float
    ratio: Optional[float]


def effective_params(config: SystemConfig) -> EffectiveParams:
    """Effective exchange coupling and decay rate of the zero-delay limit.

    The mirror interference leaves an effective decay
    ``gamma_eff = (sqrt(gamma_R) - sqrt(gamma_L))^2`` and two exchange
    coefficients ``sqrt(gamma_L,R)*|sqrt(gamma_R)-sqrt(gamma_L)|``; the
    smaller of the two is reported as the coupling strength.  Near balanced
    rates the decay vanishes quadratically in the rate imbalance but the
    coupling only linearly, so their ratio diverges and the exchange
    dominates the dissipation.
    """
    root_l = math.sqrt(config.gamma_L)
    root_r = math.sqrt(config.gamma_R)
    diff = abs(root_r - root_l)
    gamma_eff = (root_r - root_l) ** 2
    g_eff = min(root_l, root_r) * diff
    ratio = None if gamma_eff == 0.0 else min(root_l, root_r) / diff
    return EffectiveParams(g_eff=g_eff, gamma_eff=gamma_eff, ratio=ratio)


@dataclass(frozen=True)
class EntanglementMetrics:
    """Summary of one concurrence curve."""

    c_max: float
    tau_peak: float
    t_death: Optional[float]
    quasi_steady: bool


def trajectory_metrics(
    traj: Trajectory,
    config: Optional[SystemConfig] = None,
    eps: float = 1e-3,
) -> EntanglementMetrics:
    """Peak, death time and quasi-steady classification in one call.

    The quasi-steady flag needs the configuration (it is a property of the
    coefficient matrix, not of the curve) and only applies to the
    mirror-terminated variant; without a config it is ``False``.
    """
    c_max, tau_peak = find_peak(traj)
    t_death = death_time(traj, eps=eps)
    quasi = False
    if config is not None and config.variant is Variant.SEMI_INFINITE:
        matrix = build_matrix_A(config)
        quasi = abs(matrix.det) < QUASI_STEADY_DET_FRACTION * config.gamma**2
    return EntanglementMetrics(
        c_max=c_max, tau_peak=tau_peak, t_death=t_death, quasi_steady=quasi
    )
