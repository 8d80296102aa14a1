"""Method-of-steps integrator for the delayed amplitude equations.

The integrator runs a classical fixed-step 4th-order Runge-Kutta scheme over
a time grid that contains every instant where a retarded term switches on or
where a propagated kink of the solution can sit (all integer combinations of
the two basic delays).  Between those instants the solution is smooth, so
aligning steps with them preserves the full order of the scheme.

Two details matter for accuracy and are easy to get wrong:

* Retarded terms are switched on per step, decided by the step's *start*
  time.  The first derivative of the solution jumps exactly at a switch-on
  time; evaluating the final stage of the preceding step with the term
  already applied injects an O(h) one-off error that degrades global
  convergence to second order.
* The per-node derivatives stored for the cubic Hermite history are
  right-sided.  At a switch-on node the left-sided derivative differs, and
  history intervals *ending* there must use the left-sided value; the buffer
  keeps those separately.

Zero-delay configurations (and the Markov limit) dispatch to a constant
matrix propagation: one Runge-Kutta step of a linear autonomous system is
exactly multiplication by the degree-4 Taylor polynomial of the matrix
exponential, so the two paths agree by construction.
"""

from __future__ import annotations

import bisect
import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .config import ConfigError, SystemConfig, Variant
from .model import (
    AmplitudePair,
    delay_terms,
    local_matrix,
    markov_matrix,
    rhs_infinite,
    rhs_markov_limit,
    rhs_semi_infinite,
)

#: Times closer than this are considered the same breakpoint.
BREAKPOINT_MERGE_TOL = 1e-12


class IntegrationError(RuntimeError):
    """A trajectory left the representable range (NaN/overflow)."""

    def __init__(self, message: str, time: Optional[float] = None) -> None:
        super().__init__(message)
        self.time = time


class Interp(Enum):
    """History interpolation order."""

    LINEAR = "linear"
    CUBIC_HERMITE = "cubic_hermite"

    @classmethod
    def coerce(cls, value: Union[str, "Interp"]) -> "Interp":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ConfigError(f"unknown interpolation mode {value!r}") from None


@dataclass(frozen=True)
class SolverSettings:
    """Numerical knobs of one integration run.

    ``step_h = None`` means "use :func:`default_step` for the configuration".
    The breakpoint cap guards against delay lattices that are dense relative
    to the horizon (tiny delays over long times); hitting it is a
    configuration problem, not a numerical one.
    """

    horizon_T: float
    step_h: Optional[float] = None
    interp: Interp = Interp.CUBIC_HERMITE
    breakpoint_cap: int = 10_000

    def __post_init__(self) -> None:
        object.__setattr__(self, "interp", Interp.coerce(self.interp))
        horizon = float(self.horizon_T)
        if not math.isfinite(horizon) or horizon <= 0.0:
            raise ConfigError(f"horizon_T must be finite and > 0, got {self.horizon_T!r}")
        object.__setattr__(self, "horizon_T", horizon)
        if self.step_h is not None:
            step = float(self.step_h)
            if not math.isfinite(step) or step <= 0.0:
                raise ConfigError(f"step_h must be finite and > 0, got {self.step_h!r}")
            if step > horizon:
                raise ConfigError(
                    f"step_h={step} exceeds horizon_T={horizon}"
                )
            object.__setattr__(self, "step_h", step)
        cap = int(self.breakpoint_cap)
        if cap < 1:
            raise ConfigError(f"breakpoint_cap must be >= 1, got {self.breakpoint_cap!r}")
        object.__setattr__(self, "breakpoint_cap", cap)


def default_step(config: SystemConfig, variant: Optional[Variant] = None) -> float:
    """Default step: ``min(1e-3, tau_min/16)``, or ``1e-3`` with no delays.

    ``tau_min`` is the smallest strictly positive delay among the retarded
    terms that actually enter the selected variant's equations.
    """
    positive = [t.delay for t in delay_terms(config, variant) if t.delay > 0.0]
    if not positive:
        return 1e-3
    return min(1e-3, min(positive) / 16.0)


def breakpoints(
    config: SystemConfig,
    horizon_T: float,
    breakpoint_cap: int = 10_000,
    variant: Optional[Variant] = None,
) -> List[float]:
    """Times where the solution can have reduced smoothness, sorted.

    These are all sums ``n1*tau_dd + n2*tau_fb`` (non-negative integers)
    up to the horizon; the composite delays (mirror-crossing and the far
    qubit's round trip) are integer combinations of the two basic ones and
    appear automatically.  Only delays that enter the selected variant
    generate anything: the open guide propagates kinks at multiples of
    ``tau_dd`` alone, and the Markov limit has none.

    Duplicates within ``1e-12`` are merged.  Exceeding ``breakpoint_cap``
    raises: that combination of tiny delays and long horizon needs a shorter
    horizon or an explicitly larger cap (and a correspondingly small step).
    """
    horizon = float(horizon_T)
    if not math.isfinite(horizon) or horizon < 0.0:
        raise ConfigError(f"horizon_T must be finite and >= 0, got {horizon_T!r}")
    variant = Variant.coerce(variant) if variant is not None else config.variant
    if variant is Variant.MARKOV_LIMIT:
        generators: List[float] = []
    elif variant is Variant.INFINITE:
        generators = [config.tau_dd] if config.tau_dd > 0.0 else []
    else:
        generators = sorted({d for d in (config.tau_dd, config.tau_fb) if d > 0.0})

    result = [0.0]
    if not generators:
        return result

    import heapq

    # Enumerate the lattice in increasing order without revisiting points:
    # always extend the first coordinate, extend the second only from points
    # with first coordinate zero.  Values are recomputed from the integer
    # coordinates so equal combinations collide exactly.
    heap: List[Tuple[float, int, int]] = []
    g0 = generators[0]
    g1 = generators[1] if len(generators) > 1 else None
    if g0 <= horizon:
        heapq.heappush(heap, (g0, 1, 0))
    if g1 is not None and g1 <= horizon:
        heapq.heappush(heap, (g1, 0, 1))
    while heap:
        value, n0, n1 = heapq.heappop(heap)
        if value - result[-1] > BREAKPOINT_MERGE_TOL:
            result.append(value)
            if len(result) > breakpoint_cap:
                raise ConfigError(
                    f"more than {breakpoint_cap} breakpoints in [0, {horizon}]: "
                    "the delay lattice is too dense for this horizon; shorten "
                    "horizon_T, enlarge breakpoint_cap (with a matching step), "
                    "or reconsider the tiny delays"
                )
        child = (n0 + 1) * g0 + n1 * (g1 or 0.0)
        if child <= horizon:
            heapq.heappush(heap, (child, n0 + 1, n1))
        if n0 == 0 and g1 is not None:
            sibling = (n1 + 1) * g1
            if sibling <= horizon:
                heapq.heappush(heap, (sibling, 0, n1 + 1))
    return result


def _build_grid(knots: Sequence[float], horizon: float, step: float) -> List[float]:
    """Subdivide each inter-breakpoint segment into steps of at most ``step``."""
    knots = list(knots)
    if horizon - knots[-1] > BREAKPOINT_MERGE_TOL:
        knots.append(horizon)
    elif len(knots) > 1:
        knots[-1] = horizon
    grid = [knots[0]]
    for a, b in zip(knots, knots[1:]):
        seg = b - a
        # The small slack keeps an exact multiple of the step from being
        # split into one extra sliver by roundoff.
        n = max(1, math.ceil(seg / step - 1e-9))
        sub = seg / n
        for j in range(1, n):
            grid.append(a + j * sub)
        grid.append(b)
    return grid


# --- dense history -----------------------------------------------------------


def _hermite(
    u: float,
    hseg: float,
    y0: complex,
    y1: complex,
    d0: complex,
    d1: complex,
) -> complex:
    u1 = 1.0 - u
    h00 = (1.0 + 2.0 * u) * u1 * u1
    h10 = u * u1 * u1
    h01 = u * u * (3.0 - 2.0 * u)
    h11 = u * u * (u - 1.0)
    return h00 * y0 + h01 * y1 + hseg * (h10 * d0 + h11 * d1)


class HistoryBuffer:
    """Solution samples plus derivatives, densely interpolable.

    Stores node times, amplitude values and right-sided derivatives; nodes
    where a retarded term switches on additionally carry the left-sided
    derivative, which is what Hermite interpolation must use on the interval
    ending there.  Queries at stored nodes return the stored value exactly.
    """

    def __init__(self, interp: Interp = Interp.CUBIC_HERMITE) -> None:
        self.interp = Interp.coerce(interp)
        self._t: List[float] = []
        self._a: List[complex] = []
        self._b: List[complex] = []
        self._da: List[complex] = []
        self._db: List[complex] = []
        self._left: Dict[int, Tuple[complex, complex]] = {}

    @classmethod
    def from_arrays(
        cls,
        interp: Interp,
        times: List[float],
        alphas: List[complex],
        betas: List[complex],
        d_alphas: List[complex],
        d_betas: List[complex],
        left: Dict[int, Tuple[complex, complex]],
    ) -> "HistoryBuffer":
        """Adopt already-validated storage (used by the integrator)."""
        buf = cls(interp)
        buf._t = times
        buf._a = alphas
        buf._b = betas
        buf._da = d_alphas
        buf._db = d_betas
        buf._left = left
        return buf

    def __len__(self) -> int:
        return len(self._t)

    @property
    def times(self) -> Sequence[float]:
        return self._t

    @property
    def coverage(self) -> Tuple[float, float]:
        if not self._t:
            raise ValueError("empty history has no coverage")
        return self._t[0], self._t[-1]

    def append(self, t: float, value: AmplitudePair, derivative: AmplitudePair) -> None:
        if self._t and t <= self._t[-1]:
            raise ValueError(
                f"history times must be strictly increasing, got {t} after {self._t[-1]}"
            )
        self._t.append(float(t))
        self._a.append(complex(value.alpha))
        self._b.append(complex(value.beta))
        self._da.append(complex(derivative.alpha))
        self._db.append(complex(derivative.beta))

    def set_left_derivative(self, index: int, derivative: AmplitudePair) -> None:
        """Record the left-sided derivative at a switch-on node."""
        if not -len(self._t) <= index < len(self._t):
            raise IndexError(index)
        self._left[index % len(self._t)] = (
            complex(derivative.alpha),
            complex(derivative.beta),
        )

    def value(self, index: int) -> AmplitudePair:
        return AmplitudePair(self._a[index], self._b[index])

    def derivative(self, index: int) -> AmplitudePair:
        return AmplitudePair(self._da[index], self._db[index])

    def interpolate(self, s: float) -> AmplitudePair:
        """Value at time ``s``, which must lie within coverage."""
        if not self._t:
            raise ValueError("cannot interpolate an empty history")
        t0, t1 = self._t[0], self._t[-1]
        slack = 1e-9 * max(1.0, abs(t1))
        if s < t0 - slack or s > t1 + slack:
            raise ValueError(f"time {s} outside history coverage [{t0}, {t1}]")
        s = min(max(s, t0), t1)
        i = bisect.bisect_right(self._t, s) - 1
        if i >= len(self._t) - 1:
            return AmplitudePair(self._a[-1], self._b[-1])
        if s == self._t[i]:
            return AmplitudePair(self._a[i], self._b[i])
        ts = self._t[i]
        hseg = self._t[i + 1] - ts
        u = (s - ts) / hseg
        if self.interp is Interp.LINEAR:
            return AmplitudePair(
                (1.0 - u) * self._a[i] + u * self._a[i + 1],
                (1.0 - u) * self._b[i] + u * self._b[i + 1],
            )
        lv = self._left.get(i + 1)
        da1, db1 = lv if lv is not None else (self._da[i + 1], self._db[i + 1])
        return AmplitudePair(
            _hermite(u, hseg, self._a[i], self._a[i + 1], self._da[i], da1),
            _hermite(u, hseg, self._b[i], self._b[i + 1], self._db[i], db1),
        )


def interpolate(history: HistoryBuffer, s: float) -> AmplitudePair:
    """Functional form of :meth:`HistoryBuffer.interpolate`."""
    return history.interpolate(s)


# --- trajectories ------------------------------------------------------------


@dataclass
class Trajectory:
    """Amplitudes sampled on the integration grid.

    ``concurrence`` starts out unset and is filled by the analysis layer.
    ``history`` (when the trajectory came from the delay integrator) allows
    dense evaluation between samples.
    """

    times: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    concurrence: Optional[np.ndarray] = None
    history: Optional[HistoryBuffer] = None

    def __post_init__(self) -> None:
        self.times = np.asarray(self.times, dtype=float)
        self.alpha = np.asarray(self.alpha, dtype=complex)
        self.beta = np.asarray(self.beta, dtype=complex)
        if not (self.times.shape == self.alpha.shape == self.beta.shape):
            raise ValueError("times, alpha, beta must have identical shapes")
        if self.times.ndim != 1 or self.times.size == 0:
            raise ValueError("a trajectory needs a non-empty 1-d time grid")
        if self.times.size > 1 and not (np.diff(self.times) > 0).all():
            raise ValueError("trajectory times must be strictly increasing")
        if self.concurrence is not None:
            self.concurrence = np.asarray(self.concurrence, dtype=float)

    @property
    def n_samples(self) -> int:
        return int(self.times.size)

    def amp(self, index: int) -> AmplitudePair:
        return AmplitudePair(self.alpha[index], self.beta[index])

    @property
    def amps(self) -> Tuple[AmplitudePair, ...]:
        return tuple(AmplitudePair(a, b) for a, b in zip(self.alpha, self.beta))

    def norm_sq(self) -> np.ndarray:
        """Qubit population ``|alpha|^2 + |beta|^2`` per sample."""
        return np.abs(self.alpha) ** 2 + np.abs(self.beta) ** 2

    def at(self, s: float) -> AmplitudePair:
        """Dense evaluation: Hermite through ``history`` when available,
        otherwise linear between samples."""
        if self.history is not None:
            return self.history.interpolate(s)
        t = self.times
        if s < t[0] or s > t[-1]:
            raise ValueError(f"time {s} outside trajectory range [{t[0]}, {t[-1]}]")
        i = int(np.searchsorted(t, s, side="right")) - 1
        if i >= t.size - 1:
            return AmplitudePair(self.alpha[-1], self.beta[-1])
        if s == t[i]:
            return AmplitudePair(self.alpha[i], self.beta[i])
        u = (s - t[i]) / (t[i + 1] - t[i])
        return AmplitudePair(
            (1.0 - u) * self.alpha[i] + u * self.alpha[i + 1],
            (1.0 - u) * self.beta[i] + u * self.beta[i + 1],
        )

    def resample(self, target_times: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Linear resampling of both amplitudes onto ``target_times``."""
        ts = np.asarray(target_times, dtype=float)
        alpha = np.interp(ts, self.times, self.alpha.real) + 1j * np.interp(
            ts, self.times, self.alpha.imag
        )
        beta = np.interp(ts, self.times, self.beta.real) + 1j * np.interp(
            ts, self.times, self.beta.imag
        )
        return alpha, beta


# --- integration -------------------------------------------------------------


def _resolve_variant(rhs: Optional[Callable], config: SystemConfig) -> Variant:
    if rhs is None:
        return config.variant
    if rhs is rhs_semi_infinite:
        return Variant.SEMI_INFINITE
    if rhs is rhs_infinite:
        return Variant.INFINITE
    if rhs is rhs_markov_limit:
        return Variant.MARKOV_LIMIT
    raise ConfigError(
        "integrate() accepts rhs_semi_infinite, rhs_infinite, rhs_markov_limit "
        "or None (pick by config.variant); arbitrary callables are not supported"
    )


def _fold_instantaneous(config: SystemConfig, variant: Variant) -> Tuple[complex, ...]:
    """Local matrix plus all zero-delay retarded terms, as four scalars."""
    if variant is Variant.MARKOV_LIMIT:
        m = markov_matrix(config)
    else:
        m = local_matrix(config)
        for term in delay_terms(config, variant):
            if term.delay == 0.0:
                m[term.row, term.col] += term.coeff
    return complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1])


def _integrate_ode(
    m: Tuple[complex, complex, complex, complex],
    horizon: float,
    step: float,
    initial: AmplitudePair,
    interp: Interp,
) -> Trajectory:
    """Constant-generator fast path: one RK4 step == degree-4 Taylor of exp."""
    n = max(1, math.ceil(horizon / step - 1e-9))
    times = np.linspace(0.0, horizon, n + 1)
    h = horizon / n
    mat = np.array([[m[0], m[1]], [m[2], m[3]]], dtype=complex)
    r = np.eye(2, dtype=complex)
    power = np.eye(2, dtype=complex)
    for k in range(1, 5):
        power = power @ (h * mat) / k
        r = r + power
    r00, r01, r10, r11 = complex(r[0, 0]), complex(r[0, 1]), complex(r[1, 0]), complex(r[1, 1])

    a = complex(initial.alpha)
    b = complex(initial.beta)
    alphas = [0j] * (n + 1)
    betas = [0j] * (n + 1)
    alphas[0] = a
    betas[0] = b
    for i in range(n):
        a, b = r00 * a + r01 * b, r10 * a + r11 * b
        if not (cmath.isfinite(a) and cmath.isfinite(b)):
            raise IntegrationError(
                f"non-finite amplitude at t={times[i + 1]:g}", time=float(times[i + 1])
            )
        alphas[i + 1] = a
        betas[i + 1] = b

    alpha_arr = np.array(alphas, dtype=complex)
    beta_arr = np.array(betas, dtype=complex)
    d_alpha = m[0] * alpha_arr + m[1] * beta_arr
    d_beta = m[2] * alpha_arr + m[3] * beta_arr
    history = HistoryBuffer.from_arrays(
        interp,
        [float(t) for t in times],
        alphas,
        betas,
        list(d_alpha),
        list(d_beta),
        {},
    )
    return Trajectory(times=times, alpha=alpha_arr, beta=beta_arr, history=history)


def _integrate_delayed(
    config: SystemConfig,
    variant: Variant,
    horizon: float,
    step: float,
    initial: AmplitudePair,
    interp: Interp,
    cap: int,
) -> Trajectory:
    knots = breakpoints(config, horizon, cap, variant)
    grid = _build_grid(knots, horizon, step)
    n = len(grid)
    hermite = interp is Interp.CUBIC_HERMITE

    m00, m01, m10, m11 = _fold_instantaneous(config, variant)

    # Group retarded terms by delay into dense 2x2 coefficient blocks; each
    # group has one switch-on node on the grid (or never activates within
    # the horizon).
    blocks: Dict[float, List[complex]] = {}
    for term in delay_terms(config, variant):
        if term.delay == 0.0:
            continue
        block = blocks.setdefault(term.delay, [0j, 0j, 0j, 0j])
        block[2 * term.row + term.col] += term.coeff

    groups: List[Tuple[float, int, complex, complex, complex, complex]] = []
    activate_at: Dict[int, List[int]] = {}
    for tau in sorted(blocks):
        idx = bisect.bisect_left(grid, tau - BREAKPOINT_MERGE_TOL)
        if idx >= n or abs(grid[idx] - tau) > BREAKPOINT_MERGE_TOL:
            if tau > horizon:
                continue  # never switches on inside the horizon
            raise IntegrationError(
                f"internal grid error: delay {tau} is not a grid node"
            )
        b = blocks[tau]
        gi = len(groups)
        groups.append((tau, idx, b[0], b[1], b[2], b[3]))
        activate_at.setdefault(idx, []).append(gi)

    times = grid
    ya = [0j] * n
    yb = [0j] * n
    da = [0j] * n
    db = [0j] * n
    left: Dict[int, Tuple[complex, complex]] = {}
    cursors = [0] * len(groups)

    a0 = complex(initial.alpha)
    b0 = complex(initial.beta)
    ya[0] = a0
    yb[0] = b0
    da[0] = m00 * a0 + m01 * b0
    db[0] = m10 * a0 + m11 * b0

    def hist(gi: int, s: float) -> Tuple[complex, complex]:
        # Monotone per-group cursor: lookup times never move backwards.
        cur = cursors[gi]
        while times[cur + 1] <= s:
            cur += 1
        cursors[gi] = cur
        ts = times[cur]
        if s == ts:
            return ya[cur], yb[cur]
        hseg = times[cur + 1] - ts
        u = (s - ts) / hseg
        if not hermite:
            v = 1.0 - u
            return (
                v * ya[cur] + u * ya[cur + 1],
                v * yb[cur] + u * yb[cur + 1],
            )
        lv = left.get(cur + 1)
        da1, db1 = lv if lv is not None else (da[cur + 1], db[cur + 1])
        return (
            _hermite(u, hseg, ya[cur], ya[cur + 1], da[cur], da1),
            _hermite(u, hseg, yb[cur], yb[cur + 1], db[cur], db1),
        )

    n_groups = len(groups)
    for i in range(n - 1):
        t0 = times[i]
        t1 = times[i + 1]
        h = t1 - t0
        half = 0.5 * h
        ca = ya[i]
        cb = yb[i]
        k1a = da[i]
        k1b = db[i]

        # Retarded sums depend on the stage time only, not on the stage
        # state, so the two middle stages share one history lookup.
        d2a = d2b = d3a = d3b = 0j
        for gi in range(n_groups):
            tau, act, c00, c01, c10, c11 = groups[gi]
            if act > i:
                continue
            s2 = t0 + half - tau
            if s2 > t0:
                s2 = t0
            pa, pb = hist(gi, s2)
            d2a += c00 * pa + c01 * pb
            d2b += c10 * pa + c11 * pb
            s3 = t1 - tau
            if s3 > t0:
                s3 = t0  # roundoff guard; node i+1 does not exist yet
            pa, pb = hist(gi, s3)
            d3a += c00 * pa + c01 * pb
            d3b += c10 * pa + c11 * pb

        y2a = ca + half * k1a
        y2b = cb + half * k1b
        k2a = m00 * y2a + m01 * y2b + d2a
        k2b = m10 * y2a + m11 * y2b + d2b
        y3a = ca + half * k2a
        y3b = cb + half * k2b
        k3a = m00 * y3a + m01 * y3b + d2a
        k3b = m10 * y3a + m11 * y3b + d2b
        y4a = ca + h * k3a
        y4b = cb + h * k3b
        k4a = m00 * y4a + m01 * y4b + d3a
        k4b = m10 * y4a + m11 * y4b + d3b

        w = h / 6.0
        na = ca + w * (k1a + 2.0 * (k2a + k3a) + k4a)
        nb = cb + w * (k1b + 2.0 * (k2b + k3b) + k4b)
        if not (cmath.isfinite(na) and cmath.isfinite(nb)):
            raise IntegrationError(f"non-finite amplitude at t={t1:g}", time=t1)
        ya[i + 1] = na
        yb[i + 1] = nb

        # Derivative at the new node under the current active set; this is
        # the left-sided limit if a term switches on exactly there.
        dna = m00 * na + m01 * nb + d3a
        dnb = m10 * na + m11 * nb + d3b
        news = activate_at.get(i + 1)
        if news is not None:
            left[i + 1] = (dna, dnb)
            for gi in news:
                tau, act, c00, c01, c10, c11 = groups[gi]
                s = t1 - tau
                if s < 0.0:
                    s = 0.0
                pa, pb = hist(gi, s)
                dna += c00 * pa + c01 * pb
                dnb += c10 * pa + c11 * pb
        da[i + 1] = dna
        db[i + 1] = dnb

    history = HistoryBuffer.from_arrays(interp, times, ya, yb, da, db, left)
    return Trajectory(
        times=np.array(times, dtype=float),
        alpha=np.array(ya, dtype=complex),
        beta=np.array(yb, dtype=complex),
        history=history,
    )


def integrate(
    rhs: Optional[Callable],
    config: SystemConfig,
    settings: SolverSettings,
    initial: AmplitudePair = AmplitudePair(1.0, 0.0),
) -> Trajectory:
    """Integrate the equations of motion from ``t=0`` to the horizon.

    ``rhs`` selects which set of equations to run (one of the three model
    right-hand sides); ``None`` picks by ``config.variant``.  Passing e.g.
    ``rhs_infinite`` with a mirror configuration deliberately runs the
    open-guide baseline with identical parameters.

    The step must not exceed the smallest positive delay: stage-time history
    lookups then always land in completed history.
    """
    variant = _resolve_variant(rhs, config)
    if initial.norm_sq > 1.0 + 1e-9:
        raise ConfigError(
            f"initial state has norm^2 = {initial.norm_sq} > 1"
        )
    step = settings.step_h if settings.step_h is not None else default_step(config, variant)
    step = min(step, settings.horizon_T)
    positive = [t.delay for t in delay_terms(config, variant) if t.delay > 0.0]
    if not positive:
        m = _fold_instantaneous(config, variant)
        return _integrate_ode(m, settings.horizon_T, step, initial, settings.interp)
    tau_min = min(positive)
    if step > tau_min * (1.0 + 1e-12):
        raise ConfigError(
            f"step {step} exceeds the smallest positive delay {tau_min}; "
            "stage lookups would need not-yet-computed history"
        )
    return _integrate_delayed(
        config,
        variant,
        settings.horizon_T,
        step,
        initial,
        settings.interp,
        settings.breakpoint_cap,
    )


def simulate(
    config: SystemConfig,
    horizon_T: float,
    step_h: Optional[float] = None,
    interp: Union[str, Interp] = Interp.CUBIC_HERMITE,
    breakpoint_cap: int = 10_000,
    initial: AmplitudePair = AmplitudePair(1.0, 0.0),
) -> Trajectory:
    """Keyword-friendly wrapper around :func:`integrate`."""
    settings = SolverSettings(
        horizon_T=horizon_T,
        step_h=step_h,
        interp=Interp.coerce(interp),
        breakpoint_cap=breakpoint_cap,
    )
    return integrate(None, config, settings, initial)
