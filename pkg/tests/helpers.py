"""Independent reference implementations used as test oracles.

Nothing in here calls the solver under test: closed forms are evaluated
directly, the zero-delay reduced dynamics go through scipy's matrix
exponential, and concurrence is recomputed from the full Wootters recipe on
the density matrix rather than the 2|alpha beta| shortcut.
"""

from __future__ import annotations

import math
from typing import Tuple

import numpy as np
from scipy.linalg import expm

from qmirror import SystemConfig, markov_matrix


def cascade_amplitudes(t: np.ndarray, phase: float = 0.0) -> Tuple[np.ndarray, np.ndarray]:
    """Closed form for one-way coupling (left rate zero, no delays).

    alpha decays freely; beta is driven through the unidirectional channel:
    alpha = e^{-t/2}, beta = -t e^{-t/2} e^{i phase}.
    """
    alpha = np.exp(-t / 2.0)
    beta = -t * np.exp(-t / 2.0) * np.exp(1j * phase)
    return alpha, beta


def markov_amplitudes(
    config: SystemConfig, times: np.ndarray, initial=(1.0, 0.0)
) -> np.ndarray:
    """Zero-delay reduced dynamics via the matrix exponential.

    Returns an array of shape (len(times), 2).
    """
    m = np.asarray(markov_matrix(config), dtype=complex)
    y0 = np.asarray(initial, dtype=complex)
    return np.array([expm(m * t) @ y0 for t in times])


def wootters_concurrence(rho: np.ndarray) -> float:
    """Concurrence of a two-qubit density matrix, full Wootters recipe.

    C = max(0, l1 - l2 - l3 - l4) with l_i the square roots of the
    eigenvalues of rho (sigma_y x sigma_y) rho* (sigma_y x sigma_y) in
    decreasing order.
    """
    sy = np.array([[0.0, -1.0j], [1.0j, 0.0]])
    yy = np.kron(sy, sy)
    r = rho @ yy @ rho.conj() @ yy
    eigs = np.linalg.eigvals(r)
    # Numerical noise can push tiny eigenvalues slightly negative.
    lams = np.sqrt(np.clip(eigs.real, 0.0, None))
    lams = np.sort(lams)[::-1]
    return float(max(0.0, lams[0] - lams[1] - lams[2] - lams[3]))


def convergence_errors(config: SystemConfig, horizon: float, steps, ref_step: float):
    """Max amplitude error at each step size against a fine reference run."""
    from qmirror import simulate

    ref = simulate(config, horizon_T=horizon, step_h=ref_step)
    errors = []
    for h in steps:
        traj = simulate(config, horizon_T=horizon, step_h=h)
        al = np.interp(traj.times, ref.times, ref.alpha.real) + 1j * np.interp(
            traj.times, ref.times, ref.alpha.imag
        )
        be = np.interp(traj.times, ref.times, ref.beta.real) + 1j * np.interp(
            traj.times, ref.times, ref.beta.imag
        )
        errors.append(
            float(max(np.max(np.abs(traj.alpha - al)), np.max(np.abs(traj.beta - be))))
        )
    return errors


def local_extrema(values: np.ndarray) -> Tuple[int, int]:
    """Count strict interior local minima and maxima of a series."""
    minima = 0
    maxima = 0
    for i in range(1, len(values) - 1):
        if values[i] < values[i - 1] and values[i] < values[i + 1]:
            minima += 1
        elif values[i] > values[i - 1] and values[i] > values[i + 1]:
            maxima += 1
    return minima, maxima


def has_revival(times: np.ndarray, series: np.ndarray, after: float) -> bool:
    """True when a local minimum is followed by a local maximum past ``after``.

    Works on a coarsened copy of the series so integrator-level wiggles do
    not count as extrema.
    """
    sel = times >= after
    ts, cs = times[sel], series[sel]
    # Coarsen to ~400 samples over the window.
    stride = max(1, len(ts) // 400)
    cs = cs[::stride]
    for i in range(1, len(cs) - 1):
        if cs[i] < cs[i - 1] and cs[i] < cs[i + 1]:
            rest = cs[i:]
            for j in range(1, len(rest) - 1):
                if rest[j] > rest[j - 1] and rest[j] > rest[j + 1]:
                    return True
    return False


def assert_close(actual: float, expected: float, tol: float, label: str = "") -> None:
    assert abs(actual - expected) <= tol, (
        f"{label}: {actual!r} not within {tol} of {expected!r}"
    )


def criterion_line(number: int, ok: bool, detail: str) -> str:
    verdict = "PASS" if ok else "FAIL"
    return f"[{verdict}] criterion {number}: {detail}"
