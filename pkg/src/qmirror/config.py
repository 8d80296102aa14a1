"""System parameters and the geometry-derived phases and delays.

A configuration pins down the two emission rates into the left- and
right-propagating waveguide modes, the optical distances qubit-to-mirror and
qubit-to-qubit (expressed as propagation phases and travel times), an optional
detuning between the qubits, and which physical setting is simulated:

* ``SEMI_INFINITE`` -- waveguide terminated by a mirror; emission toward the
  mirror is reflected back, giving both direct qubit-qubit coupling and
  time-delayed self- and cross-feedback.
* ``INFINITE`` -- open waveguide, direct coupling only, no reflected terms.
* ``MARKOV_LIMIT`` -- all travel times sent to zero with the phases chosen so
  the mirror interference is fully constructive; the dynamics reduce to a
  plain ODE with renormalized rates.

Phases and travel times are independent inputs.  The carrier frequency is
assumed many orders of magnitude above the decay rate, so a micron-scale
change of a distance sweeps the propagation phase through a full turn while
leaving the travel time essentially untouched; we therefore never tie one to
the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Union

TWO_PI = 2.0 * math.pi


class ConfigError(ValueError):
    """Raised for invalid or inconsistent configuration input."""


class Variant(str, Enum):
    """Which waveguide setting the equations of motion describe."""

    SEMI_INFINITE = "semi_infinite"
    INFINITE = "infinite"
    MARKOV_LIMIT = "markov_limit"

    @classmethod
    def coerce(cls, value: Union[str, "Variant"]) -> "Variant":
        """Accept a ``Variant`` or its string value (case-insensitive)."""
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            names = ", ".join(v.value for v in cls)
            raise ConfigError(
                f"unknown variant {value!r}; expected one of: {names}"
            ) from None


def _reduce_phase(phi: float) -> float:
    """Map an angle to [0, 2*pi)."""
    phi = math.fmod(phi, TWO_PI)
    if phi < 0.0:
        phi += TWO_PI
    if phi >= TWO_PI:  # fmod can land exactly on 2*pi after the shift
        phi = 0.0
    return phi


@dataclass(frozen=True)
class SystemConfig:
    """Physical parameters of the two-qubit/waveguide system.

    Parameters
    ----------
    gamma_L, gamma_R:
        Decay rates into the left-moving (mirror-facing) and right-moving
        modes.  Their sum is the total rate ``gamma``; all times in the
        package are naturally measured in units of ``1/gamma``.
    theta1:
        Propagation phase accumulated between qubit 1 and the mirror.
    theta_d:
        Propagation phase accumulated between the two qubits.
    tau_fb:
        Round-trip travel time qubit 1 -> mirror -> qubit 1.
    tau_dd:
        One-way travel time between the qubits.
    delta:
        Frequency offset between the qubits.  The rotating frame is centred
        between them, so qubit 1 sits at ``+delta/2`` and qubit 2 at
        ``-delta/2``.
    variant:
        Which waveguide setting to simulate; see the module docstring.
    """

    gamma_L: float
    gamma_R: float
    theta1: float = 0.0
    theta_d: float = 0.0
    tau_fb: float = 0.0
    tau_dd: float = 0.0
    delta: float = 0.0
    variant: Variant = Variant.SEMI_INFINITE

    def __post_init__(self) -> None:
        object.__setattr__(self, "variant", Variant.coerce(self.variant))
        for name in ("gamma_L", "gamma_R", "theta1", "theta_d", "tau_fb", "tau_dd", "delta"):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise ConfigError(f"{name} must be a real number, got {value!r}") from None
            if not math.isfinite(value):
                raise ConfigError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.gamma_L < 0.0 or self.gamma_R < 0.0:
            raise ConfigError(
                f"decay rates must be non-negative, got gamma_L={self.gamma_L}, "
                f"gamma_R={self.gamma_R}"
            )
        if self.gamma_L + self.gamma_R <= 0.0:
            raise ConfigError("at least one decay rate must be positive")
        if self.tau_fb < 0.0 or self.tau_dd < 0.0:
            raise ConfigError(
                f"travel times must be non-negative, got tau_fb={self.tau_fb}, "
                f"tau_dd={self.tau_dd}"
            )
        object.__setattr__(self, "theta1", _reduce_phase(self.theta1))
        object.__setattr__(self, "theta_d", _reduce_phase(self.theta_d))

    @property
    def gamma(self) -> float:
        """Total decay rate of a single qubit."""
        return self.gamma_L + self.gamma_R

    @property
    def chirality(self) -> float:
        """Rate asymmetry ``gamma_R / gamma_L`` (``inf`` for fully chiral)."""
        if self.gamma_L == 0.0:
            return math.inf
        return self.gamma_R / self.gamma_L

    @classmethod
    def from_chirality(cls, ratio: float, gamma: float = 1.0, **kwargs) -> "SystemConfig":
        """Build a configuration from the rate asymmetry ``gamma_R/gamma_L``.

        The total rate is split as ``gamma_L = gamma/(1+ratio)`` and
        ``gamma_R = gamma*ratio/(1+ratio)``.  Remaining keyword arguments are
        forwarded to the constructor.
        """
        ratio = float(ratio)
        gamma = float(gamma)
        if not math.isfinite(ratio) or ratio < 0.0:
            raise ConfigError(f"chirality ratio must be finite and >= 0, got {ratio}")
        if not math.isfinite(gamma) or gamma <= 0.0:
            raise ConfigError(f"total rate must be finite and > 0, got {gamma}")
        gamma_L = gamma / (1.0 + ratio)
        gamma_R = gamma * ratio / (1.0 + ratio)
        return cls(gamma_L=gamma_L, gamma_R=gamma_R, **kwargs)

    @classmethod
    def from_positions(
        cls,
        x1: float,
        x2: float,
        velocity: float,
        omega0: float,
        **kwargs,
    ) -> "SystemConfig":
        """Build phases and delays from physical positions along the guide.

        ``x1`` and ``x2`` are the distances of the qubits from the mirror at
        the origin (``x2 >= x1 > 0``), ``velocity`` the group velocity and
        ``omega0`` the carrier frequency.  Phases are ``omega0 * x / velocity``
        and travel times ``x / velocity``; both are derived here once and then
        treated as independent parameters.
        """
        x1 = float(x1)
        x2 = float(x2)
        velocity = float(velocity)
        omega0 = float(omega0)
        if velocity <= 0.0:
            raise ConfigError(f"velocity must be positive, got {velocity}")
        if not (0.0 < x1 <= x2):
            raise ConfigError(f"need 0 < x1 <= x2, got x1={x1}, x2={x2}")
        theta1 = omega0 * x1 / velocity
        theta_d = omega0 * (x2 - x1) / velocity
        tau_fb = 2.0 * x1 / velocity
        tau_dd = (x2 - x1) / velocity
        return cls(
            theta1=theta1,
            theta_d=theta_d,
            tau_fb=tau_fb,
            tau_dd=tau_dd,
            **kwargs,
        )


@dataclass(frozen=True)
class PhaseDelaySet:
    """Interference phases and arrival times of the four retarded channels.

    Emission from one qubit reaches a qubit again along four routes: directly
    across the qubit-qubit separation, via the mirror back to itself (one
    route per qubit), and via the mirror across to the other qubit.  Each
    route carries an accumulated propagation phase and a travel time.
    """

    phi_dd: float
    phi_fb1: float
    phi_cross: float
    phi_fb2: float
    t_dd: float
    t_fb1: float
    t_cross: float
    t_fb2: float


def derive_phase_delay_set(config: SystemConfig) -> PhaseDelaySet:
    """Compute the four route phases and travel times from a configuration.

    Routes and their phase/time bookkeeping (mirror at the origin, qubit 1
    closer to it):

    ========  =======================  ==========================
    route     phase                    travel time
    ========  =======================  ==========================
    direct    ``theta_d``              ``tau_dd``
    mirror-1  ``2*theta1``             ``tau_fb``
    cross     ``2*theta1 + theta_d``   ``tau_fb + tau_dd``
    mirror-2  ``2*theta1 + 2*theta_d`` ``tau_fb + 2*tau_dd``
    ========  =======================  ==========================

    Only ``2*theta1`` ever enters, so ``theta1`` is folded into ``[0, pi)``
    first; shifting ``theta1`` by ``pi`` leaves every phase unchanged.
    """
    theta1 = math.fmod(config.theta1, math.pi)
    theta_d = config.theta_d
    return PhaseDelaySet(
        phi_dd=_reduce_phase(theta_d),
        phi_fb1=_reduce_phase(2.0 * theta1),
        phi_cross=_reduce_phase(2.0 * theta1 + theta_d),
        phi_fb2=_reduce_phase(2.0 * theta1 + 2.0 * theta_d),
        t_dd=config.tau_dd,
        t_fb1=config.tau_fb,
        t_cross=config.tau_fb + config.tau_dd,
        t_fb2=config.tau_fb + 2.0 * config.tau_dd,
    )


# --- plain-text configuration files -----------------------------------------

_RATE_KEYS = {"gamma_ratio", "gamma_L", "gamma_R"}
_FLOAT_KEYS = {
    "gamma_ratio",
    "gamma_L",
    "gamma_R",
    "theta1",
    "theta_d",
    "tau_fb",
    "tau_dd",
    "delta",
    "step_h",
    "horizon_T",
}
_ALLOWED_KEYS = _FLOAT_KEYS | {"variant"}


@dataclass(frozen=True)
class LoadedConfig:
    """A parsed configuration file: system parameters plus solver hints."""

    system: SystemConfig
    step_h: float | None = None
    horizon_T: float | None = None


def load_config(path: Union[str, Path]) -> LoadedConfig:
    """Parse a ``key = value`` configuration file.

    Blank lines and ``#`` comments are ignored.  Rates are given either as
    ``gamma_ratio`` (total rate fixed to 1) or as an explicit ``gamma_L`` /
    ``gamma_R`` pair; mixing the two styles, repeating a key, or using an
    unknown key is an error.  ``step_h`` and ``horizon_T`` are optional solver
    hints passed through to the caller.
    """
    path = Path(path)
    values: dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _ALLOWED_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"{path}:{lineno}: empty value for {key!r}")
        values[key] = value

    parsed: dict[str, float] = {}
    for key, text in values.items():
        if key == "variant":
            continue
        try:
            parsed[key] = float(text)
        except ValueError:
            raise ConfigError(f"{path}: value for {key!r} is not a number: {text!r}") from None

    has_ratio = "gamma_ratio" in values
    has_pair = "gamma_L" in values or "gamma_R" in values
    if has_ratio and has_pair:
        raise ConfigError(f"{path}: give either gamma_ratio or gamma_L/gamma_R, not both")
    if has_pair and not ("gamma_L" in values and "gamma_R" in values):
        raise ConfigError(f"{path}: gamma_L and gamma_R must be given together")

    system_kwargs = {
        key: parsed[key]
        for key in ("theta1", "theta_d", "tau_fb", "tau_dd", "delta")
        if key in parsed
    }
    if "variant" in values:
        system_kwargs["variant"] = Variant.coerce(values["variant"])

    if has_ratio:
        system = SystemConfig.from_chirality(parsed["gamma_ratio"], **system_kwargs)
    elif has_pair:
        system = SystemConfig(
            gamma_L=parsed["gamma_L"], gamma_R=parsed["gamma_R"], **system_kwargs
        )
    else:
        system = SystemConfig(gamma_L=0.5, gamma_R=0.5, **system_kwargs)

    return LoadedConfig(
        system=system,
        step_h=parsed.get("step_h"),
        horizon_T=parsed.get("horizon_T"),
    )
