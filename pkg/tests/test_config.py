"""Configuration parsing, validation, and the phase/delay bookkeeping."""

import math

import pytest
from hypothesis import given, strategies as st

from qmirror import (
    ConfigError,
    SystemConfig,
    Variant,
    derive_phase_delay_set,
    load_config,
)
from qmirror.config import TWO_PI, _reduce_phase

finite_floats = st.floats(allow_nan=False, allow_infinity=False, width=64)
phases = st.floats(min_value=-50.0, max_value=50.0)
rates = st.floats(min_value=1e-6, max_value=10.0)
delays = st.floats(min_value=0.0, max_value=20.0)


class TestVariant:
    def test_coerce_accepts_strings_and_members(self):
        assert Variant.coerce("infinite") is Variant.INFINITE
        assert Variant.coerce(" Semi_Infinite ") is Variant.SEMI_INFINITE
        assert Variant.coerce(Variant.MARKOV_LIMIT) is Variant.MARKOV_LIMIT

    def test_coerce_rejects_unknown(self):
        with pytest.raises(ConfigError, match="unknown variant"):
            Variant.coerce("bogus")


class TestSystemConfig:
    def test_defaults(self):
        config = SystemConfig(gamma_L=0.4, gamma_R=0.6)
        assert config.gamma == pytest.approx(1.0)
        assert config.chirality == pytest.approx(1.5)
        assert config.variant is Variant.SEMI_INFINITE
        assert config.tau_fb == 0.0 and config.tau_dd == 0.0

    def test_rejects_negative_rates(self):
        with pytest.raises(ConfigError, match="non-negative"):
            SystemConfig(gamma_L=-0.1, gamma_R=0.5)

    def test_rejects_all_zero_rates(self):
        with pytest.raises(ConfigError, match="at least one"):
            SystemConfig(gamma_L=0.0, gamma_R=0.0)

    def test_rejects_negative_delays(self):
        with pytest.raises(ConfigError, match="travel times"):
            SystemConfig(gamma_L=0.5, gamma_R=0.5, tau_fb=-1.0)

    def test_rejects_non_finite(self):
        with pytest.raises(ConfigError, match="finite"):
            SystemConfig(gamma_L=math.inf, gamma_R=0.5)

    def test_rejects_non_numeric(self):
        with pytest.raises(ConfigError, match="real number"):
            SystemConfig(gamma_L="wide", gamma_R=0.5)

    def test_fully_chiral_ratio_is_inf(self):
        assert SystemConfig(gamma_L=0.0, gamma_R=1.0).chirality == math.inf

    @given(theta=phases)
    def test_phases_reduced_to_principal_range(self, theta):
        config = SystemConfig(gamma_L=0.5, gamma_R=0.5, theta1=theta, theta_d=theta)
        assert 0.0 <= config.theta1 < TWO_PI
        assert 0.0 <= config.theta_d < TWO_PI

    @given(ratio=st.floats(min_value=1e-3, max_value=1e3), gamma=rates)
    def test_from_chirality_splits_total_rate(self, ratio, gamma):
        config = SystemConfig.from_chirality(ratio, gamma=gamma)
        assert config.gamma == pytest.approx(gamma, rel=1e-12)
        assert config.chirality == pytest.approx(ratio, rel=1e-12)

    def test_from_chirality_rejects_bad_input(self):
        with pytest.raises(ConfigError):
            SystemConfig.from_chirality(-1.0)
        with pytest.raises(ConfigError):
            SystemConfig.from_chirality(2.0, gamma=0.0)

    def test_from_positions_derives_both_channels(self):
        config = SystemConfig.from_positions(
            x1=1.0, x2=3.0, velocity=2.0, omega0=math.pi, gamma_L=0.5, gamma_R=0.5
        )
        assert config.tau_fb == pytest.approx(1.0)
        assert config.tau_dd == pytest.approx(1.0)
        assert config.theta1 == pytest.approx(_reduce_phase(math.pi / 2))
        assert config.theta_d == pytest.approx(_reduce_phase(math.pi))

    def test_from_positions_rejects_bad_geometry(self):
        with pytest.raises(ConfigError, match="x1"):
            SystemConfig.from_positions(x1=2.0, x2=1.0, velocity=1.0, omega0=1.0,
                                        gamma_L=0.5, gamma_R=0.5)
        with pytest.raises(ConfigError, match="velocity"):
            SystemConfig.from_positions(x1=1.0, x2=2.0, velocity=0.0, omega0=1.0,
                                        gamma_L=0.5, gamma_R=0.5)


class TestPhaseDelaySet:
    def test_route_table_hand_values(self):
        config = SystemConfig(
            gamma_L=0.5, gamma_R=0.5, theta1=0.3, theta_d=0.7, tau_fb=2.0, tau_dd=0.5
        )
        pd = derive_phase_delay_set(config)
        assert pd.phi_dd == pytest.approx(0.7)
        assert pd.phi_fb1 == pytest.approx(0.6)
        assert pd.phi_cross == pytest.approx(1.3)
        assert pd.phi_fb2 == pytest.approx(2.0)
        assert pd.t_dd == 0.5
        assert pd.t_fb1 == 2.0

    @given(tau_fb=delays, tau_dd=delays)
    def test_composite_delays_are_exact_sums(self, tau_fb, tau_dd):
        config = SystemConfig(gamma_L=0.5, gamma_R=0.5, tau_fb=tau_fb, tau_dd=tau_dd)
        pd = derive_phase_delay_set(config)
        # Bit-for-bit, so the breakpoint lattice of composite routes lands on
        # the same floats as n1*t_dd + n2*t_fb1.
        assert pd.t_cross == tau_fb + tau_dd
        assert pd.t_fb2 == tau_fb + 2.0 * tau_dd

    @given(theta1=phases, theta_d=phases)
    def test_half_turn_of_mirror_phase_is_identity(self, theta1, theta_d):
        base = derive_phase_delay_set(
            SystemConfig(gamma_L=0.3, gamma_R=0.7, theta1=theta1, theta_d=theta_d)
        )
        shifted = derive_phase_delay_set(
            SystemConfig(
                gamma_L=0.3, gamma_R=0.7, theta1=theta1 + math.pi, theta_d=theta_d
            )
        )
        assert shifted.phi_dd == base.phi_dd
        assert (shifted.t_dd, shifted.t_fb1, shifted.t_cross, shifted.t_fb2) == (
            base.t_dd, base.t_fb1, base.t_cross, base.t_fb2
        )
        # theta1 + pi rounds, so a sub-ulp theta1 can be absorbed by the
        # addition and the wrapped result can land on either side of 0.
        # Compare the mirror-route phases as angles, not bit-for-bit.
        for got, want in (
            (shifted.phi_fb1, base.phi_fb1),
            (shifted.phi_cross, base.phi_cross),
            (shifted.phi_fb2, base.phi_fb2),
        ):
            gap = abs(got - want) % TWO_PI
            assert min(gap, TWO_PI - gap) < 1e-12

    @given(theta1=phases, theta_d=phases)
    def test_phases_in_principal_range(self, theta1, theta_d):
        config = SystemConfig(gamma_L=0.5, gamma_R=0.5, theta1=theta1, theta_d=theta_d)
        pd = derive_phase_delay_set(config)
        for phi in (pd.phi_dd, pd.phi_fb1, pd.phi_cross, pd.phi_fb2):
            assert 0.0 <= phi < TWO_PI


class TestLoadConfig:
    def write(self, tmp_path, text):
        path = tmp_path / "system.cfg"
        path.write_text(text)
        return path

    def test_full_file(self, tmp_path):
        path = self.write(
            tmp_path,
            """
            # headline geometry
            gamma_ratio = 2.0
            theta_d = 0.7853981633974483
            tau_fb = 1.0
            tau_dd = 0.25   # quarter-unit retardation
            variant = semi_infinite
            step_h = 5e-4
            horizon_T = 8
            """,
        )
        loaded = load_config(path)
        assert loaded.system.chirality == pytest.approx(2.0)
        assert loaded.system.tau_fb == 1.0
        assert loaded.system.variant is Variant.SEMI_INFINITE
        assert loaded.step_h == 5e-4
        assert loaded.horizon_T == 8.0

    def test_defaults_to_balanced_rates(self, tmp_path):
        loaded = load_config(self.write(tmp_path, "tau_fb = 5\n"))
        assert loaded.system.gamma_L == 0.5
        assert loaded.system.gamma_R == 0.5
        assert loaded.step_h is None and loaded.horizon_T is None

    def test_explicit_rate_pair(self, tmp_path):
        loaded = load_config(self.write(tmp_path, "gamma_L = 0.2\ngamma_R = 0.8\n"))
        assert loaded.system.chirality == pytest.approx(4.0)

    def test_ratio_and_pair_conflict(self, tmp_path):
        path = self.write(tmp_path, "gamma_ratio = 2\ngamma_L = 0.5\ngamma_R = 0.5\n")
        with pytest.raises(ConfigError, match="not both"):
            load_config(path)

    def test_incomplete_pair(self, tmp_path):
        with pytest.raises(ConfigError, match="together"):
            load_config(self.write(tmp_path, "gamma_L = 0.5\n"))

    def test_unknown_key_reports_line(self, tmp_path):
        with pytest.raises(ConfigError, match=r":2: unknown key"):
            load_config(self.write(tmp_path, "tau_fb = 1\nbogus = 3\n"))

    def test_duplicate_key(self, tmp_path):
        with pytest.raises(ConfigError, match="duplicate"):
            load_config(self.write(tmp_path, "tau_fb = 1\ntau_fb = 2\n"))

    def test_empty_value(self, tmp_path):
        with pytest.raises(ConfigError, match="empty value"):
            load_config(self.write(tmp_path, "tau_fb =\n"))

    def test_missing_equals(self, tmp_path):
        with pytest.raises(ConfigError, match="key = value"):
            load_config(self.write(tmp_path, "tau_fb 1\n"))

    def test_non_numeric_value(self, tmp_path):
        with pytest.raises(ConfigError, match="not a number"):
            load_config(self.write(tmp_path, "tau_fb = fast\n"))

    def test_bad_variant(self, tmp_path):
        with pytest.raises(ConfigError, match="unknown variant"):
            load_config(self.write(tmp_path, "variant = closed\n"))
