"""Integrator correctness: closed forms, convergence, invariances, guards."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qmirror import (
    AmplitudePair,
    ConfigError,
    IntegrationError,
    SolverSettings,
    SystemConfig,
    Variant,
    breakpoints,
    integrate,
    simulate,
)
from qmirror.dde import Interp, Trajectory, default_step
from qmirror.model import rhs_infinite

from .helpers import cascade_amplitudes, convergence_errors, markov_amplitudes

phases = st.floats(min_value=0.0, max_value=2.0 * math.pi)


def headline_config(**kwargs):
    return SystemConfig.from_chirality(
        2.0, tau_fb=1.0, tau_dd=0.25, theta_d=math.pi / 4, **kwargs
    )


class TestClosedForms:
    def test_cascade_amplitudes(self):
        """Fully chiral open guide: alpha = e^{-t/2}, beta = -t e^{-t/2}."""
        config = SystemConfig(gamma_L=0.0, gamma_R=1.0, variant=Variant.INFINITE)
        traj = simulate(config, horizon_T=20.0)
        ref_a, ref_b = cascade_amplitudes(traj.times)
        assert np.max(np.abs(traj.alpha - ref_a)) < 1e-12
        assert np.max(np.abs(traj.beta - ref_b)) < 1e-12

    def test_cascade_picks_up_propagation_phase(self):
        config = SystemConfig(
            gamma_L=0.0, gamma_R=1.0, theta_d=0.6, variant=Variant.INFINITE
        )
        traj = simulate(config, horizon_T=10.0)
        _, ref_b = cascade_amplitudes(traj.times, phase=0.6)
        assert np.max(np.abs(traj.beta - ref_b)) < 1e-12

    def test_zero_delay_semi_matches_matrix_exponential(self):
        config = SystemConfig(gamma_L=0.3, gamma_R=0.7, delta=0.5)
        traj = simulate(config, horizon_T=15.0)
        picks = traj.times[::500]
        ref = markov_amplitudes(config, picks)
        assert np.max(np.abs(traj.alpha[::500] - ref[:, 0])) < 1e-10
        assert np.max(np.abs(traj.beta[::500] - ref[:, 1])) < 1e-10

    def test_markov_variant_equals_zero_delay_semi(self):
        base = SystemConfig(gamma_L=0.2, gamma_R=0.8)
        markov = simulate(
            SystemConfig(gamma_L=0.2, gamma_R=0.8, variant=Variant.MARKOV_LIMIT),
            horizon_T=10.0,
        )
        semi = simulate(base, horizon_T=10.0)
        assert np.max(np.abs(markov.alpha - semi.alpha)) < 1e-10
        assert np.max(np.abs(markov.beta - semi.beta)) < 1e-10


class TestCausality:
    def test_second_qubit_silent_before_first_arrival(self):
        config = headline_config()
        traj = simulate(config, horizon_T=2.0)
        before = traj.times < config.tau_dd
        assert np.all(traj.beta[before] == 0.0)
        assert np.all(np.abs(traj.alpha[before]) > 0.0)
        after = (traj.times > config.tau_dd + 0.05) & (traj.times < 1.0)
        assert np.all(np.abs(traj.beta[after]) > 0.0)

    def test_feedback_inactive_before_round_trip(self):
        """Until t = tau_fb the mirror plays no role: the semi-infinite and
        open-guide runs of the same geometry coincide."""
        config = headline_config()
        semi = simulate(config, horizon_T=3.0)
        open_guide = integrate(
            rhs_infinite, config, SolverSettings(horizon_T=3.0)
        )
        cut = semi.times < config.tau_fb
        assert np.max(np.abs(semi.alpha[cut] - open_guide.alpha[cut])) < 1e-13
        assert np.max(np.abs(semi.beta[cut] - open_guide.beta[cut])) < 1e-13
        tail = semi.times > config.tau_fb + 0.5
        assert np.max(np.abs(semi.alpha[tail] - open_guide.alpha[tail])) > 1e-3


class TestInvariances:
    def test_mirror_phase_half_turn_is_identity(self):
        # theta1 enters only through e^{2i*theta1}; adding pi flips nothing.
        # The residual is the rounding of (0.4 + pi) mod pi, ~1e-16 in phase.
        base = headline_config(theta1=0.4)
        shifted = headline_config(theta1=0.4 + math.pi)
        ta = simulate(base, horizon_T=8.0)
        tb = simulate(shifted, horizon_T=8.0)
        assert np.max(np.abs(ta.alpha - tb.alpha)) < 1e-13
        assert np.max(np.abs(ta.beta - tb.beta)) < 1e-13

    @given(phi=phases)
    def test_global_phase_equivariance(self, phi):
        config = headline_config()
        base = simulate(config, horizon_T=4.0)
        rotated = simulate(
            config, horizon_T=4.0, initial=AmplitudePair(np.exp(1j * phi), 0.0)
        )
        factor = np.exp(1j * phi)
        assert np.max(np.abs(rotated.alpha - factor * base.alpha)) < 1e-12
        assert np.max(np.abs(rotated.beta - factor * base.beta)) < 1e-12

    @pytest.mark.parametrize(
        "config",
        [
            headline_config(),
            SystemConfig.from_chirality(20.0, tau_fb=2.0, theta_d=math.pi / 4),
            SystemConfig(gamma_L=0.5, gamma_R=0.5, tau_fb=5.0, theta_d=math.pi / 2,
                         variant=Variant.INFINITE),
        ],
    )
    def test_population_never_exceeds_one(self, config):
        traj = simulate(config, horizon_T=30.0)
        norms = traj.norm_sq()
        assert np.max(norms) <= 1.0 + 1e-6
        assert np.min(norms) >= 0.0


class TestConvergence:
    def test_rk4_order_on_step_halving(self):
        """Error vs a 16x-finer reference should shrink by >= 4 per halving
        (clean fourth order gives ~16)."""
        config = headline_config()
        errors = convergence_errors(
            config, horizon=4.0, steps=(1 / 64, 1 / 128, 1 / 256), ref_step=1 / 1024
        )
        assert errors[0] / errors[1] > 10.0
        assert errors[1] / errors[2] >= 4.0

    def test_small_step_boundary_is_inclusive(self):
        # step equal to the smallest delay is allowed (stage lookups stay
        # in completed history); anything larger is refused.
        config = SystemConfig(gamma_L=0.5, gamma_R=0.5, tau_dd=1e-3,
                              variant=Variant.INFINITE)
        traj = simulate(config, horizon_T=0.05, step_h=1e-3)
        assert traj.n_samples == 51
        with pytest.raises(ConfigError, match="delay"):
            simulate(config, horizon_T=0.05, step_h=2e-3)


class TestBreakpoints:
    def test_lattice_for_commensurate_delays(self):
        config = headline_config()
        pts = breakpoints(config, horizon_T=2.0)
        assert pts == pytest.approx(np.arange(0, 9) * 0.25)

    def test_open_guide_lattice_is_direct_multiples(self):
        config = headline_config(variant=Variant.INFINITE)
        pts = breakpoints(config, horizon_T=1.0)
        assert pts == pytest.approx([0.0, 0.25, 0.5, 0.75, 1.0])

    def test_incommensurate_delays_fill_both_families(self):
        config = SystemConfig(
            gamma_L=0.5, gamma_R=0.5, tau_fb=1.0, tau_dd=math.sqrt(2) / 4
        )
        pts = breakpoints(config, horizon_T=2.0)
        assert pts == sorted(pts)
        assert len(pts) == len(set(pts))
        tau = math.sqrt(2) / 4
        for want in (tau, 2 * tau, 1.0, 1.0 + tau, 2.0):
            assert any(abs(p - want) < 1e-12 for p in pts)

    def test_markov_limit_lattice_is_just_the_origin(self):
        assert breakpoints(headline_config(variant=Variant.MARKOV_LIMIT), 10.0) == [0.0]

    def test_cap_refuses_dense_lattices(self):
        config = SystemConfig(gamma_L=0.5, gamma_R=0.5, tau_dd=1e-4,
                              variant=Variant.INFINITE)
        with pytest.raises(ConfigError, match="breakpoint"):
            breakpoints(config, horizon_T=10.0, breakpoint_cap=100)


class TestGuards:
    def test_settings_validation(self):
        with pytest.raises(ConfigError):
            SolverSettings(horizon_T=0.0)
        with pytest.raises(ConfigError):
            SolverSettings(horizon_T=10.0, step_h=-1e-3)
        with pytest.raises(ConfigError, match="exceeds"):
            SolverSettings(horizon_T=1.0, step_h=2.0)
        with pytest.raises(ConfigError, match="breakpoint_cap"):
            SolverSettings(horizon_T=1.0, breakpoint_cap=0)
        with pytest.raises(ConfigError, match="interpolation"):
            SolverSettings(horizon_T=1.0, interp="quintic")
        assert SolverSettings(horizon_T=1.0, interp="linear").interp is Interp.LINEAR

    def test_step_larger_than_delay_rejected(self):
        with pytest.raises(ConfigError, match="smallest positive delay"):
            simulate(headline_config(), horizon_T=5.0, step_h=0.5)

    def test_overfilled_initial_state_rejected(self):
        with pytest.raises(ConfigError, match="norm"):
            simulate(headline_config(), horizon_T=1.0,
                     initial=AmplitudePair(1.0, 0.5))

    def test_default_step_tracks_smallest_delay(self):
        assert default_step(headline_config()) == 1e-3
        tiny = SystemConfig(gamma_L=0.5, gamma_R=0.5, tau_dd=1e-3,
                            variant=Variant.INFINITE)
        assert default_step(tiny) == pytest.approx(1e-3 / 16)
        no_delay = SystemConfig(gamma_L=0.5, gamma_R=0.5)
        assert default_step(no_delay) == 1e-3

    def test_divergence_reports_time(self):
        # An unstable step size on the stiff zero-delay branch overflows;
        # the error carries the time where it happened.
        config = SystemConfig(gamma_L=2.0, gamma_R=4.0, variant=Variant.INFINITE)
        with pytest.raises(IntegrationError) as info:
            simulate(config, horizon_T=3000.0, step_h=1.0)
        assert info.value.time is not None
        assert 0.0 < info.value.time <= 3000.0


class TestTrajectoryContainer:
    def test_validation(self):
        with pytest.raises(ValueError, match="identical shapes"):
            Trajectory(times=[0.0, 1.0], alpha=[1.0], beta=[0.0, 0.0])
        with pytest.raises(ValueError, match="strictly increasing"):
            Trajectory(times=[0.0, 0.0], alpha=[1.0, 1.0], beta=[0.0, 0.0])
        with pytest.raises(ValueError, match="non-empty"):
            Trajectory(times=[], alpha=[], beta=[])

    def test_accessors(self):
        traj = Trajectory(times=[0.0, 1.0, 2.0], alpha=[1.0, 0.5, 0.25],
                          beta=[0.0, 0.5j, 0.25j])
        assert traj.n_samples == 3
        assert traj.amp(1) == AmplitudePair(0.5, 0.5j)
        assert len(traj.amps) == 3
        assert traj.norm_sq() == pytest.approx([1.0, 0.5, 0.125])

    def test_linear_at_and_range_check(self):
        traj = Trajectory(times=[0.0, 1.0], alpha=[1.0, 0.0], beta=[0.0, 1.0])
        mid = traj.at(0.25)
        assert mid.alpha == pytest.approx(0.75)
        assert mid.beta == pytest.approx(0.25)
        with pytest.raises(ValueError, match="outside"):
            traj.at(1.5)

    def test_resample_matches_interp(self):
        traj = simulate(headline_config(), horizon_T=2.0)
        targets = np.linspace(0.0, 2.0, 81)
        alpha, beta = traj.resample(targets)
        assert alpha[0] == traj.alpha[0]
        assert abs(alpha[-1] - traj.alpha[-1]) < 1e-12
        assert np.all(np.abs(beta[targets < 0.25]) < 1e-15)


class TestDenseOutput:
    def test_hermite_between_nodes_matches_finer_run(self):
        config = headline_config()
        coarse = simulate(config, horizon_T=4.0, step_h=1e-3)
        fine = simulate(config, horizon_T=4.0, step_h=2.5e-4)
        probes = np.linspace(0.1, 3.9, 97) + 4.1e-4  # off-grid for both runs
        worst = max(
            abs(complex(coarse.at(s).alpha) - complex(fine.at(s).alpha))
            for s in probes
        )
        assert worst < 1e-12

    def test_interp_modes_agree_at_moderate_step(self):
        config = headline_config()
        fine = simulate(config, horizon_T=4.0, step_h=2.5e-4)
        for mode in (Interp.LINEAR, Interp.CUBIC_HERMITE):
            run = simulate(config, horizon_T=4.0, step_h=1.25e-2, interp=mode)
            alpha, _ = run.resample(fine.times)
            assert np.max(np.abs(alpha - fine.alpha)) < 1e-4
