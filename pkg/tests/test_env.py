"""Episode mechanics: observations, rewards, termination, and physics consistency."""

import math

import numpy as np
import pytest

from streamqc.core import RHO_GROUND
from streamqc.dynamics import OMEGA_MAX, DriveSpec, NoiseModel, evolve_interval
from streamqc.env import (
    INITIAL_STATE,
    EnvConfig,
    EpisodeLog,
    QubitFlipEnv,
    RLState,
    apply_action_noise,
    compose_state,
    compute_reward,
)
from streamqc.measurement import make_gaussian_pointer, nonselective_map

IDEAL = EnvConfig(action_noise_std=0.0)
FLIP_ACTION = 1.0 / 6.0


class TestEnvConfig:
    def test_defaults(self):
        cfg = EnvConfig()
        assert cfg.total_time == 1.0
        assert cfg.n_steps == 100
        assert cfg.dt == pytest.approx(0.01, abs=1e-15)
        assert cfg.omega_max == pytest.approx(3.0 * math.pi, abs=1e-15)
        assert cfg.pointer_sigma == 10.0
        assert cfg.success_threshold == 0.99
        assert cfg.fail_threshold == 0.05
        assert cfg.consecutive_success_required == 1

    def test_invalid_shapes_rejected(self):
        with pytest.raises(ValueError):
            EnvConfig(n_steps=0)
        with pytest.raises(ValueError):
            EnvConfig(total_time=0.0)

    def test_streak_requirement_limited_to_supported_values(self):
        EnvConfig(consecutive_success_required=4)
        with pytest.raises(ValueError):
            EnvConfig(consecutive_success_required=2)


class TestObservation:
    def test_initial_state_vector(self):
        np.testing.assert_array_equal(
            INITIAL_STATE.as_array(), np.array([0.0, 0.5, 0.0, 1.0, 0.0, 0.0, 0.0])
        )

    def test_compose_state_example(self):
        rho = np.diag([0.2, 0.8]).astype(complex)
        state = compose_state(0.5, 10, 50, rho)
        np.testing.assert_allclose(
            state.as_array(), [0.5, 0.6, 0.5, 0.2, 0.0, 0.0, 0.8], atol=1e-15
        )

    def test_compose_state_uses_coherence_magnitudes(self):
        rho = np.array([[0.5, 0.3 - 0.4j], [0.3 + 0.4j, 0.5]], dtype=complex)
        state = compose_state(0.0, 0, 0, rho)
        assert state.rho12_abs == pytest.approx(0.5, abs=1e-15)
        assert state.rho21_abs == pytest.approx(0.5, abs=1e-15)

    def test_as_array_field_order(self):
        state = RLState(0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7)
        np.testing.assert_array_equal(state.as_array(), [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7])


class TestActionNoise:
    def test_zero_std_is_identity(self):
        rng = np.random.default_rng(0)
        for a in (0.0, 0.25, 1.0):
            assert apply_action_noise(a, 0.0, rng) == a

    def test_mean_and_spread(self):
        rng = np.random.default_rng(1)
        std = 0.02
        draws = np.array([apply_action_noise(0.5, std, rng) for _ in range(100000)])
        # nothing clips this far from the boundaries
        assert abs(draws.mean() - 0.5) < 3.0 * std / math.sqrt(draws.size)
        assert draws.std() == pytest.approx(std, rel=0.02)

    def test_clipped_to_unit_interval(self):
        rng = np.random.default_rng(2)
        draws = [apply_action_noise(1.0, 0.5, rng) for _ in range(1000)]
        assert max(draws) <= 1.0
        assert min(draws) >= 0.0
        assert max(draws) == 1.0  # upper clip actually engages


class TestComputeReward:
    def test_base_reward_is_negative_distance_to_target(self):
        cfg = EnvConfig()
        rho = np.diag([0.6, 0.4]).astype(complex)
        reward, done, streak = compute_reward(rho, 10, 0, cfg)
        assert reward == pytest.approx(-0.6, abs=1e-15)
        assert not done
        assert streak == 0

    def test_success_bonus_fires_once_threshold_crossed(self):
        cfg = EnvConfig()
        rho = np.diag([0.005, 0.995]).astype(complex)
        reward, done, streak = compute_reward(rho, 10, 0, cfg)
        assert reward == pytest.approx(1000.0 - 0.005, abs=1e-12)
        assert done
        assert streak == 1

    def test_final_step_penalty_when_population_left_behind(self):
        cfg = EnvConfig()
        rho = np.diag([0.06, 0.94]).astype(complex)
        reward, done, _ = compute_reward(rho, cfg.n_steps, 0, cfg)
        assert reward == pytest.approx(-0.06 - 100.0, abs=1e-12)
        assert done

    def test_final_step_without_penalty(self):
        cfg = EnvConfig()
        rho = np.diag([0.04, 0.96]).astype(complex)
        reward, done, _ = compute_reward(rho, cfg.n_steps, 0, cfg)
        assert reward == pytest.approx(-0.04, abs=1e-12)
        assert done

    def test_streak_accumulates_and_resets(self):
        cfg = EnvConfig(consecutive_success_required=4)
        good = np.diag([0.005, 0.995]).astype(complex)
        bad = np.diag([0.5, 0.5]).astype(complex)
        streak = 0
        for expected in (1, 2, 3):
            reward, done, streak = compute_reward(good, 10, streak, cfg)
            assert not done
            assert streak == expected
            assert reward == pytest.approx(-0.005, abs=1e-12)
        _, done, streak = compute_reward(bad, 10, streak, cfg)
        assert not done and streak == 0
        for expected in (1, 2, 3):
            _, done, streak = compute_reward(good, 10, streak, cfg)
        reward, done, streak = compute_reward(good, 10, streak, cfg)
        assert done and streak == 4
        assert reward == pytest.approx(1000.0 - 0.005, abs=1e-12)


class TestEpisodeMechanics:
    def run_episode(self, env, seed, policy=lambda state: FLIP_ACTION):
        state = env.reset(seed)
        total = 0.0
        while True:
            result = env.step(policy(state))
            state = result.state
            total += result.reward
            if result.done:
                return total, state

    def test_seeded_episodes_reproduce_bitwise(self):
        logs = []
        for _ in range(2):
            env = QubitFlipEnv(EnvConfig())
            self.run_episode(env, seed=np.random.SeedSequence(5))
            logs.append(list(env.log.rows()))
        assert logs[0] == logs[1]

    def test_trace_preserved_every_step(self):
        env = QubitFlipEnv(EnvConfig(), seed=6)
        env.reset(6)
        done = False
        while not done:
            result = env.step(FLIP_ACTION)
            done = result.done
            tr = env.rho[0, 0].real + env.rho[1, 1].real
            assert tr == pytest.approx(1.0, abs=1e-10)
            for component in result.state.as_array():
                assert -1e-12 <= component <= 1.0 + 1e-12

    def test_episode_bounded_by_n_steps(self):
        env = QubitFlipEnv(EnvConfig(), seed=7)
        for trial in range(5):
            env.reset(np.random.SeedSequence([7, trial]))
            steps = 0
            while True:
                steps += 1
                if env.step(FLIP_ACTION).done:
                    break
            assert steps <= 100
            assert len(env.log) == steps

    def test_total_reward_within_design_bounds(self):
        # base reward in [-1, 0] per step, one +1000 bonus, one -100 penalty
        env = QubitFlipEnv(EnvConfig(), seed=8)
        rng = np.random.default_rng(9)
        for _ in range(10):
            total, _ = self.run_episode(
                env, rng.integers(1 << 31), policy=lambda s: float(rng.random())
            )
            assert -200.0 <= total <= 1000.0

    def test_step_after_done_raises(self):
        env = QubitFlipEnv(EnvConfig(), seed=10)
        env.reset(10)
        while not env.step(FLIP_ACTION).done:
            pass
        with pytest.raises(RuntimeError):
            env.step(FLIP_ACTION)

    def test_out_of_range_action_rejected(self):
        env = QubitFlipEnv(EnvConfig(), seed=11)
        env.reset(11)
        for bad in (-0.1, 1.1):
            with pytest.raises(ValueError):
                env.step(bad)

    def test_info_and_log_consistent(self):
        env = QubitFlipEnv(EnvConfig(), seed=12)
        env.reset(12)
        result = env.step(0.3)
        assert set(result.info) == {"fidelity", "q0", "omega_applied"}
        assert result.info["fidelity"] == pytest.approx(env.rho[1, 1].real, abs=1e-12)
        assert env.log.q0s[0] == result.info["q0"]
        assert env.log.actions_norm[0] == 0.3  # commanded, not applied
        assert env.log.fidelities[0] == result.info["fidelity"]

    def test_terminal_fidelity_recorded(self):
        env = QubitFlipEnv(EnvConfig(), seed=13)
        env.reset(13)
        while not env.step(FLIP_ACTION).done:
            pass
        assert env.log.terminal_fidelity == env.log.fidelities[-1]
        # without measurement backaction the flip pulse must cross the threshold
        quiet = QubitFlipEnv(EnvConfig(action_noise_std=0.0, measurement_enabled=False))
        quiet.reset(13)
        while not quiet.step(FLIP_ACTION).done:
            pass
        assert quiet.log.terminal_fidelity > 0.99

    def test_log_matches_csv_schema(self):
        assert EpisodeLog.CSV_COLUMNS == (
            "step", "t", "action_norm", "omega", "q0",
            "exp_x", "exp_y", "exp_z", "rho11", "rho22", "reward", "fidelity",
        )
        env = QubitFlipEnv(EnvConfig(), seed=14)
        env.reset(14)
        env.step(FLIP_ACTION)
        row = next(env.log.rows())
        assert len(row) == len(EpisodeLog.CSV_COLUMNS)
        assert row[0] == 1
        assert row[1] == pytest.approx(0.01, abs=1e-15)


class TestUnitaryLimit:
    # with measurement and all noise disabled an episode is a plain Rabi rotation

    def closed_form_rho22(self, omega, t):
        return math.sin(omega * t) ** 2

    def test_constant_drive_matches_rotation(self):
        cfg = EnvConfig(action_noise_std=0.0, measurement_enabled=False)
        env = QubitFlipEnv(cfg, seed=20)
        env.reset(20)
        omega = FLIP_ACTION * OMEGA_MAX
        for step in range(1, 94):
            result = env.step(FLIP_ACTION)
            expected = self.closed_form_rho22(omega, step * cfg.dt)
            assert env.rho[1, 1].real == pytest.approx(expected, abs=1e-8)
            if step < 93:
                assert not result.done

    def test_success_fires_at_predicted_step(self):
        # sin^2(pi t / 2) crosses 0.99 at t = 0.9363, i.e. step 94
        cfg = EnvConfig(action_noise_std=0.0, measurement_enabled=False)
        env = QubitFlipEnv(cfg, seed=21)
        env.reset(21)
        steps = 0
        while True:
            steps += 1
            if env.step(FLIP_ACTION).done:
                break
        assert steps == 94

    def test_full_duration_pulse_completes_flip(self):
        # threshold above 1 disables the bonus so the pulse runs its full length
        cfg = EnvConfig(action_noise_std=0.0, measurement_enabled=False, success_threshold=2.0)
        env = QubitFlipEnv(cfg, seed=22)
        env.reset(22)
        done = False
        while not done:
            done = env.step(FLIP_ACTION).done
        assert env.step_index == 100
        assert env.rho[1, 1].real == pytest.approx(1.0, abs=1e-8)

    def test_zero_drive_on_ground_state_is_quantum_nondemolition(self):
        # sigma_z measurement of an eigenstate never disturbs it
        env = QubitFlipEnv(EnvConfig(action_noise_std=0.0), seed=23)
        env.reset(23)
        for _ in range(50):
            env.step(0.0)
            assert abs(env.rho[1, 1]) < 1e-12
            assert abs(env.rho[0, 1]) < 1e-12
        np.testing.assert_allclose(env.rho, RHO_GROUND, atol=1e-12)


class TestEnsembleAverage:
    def test_mean_conditional_state_matches_nonselective_channel(self):
        # averaging selective trajectories must reproduce deterministic
        # evolve + nonselective measurement composition
        cfg = EnvConfig(action_noise_std=0.0)
        n_episodes, n_steps = 600, 10
        env = QubitFlipEnv(cfg)
        samples = np.empty((n_episodes, 2, 2), dtype=complex)
        for ep in range(n_episodes):
            env.reset(np.random.SeedSequence([30, ep]))
            for _ in range(n_steps):
                env.step(FLIP_ACTION)
            samples[ep] = env.rho
        mean = samples.mean(axis=0)

        pointer = make_gaussian_pointer(cfg.pointer_sigma)
        rho = RHO_GROUND.copy()
        drive = DriveSpec(FLIP_ACTION * OMEGA_MAX)
        for _ in range(n_steps):
            rho = evolve_interval(rho, drive, NoiseModel(), cfg.dt, cfg.substeps)
            rho = nonselective_map(rho, pointer)

        for idx in np.ndindex(2, 2):
            for part in (np.real, np.imag):
                values = part(samples[(slice(None), *idx)])
                se = values.std(ddof=1) / math.sqrt(n_episodes)
                assert abs(part(mean[idx]) - part(rho[idx])) < 3.0 * se + 1e-12
