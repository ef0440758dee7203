import math

import numpy as np
import pytest

from panotrack import KalmanParams, Location3D, kf_new, kf_predict, kf_update


def _assert_spd(cov):
    assert np.allclose(cov, cov.T, atol=1e-9)
    assert np.linalg.eigvalsh(cov).min() > 0


class TestInit:
    def test_zero_location(self):
        state = kf_new(Location3D(0.0, 0.0))
        assert np.array_equal(state.mean, [0.0, 0.0, 0.0, 0.0])

    def test_copies_location(self):
        state = kf_new(Location3D(3.0, -2.0))
        assert np.array_equal(state.mean, [3.0, -2.0, 0.0, 0.0])

    def test_fresh_covariance_is_diagonal(self):
        params = KalmanParams(0.05, 0.1, 3.16)
        state = kf_new(Location3D(1.0, 1.0), params)
        assert np.array_equal(state.cov, np.diag(np.diag(state.cov)))
        assert state.cov[0, 0] == pytest.approx(0.05**2)
        assert state.cov[2, 2] == pytest.approx(3.16**2)
        _assert_spd(state.cov)

    def test_bad_params(self):
        with pytest.raises(ValueError):
            KalmanParams(measurement_noise_std=0.0)


class TestPredict:
    def test_unit_velocity_step(self):
        state = kf_new(Location3D(0.0, 0.0))
        state.mean = np.array([0.0, 0.0, 1.0, 0.0])
        _, pred = kf_predict(state)
        assert (pred.x, pred.z) == (1.0, 0.0)

    def test_zero_velocity_stays(self):
        state = kf_new(Location3D(2.0, 3.0))
        _, pred = kf_predict(state)
        assert (pred.x, pred.z) == (2.0, 3.0)

    def test_trace_grows(self):
        state = kf_new(Location3D(0.0, 0.0))
        for _ in range(20):
            before = np.trace(state.cov)
            state, _ = kf_predict(state)
            assert np.trace(state.cov) > before
            state = kf_update(state, Location3D(0.0, 0.0))


class TestUpdate:
    def test_zero_innovation_keeps_position(self):
        state = kf_new(Location3D(1.0, 2.0))
        state, pred = kf_predict(state)
        updated = kf_update(state, pred)
        assert updated.mean[0] == pytest.approx(pred.x, abs=1e-12)
        assert updated.mean[1] == pytest.approx(pred.z, abs=1e-12)

    def test_trace_shrinks(self):
        state = kf_new(Location3D(0.0, 0.0))
        state, _ = kf_predict(state)
        updated = kf_update(state, Location3D(0.2, -0.1))
        assert np.trace(updated.cov) < np.trace(state.cov)

    def test_noiseless_line_converges(self):
        # Ground truth walks (k, 0) at one meter per frame; after ten
        # predicts the filter should be locked on.
        state = kf_new(Location3D(0.0, 0.0))
        errors = []
        for k in range(1, 21):
            state, pred = kf_predict(state)
            errors.append(math.hypot(pred.x - k, pred.z))
            state = kf_update(state, Location3D(float(k), 0.0))
        assert errors[9] < 1e-6
        assert errors[-1] < 1e-6

    def test_stationary_position_variance_non_increasing(self):
        rng = np.random.default_rng(12)
        state = kf_new(Location3D(0.0, 0.0))
        previous = None
        for _ in range(40):
            state, _ = kf_predict(state)
            state = kf_update(state, Location3D(rng.normal(0, 0.05), rng.normal(0, 0.05)))
            posterior_var = state.cov[0, 0]
            if previous is not None:
                assert posterior_var <= previous + 1e-12
            previous = posterior_var


class TestCovarianceHealth:
    def test_spd_through_random_sequences(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            state = kf_new(Location3D(*rng.uniform(-5, 5, 2)))
            for _ in range(rng.integers(5, 25)):
                state, _ = kf_predict(state)
                _assert_spd(state.cov)
                if rng.random() < 0.7:
                    state = kf_update(state, Location3D(*rng.uniform(-5, 5, 2)))
                    _assert_spd(state.cov)

    def test_states_are_fresh_objects(self):
        state = kf_new(Location3D(0.0, 0.0))
        advanced, _ = kf_predict(state)
        assert advanced is not state
        assert np.array_equal(state.mean, [0.0, 0.0, 0.0, 0.0])
