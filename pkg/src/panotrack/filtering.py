"""Constant-velocity Kalman filtering on the ground plane.

State is [x, z, vx, vz] in meters and meters/frame with one frame per
step. Prediction uses a discrete white-noise-acceleration process model;
updates observe position only. Covariance updates use the Joseph form so
the matrix stays symmetric positive-definite through long chains.
"""

from dataclasses import dataclass

import numpy as np

from .geometry import Location3D, as_xz

_F = np.array(
    [
        [1.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]
)
_H = np.array([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]])
_I4 = np.eye(4)


@dataclass(frozen=True)
class KalmanParams:
    measurement_noise_std: float = 0.05  # meters
    process_accel_std: float = 0.1  # meters / frame^2
    initial_velocity_std: float = 3.16  # meters / frame

    def __post_init__(self):
        if not (
            self.measurement_noise_std > 0
            and self.process_accel_std > 0
            and self.initial_velocity_std > 0
        ):
            raise ValueError("all Kalman noise parameters must be positive")


@dataclass
class KalmanState:
    mean: np.ndarray  # [x, z, vx, vz]
    cov: np.ndarray  # 4x4 symmetric positive-definite
    params: KalmanParams


def _process_noise(accel_std: float) -> np.ndarray:
    # Discrete white-noise acceleration over one frame (dt = 1).
    q = accel_std**2
    return np.array(
        [
            [0.25 * q, 0.0, 0.5 * q, 0.0],
            [0.0, 0.25 * q, 0.0, 0.5 * q],
            [0.5 * q, 0.0, q, 0.0],
            [0.0, 0.5 * q, 0.0, q],
        ]
    )


def kf_new(loc, params: KalmanParams | None = None) -> KalmanState:
    """Fresh filter at a measured location with zero initial velocity."""
    params = params or KalmanParams()
    x, z = as_xz(loc)
    m2 = params.measurement_noise_std**2
    v2 = params.initial_velocity_std**2
    return KalmanState(np.array([x, z, 0.0, 0.0]), np.diag([m2, m2, v2, v2]), params)


def kf_predict(state: KalmanState) -> tuple[KalmanState, Location3D]:
    """Advance one frame; returns the new state and the predicted location."""
    mean = _F @ state.mean
    cov = _F @ state.cov @ _F.T + _process_noise(state.params.process_accel_std)
    cov = 0.5 * (cov + cov.T)
    return KalmanState(mean, cov, state.params), Location3D(float(mean[0]), float(mean[1]))


def kf_update(state: KalmanState, measured) -> KalmanState:
    """Fold a position measurement into the state."""
    r = state.params.measurement_noise_std**2
    meas_cov = np.diag([r, r])
    z = np.array(as_xz(measured))
    innovation = z - _H @ state.mean
    s = _H @ state.cov @ _H.T + meas_cov
    gain = state.cov @ _H.T @ np.linalg.inv(s)
    mean = state.mean + gain @ innovation
    ikh = _I4 - gain @ _H
    cov = ikh @ state.cov @ ikh.T + gain @ meas_cov @ gain.T
    cov = 0.5 * (cov + cov.T)
    return KalmanState(mean, cov, state.params)
