"""Filtered relative-position tracks from raw ping samples.

Pipeline per estimation event: pick the stablest bearing window (multipath
outliers fluctuate, direct-path bearings do not), average a uniform
sub-sample of the ranges, then feed the fused (range, bearing) measurement
to a constant-velocity EKF. One track per neighbor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InactiveTrack, SingularInnovation
from .geometry import circular_mean, circular_variance, wrap_angle

# Consecutive missed decision steps after which a neighbor counts as failed.
F_MISS = 3
DEFAULT_PROCESS_NOISE = 0.05  # white-acceleration intensity, m^2/s^3


@dataclass(frozen=True)
class RelPosTrack:
    """EKF state (x, y, vx, vy) for one neighbor, in the observer frame."""

    target_id: int
    state: np.ndarray  # shape (4,)
    covariance: np.ndarray  # shape (4, 4)
    trace_pos: float  # trace of the 2x2 position block
    last_update_tick: int
    tau: int = 1
    history: tuple = ()  # ((tick, (x, y), trace_pos), ...)
    missed: int = 0

    @property
    def position(self) -> tuple[float, float]:
        return (float(self.state[0]), float(self.state[1]))


def select_stable_bearing(samples) -> float:
    """Circular mean of the contiguous window (length min(3, n)) with the
    minimal circular variance; ties go to the earliest window."""
    samples = np.asarray(samples, dtype=float)
    n = len(samples)
    if n == 0:
        raise ValueError("need at least one bearing sample")
    w = min(3, n)
    best_start, best_var = 0, math.inf
    for start in range(n - w + 1):
        var = circular_variance(samples[start : start + w])
        if var < best_var - 1e-15:
            best_start, best_var = start, var
    return circular_mean(samples[best_start : best_start + w])


def average_range(samples, subsample_stride: int = 1) -> float:
    """Arithmetic mean of every stride-th sample starting at index 0."""
    samples = np.asarray(samples, dtype=float)
    if len(samples) == 0:
        raise ValueError("need at least one range sample")
    if subsample_stride < 1:
        raise ValueError("stride must be >= 1")
    return float(samples[::subsample_stride].mean())


def fuse_measurement(
    bearings, ranges, subsample_stride: int = 1
) -> tuple[float, float]:
    """(range, bearing) from raw samples via the stable-bearing / averaged-range rule."""
    return average_range(ranges, subsample_stride), select_stable_bearing(bearings)


def _transition(dt: float) -> np.ndarray:
    f = np.eye(4)
    f[0, 2] = dt
    f[1, 3] = dt
    return f


def _process_noise(dt: float, q: float) -> np.ndarray:
    qm = np.zeros((4, 4))
    a = q * dt**4 / 4.0
    b = q * dt**3 / 2.0
    c = q * dt**2
    for axis in (0, 1):
        p, v = axis, axis + 2
        qm[p, p] = a
        qm[p, v] = qm[v, p] = b
        qm[v, v] = c
    return qm


def init_track(
    target_id: int,
    meas: tuple[float, float],
    observer_pose: tuple[float, float, float],
    range_var: float,
    tick: int,
) -> RelPosTrack:
    """Track from a first fused measurement: zero velocity, covariance
    diag(range_var + 1, range_var + 1, 1, 1)."""
    rng_m, bearing = meas
    ox, oy, oh = observer_pose
    x = ox + rng_m * math.cos(oh + bearing)
    y = oy + rng_m * math.sin(oh + bearing)
    cov = np.diag([range_var + 1.0, range_var + 1.0, 1.0, 1.0])
    trace = cov[0, 0] + cov[1, 1]
    return RelPosTrack(
        target_id=target_id,
        state=np.array([x, y, 0.0, 0.0]),
        covariance=cov,
        trace_pos=trace,
        last_update_tick=tick,
        history=((tick, (x, y), trace), ),
    )


def ekf_predict(track: RelPosTrack, dt: float, q: float = DEFAULT_PROCESS_NOISE) -> RelPosTrack:
    """Constant-velocity prediction with white-acceleration process noise."""
    if dt < 0:
        raise ValueError("dt must be >= 0")
    f = _transition(dt)
    state = f @ track.state
    cov = f @ track.covariance @ f.T + _process_noise(dt, q)
    cov = 0.5 * (cov + cov.T)
    return replace(track, state=state, covariance=cov, trace_pos=float(cov[0, 0] + cov[1, 1]))


def ekf_update(
    track: RelPosTrack,
    meas: tuple[float, float],
    observer_pose: tuple[float, float, float],
    meas_var: tuple[float, float],
    tick: int = 0,
) -> RelPosTrack:
    """EKF update on a fused (range, bearing) measurement.

    The bearing innovation is wrapped to (-pi, pi]; the covariance update
    uses the Joseph form and is re-symmetrized.
    """
    if track.tau == 0:
        raise InactiveTrack(f"track for robot {track.target_id} is deactivated")
    z_range, z_bearing = meas
    if z_range < 0:
        raise ValueError("range must be >= 0")
    ox, oy, oh = observer_pose
    dx = track.state[0] - ox
    dy = track.state[1] - oy
    rho = max(math.hypot(dx, dy), 1e-9)
    pred_range = rho
    pred_bearing = wrap_angle(math.atan2(dy, dx) - oh)

    hmat = np.array(
        [
            [dx / rho, dy / rho, 0.0, 0.0],
            [-dy / rho**2, dx / rho**2, 0.0, 0.0],
        ]
    )
    rmat = np.diag(meas_var)
    p = track.covariance
    s = hmat @ p @ hmat.T + rmat
    det = s[0, 0] * s[1, 1] - s[0, 1] * s[1, 0]
    if abs(det) < 1e-300:
        raise SingularInnovation("innovation covariance not invertible")
    k = p @ hmat.T @ np.linalg.inv(s)

    innovation = np.array([z_range - pred_range, wrap_angle(z_bearing - pred_bearing)])
    state = track.state + k @ innovation
    ikh = np.eye(4) - k @ hmat
    cov = ikh @ p @ ikh.T + k @ rmat @ k.T
    cov = 0.5 * (cov + cov.T)
    trace = float(cov[0, 0] + cov[1, 1])
    entry = (tick, (float(state[0]), float(state[1])), trace)
    return replace(
        track,
        state=state,
        covariance=cov,
        trace_pos=trace,
        last_update_tick=tick,
        history=track.history + (entry,),
        missed=0,
    )


def deactivate(track: RelPosTrack) -> RelPosTrack:
    """Mark the neighbor as failed; history is preserved. Idempotent."""
    return replace(track, tau=0)
