"""Simulated sensors: 360-degree LiDAR and the noisy ping channel.

The LiDAR uses exact DDA grid traversal (Amanatides-Woo), JIT-compiled
with numba since it runs for every robot on every tick. The ping channel
produces windows of noisy bearing/range samples, with optional multipath
outliers replacing whole bearing samples uniformly at random.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import PoseInOccupied
from .geometry import wrap_angle
from .world import OCCUPIED, GroundTruthMap


@dataclass(frozen=True)
class LidarScan:
    """One full scan. distances[k] is the hit distance of beam k; beams
    that reached max range carry distance r with max_range[k] True."""

    origin_pose: tuple[float, float, float]
    angles: np.ndarray  # world-frame beam angles, 2*pi*k/beams
    distances: np.ndarray
    max_range: np.ndarray  # bool per beam
    r: float


@dataclass(frozen=True)
class PingSampleSet:
    """Raw samples from one ping exchange. true_range / true_bearing are
    carried for test oracles only and must never be read by strategies."""

    observer_id: int
    target_id: int
    tick: int
    bearing_samples: np.ndarray
    range_samples: np.ndarray
    true_range: float
    true_bearing: float


@njit(cache=True)
def _cast_rays(cells, res, x0, y0, angles, r):
    """DDA traversal per beam. Returns (distances, hit_flags)."""
    h, w = cells.shape
    n = angles.shape[0]
    dists = np.empty(n)
    hits = np.zeros(n, dtype=np.bool_)
    for k in range(n):
        dx = math.cos(angles[k])
        dy = math.sin(angles[k])
        col = int(x0 / res)
        row = int(y0 / res)
        step_c = 1 if dx > 0 else -1
        step_r = 1 if dy > 0 else -1
        # distance along ray to the next vertical / horizontal grid line
        if dx > 0:
            t_max_x = ((col + 1) * res - x0) / dx
        elif dx < 0:
            t_max_x = (col * res - x0) / dx
        else:
            t_max_x = 1e18
        if dy > 0:
            t_max_y = ((row + 1) * res - y0) / dy
        elif dy < 0:
            t_max_y = (row * res - y0) / dy
        else:
            t_max_y = 1e18
        t_delta_x = res / abs(dx) if dx != 0.0 else 1e18
        t_delta_y = res / abs(dy) if dy != 0.0 else 1e18

        t = 0.0
        dist = r
        hit = False
        while t <= r:
            if t_max_x < t_max_y:
                t = t_max_x
                t_max_x += t_delta_x
                col += step_c
            else:
                t = t_max_y
                t_max_y += t_delta_y
                row += step_r
            if col < 0 or col >= w or row < 0 or row >= h:
                break
            if t > r:
                break
            if cells[row, col] == 1:  # OCCUPIED
                dist = t
                hit = True
                break
        dists[k] = dist
        hits[k] = hit
    return dists, hits


def lidar_scan(
    pose: tuple[float, float, float], gmap: GroundTruthMap, r: float, beams: int
) -> LidarScan:
    """Cast `beams` rays at angles 2*pi*k/beams from the pose.

    Raises PoseInOccupied when the pose sits on an occupied cell.
    """
    x, y, _ = pose
    row, col = gmap.cell_of(x, y)
    if gmap.cells[row, col] == OCCUPIED:
        raise PoseInOccupied(f"pose ({x}, {y}) on occupied cell")
    angles = 2.0 * math.pi * np.arange(beams) / beams
    if r <= 0.0:
        return LidarScan(
            origin_pose=pose,
            angles=angles,
            distances=np.zeros(beams),
            max_range=np.ones(beams, dtype=bool),
            r=float(r),
        )
    dists, hits = _cast_rays(gmap.cells, gmap.resolution, x, y, angles, float(r))
    return LidarScan(
        origin_pose=pose, angles=angles, distances=dists, max_range=~hits, r=float(r)
    )


def ping_measurement(
    observer_pose: tuple[float, float, float],
    target_pose: tuple[float, float, float],
    noise: tuple[float, float],
    multipath_prob: float,
    window: int,
    rng: np.random.Generator,
    observer_id: int = -1,
    target_id: int = -1,
    tick: int = 0,
) -> PingSampleSet:
    """Draw `window` noisy bearing/range samples between two true poses.

    Draw order per sample is fixed (outlier coin, bearing noise, range
    noise) so results are stable across refactors. Bearings are measured
    in the observer frame; with probability `multipath_prob` a bearing
    sample is replaced by a uniform outlier. Ranges are never multipath
    corrupted and are floored at zero.
    """
    bearing_std, range_std = noise
    ox, oy, oh = observer_pose
    tx, ty, _ = target_pose
    true_range = math.hypot(tx - ox, ty - oy)
    true_bearing = wrap_angle(math.atan2(ty - oy, tx - ox) - oh)

    bearings = np.empty(window)
    ranges = np.empty(window)
    for i in range(window):
        coin = rng.random()
        if coin < multipath_prob:
            bearings[i] = wrap_angle(rng.uniform(-math.pi, math.pi))
        else:
            bearings[i] = wrap_angle(true_bearing + rng.normal(0.0, bearing_std))
        ranges[i] = max(0.0, true_range + rng.normal(0.0, range_std))
    return PingSampleSet(
        observer_id=observer_id,
        target_id=target_id,
        tick=tick,
        bearing_samples=bearings,
        range_samples=ranges,
        true_range=true_range,
        true_bearing=true_bearing,
    )
