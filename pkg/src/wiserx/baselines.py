"""The three comparison strategies: independent exploration, a global
oracle assigner over a merged map, and divide-and-conquer strips."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from scipy import ndimage

from .mapping import Frontier, LocalMap
from .strategy import UtilityParams, information_gain
from .world import FREE, UNKNOWN


@dataclass(frozen=True)
class Partition:
    """Axis-aligned rectangles (min_x, min_y, max_x, max_y), one per robot."""

    regions: tuple[tuple[float, float, float, float], ...]

    def region_of(self, robot_id: int) -> tuple[float, float, float, float]:
        return self.regions[robot_id]

    def contains(self, robot_id: int, x: float, y: float) -> bool:
        x0, y0, x1, y1 = self.regions[robot_id]
        return x0 <= x < x1 and y0 <= y < y1


def plain_utility(
    frontier: Frontier, local: LocalMap, robot_pose: tuple[float, float, float], params: UtilityParams
) -> float:
    """Overlap-free utility: best-viewpoint raw gain per unit distance."""
    center_xy = local.cell_center(*frontier.center)
    cost = max(
        local.resolution, math.hypot(center_xy[0] - robot_pose[0], center_xy[1] - robot_pose[1])
    )
    best = 0.0
    for vp in frontier.viewpoints:
        _, gain_raw = information_gain(vp, local, (), params)
        best = max(best, gain_raw)
    return best / cost


def baseline1_select(
    frontiers, local: LocalMap, robot_pose: tuple[float, float, float], params: UtilityParams
):
    """Utility-only selection, ignoring all neighbor information."""
    if not frontiers:
        return None
    scored = [( plain_utility(f, local, robot_pose, params), f.id) for f in frontiers]
    best = min(scored, key=lambda t: (-t[0], t[1]))
    return best[1]


def baseline2_assign(
    merged: LocalMap,
    robot_poses: dict[int, tuple[float, float, float]],
    frontiers,
    params: UtilityParams,
) -> dict[int, int]:
    """Greedy oracle assignment on the shared merged map: repeatedly take
    the best remaining (robot, frontier) pair by gain/cost; at most one
    frontier per robot and one robot per frontier."""
    pairs = []
    for rid, pose in robot_poses.items():
        for f in frontiers:
            pairs.append((plain_utility(f, merged, pose, params), rid, f.id))
    pairs.sort(key=lambda t: (-t[0], t[1], t[2]))
    assigned: dict[int, int] = {}
    used_frontiers: set[int] = set()
    for _, rid, fid in pairs:
        if rid in assigned or fid in used_frontiers:
            continue
        assigned[rid] = fid
        used_frontiers.add(fid)
    return assigned


def baseline3_partition(bounds: tuple[float, float, float, float], n: int) -> Partition:
    """Split the environment into n vertical strips of equal width."""
    if n < 1:
        raise ValueError("need at least one robot")
    min_x, min_y, max_x, max_y = bounds
    width = (max_x - min_x) / n
    regions = tuple(
        (min_x + i * width, min_y, max_x if i == n - 1 else min_x + (i + 1) * width, max_y)
        for i in range(n)
    )
    return Partition(regions=regions)


def baseline3_select(
    frontiers,
    local: LocalMap,
    robot_pose: tuple[float, float, float],
    params: UtilityParams,
    partition: Partition,
    robot_id: int,
):
    """baseline1 restricted to frontiers whose center lies in the robot's strip."""
    own = []
    for f in frontiers:
        cx, cy = local.cell_center(*f.center)
        if partition.contains(robot_id, cx, cy):
            own.append(f)
    return baseline1_select(own, local, robot_pose, params)


def openable_unknown_mask(local: LocalMap) -> np.ndarray:
    """Unknown cells that can still be observed: their 4-connected
    UNKNOWN component touches known FREE space. Pockets sealed behind
    observed walls (e.g. border corners) are excluded."""
    unknown = local.cells == UNKNOWN
    if not np.any(unknown):
        return unknown
    labels, count = ndimage.label(unknown, structure=[[0, 1, 0], [1, 1, 1], [0, 1, 0]])
    free = local.cells == FREE
    near_free = ndimage.binary_dilation(free, structure=[[0, 1, 0], [1, 1, 1], [0, 1, 0]])
    open_ids = np.unique(labels[unknown & near_free])
    return np.isin(labels, open_ids) & unknown


def strip_columns(local: LocalMap, partition: Partition, robot_id: int) -> tuple[int, int]:
    """Half-open column range [c0, c1) of the robot's vertical strip."""
    x0, _, x1, _ = partition.region_of(robot_id)
    res = local.resolution
    c0 = int(x0 / res)
    c1 = max(c0 + 1, int(math.ceil(x1 / res)))
    return c0, min(c1, local.cells.shape[1])


def strip_complete(local: LocalMap, partition: Partition, robot_id: int) -> bool:
    """True when the robot's strip holds no observable UNKNOWN cells."""
    c0, c1 = strip_columns(local, partition, robot_id)
    openable = openable_unknown_mask(local)
    return not np.any(openable[:, c0:c1])
