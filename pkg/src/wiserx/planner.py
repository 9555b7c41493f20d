"""Grid shortest-path planning (8-connected A*) and kinematic motion."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .mapping import LocalMap
from .world import FREE

SQRT2 = math.sqrt(2.0)

_NEIGHBORS = (
    (-1, -1, SQRT2), (-1, 0, 1.0), (-1, 1, SQRT2),
    (0, -1, 1.0), (0, 1, 1.0),
    (1, -1, SQRT2), (1, 0, 1.0), (1, 1, SQRT2),
)


@dataclass(frozen=True)
class Path:
    waypoints: tuple[tuple[int, int], ...]
    length: float  # meters

    def polyline(self, resolution: float) -> np.ndarray:
        """(n, 2) array of waypoint cell centers (x, y) in meters."""
        pts = np.array(
            [((c + 0.5) * resolution, (r + 0.5) * resolution) for r, c in self.waypoints]
        )
        return pts


def _octile(a: tuple[int, int], b: tuple[int, int]) -> float:
    dr = abs(a[0] - b[0])
    dc = abs(a[1] - b[1])
    return max(dr, dc) + (SQRT2 - 1.0) * min(dr, dc)


def shortest_path(local: LocalMap, start: tuple[int, int], goal: tuple[int, int]) -> Path | None:
    """Minimal-cost 8-connected path over FREE cells (the goal cell itself
    may be non-free, e.g. a frontier cell). Unknown and occupied cells
    block. Returns None when the goal is unreachable.

    Tie-break is deterministic by (f, h, row, col).
    """
    cells = local.cells
    h_cells, w_cells = cells.shape
    res = local.resolution
    if start == goal:
        return Path(waypoints=(start,), length=0.0)

    def passable(r: int, c: int) -> bool:
        return (r, c) == goal or cells[r, c] == FREE

    g_score = {start: 0.0}
    came: dict[tuple[int, int], tuple[int, int]] = {}
    h0 = _octile(start, goal)
    open_heap = [(h0, h0, start[0], start[1])]
    closed = set()
    while open_heap:
        f, _, r, c = heapq.heappop(open_heap)
        cur = (r, c)
        if cur in closed:
            continue
        if cur == goal:
            cells_path = [cur]
            while cur in came:
                cur = came[cur]
                cells_path.append(cur)
            cells_path.reverse()
            return Path(waypoints=tuple(cells_path), length=g_score[goal] * res)
        closed.add(cur)
        for dr, dc, cost in _NEIGHBORS:
            nr, nc = r + dr, c + dc
            if not (0 <= nr < h_cells and 0 <= nc < w_cells):
                continue
            if not passable(nr, nc):
                continue
            cand = g_score[cur] + cost
            nxt = (nr, nc)
            if cand < g_score.get(nxt, math.inf) - 1e-12:
                g_score[nxt] = cand
                came[nxt] = cur
                h = _octile(nxt, goal)
                heapq.heappush(open_heap, (cand + h, h, nr, nc))
    return None


def step_motion(
    pose: tuple[float, float, float],
    path: Path,
    resolution: float,
    speed: float,
    dt: float,
    traveled: float = 0.0,
) -> tuple[tuple[float, float, float], float]:
    """Advance speed*dt meters along the path polyline from arc length
    `traveled`. Returns the new pose (heading faces motion direction) and
    progress in [0, 1]; clamps at the goal."""
    if not path.waypoints:
        raise ValueError("path is empty")
    pts = path.polyline(resolution)
    if len(pts) == 1 or path.length <= 0.0:
        x, y = pts[-1]
        return (float(x), float(y), pose[2]), 1.0
    target = min(traveled + speed * dt, path.length)
    # walk segments to the arc length `target`
    acc = 0.0
    for i in range(len(pts) - 1):
        seg = pts[i + 1] - pts[i]
        seg_len = float(np.hypot(seg[0], seg[1]))
        if acc + seg_len >= target - 1e-12:
            frac = 0.0 if seg_len == 0 else (target - acc) / seg_len
            p = pts[i] + frac * seg
            heading = math.atan2(seg[1], seg[0])
            return (float(p[0]), float(p[1]), heading), target / path.length
        acc += seg_len
    x, y = pts[-1]
    seg = pts[-1] - pts[-2]
    return (float(x), float(y), math.atan2(seg[1], seg[0])), 1.0
