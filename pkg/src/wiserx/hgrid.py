"""Hierarchical (quadtree-style) store of timestamped position estimates.

Leaves are sensor-radius-sized cells holding flat estimate lists plus a
visit count per robot; per-robot activity flags gate queries and coverage
in O(1) without touching stored data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Estimate:
    robot_id: int
    tick: int
    x: float
    y: float
    trace_pos: float


class _Node:
    __slots__ = ("min_x", "min_y", "max_x", "max_y", "children", "estimates", "visit_count")

    def __init__(self, min_x, min_y, max_x, max_y):
        self.min_x = min_x
        self.min_y = min_y
        self.max_x = max_x
        self.max_y = max_y
        self.children: list["_Node"] | None = None
        self.estimates: list[Estimate] = []
        self.visit_count: dict[int, int] = {}

    def intersects_disc(self, px: float, py: float, radius: float) -> bool:
        cx = min(max(px, self.min_x), self.max_x)
        cy = min(max(py, self.min_y), self.max_y)
        return (cx - px) ** 2 + (cy - py) ** 2 <= radius * radius


class Hgrid:
    """Quadtree over the environment rectangle with depth
    ceil(log2(max_extent / cell_size)) and flat leaf storage."""

    def __init__(self, bounds: tuple[float, float, float, float], cell_size: float):
        if cell_size <= 0:
            raise ValueError("cell_size must be positive")
        self.bounds = bounds
        self.cell_size = cell_size
        min_x, min_y, max_x, max_y = bounds
        max_extent = max(max_x - min_x, max_y - min_y)
        self.depth = max(0, math.ceil(math.log2(max_extent / cell_size))) if max_extent > cell_size else 0
        self.root = _Node(min_x, min_y, max_x, max_y)
        self._leaves: list[_Node] = []
        self._build(self.root, self.depth)
        self.active_flags: dict[int, int] = {}
        self.node_visits = 0  # instrumentation for the traversal-bound test

    def _build(self, node: _Node, levels: int) -> None:
        if levels == 0:
            self._leaves.append(node)
            return
        mx = (node.min_x + node.max_x) / 2.0
        my = (node.min_y + node.max_y) / 2.0
        node.children = [
            _Node(node.min_x, node.min_y, mx, my),
            _Node(mx, node.min_y, node.max_x, my),
            _Node(node.min_x, my, mx, node.max_y),
            _Node(mx, my, node.max_x, node.max_y),
        ]
        for child in node.children:
            self._build(child, levels - 1)

    @property
    def leaf_count(self) -> int:
        return len(self._leaves)

    def leaves(self) -> list[_Node]:
        return self._leaves

    def _leaf_for(self, x: float, y: float) -> _Node:
        min_x, min_y, max_x, max_y = self.bounds
        # out-of-bounds inserts clamp to the nearest boundary leaf
        x = min(max(x, min_x), max_x - 1e-9 * max(1.0, max_x - min_x))
        y = min(max(y, min_y), max_y - 1e-9 * max(1.0, max_y - min_y))
        node = self.root
        while node.children is not None:
            mx = (node.min_x + node.max_x) / 2.0
            my = (node.min_y + node.max_y) / 2.0
            idx = (1 if x >= mx else 0) + (2 if y >= my else 0)
            node = node.children[idx]
        return node

    def set_active(self, robot_id: int, tau: int) -> None:
        """O(1) activity flip; stored estimates are untouched."""
        self.active_flags[robot_id] = 1 if tau else 0

    def is_active(self, robot_id: int) -> bool:
        return self.active_flags.get(robot_id, 1) == 1

    def insert(self, robot_id: int, position: tuple[float, float], trace_pos: float, tick: int) -> None:
        # out-of-bounds estimates clamp into the rectangle so the stored
        # point stays inside the leaf that holds it
        min_x, min_y, max_x, max_y = self.bounds
        x = min(max(position[0], min_x), max_x)
        y = min(max(position[1], min_y), max_y)
        leaf = self._leaf_for(x, y)
        leaf.estimates.append(Estimate(robot_id=robot_id, tick=tick, x=x, y=y, trace_pos=trace_pos))
        leaf.visit_count[robot_id] = leaf.visit_count.get(robot_id, 0) + 1

    def query_near(self, point: tuple[float, float], radius: float) -> list[Estimate]:
        """Estimates from active robots within `radius` of `point`
        (inclusive), sorted by (tick, robot_id). Visits only tree nodes
        whose rectangle intersects the disc."""
        if radius < 0:
            raise ValueError("radius must be >= 0")
        px, py = point
        out: list[Estimate] = []
        stack = [self.root]
        r2 = radius * radius
        while stack:
            node = stack.pop()
            self.node_visits += 1
            if not node.intersects_disc(px, py, radius):
                continue
            if node.children is not None:
                stack.extend(node.children)
                continue
            for est in node.estimates:
                if not self.is_active(est.robot_id):
                    continue
                if (est.x - px) ** 2 + (est.y - py) ** 2 <= r2:
                    out.append(est)
        out.sort(key=lambda e: (e.tick, e.robot_id))
        return out

    def coverage_fraction(self, k: int) -> float:
        """Fraction of leaves whose visit count, summed over active
        robots, has reached k."""
        if k < 1:
            raise ValueError("k must be >= 1")
        filled = 0
        for leaf in self._leaves:
            total = sum(c for rid, c in leaf.visit_count.items() if self.is_active(rid))
            if total >= k:
                filled += 1
        return filled / len(self._leaves)

    def dump_csv_rows(self) -> list[tuple[int, int, float, float, float, int]]:
        """Debug rows (robot_id, tick, x, y, trace_pos, leaf_index)."""
        rows = []
        for idx, leaf in enumerate(self._leaves):
            for est in leaf.estimates:
                rows.append((est.robot_id, est.tick, est.x, est.y, est.trace_pos, idx))
        rows.sort(key=lambda r: (r[1], r[0], r[5]))
        return rows
