"""Per-robot occupancy grid, frontier detection, and PCA frontier splitting."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit
from scipy import ndimage

from .errors import FrameMismatch
from .sensing import LidarScan
from .world import FREE, OCCUPIED, UNKNOWN, dump_grid

_EIGHT_CONNECTED = np.ones((3, 3), dtype=int)


@dataclass
class LocalMap:
    """One robot's occupancy grid. Starts fully UNKNOWN.

    frame is the offset of the local origin in the ground frame; the
    simulator uses ground-truth poses for mapping, so it is (0, 0) and
    only read by the evaluation code.
    """

    cells: np.ndarray  # int8 of FREE / OCCUPIED / UNKNOWN
    resolution: float
    frame: tuple[float, float] = (0.0, 0.0)

    @classmethod
    def empty(cls, height_cells: int, width_cells: int, resolution: float) -> "LocalMap":
        return cls(
            cells=np.full((height_cells, width_cells), UNKNOWN, dtype=np.int8),
            resolution=resolution,
        )

    def copy(self) -> "LocalMap":
        return LocalMap(cells=self.cells.copy(), resolution=self.resolution, frame=self.frame)

    def cell_of(self, x: float, y: float) -> tuple[int, int]:
        h, w = self.cells.shape
        col = min(max(int(x / self.resolution), 0), w - 1)
        row = min(max(int(y / self.resolution), 0), h - 1)
        return row, col

    def cell_center(self, row: int, col: int) -> tuple[float, float]:
        return ((col + 0.5) * self.resolution, (row + 0.5) * self.resolution)

    def dump(self) -> str:
        return dump_grid(self.cells)


@dataclass
class Frontier:
    """8-connected cluster of frontier cells with three viewpoints
    (centroid-nearest cell plus the two principal-axis extremes)."""

    id: int
    cells: np.ndarray  # (m, 2) array of (row, col)
    center: tuple[int, int]
    viewpoints: tuple[tuple[int, int], tuple[int, int], tuple[int, int]]


@njit(cache=True)
def _mark_scan(cells, res, x0, y0, angles, dists, hits):
    """Mark beam-traversed cells FREE and hit cells OCCUPIED in place."""
    h, w = cells.shape
    row = int(y0 / res)
    col = int(x0 / res)
    if 0 <= row < h and 0 <= col < w and cells[row, col] != 1:
        cells[row, col] = 0  # FREE
    for k in range(angles.shape[0]):
        dx = math.cos(angles[k])
        dy = math.sin(angles[k])
        limit = dists[k]
        c = int(x0 / res)
        r_ = int(y0 / res)
        step_c = 1 if dx > 0 else -1
        step_r = 1 if dy > 0 else -1
        if dx > 0:
            t_max_x = ((c + 1) * res - x0) / dx
        elif dx < 0:
            t_max_x = (c * res - x0) / dx
        else:
            t_max_x = 1e18
        if dy > 0:
            t_max_y = ((r_ + 1) * res - y0) / dy
        elif dy < 0:
            t_max_y = (r_ * res - y0) / dy
        else:
            t_max_y = 1e18
        t_delta_x = res / abs(dx) if dx != 0.0 else 1e18
        t_delta_y = res / abs(dy) if dy != 0.0 else 1e18
        t = 0.0
        while True:
            if t_max_x < t_max_y:
                t = t_max_x
                t_max_x += t_delta_x
                c += step_c
            else:
                t = t_max_y
                t_max_y += t_delta_y
                r_ += step_r
            if c < 0 or c >= w or r_ < 0 or r_ >= h:
                break
            if t >= limit - 1e-12:
                # the cell entered at the hit distance is the hit cell
                if hits[k]:
                    cells[r_, c] = 1  # OCCUPIED
                break
            if cells[r_, c] != 1:
                cells[r_, c] = 0


def integrate_scan(local: LocalMap, pose: tuple[float, float, float], scan: LidarScan) -> LocalMap:
    """Fold one scan into the map; returns an updated copy.

    Traversed cells become FREE, hit cells OCCUPIED. Occupied evidence
    dominates: a cell once OCCUPIED never downgrades to FREE.
    """
    if scan.origin_pose != pose:
        raise FrameMismatch("scan origin does not match pose")
    x, y, _ = pose
    h, w = local.cells.shape
    if not (0 <= x < w * local.resolution and 0 <= y < h * local.resolution):
        raise FrameMismatch(f"pose ({x}, {y}) outside the local map")
    out = local.copy()
    _mark_scan(out.cells, out.resolution, x, y, scan.angles, scan.distances, scan.max_range == False)  # noqa: E712
    return out


def frontier_mask(cells: np.ndarray) -> np.ndarray:
    """Boolean mask of FREE cells 4-adjacent to at least one UNKNOWN cell."""
    unknown = cells == UNKNOWN
    near_unknown = np.zeros_like(unknown)
    near_unknown[1:, :] |= unknown[:-1, :]
    near_unknown[:-1, :] |= unknown[1:, :]
    near_unknown[:, 1:] |= unknown[:, :-1]
    near_unknown[:, :-1] |= unknown[:, 1:]
    return (cells == FREE) & near_unknown


def detect_frontiers(local: LocalMap) -> list[np.ndarray]:
    """Maximal 8-connected frontier clusters, ordered by (min row, min col)."""
    mask = frontier_mask(local.cells)
    labels, count = ndimage.label(mask, structure=_EIGHT_CONNECTED)
    clusters = []
    for lbl in range(1, count + 1):
        rows, cols = np.nonzero(labels == lbl)
        cluster = np.stack([rows, cols], axis=1)
        clusters.append(cluster)
    clusters.sort(key=lambda c: (int(c[:, 0].min()), int(c[:, 1].min())))
    return clusters


def _principal_axis(points: np.ndarray) -> np.ndarray:
    """First principal component of (row, col) metric points; on (near)
    equal eigenvalues fall back to the row axis."""
    if len(points) == 1:
        return np.array([1.0, 0.0])
    centered = points - points.mean(axis=0)
    cov = centered.T @ centered / len(points)
    eigvals, eigvecs = np.linalg.eigh(cov)
    if abs(eigvals[1] - eigvals[0]) <= 1e-9 * max(1.0, abs(eigvals[1])):
        return np.array([1.0, 0.0])
    return eigvecs[:, 1]


def _nearest_cell(cells: np.ndarray, point: np.ndarray) -> tuple[int, int]:
    d2 = np.sum((cells.astype(float) - point) ** 2, axis=1)
    order = np.lexsort((cells[:, 1], cells[:, 0], d2))
    r, c = cells[order[0]]
    return int(r), int(c)


def _make_frontier(fid: int, cells: np.ndarray, resolution: float, axis: np.ndarray) -> Frontier:
    pts = cells.astype(float)
    proj = pts @ axis
    lo = pts[int(np.argmin(proj))]
    hi = pts[int(np.argmax(proj))]
    centroid = pts.mean(axis=0)
    center = _nearest_cell(cells, centroid)
    vp_lo = _nearest_cell(cells, lo)
    vp_hi = _nearest_cell(cells, hi)
    return Frontier(id=fid, cells=cells, center=center, viewpoints=(center, vp_lo, vp_hi))


def split_frontier(
    cluster: np.ndarray, r: float, resolution: float, start_id: int = 0
) -> list[Frontier]:
    """Split a cluster whose projected extent exceeds r into equal-length
    intervals along its principal axis; the union of the outputs is the
    input and each output's projected extent is at most r."""
    axis = _principal_axis(cluster.astype(float))
    proj = cluster.astype(float) @ axis * resolution
    extent = float(proj.max() - proj.min())
    if extent <= r or r <= 0:
        return [_make_frontier(start_id, cluster, resolution, axis)]
    nseg = int(math.ceil(extent / r))
    seg_len = extent / nseg
    idx = np.minimum(((proj - proj.min()) / seg_len).astype(int), nseg - 1)
    frontiers = []
    fid = start_id
    for s in range(nseg):
        part = cluster[idx == s]
        if len(part) == 0:
            continue
        frontiers.append(_make_frontier(fid, part, resolution, axis))
        fid += 1
    return frontiers


def frontiers_of(local: LocalMap, r: float) -> list[Frontier]:
    """detect + split pipeline with sequential ids."""
    out: list[Frontier] = []
    for cluster in detect_frontiers(local):
        out.extend(split_frontier(cluster, r, local.resolution, start_id=len(out)))
    return out
