"""Decision core for range/bearing-coordinated exploration.

Scores frontiers with a sigmoid information gain discounted by a
covariance-weighted, activity-gated estimate of what neighbors have
already covered; scales by the log-distance to the nearest neighbor;
selects the max-utility frontier; and decides soft/hard termination.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .hgrid import Estimate, Hgrid
from .mapping import Frontier, LocalMap
from .world import UNKNOWN

DEFAULT_INVALID_RATIO = 0.90
DEFAULT_BETA_FLOOR = 0.01
DEFAULT_QUERY_RADIUS_MULT = 2.0
BETA_NOMINAL = 1.0  # no active neighbors


@dataclass(frozen=True)
class UtilityParams:
    kappa1: float  # sigmoid midpoint, meters
    kappa2: float  # sigmoid steepness, meters
    r: float  # sensor radius
    invalid_ratio: float = DEFAULT_INVALID_RATIO
    beta_floor: float = DEFAULT_BETA_FLOOR
    query_radius_mult: float = DEFAULT_QUERY_RADIUS_MULT

    @classmethod
    def for_radius(cls, r: float, **overrides) -> "UtilityParams":
        """Defaults: midpoint at 0.8*r, steepness r/6."""
        return cls(kappa1=0.8 * r, kappa2=r / 6.0, r=r, **overrides)


@dataclass(frozen=True)
class FrontierScore:
    frontier_id: int
    utility: float
    gain_raw: float  # sum of sigmoid contributions, overlap ignored
    loss_total: float
    valid: bool
    best_viewpoint: tuple[int, int]


def sigmoid(d, params: UtilityParams):
    """1 / (1 + exp((d - kappa1) / kappa2)), overflow-safe; accepts
    scalars or arrays."""
    z = (np.asarray(d, dtype=float) - params.kappa1) / params.kappa2
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = np.exp(-z[pos]) / (1.0 + np.exp(-z[pos]))
    out[~pos] = 1.0 / (1.0 + np.exp(z[~pos]))
    if np.isscalar(d) or np.ndim(d) == 0:
        return float(out)
    return out


def _estimate_arrays(estimates) -> tuple[np.ndarray, np.ndarray]:
    """(positions (m,2), weights (m,)) for active estimates.

    Accepts Hgrid Estimates or raw (position, trace_pos, tau) triples.
    Weight is tau * min(1, 1/trace); trace 0 clamps to weight 1.
    """
    pos, wts = [], []
    for est in estimates:
        if isinstance(est, Estimate):
            p, trace, tau = (est.x, est.y), est.trace_pos, 1
        else:
            p, trace, tau = est
        if tau == 0:
            continue
        w = 1.0 if trace <= 1.0 else 1.0 / trace
        pos.append(p)
        wts.append(w)
    if not pos:
        return np.empty((0, 2)), np.empty(0)
    return np.asarray(pos, dtype=float), np.asarray(wts)


def information_loss(cell_xy: tuple[float, float], estimates, params: UtilityParams) -> float:
    """Sum over active estimates of weight * sigmoid(distance to cell)."""
    pos, wts = _estimate_arrays(estimates)
    if len(pos) == 0:
        return 0.0
    d = np.hypot(pos[:, 0] - cell_xy[0], pos[:, 1] - cell_xy[1])
    return float(np.sum(wts * sigmoid(d, params)))


def _unknown_cells_near(local: LocalMap, viewpoint: tuple[int, int], r: float) -> np.ndarray:
    """(k, 2) metric centers (x, y) of UNKNOWN cells within r of the
    viewpoint's center (inclusive)."""
    res = local.resolution
    vr, vc = viewpoint
    vx, vy = local.cell_center(vr, vc)
    radius_cells = int(math.ceil(r / res)) + 1
    h, w = local.cells.shape
    r0, r1 = max(0, vr - radius_cells), min(h, vr + radius_cells + 1)
    c0, c1 = max(0, vc - radius_cells), min(w, vc + radius_cells + 1)
    window = local.cells[r0:r1, c0:c1] == UNKNOWN
    rows, cols = np.nonzero(window)
    if len(rows) == 0:
        return np.empty((0, 2))
    xs = (cols + c0 + 0.5) * res
    ys = (rows + r0 + 0.5) * res
    keep = (xs - vx) ** 2 + (ys - vy) ** 2 <= r * r + 1e-12
    return np.stack([xs[keep], ys[keep]], axis=1)


def information_gain(
    viewpoint: tuple[int, int], local: LocalMap, estimates, params: UtilityParams
) -> tuple[float, float]:
    """(net gain I, raw gain) over UNKNOWN cells within sensor range of
    the viewpoint. Per-cell contribution is max(0, S - E)."""
    cells = _unknown_cells_near(local, viewpoint, params.r)
    if len(cells) == 0:
        return 0.0, 0.0
    vx, vy = local.cell_center(*viewpoint)
    d_fc = np.hypot(cells[:, 0] - vx, cells[:, 1] - vy)
    s = sigmoid(d_fc, params)
    gain_raw = float(np.sum(s))
    pos, wts = _estimate_arrays(estimates)
    if len(pos) == 0:
        return gain_raw, gain_raw
    # loss per cell: sum_j w_j * S(||est_j - cell||)
    diff = cells[:, None, :] - pos[None, :, :]
    d_jc = np.sqrt(np.sum(diff * diff, axis=2))
    loss = np.sum(wts[None, :] * sigmoid(d_jc, params), axis=1)
    gain = float(np.sum(np.maximum(0.0, s - loss)))
    return gain, gain_raw


def _loss_sum(
    viewpoint: tuple[int, int], local: LocalMap, estimates, params: UtilityParams
) -> float:
    """Total loss mass over the viewpoint's UNKNOWN cells (validity ratio
    numerator)."""
    cells = _unknown_cells_near(local, viewpoint, params.r)
    pos, wts = _estimate_arrays(estimates)
    if len(cells) == 0 or len(pos) == 0:
        return 0.0
    diff = cells[:, None, :] - pos[None, :, :]
    d_jc = np.sqrt(np.sum(diff * diff, axis=2))
    return float(np.sum(wts[None, :] * sigmoid(d_jc, params)))


def beta(
    viewpoint_xy: tuple[float, float],
    neighbor_positions,
    beta_floor: float = DEFAULT_BETA_FLOOR,
) -> float:
    """log10 of the distance to the nearest active neighbor, floored to
    keep utilities positive; 1 when no active neighbors exist."""
    positions = np.asarray(list(neighbor_positions), dtype=float)
    if len(positions) == 0:
        return BETA_NOMINAL
    d = np.hypot(positions[:, 0] - viewpoint_xy[0], positions[:, 1] - viewpoint_xy[1])
    dmin = float(np.min(d))
    if dmin <= 0:
        return beta_floor
    return max(beta_floor, math.log10(dmin))


def score_frontier(
    frontier: Frontier,
    robot_pose: tuple[float, float, float],
    local: LocalMap,
    grid: Hgrid,
    params: UtilityParams,
    neighbor_positions=(),
    self_id=None,
) -> FrontierScore:
    """Utility = max over the three viewpoints of beta * I / C, with C the
    Euclidean distance to the frontier center clamped below at one cell.
    Validity compares total loss mass to overlap-free gain. Loss counts
    neighbor estimates only: pass self_id to drop the robot's own trail."""
    center_xy = local.cell_center(*frontier.center)
    estimates = grid.query_near(center_xy, params.query_radius_mult * params.r)
    if self_id is not None:
        estimates = [e for e in estimates if e.robot_id != self_id]
    cost = max(local.resolution, math.hypot(center_xy[0] - robot_pose[0], center_xy[1] - robot_pose[1]))

    best_utility = -math.inf
    best_vp = frontier.viewpoints[0]
    best_gain_raw = 0.0
    best_loss = 0.0
    for vp in frontier.viewpoints:
        gain, gain_raw = information_gain(vp, local, estimates, params)
        vp_xy = local.cell_center(*vp)
        b = beta(vp_xy, neighbor_positions, params.beta_floor)
        utility = b * gain / cost
        if utility > best_utility:
            best_utility = utility
            best_vp = vp
            best_gain_raw = gain_raw
            best_loss = _loss_sum(vp, local, estimates, params)
    if best_gain_raw > 0:
        valid = best_loss / best_gain_raw < params.invalid_ratio
    else:
        valid = False
    return FrontierScore(
        frontier_id=frontier.id,
        utility=best_utility,
        gain_raw=best_gain_raw,
        loss_total=best_loss,
        valid=valid,
        best_viewpoint=best_vp,
    )


def select_frontier(scores, soft_reached: bool):
    """Id of the max-utility candidate (valid-only once the soft coverage
    threshold is reached); ties to the lowest id; None if no candidates."""
    candidates = [s for s in scores if s.valid] if soft_reached else list(scores)
    if not candidates:
        return None
    best = min(candidates, key=lambda s: (-s.utility, s.frontier_id))
    return best.frontier_id


def commitment_check(progress: float, goal_invalidated: bool = False) -> bool:
    """Re-evaluate once the robot is at least halfway to its committed
    frontier, or immediately when the goal frontier disappeared."""
    return progress >= 0.5 or goal_invalidated


def should_terminate(scores, coverage: float, soft: float, hard: float) -> bool:
    """Stop at the hard coverage threshold, when no frontiers remain, or
    past the soft threshold with no valid frontier left."""
    if coverage >= hard:
        return True
    if not scores:
        return True
    if coverage >= soft and not any(s.valid for s in scores):
        return True
    return False
