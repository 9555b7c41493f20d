"""Ground-truth environment representation and scenario validation.

Maps are ASCII grids: ``#`` for occupied cells, ``.`` for free cells,
row-major with uniform row length. Row index maps to the y axis and
column index to the x axis; a cell ``(row, col)`` spans the square
``[col*res, (col+1)*res] x [row*res, (row+1)*res]`` in meters.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .errors import BadNoise, InvalidStartPose, MalformedMap, ThresholdOrder, UnboundedMap

FREE = 0
OCCUPIED = 1
UNKNOWN = 2  # only ever appears in local maps

DEFAULT_RESOLUTION = 0.25
DEFAULT_SENSOR_RADIUS = 3.5
DEFAULT_LIDAR_BEAMS = 360
DEFAULT_TICK_DT = 0.5
DEFAULT_HGRID_FILL_K = 3
DEFAULT_SOFT_THRESHOLD = 0.80
DEFAULT_HARD_THRESHOLD = 0.95
DEFAULT_MAX_TICKS = 5000
DEFAULT_NOISE = (math.radians(5.0), 0.10)
DEFAULT_BASE_SPEED = 0.5
DEFAULT_DECISION_INTERVAL = 10
DEFAULT_PING_WINDOW = 10


class Strategy(str, Enum):
    WISERX = "WiserX"
    BASELINE1 = "Baseline1"
    BASELINE2 = "Baseline2"
    BASELINE3 = "Baseline3"

    @classmethod
    def parse(cls, name: str) -> "Strategy":
        for s in cls:
            if s.value.lower() == str(name).lower():
                return s
        raise ValueError(f"unknown strategy {name!r}")


@dataclass(frozen=True)
class GroundTruthMap:
    """Immutable true occupancy grid with a fully occupied border."""

    cells: np.ndarray  # int8 grid of FREE / OCCUPIED, shape (height, width)
    resolution: float  # meters per cell

    def __post_init__(self):
        self.cells.setflags(write=False)

    @property
    def height_cells(self) -> int:
        return self.cells.shape[0]

    @property
    def width_cells(self) -> int:
        return self.cells.shape[1]

    @property
    def boundary(self) -> tuple[float, float, float, float]:
        """(min_x, min_y, max_x, max_y) in meters."""
        return (0.0, 0.0, self.width_cells * self.resolution, self.height_cells * self.resolution)

    @property
    def free_cell_count(self) -> int:
        return int(np.count_nonzero(self.cells == FREE))

    def cell_of(self, x: float, y: float) -> tuple[int, int]:
        """(row, col) containing world point (x, y), clamped to the grid."""
        col = min(max(int(x / self.resolution), 0), self.width_cells - 1)
        row = min(max(int(y / self.resolution), 0), self.height_cells - 1)
        return row, col

    def cell_center(self, row: int, col: int) -> tuple[float, float]:
        return ((col + 0.5) * self.resolution, (row + 0.5) * self.resolution)

    def is_free(self, row: int, col: int) -> bool:
        return self.cells[row, col] == FREE


def load_environment(source: str, resolution: float = DEFAULT_RESOLUTION) -> GroundTruthMap:
    """Parse an ASCII grid from a path or inline text into a GroundTruthMap.

    Raises MalformedMap for bad characters or ragged rows, UnboundedMap
    when the border is not fully occupied.
    """
    if "\n" not in source and os.path.exists(source):
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = source
    lines = [ln for ln in text.splitlines() if ln.strip() != ""]
    if not lines:
        raise MalformedMap("empty map")
    width = len(lines[0])
    rows = []
    for i, ln in enumerate(lines):
        if len(ln) != width:
            raise MalformedMap(f"ragged row {i}: length {len(ln)} != {width}")
        row = np.empty(width, dtype=np.int8)
        for j, ch in enumerate(ln):
            if ch == "#":
                row[j] = OCCUPIED
            elif ch == ".":
                row[j] = FREE
            else:
                raise MalformedMap(f"bad character {ch!r} at row {i} col {j}")
        rows.append(row)
    cells = np.stack(rows)
    border = np.concatenate([cells[0, :], cells[-1, :], cells[:, 0], cells[:, -1]])
    if np.any(border != OCCUPIED):
        raise UnboundedMap("border contains free cells")
    if not np.any(cells == FREE):
        raise MalformedMap("map has no free cells")
    if resolution <= 0:
        raise MalformedMap("resolution must be positive")
    return GroundTruthMap(cells=cells, resolution=float(resolution))


def dump_grid(cells: np.ndarray) -> str:
    """ASCII dump; '?' marks UNKNOWN cells (local-map snapshots)."""
    chars = {FREE: ".", OCCUPIED: "#", UNKNOWN: "?"}
    return "\n".join("".join(chars[int(v)] for v in row) for row in cells)


@dataclass
class FailureSpec:
    robot_id: int
    trigger_window: tuple[float, float]  # merged-coverage fraction (lo, hi)


@dataclass
class ScenarioConfig:
    """Fully validated scenario. Built via validate_scenario()."""

    world_map: GroundTruthMap
    map_source: str
    robot_count: int
    start_poses: list[tuple[float, float, float]]
    sensor_radius: float = DEFAULT_SENSOR_RADIUS
    lidar_beams: int = DEFAULT_LIDAR_BEAMS
    noise_level: tuple[float, float] = DEFAULT_NOISE  # (bearing_std rad, range_std m)
    multipath_prob: float = 0.0
    speed_factors: list[float] = field(default_factory=list)
    failure_spec: Optional[FailureSpec] = None
    strategy: Strategy = Strategy.WISERX
    soft_threshold: float = DEFAULT_SOFT_THRESHOLD
    hard_threshold: float = DEFAULT_HARD_THRESHOLD
    hgrid_fill_k: int = DEFAULT_HGRID_FILL_K
    seed: int = 0
    max_ticks: int = DEFAULT_MAX_TICKS
    tick_dt: float = DEFAULT_TICK_DT
    # engine tuning (defaults documented in README)
    base_speed: float = DEFAULT_BASE_SPEED
    decision_interval: int = DEFAULT_DECISION_INTERVAL
    ping_window: int = DEFAULT_PING_WINDOW
    range_stride: int = 2
    tau_gating: bool = True
    random_starts: bool = False
    # optional sigmoid-shape overrides (meters); None means the
    # radius-derived defaults (kappa1 = 0.8 r, kappa2 = r / 6)
    kappa1: Optional[float] = None
    kappa2: Optional[float] = None
    # estimate-query radius around a frontier center, in sensor radii
    query_radius_mult: Optional[float] = None


def _as_pose(entry) -> tuple[float, float, float]:
    vals = list(entry)
    if len(vals) == 2:
        vals.append(0.0)  # default heading
    if len(vals) != 3:
        raise InvalidStartPose(f"pose needs 2 or 3 numbers, got {entry!r}")
    return (float(vals[0]), float(vals[1]), float(vals[2]))


def validate_scenario(raw: dict) -> ScenarioConfig:
    """Check invariants on a parsed config dict and fill defaults.

    Raises InvalidStartPose, ThresholdOrder, BadNoise, plus map loading
    errors from load_environment.
    """
    raw = dict(raw)
    resolution = float(raw.get("resolution", DEFAULT_RESOLUTION))
    world_map = load_environment(raw["map"], resolution=resolution)

    n = int(raw.get("robot_count", len(raw.get("start_poses", [])) or 1))
    if n < 1:
        raise InvalidStartPose("robot_count must be >= 1")

    poses = [_as_pose(p) for p in raw.get("start_poses", [])]
    if not poses:
        raise InvalidStartPose("start_poses required (or use random starts in batch)")
    if len(poses) != n:
        raise InvalidStartPose(f"{len(poses)} start poses for {n} robots")
    for x, y, _ in poses:
        bx0, by0, bx1, by1 = world_map.boundary
        if not (bx0 <= x < bx1 and by0 <= y < by1):
            raise InvalidStartPose(f"pose ({x}, {y}) outside the map")
        row, col = world_map.cell_of(x, y)
        if not world_map.is_free(row, col):
            raise InvalidStartPose(f"pose ({x}, {y}) lies on an occupied cell")

    noise = raw.get("noise_level", DEFAULT_NOISE)
    bearing_std, range_std = float(noise[0]), float(noise[1])
    if bearing_std < 0 or range_std < 0:
        raise BadNoise(f"negative noise std {noise!r}")

    soft = float(raw.get("soft_threshold", DEFAULT_SOFT_THRESHOLD))
    hard = float(raw.get("hard_threshold", DEFAULT_HARD_THRESHOLD))
    if not (0 < soft <= hard <= 1):
        raise ThresholdOrder(f"need 0 < soft ({soft}) <= hard ({hard}) <= 1")

    speed_factors = [float(s) for s in raw.get("speed_factors", [1.0] * n)]
    if len(speed_factors) != n:
        raise InvalidStartPose(f"{len(speed_factors)} speed factors for {n} robots")
    if any(s <= 0 for s in speed_factors):
        raise InvalidStartPose("speed factors must be positive")

    failure = None
    if raw.get("failure_spec"):
        fs = raw["failure_spec"]
        window = tuple(float(v) for v in fs["trigger"])
        failure = FailureSpec(robot_id=int(fs["robot_id"]), trigger_window=window)  # type: ignore[arg-type]

    multipath = float(raw.get("multipath_prob", 0.0))
    if not (0.0 <= multipath <= 1.0):
        raise BadNoise(f"multipath_prob {multipath} outside [0, 1]")

    return ScenarioConfig(
        world_map=world_map,
        map_source=raw["map"],
        robot_count=n,
        start_poses=poses,
        sensor_radius=float(raw.get("sensor_radius", DEFAULT_SENSOR_RADIUS)),
        lidar_beams=int(raw.get("lidar_beams", DEFAULT_LIDAR_BEAMS)),
        noise_level=(bearing_std, range_std),
        multipath_prob=multipath,
        speed_factors=speed_factors,
        failure_spec=failure,
        strategy=Strategy.parse(raw.get("strategy", "WiserX")),
        soft_threshold=soft,
        hard_threshold=hard,
        hgrid_fill_k=int(raw.get("hgrid_fill_k", DEFAULT_HGRID_FILL_K)),
        seed=int(raw.get("seed", 0)),
        max_ticks=int(raw.get("max_ticks", DEFAULT_MAX_TICKS)),
        tick_dt=float(raw.get("tick_dt", DEFAULT_TICK_DT)),
        base_speed=float(raw.get("base_speed", DEFAULT_BASE_SPEED)),
        decision_interval=int(raw.get("decision_interval", DEFAULT_DECISION_INTERVAL)),
        ping_window=int(raw.get("ping_window", DEFAULT_PING_WINDOW)),
        range_stride=int(raw.get("range_stride", 2)),
        tau_gating=bool(raw.get("tau_gating", True)),
        random_starts=bool(raw.get("random_starts", False)),
        kappa1=(None if raw.get("kappa1") is None else float(raw["kappa1"])),
        kappa2=(None if raw.get("kappa2") is None else float(raw["kappa2"])),
        query_radius_mult=(
            None if raw.get("query_radius_mult") is None else float(raw["query_radius_mult"])
        ),
    )


def load_scenario_file(path: str) -> dict:
    """Read a scenario document (JSON or TOML, by extension)."""
    if path.endswith(".toml"):
        import tomllib

        with open(path, "rb") as fh:
            return tomllib.load(fh)
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
