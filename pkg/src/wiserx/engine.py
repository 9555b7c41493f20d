"""Deterministic discrete-time simulation loop.

Per tick, every exploring robot (in id order) scans and integrates, runs
its estimation pipeline on decision ticks, re-decides its goal frontier
when uncommitted, and advances along its path. Randomness comes from
per-robot, per-purpose sub-streams of one master seed, so outcomes do not
depend on iteration order within a tick. Identical config + seed gives a
bit-identical RunResult.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

import numpy as np

from . import baselines, metrics, relpos, strategy
from .hgrid import Hgrid
from .mapping import Frontier, LocalMap, frontiers_of, integrate_scan
from .planner import Path, shortest_path, step_motion
from .sensing import lidar_scan, ping_measurement
from .world import FREE, OCCUPIED, UNKNOWN, GroundTruthMap, ScenarioConfig, Strategy, dump_grid


class AgentState(Enum):
    EXPLORING = "Exploring"
    TERMINATED = "Terminated"
    FAILED = "Failed"


@dataclass
class Event:
    tick: int
    robot_id: int
    kind: str  # Terminate | Fail | GoalChange | TickBudgetExceeded


@dataclass
class RunResult:
    """Full deterministic trace of one trial."""

    config: ScenarioConfig
    ticks: int
    merged_coverage: np.ndarray  # percent, per tick
    per_robot_coverage: np.ndarray  # (n, ticks) percent
    overlap: np.ndarray  # percent, per tick
    events: list[Event]
    final_maps: list[LocalMap]
    term_ticks: dict[int, int]
    failed_robot_id: Optional[int] = None
    fail_tick: Optional[int] = None
    fail_exclusive_mask: Optional[np.ndarray] = None
    # (tick, robot, frontier_id, utility, gain_raw, loss_total, valid, chosen)
    decision_rows: list = field(default_factory=list)

    @property
    def term_tick_max(self) -> int:
        if not self.term_ticks:
            return self.ticks
        return max(self.term_ticks.values())


class RobotAgent:
    """Mutable per-robot simulation state. Strategy decisions read only
    the agent's own map, hgrid, tracks, and pose."""

    def __init__(self, rid: int, pose, cfg: ScenarioConfig):
        gmap = cfg.world_map
        self.id = rid
        self.pose = pose
        self.local = LocalMap.empty(gmap.height_cells, gmap.width_cells, gmap.resolution)
        self.grid = Hgrid(gmap.boundary, cfg.sensor_radius)
        self.tracks: dict[int, relpos.RelPosTrack] = {}
        self.state = AgentState.EXPLORING
        self.speed = cfg.base_speed * cfg.speed_factors[rid]
        self.goal_frontier: Optional[Frontier] = None
        self.goal_viewpoint: Optional[tuple[int, int]] = None
        self.path: Optional[Path] = None
        self.plan_map: Optional[LocalMap] = None  # map the path was planned on
        self.traveled = 0.0
        self.progress = 0.0
        self.reevaluated = False
        self.last_event_tick: Optional[int] = None
        self.term_tick: Optional[int] = None

    def active_neighbor_positions(self):
        return [t.position for t in self.tracks.values() if t.tau == 1]


def _rng_for(seed: int, robot_id: int, purpose: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(robot_id, purpose)))


_PURPOSE_PING = 0
_PURPOSE_STARTS = 1


def random_start_poses(cfg: ScenarioConfig, seed: int) -> list[tuple[float, float, float]]:
    """n distinct free-cell centers drawn from the trial's start stream."""
    gmap = cfg.world_map
    rng = _rng_for(seed, 0, _PURPOSE_STARTS)
    rows, cols = np.nonzero(gmap.cells == FREE)
    idx = rng.choice(len(rows), size=cfg.robot_count, replace=False)
    return [
        (*gmap.cell_center(int(rows[i]), int(cols[i])), 0.0)
        for i in idx
    ]


def _goal_invalidated(agent: RobotAgent) -> bool:
    """The committed frontier disappeared: the viewpoint turned out to be
    a wall, or no UNKNOWN cells remain within two cells of it."""
    if agent.goal_viewpoint is None:
        return True
    r, c = agent.goal_viewpoint
    if agent.local.cells[r, c] == OCCUPIED:
        return True
    h, w = agent.local.cells.shape
    window = agent.local.cells[max(0, r - 2) : min(h, r + 3), max(0, c - 2) : min(w, c + 3)]
    return not np.any(window == UNKNOWN)


def _path_blocked(agent: RobotAgent) -> bool:
    if agent.path is None:
        return False
    for r, c in agent.path.waypoints:
        if agent.local.cells[r, c] == OCCUPIED:
            return True
    return False


def _plan_to(agent: RobotAgent, viewpoint, plan_map: Optional[LocalMap] = None) -> bool:
    """Plan from the agent's cell to the viewpoint; True on success."""
    pmap = plan_map if plan_map is not None else agent.local
    start = pmap.cell_of(agent.pose[0], agent.pose[1])
    path = shortest_path(pmap, start, viewpoint)
    if path is None:
        return False
    agent.path = path
    agent.plan_map = pmap
    agent.traveled = 0.0
    agent.progress = 0.0
    return True


def _estimation_step(agent: RobotAgent, agents: list["RobotAgent"], cfg: ScenarioConfig, tick: int, rng) -> None:
    """Ping every neighbor, run the stable-bearing / averaged-range / EKF
    pipeline, and record estimates (plus own position) in the hgrid."""
    bearing_std, range_std = cfg.noise_level
    meas_var = (max(range_std, 0.02) ** 2, max(bearing_std, math.radians(0.5)) ** 2)
    dt = cfg.decision_interval * cfg.tick_dt
    for other in agents:
        if other.id == agent.id:
            continue
        track = agent.tracks.get(other.id)
        if other.state is AgentState.FAILED:
            # no ping arrives; count the miss and deactivate after F_miss
            if track is not None and track.tau == 1:
                track = replace(track, missed=track.missed + 1)
                if cfg.tau_gating and track.missed >= relpos.F_MISS:
                    track = relpos.deactivate(track)
                    agent.grid.set_active(other.id, 0)
                agent.tracks[other.id] = track
            continue
        samples = ping_measurement(
            agent.pose,
            other.pose,
            cfg.noise_level,
            cfg.multipath_prob,
            cfg.ping_window,
            rng,
            observer_id=agent.id,
            target_id=other.id,
            tick=tick,
        )
        meas = relpos.fuse_measurement(
            samples.bearing_samples, samples.range_samples, cfg.range_stride
        )
        if track is None or track.tau == 0:
            track = relpos.init_track(other.id, meas, agent.pose, meas_var[0], tick)
            agent.grid.set_active(other.id, 1)
        else:
            track = relpos.ekf_predict(track, dt)
            track = relpos.ekf_update(track, meas, agent.pose, meas_var, tick)
        agent.tracks[other.id] = track
        agent.grid.insert(other.id, track.position, track.trace_pos, tick)
    agent.grid.insert(agent.id, (agent.pose[0], agent.pose[1]), 0.0, tick)


def _decide_wiserx(agent: RobotAgent, cfg: ScenarioConfig, params, tick: int, events: list[Event],
                   decision_rows: Optional[list] = None) -> None:
    frontiers = frontiers_of(agent.local, cfg.sensor_radius)
    coverage = agent.grid.coverage_fraction(cfg.hgrid_fill_k)
    neighbor_positions = agent.active_neighbor_positions()
    scores = [
        strategy.score_frontier(
            f, agent.pose, agent.local, agent.grid, params, neighbor_positions, self_id=agent.id
        )
        for f in frontiers
    ]

    def log_scores(chosen_id) -> None:
        if decision_rows is None:
            return
        for s in scores:
            decision_rows.append(
                (tick, agent.id, s.frontier_id, s.utility, s.gain_raw, s.loss_total,
                 int(s.valid), int(s.frontier_id == chosen_id))
            )

    if strategy.should_terminate(scores, coverage, cfg.soft_threshold, cfg.hard_threshold):
        log_scores(None)
        _terminate(agent, tick, events)
        return
    soft_reached = coverage >= cfg.soft_threshold
    candidates = [s for s in scores if s.valid] if soft_reached else list(scores)
    candidates.sort(key=lambda s: (-s.utility, s.frontier_id))
    by_id = {f.id: f for f in frontiers}
    for cand in candidates:
        frontier = by_id[cand.frontier_id]
        if _plan_to(agent, cand.best_viewpoint):
            log_scores(cand.frontier_id)
            _set_goal(agent, frontier, cand.best_viewpoint, tick, events)
            return
    # nothing reachable: no way to make progress
    log_scores(None)
    _terminate(agent, tick, events)


def _decide_baseline1(agent: RobotAgent, cfg: ScenarioConfig, params, tick: int, events: list[Event]) -> None:
    frontiers = frontiers_of(agent.local, cfg.sensor_radius)
    ranked = sorted(
        frontiers,
        key=lambda f: (-baselines.plain_utility(f, agent.local, agent.pose, params), f.id),
    )
    for f in ranked:
        vp = _best_viewpoint_plain(f, agent.local, params)
        if _plan_to(agent, vp):
            _set_goal(agent, f, vp, tick, events)
            return
    _terminate(agent, tick, events)


def _decide_baseline3(agent: RobotAgent, cfg: ScenarioConfig, params, partition, tick: int,
                      events: list[Event]) -> None:
    """Strip exploration: prefer frontiers centered in the strip, then any
    frontier touching it, else travel (optimistically through unknown
    space) toward the strip. Goals always lie inside the strip."""
    local = agent.local
    if baselines.strip_complete(local, partition, agent.id):
        _terminate(agent, tick, events)
        return

    def in_strip(rc) -> bool:
        x, y = local.cell_center(int(rc[0]), int(rc[1]))
        return partition.contains(agent.id, x, y)

    frontiers = frontiers_of(local, cfg.sensor_radius)
    centered = [f for f in frontiers if in_strip(f.center)]
    ranked = sorted(
        centered, key=lambda f: (-baselines.plain_utility(f, local, agent.pose, params), f.id)
    )
    for f in ranked:
        vp = _best_viewpoint_plain(f, local, params)
        goal = vp if in_strip(vp) else _nearest_strip_cell(f, vp, in_strip)
        if goal is not None and _plan_to(agent, goal):
            _set_goal(agent, f, goal, tick, events)
            return

    # frontiers whose cluster merely touches the strip
    touching = []
    centered_ids = {f.id for f in centered}
    for f in frontiers:
        if f.id in centered_ids:
            continue
        cells_in = [tuple(map(int, c)) for c in f.cells if in_strip(c)]
        if cells_in:
            touching.append((f, cells_in))
    touching.sort(key=lambda t: (-baselines.plain_utility(t[0], local, agent.pose, params), t[0].id))
    for f, cells_in in touching:
        rc0, cc0 = local.cell_of(agent.pose[0], agent.pose[1])
        goal = min(cells_in, key=lambda rc: ((rc[0] - rc0) ** 2 + (rc[1] - cc0) ** 2, rc))
        if _plan_to(agent, goal):
            _set_goal(agent, f, goal, tick, events)
            return

    # no frontier touches the strip yet: head for its nearest observable
    # unknown cell, treating unexplored space as traversable until scans
    # say otherwise
    openable = baselines.openable_unknown_mask(local)
    c0, c1 = baselines.strip_columns(local, partition, agent.id)
    mask = np.zeros_like(openable)
    mask[:, c0:c1] = openable[:, c0:c1]
    rows, cols = np.nonzero(mask)
    if len(rows) > 0:
        rc0, cc0 = local.cell_of(agent.pose[0], agent.pose[1])
        order = np.argsort((rows - rc0) ** 2 + (cols - cc0) ** 2, kind="stable")
        optimistic = local.copy()
        optimistic.cells[optimistic.cells == UNKNOWN] = FREE
        for i in order[:5]:
            goal = (int(rows[i]), int(cols[i]))
            if _plan_to(agent, goal, optimistic):
                _set_goal(agent, None, goal, tick, events)
                return
    _terminate(agent, tick, events)


def _nearest_strip_cell(frontier: Frontier, vp, in_strip) -> Optional[tuple[int, int]]:
    """Frontier cell inside the strip closest to the preferred viewpoint."""
    cands = [tuple(map(int, c)) for c in frontier.cells if in_strip(c)]
    if not cands:
        return None
    return min(cands, key=lambda rc: ((rc[0] - vp[0]) ** 2 + (rc[1] - vp[1]) ** 2, rc))


def _best_viewpoint_plain(frontier: Frontier, local: LocalMap, params) -> tuple[int, int]:
    best_vp = frontier.viewpoints[0]
    best = -1.0
    for vp in frontier.viewpoints:
        _, gain_raw = strategy.information_gain(vp, local, (), params)
        if gain_raw > best:
            best = gain_raw
            best_vp = vp
    return best_vp


def _set_goal(agent: RobotAgent, frontier: Frontier, viewpoint, tick: int, events: list[Event]) -> None:
    changed = agent.goal_viewpoint != viewpoint
    agent.goal_frontier = frontier
    agent.goal_viewpoint = viewpoint
    agent.reevaluated = False
    if changed:
        events.append(Event(tick=tick, robot_id=agent.id, kind="GoalChange"))


def _terminate(agent: RobotAgent, tick: int, events: list[Event]) -> None:
    agent.state = AgentState.TERMINATED
    agent.term_tick = tick
    agent.goal_frontier = None
    agent.goal_viewpoint = None
    agent.path = None
    events.append(Event(tick=tick, robot_id=agent.id, kind="Terminate"))


def run(cfg: ScenarioConfig) -> RunResult:
    """Simulate one trial to termination (or the tick budget)."""
    gmap = cfg.world_map
    params = strategy.UtilityParams.for_radius(cfg.sensor_radius)
    overrides = {
        name: getattr(cfg, name)
        for name in ("kappa1", "kappa2", "query_radius_mult")
        if getattr(cfg, name) is not None
    }
    if overrides:
        params = replace(params, **overrides)
    agents = [RobotAgent(rid, cfg.start_poses[rid], cfg) for rid in range(cfg.robot_count)]
    ping_rngs = {a.id: _rng_for(cfg.seed, a.id, _PURPOSE_PING) for a in agents}
    partition = baselines.baseline3_partition(gmap.boundary, cfg.robot_count)

    events: list[Event] = []
    decision_rows: list = []
    merged_series: list[float] = []
    overlap_series: list[float] = []
    robot_series: list[list[float]] = [[] for _ in agents]
    failed_id: Optional[int] = None
    fail_tick: Optional[int] = None
    fail_exclusive: Optional[np.ndarray] = None

    truth_free = gmap.cells == FREE
    truth_free_count = int(np.count_nonzero(truth_free))

    tick = 0
    while tick < cfg.max_ticks:
        exploring = [a for a in agents if a.state is AgentState.EXPLORING]
        if not exploring:
            break
        decision_tick = tick % cfg.decision_interval == 0

        # Baseline-2 synchronous oracle assignment
        b2_merged: Optional[LocalMap] = None
        b2_assignment: dict[int, int] = {}
        b2_frontiers: dict[int, Frontier] = {}

        for agent in agents:
            if agent.state is not AgentState.EXPLORING:
                continue
            scan = lidar_scan(agent.pose, gmap, cfg.sensor_radius, cfg.lidar_beams)
            agent.local = integrate_scan(agent.local, agent.pose, scan)

            if decision_tick and cfg.strategy in (Strategy.WISERX,):
                _estimation_step(agent, agents, cfg, tick, ping_rngs[agent.id])

        if cfg.strategy is Strategy.BASELINE2 and decision_tick:
            live = [a for a in agents if a.state is AgentState.EXPLORING]
            if live:
                b2_merged = metrics.merge_maps([a.local for a in live])
                fronts = frontiers_of(b2_merged, cfg.sensor_radius)
                b2_frontiers = {f.id: f for f in fronts}
                b2_assignment = baselines.baseline2_assign(
                    b2_merged, {a.id: a.pose for a in live}, fronts, params
                )

        for agent in agents:
            if agent.state is not AgentState.EXPLORING:
                continue

            # decide when goal-less, invalidated, blocked, done, or at the
            # half-way commitment checkpoint (once per commitment)
            needs_decision = False
            if agent.goal_viewpoint is None or agent.path is None:
                needs_decision = True
            elif agent.progress >= 1.0:
                needs_decision = True
            elif _goal_invalidated(agent):
                needs_decision = True
            elif _path_blocked(agent):
                replan_map = None
                if cfg.strategy is Strategy.BASELINE2 and agent.plan_map is not None:
                    # overlay walls this robot has seen since the shared
                    # plan was drawn, so the replan can route around them
                    patched = agent.plan_map.copy()
                    patched.cells[agent.local.cells == OCCUPIED] = OCCUPIED
                    replan_map = patched
                if not _plan_to(agent, agent.goal_viewpoint, replan_map):
                    needs_decision = True
            elif not agent.reevaluated and strategy.commitment_check(agent.progress):
                needs_decision = True
                agent.reevaluated = True

            if needs_decision:
                if cfg.strategy is Strategy.WISERX:
                    _decide_wiserx(agent, cfg, params, tick, events, decision_rows)
                elif cfg.strategy is Strategy.BASELINE1:
                    _decide_baseline1(agent, cfg, params, tick, events)
                elif cfg.strategy is Strategy.BASELINE3:
                    _decide_baseline3(agent, cfg, params, partition, tick, events)
                elif cfg.strategy is Strategy.BASELINE2:
                    fid = b2_assignment.get(agent.id)
                    if fid is not None and b2_merged is not None:
                        frontier = b2_frontiers[fid]
                        vp = _best_viewpoint_plain(frontier, b2_merged, params)
                        if _plan_to(agent, vp, b2_merged):
                            _set_goal(agent, frontier, vp, tick, events)
                    # unassigned baseline-2 robots idle until the oracle stops them

            if agent.state is not AgentState.EXPLORING:
                continue
            if agent.path is not None and agent.path.length > 0:
                new_pose, progress = step_motion(
                    agent.pose,
                    agent.path,
                    agent.local.resolution,
                    agent.speed,
                    cfg.tick_dt,
                    traveled=agent.traveled,
                )
                row, col = gmap.cell_of(new_pose[0], new_pose[1])
                if gmap.cells[row, col] == OCCUPIED:
                    # bumped a wall that was never visible from this side:
                    # record the contact and force a fresh decision
                    agent.local.cells[row, col] = OCCUPIED
                    agent.path = None
                else:
                    agent.pose, agent.progress = new_pose, progress
                    agent.traveled = agent.progress * agent.path.length
            elif agent.path is not None:
                agent.progress = 1.0

        # evaluation-frame series (oracle; never visible to strategies)
        live_maps = [a.local for a in agents if a.state is not AgentState.FAILED]
        merged = metrics.merge_maps(live_maps) if live_maps else None
        cov = metrics.coverage_percent(merged, gmap) if merged is not None else 0.0
        merged_series.append(cov)
        overlap_series.append(metrics.pairwise_overlap(live_maps, gmap))
        for a in agents:
            known = (a.local.cells != UNKNOWN) & truth_free
            robot_series[a.id].append(100.0 * np.count_nonzero(known) / truth_free_count)

        # failure injection on first entry into the coverage window
        if (
            cfg.failure_spec is not None
            and failed_id is None
            and cfg.failure_spec.trigger_window[0] * 100.0 <= cov <= cfg.failure_spec.trigger_window[1] * 100.0
        ):
            victim = agents[cfg.failure_spec.robot_id]
            if victim.state is AgentState.EXPLORING:
                failed_id = victim.id
                fail_tick = tick
                inject_failure(victim, tick, events)
                survivors_known = np.zeros_like(truth_free)
                for a in agents:
                    if a.id != victim.id:
                        survivors_known |= a.local.cells != UNKNOWN
                fail_exclusive = (victim.local.cells != UNKNOWN) & ~survivors_known & truth_free

        # oracle termination for the information-sharing baselines
        if cfg.strategy in (Strategy.BASELINE1, Strategy.BASELINE2) and cov >= cfg.hard_threshold * 100.0:
            for a in agents:
                if a.state is AgentState.EXPLORING:
                    _terminate(a, tick, events)

        tick += 1

    if any(a.state is AgentState.EXPLORING for a in agents):
        events.append(Event(tick=tick, robot_id=-1, kind="TickBudgetExceeded"))

    term_ticks = {a.id: a.term_tick for a in agents if a.term_tick is not None}
    return RunResult(
        config=cfg,
        ticks=tick,
        merged_coverage=np.array(merged_series),
        per_robot_coverage=np.array(robot_series),
        overlap=np.array(overlap_series),
        events=events,
        final_maps=[a.local for a in agents],
        term_ticks=term_ticks,
        failed_robot_id=failed_id,
        fail_tick=fail_tick,
        fail_exclusive_mask=fail_exclusive,
        decision_rows=decision_rows,
    )


def inject_failure(agent: RobotAgent, tick: int, events: list[Event]) -> None:
    """Complete failure: the robot stops and its map is excluded from
    merged evaluation. Peers notice missing pings and tau-gate it."""
    if agent.state is not AgentState.EXPLORING:
        return
    agent.state = AgentState.FAILED
    agent.path = None
    agent.goal_frontier = None
    agent.goal_viewpoint = None
    events.append(Event(tick=tick, robot_id=agent.id, kind="Fail"))


def batch(
    cfg: ScenarioConfig,
    trials: int,
    base_seed: int,
    max_workers: int = 1,
) -> list[RunResult]:
    """Run `trials` seeded trials (seed = base_seed + k); with
    cfg.random_starts, each trial draws fresh free-cell start poses from
    its own seed. Results are ordered by trial regardless of scheduling."""
    if trials < 1:
        raise ValueError("trials must be >= 1")

    def one(k: int) -> RunResult:
        seed = base_seed + k
        trial_cfg = replace(cfg, seed=seed)
        if cfg.random_starts:
            trial_cfg = replace(trial_cfg, start_poses=random_start_poses(cfg, seed))
        return run(trial_cfg)

    if max_workers <= 1:
        return [one(k) for k in range(trials)]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(one, range(trials)))


def serialize_run(result: RunResult, out_dir: str) -> None:
    """CSV bundle: ticks.csv, events.csv, maps/*.txt, config.json."""
    os.makedirs(out_dir, exist_ok=True)
    n = result.config.robot_count
    with open(os.path.join(out_dir, "ticks.csv"), "w", encoding="utf-8") as fh:
        cols = ["tick", "merged_coverage_pct", "overlap_pct"] + [f"robot{j}_coverage_pct" for j in range(n)]
        fh.write(",".join(cols) + "\n")
        for t in range(len(result.merged_coverage)):
            row = [str(t), f"{result.merged_coverage[t]:.6g}", f"{result.overlap[t]:.6g}"]
            row += [f"{result.per_robot_coverage[j][t]:.6g}" for j in range(n)]
            fh.write(",".join(row) + "\n")
    with open(os.path.join(out_dir, "events.csv"), "w", encoding="utf-8") as fh:
        fh.write("tick,robot,kind\n")
        for ev in result.events:
            fh.write(f"{ev.tick},{ev.robot_id},{ev.kind}\n")
    with open(os.path.join(out_dir, "decisions.csv"), "w", encoding="utf-8") as fh:
        fh.write("tick,robot,frontier_id,utility,gain,loss,valid,chosen\n")
        for t, rid, fid, util, gain, loss, valid, chosen in result.decision_rows:
            fh.write(f"{t},{rid},{fid},{util:.6g},{gain:.6g},{loss:.6g},{valid},{chosen}\n")
    maps_dir = os.path.join(out_dir, "maps")
    os.makedirs(maps_dir, exist_ok=True)
    for rid, local in enumerate(result.final_maps):
        with open(os.path.join(maps_dir, f"robot_{rid}.txt"), "w", encoding="utf-8") as fh:
            fh.write(local.dump() + "\n")
    cfg = result.config
    echo = {
        "map": cfg.map_source,
        "resolution": cfg.world_map.resolution,
        "robot_count": cfg.robot_count,
        "start_poses": cfg.start_poses,
        "sensor_radius": cfg.sensor_radius,
        "lidar_beams": cfg.lidar_beams,
        "noise_level": list(cfg.noise_level),
        "multipath_prob": cfg.multipath_prob,
        "speed_factors": cfg.speed_factors,
        "strategy": cfg.strategy.value,
        "soft_threshold": cfg.soft_threshold,
        "hard_threshold": cfg.hard_threshold,
        "hgrid_fill_k": cfg.hgrid_fill_k,
        "seed": cfg.seed,
        "max_ticks": cfg.max_ticks,
        "tick_dt": cfg.tick_dt,
        "ticks_run": result.ticks,
    }
    with open(os.path.join(out_dir, "config.json"), "w", encoding="utf-8") as fh:
        json.dump(echo, fh, indent=2, sort_keys=True)
        fh.write("\n")
