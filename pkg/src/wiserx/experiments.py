"""Canned desk-scale experiments: a 10 m x 10 m cluttered office map,
three robots, twenty seeded trials each, paired seeds across strategies."""

from __future__ import annotations

import math
import os
from dataclasses import replace
from importlib import resources

from . import engine, metrics
from .world import ScenarioConfig, Strategy, validate_scenario

EXPERIMENT_NAMES = ("overlap", "termination", "slow", "failure", "noise")

NOISE_LEVELS = (
    (math.radians(2.0), 0.01),
    (math.radians(5.0), 0.10),
    (math.radians(10.0), 0.20),
    (math.radians(30.0), 1.00),
)

DEFAULT_TRIALS = 20
_DEFAULT_STARTS = [(2.0, 2.0, 0.0), (8.0, 2.0, 0.0), (5.0, 8.0, 0.0)]

# Desk-scale harness constants. The 10 m office is roughly 1/16 the area
# of a warehouse deployment, so the sensor radius, robot speed, and the
# coverage-estimate fill rule are scaled with it: a 1.25 m radius keeps
# exploration travel-dominated, the slower speed keeps the inter-robot
# estimate trail dense relative to the sigmoid reach, and k=1 with a 0.3
# soft threshold matches the much lower estimate-insertion budget of the
# short runs (one insertion per robot per decision step). The sigmoid
# midpoint sits just past the sensor radius so that one trail point
# invalidates the full sensed disc around it, and the estimate query
# reaches 3 radii from a frontier center so loss from a neighbor's trail
# is visible to every unknown cell the frontier can see.
DESK_SENSOR_RADIUS = 1.25
DESK_BASE_SPEED = 0.25
DESK_HGRID_FILL_K = 1
DESK_SOFT_THRESHOLD = 0.30
DESK_KAPPA1 = 1.1 * DESK_SENSOR_RADIUS
DESK_KAPPA2 = DESK_SENSOR_RADIUS / 6.0
DESK_QUERY_RADIUS_MULT = 3.0


def office_map_path() -> str:
    return str(resources.files("wiserx").joinpath("assets/office40.txt"))


def base_config(strategy: str = "WiserX", **overrides) -> ScenarioConfig:
    raw = {
        "map": office_map_path(),
        "robot_count": 3,
        "start_poses": _DEFAULT_STARTS,
        "strategy": strategy,
        "random_starts": True,
        "sensor_radius": DESK_SENSOR_RADIUS,
        "base_speed": DESK_BASE_SPEED,
        "hgrid_fill_k": DESK_HGRID_FILL_K,
        "soft_threshold": DESK_SOFT_THRESHOLD,
        "kappa1": DESK_KAPPA1,
        "kappa2": DESK_KAPPA2,
        "query_radius_mult": DESK_QUERY_RADIUS_MULT,
    }
    raw.update(overrides)
    return validate_scenario(raw)


def _series_rows(results, strategy_name: str):
    rows = []
    for trial, res in enumerate(results):
        for t in range(len(res.merged_coverage)):
            rows.append((strategy_name, trial, t, res.merged_coverage[t], res.overlap[t]))
    return rows


def _write_series(rows, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("strategy,trial,tick,coverage_pct,overlap_pct\n")
        for strategy_name, trial, t, cov, ovl in rows:
            fh.write(f"{strategy_name},{trial},{t},{cov:.6g},{ovl:.6g}\n")


def _run_strategies(strategies, trials, seed, workers, **overrides):
    """Batch each strategy with the same seeds (paired trials)."""
    out = {}
    for name in strategies:
        cfg = base_config(strategy=name, **overrides)
        out[name] = engine.batch(cfg, trials, seed, max_workers=workers)
    return out


def run_experiment(
    name: str, out_dir: str, trials: int = DEFAULT_TRIALS, seed: int = 1000, workers: int = 1
) -> str:
    """Execute one canned experiment; returns the summary CSV path."""
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, f"{name}.csv")
    series_path = os.path.join(out_dir, f"{name}_series.csv")

    if name == "overlap":
        by_strategy = _run_strategies(["WiserX", "Baseline1", "Baseline2"], trials, seed, workers)
    elif name == "termination":
        by_strategy = _run_strategies(["WiserX", "Baseline1"], trials, seed, workers)
    elif name == "slow":
        by_strategy = _run_strategies(
            ["WiserX", "Baseline3"], trials, seed, workers, speed_factors=[0.5, 1.0, 1.0]
        )
    elif name == "failure":
        by_strategy = {}
        for label, gating in (("WiserX", True), ("WiserX-NoTauGate", False)):
            cfg = base_config(
                strategy="WiserX",
                failure_spec={"robot_id": 0, "trigger": [0.5, 0.7]},
                tau_gating=gating,
            )
            by_strategy[label] = engine.batch(cfg, trials, seed, max_workers=workers)
        _dump_failure_maps(by_strategy["WiserX"][0], os.path.join(out_dir, "failure_maps"))
    elif name == "noise":
        by_strategy = {}
        for bearing_std, range_std in NOISE_LEVELS:
            label = f"WiserX-{math.degrees(bearing_std):g}deg-{range_std * 100:g}cm"
            cfg = base_config(strategy="WiserX", noise_level=[bearing_std, range_std])
            by_strategy[label] = engine.batch(cfg, trials, seed, max_workers=workers)
    else:
        raise ValueError(f"unknown experiment {name!r}; choose from {EXPERIMENT_NAMES}")

    summaries = []
    series = []
    for label, results in by_strategy.items():
        rows = metrics.summarize(results)
        summaries.extend(replace(r, strategy=label) for r in rows)
        series.extend(_series_rows(results, label))
    metrics.write_csv(summaries, csv_path)
    _write_series(series, series_path)
    return csv_path


def _dump_failure_maps(result, out_dir: str) -> None:
    """Failed robot's map plus survivor merge at termination (report input)."""
    if result.failed_robot_id is None:
        return
    os.makedirs(out_dir, exist_ok=True)
    from .world import dump_grid

    failed = result.final_maps[result.failed_robot_id]
    survivors = [m for rid, m in enumerate(result.final_maps) if rid != result.failed_robot_id]
    merged = metrics.merge_maps(survivors)
    with open(os.path.join(out_dir, "failed_robot_map.txt"), "w", encoding="utf-8") as fh:
        fh.write(failed.dump() + "\n")
    with open(os.path.join(out_dir, "survivor_merged_map.txt"), "w", encoding="utf-8") as fh:
        fh.write(merged.dump() + "\n")
