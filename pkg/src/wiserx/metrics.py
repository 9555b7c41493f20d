"""Ground-truth-frame evaluation: map merging, coverage, overlap,
trial summaries, and CSV export."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import EmptyInput, ShapeMismatch
from .mapping import LocalMap
from .world import FREE, OCCUPIED, UNKNOWN, GroundTruthMap


@dataclass(frozen=True)
class TrialSummary:
    strategy: str
    trial: int
    seed: int
    noise_bearing_deg: float
    noise_range_cm: float
    coverage_pct: float
    term_tick_max: int
    overlap_pct: float
    recovered_pct: float


CSV_COLUMNS = (
    "strategy",
    "trial",
    "seed",
    "noise_bearing_deg",
    "noise_range_cm",
    "coverage_pct",
    "term_tick_max",
    "overlap_pct",
    "recovered_pct",
)


def merge_maps(local_maps: Iterable[LocalMap]) -> LocalMap:
    """Cellwise merge: OCCUPIED wins over FREE wins over UNKNOWN."""
    maps = list(local_maps)
    if not maps:
        raise EmptyInput("no maps to merge")
    shape = maps[0].cells.shape
    for m in maps[1:]:
        if m.cells.shape != shape:
            raise ShapeMismatch(f"{m.cells.shape} != {shape}")
    merged = np.full(shape, UNKNOWN, dtype=np.int8)
    any_free = np.zeros(shape, dtype=bool)
    any_occ = np.zeros(shape, dtype=bool)
    for m in maps:
        any_free |= m.cells == FREE
        any_occ |= m.cells == OCCUPIED
    merged[any_free] = FREE
    merged[any_occ] = OCCUPIED
    return LocalMap(cells=merged, resolution=maps[0].resolution)


def coverage_percent(merged: LocalMap, truth: GroundTruthMap) -> float:
    """Share of the truly free cells that the merged map has observed."""
    if merged.cells.shape != truth.cells.shape:
        raise ShapeMismatch("merged map does not match ground truth shape")
    truth_free = truth.cells == FREE
    known = merged.cells != UNKNOWN
    return 100.0 * np.count_nonzero(known & truth_free) / np.count_nonzero(truth_free)


def pairwise_overlap(local_maps: Iterable[LocalMap], truth: GroundTruthMap) -> float:
    """Of the truly-free cells known by at least one robot, the share
    known by two or more. 0 when nothing is known yet."""
    maps = list(local_maps)
    truth_free = truth.cells == FREE
    counts = np.zeros(truth.cells.shape, dtype=np.int32)
    for m in maps:
        if m.cells.shape != truth.cells.shape:
            raise ShapeMismatch("local map does not match ground truth shape")
        counts += ((m.cells != UNKNOWN) & truth_free).astype(np.int32)
    union = np.count_nonzero(counts >= 1)
    if union == 0:
        return 0.0
    return 100.0 * np.count_nonzero(counts >= 2) / union


def recovered_coverage(result) -> float:
    """Share of the failed robot's exclusive area (at the fail tick) that
    the surviving robots had covered by termination. 0 without a failure."""
    if result.fail_exclusive_mask is None:
        return 0.0
    truth = result.config.world_map
    survivors = [m for rid, m in enumerate(result.final_maps) if rid != result.failed_robot_id]
    if not survivors:
        return 0.0
    merged = merge_maps(survivors)
    known = merged.cells != UNKNOWN
    truth_free_count = np.count_nonzero(truth.cells == FREE)
    return 100.0 * np.count_nonzero(known & result.fail_exclusive_mask) / truth_free_count


def summarize(results, trial_offset: int = 0) -> list[TrialSummary]:
    """Per-trial summaries from RunResults (engine module)."""
    results = list(results)
    if not results:
        raise EmptyInput("no results to summarize")
    out = []
    for i, res in enumerate(results):
        cfg = res.config
        truth = cfg.world_map
        survivors = [m for rid, m in enumerate(res.final_maps) if rid != res.failed_robot_id]
        cov = coverage_percent(merge_maps(survivors), truth) if survivors else 0.0
        out.append(
            TrialSummary(
                strategy=cfg.strategy.value,
                trial=trial_offset + i,
                seed=cfg.seed,
                noise_bearing_deg=math.degrees(cfg.noise_level[0]),
                noise_range_cm=cfg.noise_level[1] * 100.0,
                coverage_pct=cov,
                term_tick_max=res.term_tick_max,
                overlap_pct=pairwise_overlap(survivors, truth),
                recovered_pct=recovered_coverage(res),
            )
        )
    return out


def aggregate(summaries: Iterable[TrialSummary]) -> dict:
    """Population mean/std (n-1 denominator; std 0 when n == 1) per
    (strategy, noise level)."""
    groups: dict[tuple, list[TrialSummary]] = {}
    for s in summaries:
        groups.setdefault((s.strategy, s.noise_bearing_deg, s.noise_range_cm), []).append(s)
    out = {}
    for key, rows in groups.items():
        stats = {}
        for fieldname in ("coverage_pct", "term_tick_max", "overlap_pct", "recovered_pct"):
            vals = np.array([getattr(r, fieldname) for r in rows], dtype=float)
            std = float(np.std(vals, ddof=1)) if len(vals) > 1 else 0.0
            stats[fieldname] = {"mean": float(np.mean(vals)), "std": std, "n": len(vals)}
        out[key] = stats
    return out


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def write_csv(summaries: Iterable[TrialSummary], path: str) -> None:
    """Stable column order, 6-significant-digit floats."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for s in summaries:
            writer.writerow([_fmt(getattr(s, col)) for col in CSV_COLUMNS])


def read_csv(path: str) -> list[dict]:
    with open(path, "r", newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))
