"""Figure rendering from experiment CSV files.

The renderer is a pure function of the CSV content: fixed figure sizes,
deterministic output filenames, no clocks or randomness.
"""

from __future__ import annotations

import csv
import html
import logging
import os
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

log = logging.getLogger("wiserx_report")

EXPERIMENTS = ("overlap", "termination", "slow", "failure", "noise")

SUMMARY_COLUMNS = (
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

SERIES_COLUMNS = ("strategy", "trial", "tick", "coverage_pct", "overlap_pct")

# which summary column the bar panel shows, per experiment
BAR_METRIC = {
    "overlap": "overlap_pct",
    "termination": "term_tick_max",
    "slow": "term_tick_max",
    "failure": "coverage_pct",
    "noise": "coverage_pct",
}


class SchemaMismatch(Exception):
    """A CSV file's header does not match the documented schema."""


@dataclass
class ExperimentData:
    name: str
    summary: list[dict]
    series: list[dict]


def _read_rows(path: str, expected: tuple[str, ...]) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = tuple(reader.fieldnames or ())
        if header != expected:
            raise SchemaMismatch(
                f"{os.path.basename(path)}: header {list(header)} != expected {list(expected)}"
            )
        return list(reader)


def load_experiment(csv_dir: str, name: str) -> ExperimentData | None:
    summary_path = os.path.join(csv_dir, f"{name}.csv")
    if not os.path.exists(summary_path):
        return None
    summary = _read_rows(summary_path, SUMMARY_COLUMNS)
    series_path = os.path.join(csv_dir, f"{name}_series.csv")
    series = _read_rows(series_path, SERIES_COLUMNS) if os.path.exists(series_path) else []
    return ExperimentData(name=name, summary=summary, series=series)


def _series_by_group(series: list[dict]) -> dict[tuple[str, int], tuple[np.ndarray, np.ndarray]]:
    groups: dict[tuple[str, int], list[tuple[int, float]]] = {}
    for row in series:
        key = (row["strategy"], int(row["trial"]))
        groups.setdefault(key, []).append((int(row["tick"]), float(row["coverage_pct"])))
    out = {}
    for key, pts in groups.items():
        pts.sort()
        ticks = np.array([t for t, _ in pts], dtype=float)
        cov = np.array([c for _, c in pts], dtype=float)
        out[key] = (ticks, cov)
    return out


def _strategies_in_order(rows: list[dict]) -> list[str]:
    seen: list[str] = []
    for row in rows:
        if row["strategy"] not in seen:
            seen.append(row["strategy"])
    return seen


def _load_map_text(path: str) -> np.ndarray | None:
    if not os.path.exists(path):
        return None
    with open(path, encoding="utf-8") as fh:
        lines = [line for line in fh.read().splitlines() if line]
    lut = {".": 0, "#": 1, "?": 2}
    return np.array([[lut.get(ch, 2) for ch in line] for line in lines], dtype=np.int8)


def render_experiment(data: ExperimentData, csv_dir: str, out_dir: str) -> str:
    """Render one figure for the experiment; returns the figure filename."""
    show_maps = data.name == "failure"
    ncols = 3 if show_maps else 2
    fig, axes = plt.subplots(1, ncols, figsize=(5 * ncols, 4))

    # left panel: per-trial coverage series, exactly the CSV values
    ax = axes[0]
    strategies = _strategies_in_order(data.summary)
    cmap = plt.get_cmap("tab10")
    colors = {name: cmap(i % 10) for i, name in enumerate(strategies)}
    labeled: set[str] = set()
    for (strategy, trial), (ticks, cov) in sorted(_series_by_group(data.series).items()):
        label = strategy if strategy not in labeled else None
        labeled.add(strategy)
        ax.plot(ticks, cov, color=colors.get(strategy, "gray"), alpha=0.5, lw=0.8, label=label)
    ax.set_xlabel("tick")
    ax.set_ylabel("merged coverage [%]")
    ax.set_title(f"{data.name}: coverage per trial")
    if labeled:
        ax.legend(fontsize=8)

    # middle panel: per-strategy mean of the experiment's headline metric
    ax = axes[1]
    metric = BAR_METRIC[data.name]
    means, stds = [], []
    for name in strategies:
        vals = [float(r[metric]) for r in data.summary if r["strategy"] == name]
        means.append(float(np.mean(vals)) if vals else 0.0)
        stds.append(float(np.std(vals, ddof=1)) if len(vals) > 1 else 0.0)
    ax.bar(range(len(strategies)), means, yerr=stds, capsize=4,
           color=[colors[n] for n in strategies])
    ax.set_xticks(range(len(strategies)))
    ax.set_xticklabels(strategies, rotation=20, ha="right", fontsize=8)
    ax.set_ylabel(metric)
    ax.set_title(f"{data.name}: mean {metric} (std whiskers)")

    if show_maps:
        ax = axes[2]
        maps_dir = os.path.join(csv_dir, "failure_maps")
        failed = _load_map_text(os.path.join(maps_dir, "failed_robot_map.txt"))
        merged = _load_map_text(os.path.join(maps_dir, "survivor_merged_map.txt"))
        if failed is not None and merged is not None:
            ax.imshow(np.hstack([failed, np.full((failed.shape[0], 1), 2), merged]),
                      cmap="gray_r", interpolation="nearest")
            ax.set_title("failed robot map | survivor merge")
        else:
            log.warning("failure maps missing under %s; skipping map panel", maps_dir)
            ax.set_title("failure maps unavailable")
        ax.set_axis_off()

    fig.tight_layout()
    filename = f"{data.name}.png"
    fig.savefig(os.path.join(out_dir, filename), dpi=100)
    plt.close(fig)
    return filename


def _write_index(out_dir: str, figures: list[str]) -> str:
    path = os.path.join(out_dir, "index.html")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("<!DOCTYPE html>\n<html><head><title>wiserx report</title></head><body>\n")
        fh.write("<h1>wiserx experiment report</h1>\n")
        if not figures:
            fh.write("<p>no data</p>\n")
        for name in figures:
            fh.write(f'<h2>{html.escape(os.path.splitext(name)[0])}</h2>\n')
            fh.write(f'<img src="{html.escape(name)}" alt="{html.escape(name)}">\n')
        fh.write("</body></html>\n")
    return path


def render_report(csv_dir: str, out_dir: str) -> list[str]:
    """Render one figure per experiment found in csv_dir plus an index
    page; returns the figure filenames. Missing experiments are skipped
    with a warning; an empty directory yields a "no data" index."""
    os.makedirs(out_dir, exist_ok=True)
    figures = []
    for name in EXPERIMENTS:
        data = load_experiment(csv_dir, name)
        if data is None:
            log.warning("experiment %r not found in %s; skipping", name, csv_dir)
            continue
        figures.append(render_experiment(data, csv_dir, out_dir))
    _write_index(out_dir, figures)
    return figures
