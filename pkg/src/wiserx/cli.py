"""Command-line front end.

Subcommands: run, batch, experiment, validate. Exit codes: 0 success,
1 usage error, 2 configuration error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

from . import CONFIG_SCHEMA_VERSION, __version__
from . import engine, experiments, metrics
from .errors import WiserxError
from .world import load_scenario_file, validate_scenario

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

OUT_ENV_VAR = "WISERX_OUT"


def _default_out() -> str:
    return os.environ.get(OUT_ENV_VAR, "out")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wiserx", description=__doc__)
    parser.add_argument(
        "--version",
        action="version",
        version=f"wiserx {__version__} (config schema v{CONFIG_SCHEMA_VERSION})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario")
    p_run.add_argument("scenario")
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--out", default=None)

    p_batch = sub.add_parser("batch", help="run a batch of seeded trials")
    p_batch.add_argument("scenario")
    p_batch.add_argument("--trials", type=int, required=True)
    p_batch.add_argument("--seed", type=int, default=None)
    p_batch.add_argument("--out", default=None)
    p_batch.add_argument("--workers", type=int, default=1)

    p_exp = sub.add_parser("experiment", help="run a canned experiment")
    p_exp.add_argument("name", choices=experiments.EXPERIMENT_NAMES)
    p_exp.add_argument("--out", default=None)
    p_exp.add_argument("--trials", type=int, default=experiments.DEFAULT_TRIALS)
    p_exp.add_argument("--seed", type=int, default=1000)
    p_exp.add_argument("--workers", type=int, default=1)

    p_val = sub.add_parser("validate", help="validate a scenario file")
    p_val.add_argument("scenario")
    return parser


def _load_config(path: str, seed_override=None):
    raw = load_scenario_file(path)
    cfg = validate_scenario(raw)
    if seed_override is not None:
        cfg = replace(cfg, seed=seed_override)
    return cfg


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; map to our usage code
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    try:
        if args.command == "validate":
            cfg = _load_config(args.scenario)
            resolved = {
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
            }
            json.dump(resolved, sys.stdout, indent=2, sort_keys=True)
            print()
            return EXIT_OK

        if args.command == "run":
            cfg = _load_config(args.scenario, args.seed)
            result = engine.run(cfg)
            out_dir = args.out or _default_out()
            engine.serialize_run(result, out_dir)
            print(f"run complete: {result.ticks} ticks, output in {out_dir}")
            return EXIT_OK

        if args.command == "batch":
            cfg = _load_config(args.scenario, args.seed)
            results = engine.batch(cfg, args.trials, cfg.seed, max_workers=args.workers)
            out_dir = args.out or _default_out()
            os.makedirs(out_dir, exist_ok=True)
            summaries = metrics.summarize(results)
            metrics.write_csv(summaries, os.path.join(out_dir, "summary.csv"))
            for k, res in enumerate(results):
                engine.serialize_run(res, os.path.join(out_dir, f"trial_{k:03d}"))
            print(f"batch complete: {len(results)} trials, output in {out_dir}")
            return EXIT_OK

        if args.command == "experiment":
            out_dir = args.out or _default_out()
            csv_path = experiments.run_experiment(
                args.name, out_dir, trials=args.trials, seed=args.seed, workers=args.workers
            )
            print(f"experiment {args.name} complete: {csv_path}")
            return EXIT_OK

    except (WiserxError, KeyError, ValueError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
