"""Decentralized multi-robot frontier-exploration simulator.

Robots coordinate only through locally estimated inter-robot range and
bearing; the package also ships three comparison strategies, a
deterministic batch harness, and desk-scale canned experiments.
"""

from .world import (
    GroundTruthMap,
    ScenarioConfig,
    Strategy,
    load_environment,
    load_scenario_file,
    validate_scenario,
)
from .engine import RunResult, batch, run

__all__ = [
    "GroundTruthMap",
    "ScenarioConfig",
    "Strategy",
    "RunResult",
    "load_environment",
    "load_scenario_file",
    "validate_scenario",
    "run",
    "batch",
]

__version__ = "0.1.0"
CONFIG_SCHEMA_VERSION = 1
