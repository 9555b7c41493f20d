"""Shared fixtures and small map-building helpers."""

from __future__ import annotations

import numpy as np
import pytest

from wiserx import experiments
from wiserx.mapping import LocalMap
from wiserx.world import FREE, OCCUPIED, UNKNOWN, load_environment


def room_text(height: int, width: int) -> str:
    """Bordered rectangular room, fully free inside."""
    rows = ["#" * width]
    for _ in range(height - 2):
        rows.append("#" + "." * (width - 2) + "#")
    rows.append("#" * width)
    return "\n".join(rows)


def local_from_array(cells, resolution: float = 0.25) -> LocalMap:
    return LocalMap(cells=np.asarray(cells, dtype=np.int8), resolution=resolution)


def random_local_map(rng: np.random.Generator, max_side: int = 20) -> LocalMap:
    h = int(rng.integers(3, max_side + 1))
    w = int(rng.integers(3, max_side + 1))
    cells = rng.choice(
        np.array([FREE, OCCUPIED, UNKNOWN], dtype=np.int8), size=(h, w), p=[0.5, 0.2, 0.3]
    )
    return LocalMap(cells=cells.astype(np.int8), resolution=0.25)


@pytest.fixture(scope="session")
def office_map():
    return load_environment(experiments.office_map_path())


@pytest.fixture()
def small_room():
    """10x10 bordered room at 0.25 m: free interior spans [0.25, 2.25] m."""
    return load_environment(room_text(10, 10))
