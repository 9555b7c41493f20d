"""Small angle/geometry helpers used across modules."""

from __future__ import annotations

import math

import numpy as np

TWO_PI = 2.0 * math.pi


def wrap_angle(a: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    w = math.fmod(a + math.pi, TWO_PI)
    if w <= 0.0:
        w += TWO_PI
    return w - math.pi


def circular_mean(angles) -> float:
    """Mean direction of a set of angles, wrapped to (-pi, pi]."""
    s = float(np.sum(np.sin(angles)))
    c = float(np.sum(np.cos(angles)))
    return wrap_angle(math.atan2(s, c))


def circular_variance(angles) -> float:
    """1 - mean resultant length; 0 for identical angles, up to 1."""
    s = float(np.mean(np.sin(angles)))
    c = float(np.mean(np.cos(angles)))
    return 1.0 - math.hypot(s, c)
