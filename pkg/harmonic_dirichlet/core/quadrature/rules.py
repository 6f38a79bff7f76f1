from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterable

import numpy as np
from scipy.special import roots_legendre

TWO_PI = 2.0 * math.pi


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1]."""
    nodes, weights = roots_legendre(order)
    return np.asarray(nodes, dtype=float), np.asarray(weights, dtype=float)


def panel_rule(edges: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Composite Gauss-Legendre rule on consecutive panels.

    Args:
        edges   : Sorted panel breakpoints.
        order   : Points per panel.

    Returns:
        Flattened nodes and weights, panel by panel.
    """
    edges = np.asarray(edges, dtype=float)
    x, w = gauss_legendre(order)
    left, right = edges[:-1], edges[1:]
    half = 0.5 * (right - left)
    mid = 0.5 * (right + left)
    nodes = mid[:, None] + half[:, None] * x[None, :]
    weights = half[:, None] * w[None, :]
    return nodes.ravel(), weights.ravel()


def normalize_angles(angles: Iterable[float]) -> tuple[float, ...]:
    """Maps angles into [0, 2pi), sorted and without duplicates."""
    seen: set[float] = set()
    for angle in angles:
        a = math.fmod(float(angle), TWO_PI)
        if a < 0:
            a += TWO_PI
        if a >= TWO_PI:
            a = 0.0
        seen.add(a)
    return tuple(sorted(seen))


def graded_edges(panels: int, singular_angles: Iterable[float], floor: float) -> np.ndarray:
    """
    Breakpoints of a periodic angular rule on [0, 2pi].

    The circle is split into `panels` uniform panels, and around each singular angle breakpoints are added at
    geometric distances floor * 2^j, so panels shrink to width `floor` next to the singularity.

    Args:
        panels          : Number of uniform base panels.
        singular_angles : Angles to grade towards.
        floor           : Width of the innermost graded panels.
    """
    width = TWO_PI / panels
    edges = [np.linspace(0.0, TWO_PI, panels + 1)]
    offsets: list[float] = []
    step = floor
    while step < width:
        offsets.append(step)
        step *= 2.0
    offset_array = np.asarray(offsets)
    for angle in normalize_angles(singular_angles):
        around = np.concatenate(([angle], angle + offset_array, angle - offset_array))
        edges.append(np.mod(around, TWO_PI))

    merged = np.unique(np.concatenate(edges))
    if merged[0] > 0.0:
        merged = np.concatenate(([0.0], merged))
    if merged[-1] < TWO_PI:
        merged = np.concatenate((merged, [TWO_PI]))
    keep = np.concatenate(([True], np.diff(merged) > 0.0))
    return merged[keep]


def geometric_annuli(factor: float, levels: int) -> np.ndarray:
    """Distances to the boundary 1, q, q^2, ..., q^levels delimiting geometric annuli."""
    return factor ** np.arange(levels + 1, dtype=float)
