"""Binary shapes planted as parts by the synthetic generator."""
from typing import (
    Callable,
    Dict,
)

import numpy as np


PatternFunction = Callable[[np.ndarray, np.ndarray, float], np.ndarray]


def _disc(
    dx: np.ndarray,
    dy: np.ndarray,
    radius: float,
) -> np.ndarray:
    return dx**2 + dy**2 <= radius**2


def _ring(
    dx: np.ndarray,
    dy: np.ndarray,
    radius: float,
) -> np.ndarray:
    squared = dx**2 + dy**2
    return (squared <= radius**2) & (squared >= (radius / 2) ** 2)


def _cross(
    dx: np.ndarray,
    dy: np.ndarray,
    radius: float,
) -> np.ndarray:
    arm = radius / 3
    return (np.abs(dx) <= arm) | (np.abs(dy) <= arm)


def _bar(
    dx: np.ndarray,
    dy: np.ndarray,
    radius: float,
) -> np.ndarray:
    return np.abs(dy) <= radius / 3


def _square(
    dx: np.ndarray,
    dy: np.ndarray,
    radius: float,
) -> np.ndarray:
    return np.ones(dx.shape, dtype=bool)


def _checker(
    dx: np.ndarray,
    dy: np.ndarray,
    radius: float,
) -> np.ndarray:
    cell = max(radius / 2, 0.5)
    return ((np.floor((dx + radius) / cell) + np.floor((dy + radius) / cell)) % 2) == 0


PATTERNS: Dict[str, PatternFunction] = {
    "disc": _disc,
    "ring": _ring,
    "cross": _cross,
    "bar": _bar,
    "square": _square,
    "checker": _checker,
}


def pattern_mask(
    pattern: str,
    side: int,
) -> np.ndarray:
    """
    Rasterize a pattern on a square grid.

    Args:
        pattern: a pattern name (see `PATTERNS`)
        side: the side of the grid in pixels

    Returns:
        a (side, side) boolean mask
    """
    coordinates = np.arange(side, dtype=np.float64) + 0.5 - side / 2
    dx, dy = np.meshgrid(coordinates, coordinates)
    return PATTERNS[pattern](dx, dy, side / 2)
