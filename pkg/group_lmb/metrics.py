"""
Optimal subpattern assignment (OSPA) distance between two finite point sets.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from qcodes import validators as vals
from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import cdist


@dataclass(frozen=True)
class OspaParams:
    """
    Args:
        p: order, at least 1
        cutoff: c in m, positive
    """
    p: float = 1.0
    cutoff: float = 100.0

    def __post_init__(self) -> None:
        vals.Numbers(min_value=1.0).validate(self.p, 'ospa.order')
        vals.Numbers(min_value=np.nextafter(0.0, 1.0)).validate(self.cutoff, 'ospa.cutoff')


class OspaComponents(NamedTuple):
    total: float
    localization: float
    cardinality: float


def _as_points(X) -> np.ndarray:
    return np.asarray(X, dtype=float).reshape(-1, 2)


def ospa_components(X, Y, params: OspaParams = OspaParams()) -> OspaComponents:
    """OSPA and its localization and cardinality parts, each raised to 1/p."""
    X, Y = _as_points(X), _as_points(Y)
    if len(X) > len(Y):
        X, Y = Y, X
    m, n = len(X), len(Y)
    if n == 0:
        return OspaComponents(0.0, 0.0, 0.0)
    c, p = params.cutoff, params.p
    local = 0.0
    if m:
        cost = np.minimum(cdist(X, Y), c) ** p
        rows, cols = linear_sum_assignment(cost)
        local = float(cost[rows, cols].sum())
    card = c ** p * (n - m)
    return OspaComponents(((local + card) / n) ** (1 / p),
                          (local / n) ** (1 / p),
                          (card / n) ** (1 / p))


def ospa(X, Y, params: OspaParams = OspaParams()) -> float:
    """
    Args:
        X: points, ``(m, 2)``
        Y: points, ``(n, 2)``
        params: order and cutoff

    Returns:
        distance in m, 0 for two empty sets
    """
    return ospa_components(X, Y, params).total
