"""
K-best ranked assignment for the track/measurement association problem.

Rows are predicted tracks. Every row can take one measurement column, its
own missed-detection column or its own non-existence column, so the
enumeration of association hypotheses reduces to ranking the solutions of a
single rectangular assignment problem. Ranking follows Murty's partitioning
scheme on top of ``scipy.optimize.linear_sum_assignment``.
"""

import heapq
import itertools
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..rfs.labels import TrackLabel

ABSENT = -1
MISSED = 0


@dataclass(frozen=True)
class AssociationProblem:
    """
    Args:
        cost: ``(n, m)`` negative log scores of assigning track row to
            measurement column, ``inf`` where forbidden
        miss_cost: ``(n,)`` cost of the track existing but not detected
        absent_cost: ``(n,)`` cost of the track not existing
        track_index: (k, i) label of every row
        columns: index into the original measurement list of every column
    """
    cost: np.ndarray
    miss_cost: np.ndarray
    absent_cost: np.ndarray
    track_index: Tuple[TrackLabel, ...] = field(default=())
    columns: Tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        cost = np.asarray(self.cost, dtype=float)
        n = np.asarray(self.miss_cost).size
        if cost.ndim != 2 or cost.shape[0] != n:
            cost = cost.reshape(n, -1)
        object.__setattr__(self, 'cost', cost)
        object.__setattr__(self, 'miss_cost', np.asarray(self.miss_cost, dtype=float).ravel())
        object.__setattr__(self, 'absent_cost', np.asarray(self.absent_cost, dtype=float).ravel())
        if not self.track_index:
            object.__setattr__(self, 'track_index', tuple((0, row) for row in range(n)))
        if not self.columns:
            object.__setattr__(self, 'columns', tuple(range(cost.shape[1])))
        if np.any(np.isnan(cost)):
            raise ValueError('association costs must not be NaN')

    @property
    def n_tracks(self) -> int:
        return self.cost.shape[0]

    @property
    def n_measurements(self) -> int:
        return self.cost.shape[1]

    def full_matrix(self) -> np.ndarray:
        """[measurement costs | diagonal miss costs | diagonal absence costs]."""
        n, m = self.cost.shape
        full = np.full((n, m + 2 * n), np.inf)
        full[:, :m] = self.cost
        rows = np.arange(n)
        full[rows, m + rows] = self.miss_cost
        full[rows, m + n + rows] = self.absent_cost
        return full

    def decode(self, cols: np.ndarray) -> Tuple[int, ...]:
        """
        Column choice per row to association per row: ``ABSENT``,
        ``MISSED`` or the 1-based position of the measurement in the
        original list.
        """
        m = self.n_measurements
        n = self.n_tracks
        out = []
        for col in cols:
            if col < m:
                out.append(self.columns[col] + 1)
            elif col < m + n:
                out.append(MISSED)
            else:
                out.append(ABSENT)
        return tuple(out)


class RankedAssignment(NamedTuple):
    theta: Tuple[int, ...]
    cost: float


def _solve(matrix: np.ndarray) -> Optional[Tuple[np.ndarray, float]]:
    try:
        rows, cols = linear_sum_assignment(matrix)
    except ValueError:
        return None
    total = float(matrix[rows, cols].sum())
    if not np.isfinite(total):
        return None
    return cols, total


def _force(matrix: np.ndarray, row: int, col: int) -> None:
    keep = matrix[row, col]
    matrix[row, :] = np.inf
    matrix[:, col] = np.inf
    matrix[row, col] = keep


def ranked_assignments(problem: AssociationProblem, K: int,
                       max_cost_gap: Optional[float] = None) -> List[RankedAssignment]:
    """
    Up to ``K`` lowest-cost assignments, in nondecreasing cost order.

    Args:
        problem: the association problem
        K: maximum number of hypotheses
        max_cost_gap: stop once the next solution is more than this above
            the best one

    Returns:
        list of (association per row, total cost); no duplicates
    """
    if K < 1:
        raise ValueError(f'K must be at least 1, got {K}')
    n = problem.n_tracks
    if n == 0:
        return [RankedAssignment((), 0.0)]

    base = problem.full_matrix()
    root = _solve(base)
    if root is None:
        return []

    # each node carries its constrained matrix; children only add one
    # exclusion and the rows forced before them
    counter = itertools.count()
    cols, total = root
    heap = [(total, next(counter), cols, base, frozenset())]
    best = total
    out: List[RankedAssignment] = []
    while heap and len(out) < K:
        total, _, cols, matrix, fixed = heapq.heappop(heap)
        if max_cost_gap is not None and total - best > max_cost_gap:
            break
        out.append(RankedAssignment(problem.decode(cols), total))
        if len(out) == K:
            break

        work = matrix.copy()
        fixed_now = set(fixed)
        for row in range(n):
            if row in fixed:
                continue
            col = int(cols[row])
            child = work.copy()
            child[row, col] = np.inf
            solution = _solve(child)
            if solution is not None:
                heapq.heappush(heap, (solution[1], next(counter), solution[0], child, frozenset(fixed_now)))
            _force(work, row, col)
            fixed_now.add(row)
    return out
