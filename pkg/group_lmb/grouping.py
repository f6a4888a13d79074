"""
Group information update.

After every measurement update the posterior track means are linked into a
proximity graph (edge when two positions are at most ``epsilon`` apart) and
every connected component with more than one member becomes a group with a
fresh id and its members' centroid as center. The centroid is the plain
mean of the member means, or with ``existence`` weighting their
existence-weighted mean, which near-zero-existence births barely move.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as _csgraph_components
from scipy.spatial.distance import pdist, squareform

from .rfs.densities import BernoulliTrack, LmbDensity

_POSITION = [0, 2]


@dataclass(frozen=True)
class AdjacencyMatrix:
    """Binary, symmetric, zero-diagonal ``(n, n)`` proximity matrix."""
    a: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.a, dtype=np.int8)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f'adjacency must be square, got shape {a.shape}')
        if not np.array_equal(a, a.T):
            raise ValueError('adjacency must be symmetric')
        if np.any(np.diag(a)):
            raise ValueError('adjacency must have a zero diagonal')
        if np.any((a != 0) & (a != 1)):
            raise ValueError('adjacency must be binary')
        a.setflags(write=False)
        object.__setattr__(self, 'a', a)

    def __len__(self) -> int:
        return self.a.shape[0]


@dataclass(frozen=True)
class GroupPartition:
    """
    Disjoint index sets covering ``0..n-1``, ordered by their smallest
    member.
    """
    components: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        comps = tuple(tuple(sorted(int(i) for i in c)) for c in self.components)
        comps = tuple(sorted(comps, key=lambda c: c[0] if c else -1))
        flat = [i for c in comps for i in c]
        if len(flat) != len(set(flat)) or sorted(flat) != list(range(len(flat))):
            raise ValueError(f'components must partition 0..n-1, got {comps}')
        object.__setattr__(self, 'components', comps)

    @property
    def singletons(self) -> Tuple[bool, ...]:
        return tuple(len(c) == 1 for c in self.components)

    @property
    def groups(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(c for c in self.components if len(c) > 1)

    def __len__(self) -> int:
        return len(self.components)


def build_adjacency(means: Sequence, epsilon: float) -> AdjacencyMatrix:
    """
    Args:
        means: state vectors [px, vx, py, vy]; only the positions are compared
        epsilon: distance threshold in m, inclusive
    """
    if epsilon < 0:
        raise ValueError(f'epsilon must be nonnegative, got {epsilon}')
    means = np.asarray(means, dtype=float).reshape(-1, 4)
    n = means.shape[0]
    if n < 2:
        return AdjacencyMatrix(np.zeros((n, n), dtype=np.int8))
    dist = squareform(pdist(means[:, _POSITION]))
    a = (dist <= epsilon).astype(np.int8)
    np.fill_diagonal(a, 0)
    return AdjacencyMatrix(a)


def connected_components(adjacency: AdjacencyMatrix) -> GroupPartition:
    n = len(adjacency)
    if n == 0:
        return GroupPartition(())
    count, labels = _csgraph_components(csr_matrix(adjacency.a), directed=False)
    comps = [tuple(np.flatnonzero(labels == c).tolist()) for c in range(count)]
    return GroupPartition(tuple(comps))


def group_edges(adjacency: AdjacencyMatrix, partition: GroupPartition) -> List[List[Tuple[int, int]]]:
    """Edge list (i < j) of every component, in partition order."""
    out = []
    for comp in partition.components:
        edges = [(i, j) for idx, i in enumerate(comp) for j in comp[idx + 1:] if adjacency.a[i, j]]
        out.append(edges)
    return out


CENTER_WEIGHTINGS = ('existence', 'uniform')


def group_center(means: np.ndarray, existence: np.ndarray, weighting: str = 'uniform') -> np.ndarray:
    """Centroid of member means, all four state components."""
    if weighting not in CENTER_WEIGHTINGS:
        raise ValueError(f'unknown center weighting {weighting!r}')
    weights = np.asarray(existence, dtype=float)
    if weighting == 'uniform' or not np.sum(weights) > 0.0:
        weights = np.ones(len(means))
    return np.average(np.asarray(means, dtype=float), axis=0, weights=weights)


def update_group_info(d: LmbDensity, epsilon: float, next_group_id: int,
                      weighting: str = 'uniform') -> Tuple[LmbDensity, int]:
    """
    Re-cluster the tracks of a posterior.

    Args:
        d: posterior after the measurement update
        epsilon: grouping threshold in m
        next_group_id: first unused group id
        weighting: 'uniform' or 'existence' centroid of the members

    Returns:
        the density with new (g, c) on every label, and the next unused id
    """
    if len(d) <= 1:
        return LmbDensity(tuple(t.with_label(t.label.ungrouped()) for t in d)), next_group_id
    tracks = d.tracks
    means = np.array([t.mean() for t in tracks])
    adjacency = build_adjacency(means, epsilon)
    partition = connected_components(adjacency)

    relabeled: List[BernoulliTrack] = list(tracks)
    for comp in partition.components:
        if len(comp) == 1:
            row = comp[0]
            relabeled[row] = tracks[row].with_label(tracks[row].label.ungrouped())
            continue
        g = next_group_id
        next_group_id += 1
        rows = list(comp)
        center = group_center(means[rows], [tracks[row].r for row in rows], weighting)
        for row in comp:
            relabeled[row] = tracks[row].with_label(tracks[row].label.with_group(g, center))
        logging.debug(__name__ + f' : group {g}: ' + ', '.join(str(tracks[row].label.track) for row in comp))
    return LmbDensity(tuple(relabeled)), next_group_id
