"""Point estimates from an LMB posterior: count, targets and groups."""

import logging
import warnings
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Sequence, Tuple

import numpy as np

from .exceptions import GroupInconsistencyError
from .rfs.densities import LmbDensity, cardinality_distribution
from .rfs.labels import AugmentedLabel, TrackLabel

CENTER_TOLERANCE = 1e-6


class ExtractionClampWarning(UserWarning):
    pass


class TargetEstimate(NamedTuple):
    state: np.ndarray
    label: AugmentedLabel


class GroupSummary(NamedTuple):
    g: int
    members: Tuple[TrackLabel, ...]
    center: np.ndarray


@dataclass(frozen=True)
class StepEstimate:
    """
    Args:
        n_hat: estimated number of targets
        targets: extracted targets
        group_count: number of distinct nonzero group ids among the targets
        groups: one summary per such id, ordered by id
    """
    n_hat: int
    targets: Tuple[TargetEstimate, ...] = field(default_factory=tuple)
    group_count: int = 0
    groups: Tuple[GroupSummary, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if len(self.targets) != self.n_hat:
            raise ValueError(f'{len(self.targets)} targets for n_hat = {self.n_hat}')
        ids = {t.label.g for t in self.targets if t.label.g != 0}
        if ids != {grp.g for grp in self.groups}:
            raise ValueError('every nonzero group id of the targets needs a group summary')

    def positions(self) -> np.ndarray:
        if not self.targets:
            return np.zeros((0, 2))
        return np.array([t.state[[0, 2]] for t in self.targets])


def map_cardinality(d: LmbDensity) -> int:
    """Mode of the cardinality distribution; ties go to the smaller count."""
    return int(np.argmax(cardinality_distribution(d)))


def extract_targets(d: LmbDensity, n: int) -> List[TargetEstimate]:
    """
    The ``n`` most likely tracks, ordered by existence (ties by (k, i)),
    each with its posterior mean.
    """
    if n < 0:
        raise ValueError(f'n must be nonnegative, got {n}')
    if n > len(d):
        warnings.warn(f'asked for {n} targets from {len(d)} tracks', ExtractionClampWarning)
        logging.warning(__name__ + f' : extraction clamped from {n} to {len(d)} targets')
        n = len(d)
    ranked = sorted(d.tracks, key=lambda t: (-t.r, t.track))
    return [TargetEstimate(t.mean(), t.label) for t in ranked[:n]]


def summarize_groups(targets: Sequence[TargetEstimate]) -> Tuple[int, List[GroupSummary]]:
    members: Dict[int, List[TargetEstimate]] = {}
    for t in targets:
        if t.label.g != 0:
            members.setdefault(t.label.g, []).append(t)
    groups = []
    for g in sorted(members):
        centers = np.array([t.label.center for t in members[g]])
        if np.max(np.abs(centers - centers[0])) > CENTER_TOLERANCE:
            raise GroupInconsistencyError(f'members of group {g} disagree on its center')
        labels = tuple(sorted(t.label.track for t in members[g]))
        groups.append(GroupSummary(g, labels, centers[0]))
    return len(groups), groups


def estimate_step(d: LmbDensity) -> StepEstimate:
    # the cardinality pmf has len(d) + 1 entries, so n_hat never exceeds len(d)
    n_hat = map_cardinality(d)
    targets = extract_targets(d, n_hat)
    count, groups = summarize_groups(targets)
    return StepEstimate(len(targets), tuple(targets), count, tuple(groups))
