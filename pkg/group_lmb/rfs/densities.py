"""
Bernoulli tracks, labeled multi-Bernoulli densities and the set-density
algebra needed to check them.
"""

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from qcodes import validators as vals

from .labels import AugmentedLabel, TrackLabel
from .mixture import GaussianMixture

_probability = vals.Numbers(min_value=0.0, max_value=1.0)


@dataclass(frozen=True)
class BernoulliTrack:
    """
    Args:
        r: existence probability
        density: normalized spatial density of the target state
        label: augmented label of the track
    """
    r: float
    density: GaussianMixture
    label: AugmentedLabel

    def __post_init__(self) -> None:
        _probability.validate(float(self.r), f'existence of track {self.label}')
        if not self.density.is_normalized():
            raise ValueError(f'density of track {self.label} is not normalized')
        object.__setattr__(self, 'r', float(self.r))

    @property
    def track(self) -> TrackLabel:
        return self.label.track

    def mean(self) -> np.ndarray:
        return self.density.mean()

    def with_label(self, label: AugmentedLabel) -> 'BernoulliTrack':
        return BernoulliTrack(self.r, self.density, label)


@dataclass(frozen=True)
class LmbDensity:
    tracks: Tuple[BernoulliTrack, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, 'tracks', tuple(self.tracks))

    def __len__(self) -> int:
        return len(self.tracks)

    def __iter__(self):
        return iter(self.tracks)

    @property
    def labels(self) -> List[TrackLabel]:
        return [t.track for t in self.tracks]

    @property
    def existence(self) -> np.ndarray:
        return np.array([t.r for t in self.tracks], dtype=float)

    def by_label(self) -> Dict[TrackLabel, BernoulliTrack]:
        return {t.track: t for t in self.tracks}

    def pruned(self, threshold: float) -> 'LmbDensity':
        return LmbDensity(tuple(t for t in self.tracks if t.r >= threshold))

    def expected_count(self) -> float:
        return float(np.sum(self.existence))


@dataclass(frozen=True)
class GlmbHypothesis:
    """
    One term of the update-time hypothesis expansion.

    Args:
        labels: the (k, i) labels that exist under this hypothesis
        theta: measurement index per existing label, 0 for a missed
            detection and j >= 1 for the j-th measurement
        log_weight: unnormalized log weight
    """
    labels: FrozenSet[TrackLabel]
    theta: Dict[TrackLabel, int]
    log_weight: float

    def __post_init__(self) -> None:
        if set(self.theta) != set(self.labels):
            raise ValueError('theta must be defined exactly on the hypothesis labels')
        used = [j for j in self.theta.values() if j > 0]
        if len(used) != len(set(used)):
            raise ValueError(f'association map is not injective on detections: {self.theta}')


def validate_distinct_labels(d: LmbDensity) -> bool:
    labels = d.labels
    return len(labels) == len(set(labels))


class Projection(Enum):
    """Selectors for ``project``."""
    L = 'L'
    L12 = 'L1x2'
    L3 = 'L3'
    L4 = 'L4'
    X = 'X'
    XL12 = 'XL1x2'


def project(d: LmbDensity, selector: Projection) -> list:
    """
    Per-track projections, in track order.

    ``L`` gives the augmented labels, ``L12`` the (k, i) pairs, ``L3`` the
    group ids, ``L4`` the group centers, ``X`` the spatial densities and
    ``XL12`` (density, (k, i)) pairs.
    """
    selector = Projection(selector)
    if selector is Projection.L:
        return [t.label for t in d]
    if selector is Projection.L12:
        return [t.track for t in d]
    if selector is Projection.L3:
        return [t.label.g for t in d]
    if selector is Projection.L4:
        return [t.label.center for t in d]
    if selector is Projection.X:
        return [t.density for t in d]
    return [(t.density, t.track) for t in d]


def cardinality_distribution(d: LmbDensity) -> np.ndarray:
    """Poisson-binomial pmf of the number of existing tracks."""
    pmf = np.ones(1)
    for r in d.existence:
        pmf = np.convolve(pmf, [1.0 - r, r])
    return pmf


def evaluate_bernoulli_setpdf(t: BernoulliTrack, realization: Optional[Sequence[float]]) -> float:
    if realization is None or len(realization) == 0:
        return 1.0 - t.r
    return t.r * t.density.pdf(realization)


def set_exponential(h: Callable[[object], float], X: Iterable) -> float:
    value = 1.0
    for x in X:
        value *= h(x)
    return value


def kronecker_delta(a, b) -> int:
    return int(a == b)


def inclusion(subset: Iterable, superset: Iterable) -> int:
    return int(set(subset) <= set(superset))


def poisson_setpdf(X: Sequence, intensity: Callable[[np.ndarray], float], mass: float) -> float:
    """e^{-mass} times the product of the intensity over the points of X."""
    return math.exp(-mass) * set_exponential(intensity, X)


def lmb_setpdf(d: LmbDensity, labeled_states: Sequence[Tuple[Sequence[float], TrackLabel]]) -> float:
    """Density of a labeled realization under an LMB density."""
    present = [label for _, label in labeled_states]
    if len(present) != len(set(present)):
        return 0.0
    tracks = d.by_label()
    if any(label not in tracks for label in present):
        return 0.0
    value = 1.0
    states = dict((label, x) for x, label in labeled_states)
    for label, t in tracks.items():
        if label in states:
            value *= t.r * t.density.pdf(states[label])
        else:
            value *= 1.0 - t.r
    return value


def multi_bernoulli_setpdf(d: LmbDensity, states: Sequence[Sequence[float]]) -> float:
    """
    Unlabeled multi-Bernoulli density, summing over every injective
    assignment of the points to tracks. Meant for small sets.
    """
    labels = d.labels
    if len(states) > len(labels):
        return 0.0
    total = 0.0
    for chosen in itertools.permutations(labels, len(states)):
        total += lmb_setpdf(d, list(zip(states, chosen)))
    return total
