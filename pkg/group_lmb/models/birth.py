"""Labeled multi-Bernoulli birth model."""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from qcodes import validators as vals

from ..rfs.densities import BernoulliTrack
from ..rfs.labels import AugmentedLabel
from ..rfs.mixture import GaussianMixture

BENCHMARK_BIRTH_MEANS: Tuple[Tuple[float, float, float, float], ...] = (
    (-800.0, 0.0, 600.0, 0.0),
    (-800.0, 0.0, -200.0, 0.0),
    (-850.0, 0.0, -200.0, 0.0),
    (-750.0, 0.0, -200.0, 0.0),
    (-650.0, 0.0, 670.0, 0.0),
    (-750.0, 0.0, 530.0, 0.0),
)
BENCHMARK_BIRTH_EXISTENCE = 0.03
BENCHMARK_BIRTH_STD = 10.0

_probability = vals.Numbers(min_value=0.0, max_value=1.0)
_state = vals.Sequence(elt_validator=vals.Numbers(), length=4)


@dataclass(frozen=True)
class BirthComponent:
    r: float
    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self) -> None:
        _probability.validate(self.r, 'birth.existence')
        _state.validate(list(np.asarray(self.mean, dtype=float).ravel()), 'birth.mean')
        object.__setattr__(self, 'mean', np.asarray(self.mean, dtype=float).ravel())
        object.__setattr__(self, 'covariance', np.asarray(self.covariance, dtype=float))


@dataclass(frozen=True)
class BirthModel:
    components: Tuple[BirthComponent, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, 'components', tuple(self.components))

    @classmethod
    def from_means(cls, means: Sequence[Sequence[float]], r: float, std: float) -> 'BirthModel':
        cov = std ** 2 * np.eye(4)
        return cls(tuple(BirthComponent(r, np.asarray(m, dtype=float), cov) for m in means))

    @classmethod
    def benchmark(cls) -> 'BirthModel':
        return cls.from_means(BENCHMARK_BIRTH_MEANS, BENCHMARK_BIRTH_EXISTENCE, BENCHMARK_BIRTH_STD)


def birth_tracks(bm: BirthModel, time: int) -> List[BernoulliTrack]:
    """One ungrouped track per birth component, labeled (time, 1..n)."""
    return [BernoulliTrack(comp.r, GaussianMixture.single(comp.mean, comp.covariance),
                           AugmentedLabel(time, index))
            for index, comp in enumerate(bm.components, start=1)]
