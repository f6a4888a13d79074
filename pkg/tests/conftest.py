import numpy as np
import pytest

from group_lmb.filter.predict import PredictedLmb
from group_lmb.rfs.densities import BernoulliTrack, LmbDensity
from group_lmb.rfs.labels import AugmentedLabel
from group_lmb.rfs.mixture import GaussianMixture
from group_lmb.sim.config import with_overrides
from group_lmb.sim.scenario import ScenarioConfig


def make_track(r, mean, std=10.0, k=1, i=1, g=0, c=None):
    label = AugmentedLabel(k, i) if g == 0 else AugmentedLabel(k, i, g, c)
    return BernoulliTrack(r, GaussianMixture.single(mean, std ** 2 * np.eye(4)), label)


def make_density(existence, means=None, std=10.0):
    if means is None:
        means = [(100.0 * j, 0.0, 0.0, 0.0) for j in range(len(existence))]
    return LmbDensity(tuple(make_track(r, m, std, k=1, i=j)
                            for j, (r, m) in enumerate(zip(existence, means), start=1)))


def as_predicted(d):
    return PredictedLmb(d, LmbDensity())


@pytest.fixture
def small_config():
    return with_overrides(ScenarioConfig(),
                          scenario={'steps': 12, 'trials': 1},
                          output={'settle_step': 5})


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
