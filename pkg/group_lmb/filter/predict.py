"""Prediction of an augmented LMB density (surviving tracks plus births)."""

from dataclasses import dataclass
from typing import List

from ..exceptions import LabelCollisionError
from ..models.birth import BirthModel, birth_tracks
from ..models.motion import (MotionModel, predict_group_center, predict_in_group,
                             predict_independent)
from ..rfs.densities import BernoulliTrack, LmbDensity, validate_distinct_labels


@dataclass(frozen=True)
class PredictedLmb:
    """
    Args:
        survivors: predicted tracks of the previous posterior
        births: tracks born at this step
    """
    survivors: LmbDensity
    births: LmbDensity

    def __post_init__(self) -> None:
        overlap = set(self.survivors.labels) & set(self.births.labels)
        if overlap:
            raise LabelCollisionError(f'birth labels collide with surviving tracks: {sorted(overlap)}')

    @property
    def tracks(self) -> LmbDensity:
        return LmbDensity(self.survivors.tracks + self.births.tracks)

    def __len__(self) -> int:
        return len(self.survivors) + len(self.births)


def predict_track(track: BernoulliTrack, mm: MotionModel, p_S: float, use_groups: bool = True,
                  member_covariance: str = 'propagated') -> BernoulliTrack:
    """
    Survival-thinned, propagated track. Grouped tracks move with their
    group center, which is itself propagated; ungrouped ones move freely.
    """
    label = track.label
    if use_groups and label.grouped:
        density = predict_in_group(track.density, label.center, mm, member_covariance)
        label = label.with_group(label.g, predict_group_center(label.center, mm))
    else:
        density = predict_independent(track.density, mm)
    return BernoulliTrack(p_S * track.r, density, label)


def predict(posterior: LmbDensity, mm: MotionModel, bm: BirthModel, p_S: float, time: int,
            use_groups: bool = True, member_covariance: str = 'propagated') -> PredictedLmb:
    """
    Args:
        posterior: posterior of the previous step
        mm: motion model
        bm: birth model
        p_S: survival probability (state independent)
        time: current step; births are labeled (time, i)
        use_groups: the baseline filter passes False so every track is
            propagated with the independent model
        member_covariance: covariance form of grouped members, see
            ``predict_in_group``
    """
    if not validate_distinct_labels(posterior):
        raise LabelCollisionError('posterior carries duplicate track labels')
    survivors: List[BernoulliTrack] = [predict_track(t, mm, p_S, use_groups, member_covariance)
                                         for t in posterior]
    births = birth_tracks(bm, time)
    return PredictedLmb(LmbDensity(tuple(survivors)), LmbDensity(tuple(births)))
