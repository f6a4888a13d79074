"""
Constant-velocity motion with the leader-follower group extension.

State vectors are [px, vx, py, vy]. An ungrouped target moves as
x+ = F x + v. A member of a group with center c keeps a fixed offset from
the center, and since the center moves as c+ = F c + v the member moves as
x+ = x + (F - I) c + v.

The member covariance has two forms. ``offset`` reads the transition
literally and grows P by Q only. ``propagated`` treats the member's
uncertainty as the center's seen through a fixed offset and carries it
through F, which keeps the position/velocity coupling a measurement needs
to correct the velocity.
"""

from dataclasses import dataclass, field

import numpy as np
from qcodes import validators as vals

from ..rfs.mixture import GaussianMixture, symmetrize

_nonnegative = vals.Numbers(min_value=0.0)

MEMBER_COVARIANCES = ('offset', 'propagated')


def cv_transition(dt: float) -> np.ndarray:
    F = np.eye(4)
    F[0, 1] = dt
    F[2, 3] = dt
    return F


def cv_noise_gain(dt: float) -> np.ndarray:
    return np.array([[dt ** 2 / 2, 0.0],
                     [dt, 0.0],
                     [0.0, dt ** 2 / 2],
                     [0.0, dt]])


@dataclass(frozen=True)
class MotionModel:
    """
    Args:
        dt: scan interval in s
        varrho: process-noise standard deviation in m/s^2
    """
    dt: float = 1.0
    varrho: float = 5.0
    F: np.ndarray = field(init=False, repr=False, compare=False)
    G: np.ndarray = field(init=False, repr=False, compare=False)
    Q: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        _nonnegative.validate(self.dt, 'motion.dt')
        _nonnegative.validate(self.varrho, 'motion.varrho')
        G = cv_noise_gain(self.dt)
        object.__setattr__(self, 'F', cv_transition(self.dt))
        object.__setattr__(self, 'G', G)
        object.__setattr__(self, 'Q', self.varrho ** 2 * G @ G.T)


def predict_independent(density: GaussianMixture, mm: MotionModel) -> GaussianMixture:
    means = density.means @ mm.F.T
    covs = symmetrize(mm.F @ density.covs @ mm.F.T + mm.Q)
    return GaussianMixture(density.weights, means, covs)


def predict_in_group(density: GaussianMixture, c, mm: MotionModel,
                     covariance: str = 'offset') -> GaussianMixture:
    """Every component moves by (F - I) c; ``covariance`` picks P + Q or F P F^T + Q."""
    shift = (mm.F - np.eye(4)) @ np.asarray(c, dtype=float)
    if covariance == 'offset':
        covs = symmetrize(density.covs + mm.Q)
    elif covariance == 'propagated':
        covs = symmetrize(mm.F @ density.covs @ mm.F.T + mm.Q)
    else:
        raise ValueError(f'unknown member covariance {covariance!r}, expected one of {MEMBER_COVARIANCES}')
    return GaussianMixture(density.weights, density.means + shift, covs)


def predict_group_center(c, mm: MotionModel) -> np.ndarray:
    return mm.F @ np.asarray(c, dtype=float)
