"""
Augmented track labels.

An augmented label rho = (k, i, g, c) extends the usual track label
l = (k, i) (birth step, birth index) with the id ``g`` of the group the
track currently belongs to and that group's center ``c``. ``g = 0`` means
the track is ungrouped; its center is then the all-zeros sentinel and is
never read by the dynamics.
"""

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
from qcodes import validators as vals

STATE_DIM = 4

SENTINEL_CENTER: Tuple[float, ...] = (0.0,) * STATE_DIM

TrackLabel = Tuple[int, int]

_index = vals.Ints(min_value=0)
_center = vals.Sequence(elt_validator=vals.Numbers(), length=STATE_DIM)


@dataclass(frozen=True, order=False)
class AugmentedLabel:
    """
    Args:
        k: birth step
        i: birth index, distinct among the births of step ``k``
        g: group id, 0 for "no group"
        c: group center [px, vx, py, vy] in m and m/s
    """
    k: int
    i: int
    g: int = 0
    c: Tuple[float, ...] = field(default=SENTINEL_CENTER)

    def __post_init__(self) -> None:
        _index.validate(self.k, 'AugmentedLabel.k')
        _index.validate(self.i, 'AugmentedLabel.i')
        _index.validate(self.g, 'AugmentedLabel.g')
        center = tuple(float(v) for v in np.asarray(self.c, dtype=float).ravel())
        _center.validate(center, 'AugmentedLabel.c')
        if self.g == 0 and any(v != 0.0 for v in center):
            raise ValueError(f'ungrouped label ({self.k}, {self.i}) must carry '
                             f'the sentinel center, got {center}')
        object.__setattr__(self, 'k', int(self.k))
        object.__setattr__(self, 'i', int(self.i))
        object.__setattr__(self, 'g', int(self.g))
        object.__setattr__(self, 'c', center)

    @property
    def track(self) -> TrackLabel:
        """The (k, i) part, constant over the lifetime of a track."""
        return self.k, self.i

    @property
    def grouped(self) -> bool:
        return self.g != 0

    @property
    def center(self) -> np.ndarray:
        return np.array(self.c, dtype=float)

    def with_group(self, g: int, c=None) -> 'AugmentedLabel':
        """Same track, new group information. ``g = 0`` resets the center."""
        if g == 0:
            return AugmentedLabel(self.k, self.i, 0, SENTINEL_CENTER)
        return AugmentedLabel(self.k, self.i, g, tuple(np.asarray(c, dtype=float)))

    def ungrouped(self) -> 'AugmentedLabel':
        return self.with_group(0)

    def __str__(self) -> str:
        if self.g == 0:
            return f'({self.k},{self.i})'
        return f'({self.k},{self.i}|g{self.g})'
