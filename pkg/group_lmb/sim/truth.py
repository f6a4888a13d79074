"""
Ground-truth trajectories with leader-follower group motion.

Each true group has a center that moves by the constant-velocity model;
its members keep a fixed offset from it. Targets outside every group move
by the constant-velocity model on their own.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import List, NamedTuple

import numpy as np

from ..exceptions import ScenarioError
from ..models.motion import MotionModel
from .scenario import ScenarioConfig

_POSITION = [0, 2]


class TruthRecord(NamedTuple):
    target: int
    state: np.ndarray
    group: int


@dataclass(frozen=True)
class GroundTruth:
    """
    Args:
        states: ``(steps, n, 4)`` target states, NaN while a target is not alive
        alive: ``(steps, n)`` mask
        target_group: ``(n,)`` true group id of every target, 0 if ungrouped
        centers: ``(steps, n_groups, 4)`` group centers
    """
    states: np.ndarray
    alive: np.ndarray
    target_group: np.ndarray
    centers: np.ndarray

    @property
    def steps(self) -> int:
        return self.states.shape[0]

    @property
    def n_targets(self) -> int:
        return self.states.shape[1]

    def at(self, step: int) -> List[TruthRecord]:
        """Live targets at ``step`` (1-based)."""
        row = step - 1
        return [TruthRecord(j + 1, self.states[row, j].copy(), int(self.target_group[j]))
                for j in np.flatnonzero(self.alive[row])]

    def live_states(self, step: int) -> np.ndarray:
        row = step - 1
        return self.states[row, self.alive[row]]

    def positions(self, step: int) -> np.ndarray:
        return self.live_states(step)[:, _POSITION]

    def count(self, step: int) -> int:
        return int(self.alive[step - 1].sum())

    def group_count(self, step: int) -> int:
        """Number of true groups with at least two live members."""
        live = self.target_group[self.alive[step - 1]]
        _, counts = np.unique(live[live != 0], return_counts=True)
        return int(np.sum(counts >= 2))


def enclosing_center(points) -> np.ndarray:
    """
    Center of the smallest circle enclosing a handful of 2-D points. The
    circle passes through two or three of them, so all pairs and triples
    are tried.
    """
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(points) == 1:
        return points[0].copy()
    candidates = [(a + b) / 2 for a, b in itertools.combinations(points, 2)]
    for a, b, c in itertools.combinations(points, 3):
        d = 2 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
        if abs(d) < 1e-12:
            continue
        bb, cc = b - a, c - a
        ux = (cc[1] * (bb @ bb) - bb[1] * (cc @ cc)) / d
        uy = (bb[0] * (cc @ cc) - cc[0] * (bb @ bb)) / d
        candidates.append(a + np.array([ux, uy]))
    best, best_radius = None, np.inf
    for center in candidates:
        radius = np.max(np.linalg.norm(points - center, axis=1))
        if radius < best_radius - 1e-9:
            best, best_radius = center, radius
    return best


def _alive_mask(cfg: ScenarioConfig) -> np.ndarray:
    steps = np.arange(1, cfg.steps + 1)[:, None]
    born = np.asarray(cfg.truth.birth_steps)[None, :]
    died = np.asarray(cfg.truth.death_steps)[None, :]
    return (steps >= born) & ((died == 0) | (steps <= died))


def generate_truth(cfg: ScenarioConfig, rng: np.random.Generator) -> GroundTruth:
    """
    Args:
        cfg: scenario
        rng: consumed only when ``truth.process_noise`` is positive

    Raises:
        ScenarioError: a group member strays farther than
            ``truth.formation_radius`` from its center
    """
    t = cfg.truth
    mm = MotionModel(cfg.motion.dt, 0.0)
    steps, n = cfg.steps, t.n_targets
    birth_means = np.asarray(cfg.birth.means, dtype=float)
    start = birth_means[np.asarray(t.birth_index) - 1].copy()
    group_of = t.group_of()
    target_group = np.array([group_of.get(j, 0) for j in range(1, n + 1)], dtype=int)
    sigma = t.process_noise

    def step_noise() -> np.ndarray:
        if sigma == 0.0:
            return np.zeros(4)
        return mm.G @ (sigma * rng.standard_normal(2))

    centers = np.zeros((steps, len(t.groups), 4))
    offsets = np.zeros((n, 4))
    for g, (members, velocity) in enumerate(zip(t.groups, t.group_velocities)):
        rows = np.asarray(members) - 1
        px, py = enclosing_center(start[rows][:, _POSITION])
        centers[0, g] = (px, velocity[0], py, velocity[1])
        offsets[rows] = t.formation_scale * (start[rows] - centers[0, g])
        offsets[rows, 1] = 0.0
        offsets[rows, 3] = 0.0
        for k in range(1, steps):
            centers[k, g] = mm.F @ centers[k - 1, g] + step_noise()

    alive = _alive_mask(cfg)
    states = np.full((steps, n, 4), np.nan)
    for j in range(n):
        g = target_group[j]
        if g:
            states[:, j] = centers[:, g - 1] + offsets[j]
            continue
        born = t.birth_steps[j] - 1
        x = start[j].copy()
        x[1], x[3] = t.target_velocities[j]
        states[born, j] = x
        for k in range(born + 1, steps):
            x = mm.F @ x + step_noise()
            states[k, j] = x
    states[~alive] = np.nan

    truth = GroundTruth(states, alive, target_group, centers)
    _check_proximity(truth, t.formation_radius)
    logging.info(__name__ + f' : generated {n} true targets in {len(t.groups)} groups over {steps} steps')
    return truth


def _check_proximity(truth: GroundTruth, radius: float) -> None:
    problems = []
    for row in range(truth.steps):
        for j in np.flatnonzero(truth.alive[row] & (truth.target_group != 0)):
            center = truth.centers[row, truth.target_group[j] - 1]
            dist = np.linalg.norm(truth.states[row, j, _POSITION] - center[_POSITION])
            if dist > radius + 1e-9:
                problems.append(f'truth: target {j + 1} is {dist:.1f} m from its group center '
                                f'at step {row + 1} (formation radius {radius} m)')
    if problems:
        raise ScenarioError(problems[:10])

