"""Single trial: simulate one measurement stream and run a filter over it."""

import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Sequence, Tuple

import numpy as np

from ..estimate import StepEstimate, estimate_step
from ..exceptions import DegenerateUpdateError
from ..filter.predict import predict
from ..filter.update import update
from ..grouping import update_group_info
from ..metrics import ospa
from ..rfs.densities import LmbDensity
from .radar import generate_measurements
from .scenario import ScenarioConfig
from .truth import GroundTruth, generate_truth


class FilterMode(Enum):
    augmented = 'augmented'
    baseline = 'baseline'


@dataclass(frozen=True)
class StepRecord:
    step: int
    ospa: float
    n_true: int
    n_hat: int
    groups_true: int
    groups_hat: int
    estimate: StepEstimate


@dataclass(frozen=True)
class TrialResult:
    """
    Args:
        seed: seed of the measurement stream
        mode: filter variant
        records: one per step, step 1 first
        runtime: wall-clock seconds spent filtering
        states: posterior per step when requested, empty otherwise
    """
    seed: int
    mode: FilterMode
    records: Tuple[StepRecord, ...]
    runtime: float
    states: Tuple[LmbDensity, ...] = field(default_factory=tuple)


def simulate(cfg: ScenarioConfig, seed: int) -> Tuple[GroundTruth, List[np.ndarray]]:
    """Truth and measurement stream of one trial; the same seed gives the same stream."""
    rng = np.random.default_rng(seed)
    truth = generate_truth(cfg, rng)
    measurements = generate_measurements(truth, cfg.sensor_model(), rng)
    return truth, measurements


def run_filter(cfg: ScenarioConfig, truth: GroundTruth, measurements: Sequence[np.ndarray],
               mode: FilterMode, seed: int = 0, keep_states: bool = False) -> TrialResult:
    """
    Run one filter over a given measurement stream.

    The augmented filter predicts grouped tracks with their group center
    and re-clusters after every update; the baseline filter does neither,
    so all its tracks stay ungrouped.
    """
    mode = FilterMode(mode)
    augmented = mode is FilterMode.augmented
    mm, bm, sm = cfg.motion_model(), cfg.birth_model(), cfg.sensor_model()
    settings = cfg.update_settings()
    params = cfg.ospa_params()
    p_S = cfg.motion.survival_probability
    K = cfg.filter.hypotheses

    posterior = LmbDensity()
    next_group_id = 1
    records: List[StepRecord] = []
    states: List[LmbDensity] = []
    started = time.perf_counter()
    for step, Z in enumerate(measurements, start=1):
        predicted = predict(posterior, mm, bm, p_S, step, use_groups=augmented,
                            member_covariance=cfg.grouping.member_covariance)
        try:
            posterior = update(predicted, Z, sm, K, settings)
        except DegenerateUpdateError as err:
            err.step, err.seed = step, seed
            raise
        if augmented:
            posterior, next_group_id = update_group_info(posterior, cfg.epsilon, next_group_id,
                                                         cfg.grouping.center_weighting)
        est = estimate_step(posterior)
        records.append(StepRecord(step=step,
                                  ospa=ospa(truth.positions(step), est.positions(), params),
                                  n_true=truth.count(step),
                                  n_hat=est.n_hat,
                                  groups_true=truth.group_count(step),
                                  groups_hat=est.group_count,
                                  estimate=est))
        if keep_states:
            states.append(posterior)
        logging.debug(__name__ + f' : {mode.value} step {step}: {len(Z)} measurements, '
                      f'{len(posterior)} tracks, n_hat {est.n_hat}, groups {est.group_count}')
    runtime = time.perf_counter() - started
    return TrialResult(seed, mode, tuple(records), runtime, tuple(states))


def run_trial(cfg: ScenarioConfig, seed: int, mode: FilterMode,
              keep_states: bool = False) -> TrialResult:
    logging.info(__name__ + f' : starting {FilterMode(mode).value} trial with seed {seed}')
    truth, measurements = simulate(cfg, seed)
    result = run_filter(cfg, truth, measurements, mode, seed, keep_states)
    logging.info(__name__ + f' : finished trial with seed {seed} in {result.runtime:.2f} s')
    return result

