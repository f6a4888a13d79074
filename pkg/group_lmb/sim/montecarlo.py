"""
Monte Carlo comparison of the filter variants.

Trial ``t`` uses seed ``base_seed + t``; every configured filter mode runs on
that trial's single measurement stream. Trials may run on a process pool;
results are collected in seed order, so aggregates never depend on
completion order.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from .scenario import ScenarioConfig
from .trial import FilterMode, TrialResult, run_filter, simulate
from .truth import GroundTruth

STEP_COLUMNS = ['step', 'mode', 'ospa', 'n_true', 'n_hat', 'groups_true', 'groups_hat']


@dataclass(frozen=True)
class TrialBundle:
    """All filter runs of one seed; truth and measurements only when kept."""
    seed: int
    results: Dict[str, TrialResult]
    truth: Optional[GroundTruth] = None
    measurements: Optional[Tuple[np.ndarray, ...]] = None


@dataclass(frozen=True)
class MonteCarloResult:
    """
    Args:
        trials: per-trial rows (trial, seed, mode, step, metrics)
        steps: per-step means over trials, one row per step and mode
        bundles: one per trial, in seed order
    """
    trials: pd.DataFrame
    steps: pd.DataFrame
    bundles: Tuple[TrialBundle, ...]

    @property
    def seeds(self) -> List[int]:
        return [b.seed for b in self.bundles]

    def runtimes(self) -> Dict[str, List[float]]:
        out: Dict[str, List[float]] = {}
        for bundle in self.bundles:
            for mode, result in bundle.results.items():
                out.setdefault(mode, []).append(result.runtime)
        return out


def _run_seed(cfg: ScenarioConfig, seed: int, keep_detail: bool, keep_states: bool) -> TrialBundle:
    truth, measurements = simulate(cfg, seed)
    results = {}
    for mode in cfg.scenario.modes:
        logging.info(__name__ + f' : running {mode} filter on trial seed {seed}')
        results[mode] = run_filter(cfg, truth, measurements, FilterMode(mode), seed,
                                   keep_states=keep_detail and keep_states)
    if keep_detail:
        return TrialBundle(seed, results, truth, tuple(measurements))
    return TrialBundle(seed, results)


def trial_frame(bundles: Tuple[TrialBundle, ...], modes) -> pd.DataFrame:
    rows = []
    for trial, bundle in enumerate(bundles):
        for mode in modes:
            for rec in bundle.results[mode].records:
                rows.append({'trial': trial, 'seed': bundle.seed, 'mode': mode, 'step': rec.step,
                             'ospa': rec.ospa, 'n_true': rec.n_true, 'n_hat': rec.n_hat,
                             'groups_true': rec.groups_true, 'groups_hat': rec.groups_hat})
    frame = pd.DataFrame(rows, columns=['trial', 'seed', 'mode', 'step', 'ospa', 'n_true', 'n_hat',
                                        'groups_true', 'groups_hat'])
    frame['cardinality_error'] = (frame['n_hat'] - frame['n_true']).abs()
    frame['group_correct'] = (frame['groups_hat'] == frame['groups_true']).astype(float)
    return frame


def aggregate(trials: pd.DataFrame, modes) -> pd.DataFrame:
    """Per-step means over trials, modes in configured order."""
    grouped = trials.groupby(['mode', 'step'], sort=True)
    steps = grouped.agg(ospa=('ospa', 'mean'),
                        n_true=('n_true', 'mean'),
                        n_hat=('n_hat', 'mean'),
                        groups_true=('groups_true', 'mean'),
                        groups_hat=('groups_hat', 'mean'),
                        cardinality_error=('cardinality_error', 'mean'),
                        group_accuracy=('group_correct', 'mean')).reset_index()
    order = {mode: i for i, mode in enumerate(modes)}
    steps = steps.sort_values(['mode', 'step'], key=lambda col: col.map(order) if col.name == 'mode' else col)
    return steps[STEP_COLUMNS + ['cardinality_error', 'group_accuracy']].reset_index(drop=True)


def summarize(result: MonteCarloResult, settle_step: int) -> Dict[str, object]:
    """Per-mode means over all steps and from ``settle_step`` on, plus the OSPA margin."""
    frame = result.trials
    modes = list(dict.fromkeys(frame['mode']))
    summary: Dict[str, object] = {'seeds': result.seeds, 'settle_step': settle_step, 'modes': {}}
    runtimes = result.runtimes()
    for mode in modes:
        rows = frame[frame['mode'] == mode]
        settled = rows[rows['step'] >= settle_step]
        summary['modes'][mode] = {
            'mean_ospa': float(rows['ospa'].mean()),
            'mean_ospa_settled': float(settled['ospa'].mean()),
            'mean_cardinality_error': float(rows['cardinality_error'].mean()),
            'mean_cardinality_error_settled': float(settled['cardinality_error'].mean()),
            'exact_cardinality_fraction_settled': float((settled['cardinality_error'] == 0).mean()),
            'group_accuracy_settled': float(settled['group_correct'].mean()),
            'runtime_total_s': float(np.sum(runtimes.get(mode, []))),
            'runtime_mean_s': float(np.mean(runtimes.get(mode, [np.nan]))),
        }
    if {'augmented', 'baseline'} <= set(modes):
        summary['ospa_margin_settled'] = (summary['modes']['baseline']['mean_ospa_settled']
                                          - summary['modes']['augmented']['mean_ospa_settled'])
    return summary


def monte_carlo(cfg: ScenarioConfig, keep_states: bool = False) -> MonteCarloResult:
    """
    Run ``scenario.trials`` trials of every configured mode.

    Args:
        cfg: scenario
        keep_states: keep the posterior of every step of the first trial

    Returns:
        per-trial and per-step tables plus the first trial in full detail
    """
    sc = cfg.scenario
    seeds = [sc.base_seed + t for t in range(sc.trials)]
    logging.info(__name__ + f' : starting {sc.trials} trials, seeds {seeds[0]}..{seeds[-1]}, '
                 f'modes {", ".join(sc.modes)}, {sc.workers} worker(s)')
    started = time.perf_counter()
    args = [(cfg, seed, t == 0, keep_states) for t, seed in enumerate(seeds)]
    if sc.workers > 1 and len(seeds) > 1:
        with ProcessPoolExecutor(max_workers=sc.workers) as pool:
            bundles = tuple(pool.map(_run_seed, *zip(*args)))
    else:
        bundles = tuple(_run_seed(*a) for a in args)
    trials = trial_frame(bundles, sc.modes)
    steps = aggregate(trials, sc.modes)
    logging.info(__name__ + f' : finished {sc.trials} trials in {time.perf_counter() - started:.1f} s')
    return MonteCarloResult(trials, steps, bundles)
