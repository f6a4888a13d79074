"""Tables for the result files of a run and for plot data."""

from typing import Dict, Sequence

import numpy as np
import pandas as pd

from ..estimate import StepEstimate
from ..grouping import build_adjacency, connected_components, group_edges
from .montecarlo import TrialBundle
from .truth import GroundTruth

TRUTH_COLUMNS = ['step', 'target', 'group', 'px', 'vx', 'py', 'vy']
MEASUREMENT_COLUMNS = ['step', 'index', 'zx', 'zy']
TRACK_COLUMNS = ['mode', 'step', 'k', 'i', 'g', 'r_rank', 'px', 'vx', 'py', 'vy']
GROUP_COLUMNS = ['mode', 'step', 'g', 'members', 'cx', 'cvx', 'cy', 'cvy', 'edges']


def truth_table(truth: GroundTruth) -> pd.DataFrame:
    rows = []
    for step in range(1, truth.steps + 1):
        for rec in truth.at(step):
            rows.append([step, rec.target, rec.group, *rec.state])
    return pd.DataFrame(rows, columns=TRUTH_COLUMNS)


def measurement_table(measurements: Sequence[np.ndarray]) -> pd.DataFrame:
    rows = [[step, j, z[0], z[1]]
            for step, Z in enumerate(measurements, start=1)
            for j, z in enumerate(Z, start=1)]
    return pd.DataFrame(rows, columns=MEASUREMENT_COLUMNS)


def track_table(bundle: TrialBundle) -> pd.DataFrame:
    rows = []
    for mode, result in bundle.results.items():
        for rec in result.records:
            for rank, target in enumerate(rec.estimate.targets, start=1):
                label = target.label
                rows.append([mode, rec.step, label.k, label.i, label.g, rank, *target.state])
    return pd.DataFrame(rows, columns=TRACK_COLUMNS)


def _label_text(track) -> str:
    return f'{track[0]}:{track[1]}'


def group_structure(estimate: StepEstimate, epsilon: float) -> Dict[int, str]:
    """
    Edge list of every estimated group, as ``k:i-k:i`` pairs joined by
    ``;``, from the proximity graph of the group's extracted members.
    """
    by_group: Dict[int, list] = {}
    for target in estimate.targets:
        if target.label.g:
            by_group.setdefault(target.label.g, []).append(target)
    out = {}
    for g, members in by_group.items():
        members = sorted(members, key=lambda t: t.label.track)
        adjacency = build_adjacency([t.state for t in members], epsilon)
        partition = connected_components(adjacency)
        edges = [e for comp in group_edges(adjacency, partition) for e in comp]
        out[g] = ';'.join(f'{_label_text(members[a].label.track)}-{_label_text(members[b].label.track)}'
                          for a, b in edges)
    return out


def group_table(bundle: TrialBundle, epsilon: float) -> pd.DataFrame:
    rows = []
    for mode, result in bundle.results.items():
        for rec in result.records:
            edges = group_structure(rec.estimate, epsilon)
            for grp in rec.estimate.groups:
                rows.append([mode, rec.step, grp.g, ';'.join(_label_text(m) for m in grp.members),
                             *grp.center, edges.get(grp.g, '')])
    return pd.DataFrame(rows, columns=GROUP_COLUMNS)


def plot_tables(steps: pd.DataFrame, truth: pd.DataFrame, tracks: pd.DataFrame) -> Dict[str, pd.DataFrame]:
    """
    Tidy series for plotting: trajectories (truth with estimates overlaid),
    cardinality, OSPA and group count per step and mode.
    """
    true_paths = pd.DataFrame({'source': 'truth', 'step': truth['step'],
                               'id': truth['target'].astype(str), 'px': truth['px'], 'py': truth['py']})
    estimated = pd.DataFrame({'source': tracks['mode'], 'step': tracks['step'],
                              'id': tracks['k'].astype(str) + ':' + tracks['i'].astype(str),
                              'px': tracks['px'], 'py': tracks['py']})
    return {
        'trajectories': pd.concat([true_paths, estimated], ignore_index=True),
        'cardinality': steps[['step', 'mode', 'n_true', 'n_hat']].copy(),
        'ospa': steps[['step', 'mode', 'ospa']].copy(),
        'group_count': steps[['step', 'mode', 'groups_true', 'groups_hat']].copy(),
    }
