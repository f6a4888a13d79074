"""
Measurement update of a predicted augmented LMB density.

The predicted LMB is expanded into association hypotheses (existing label
subset plus association map), the best of which are ranked by K-best
assignment, and the weighted hypotheses are marginalized back into one
Bernoulli track per label. Group fields ride along untouched; the group
information update is a separate step.

Per row, the hypothesis weight factors are

* absent:   1 - r
* missed:   r (1 - p_D)
* detected: r p_D eta(z) / kappa(z)

where dividing by the clutter intensity of every measurement turns the
product over unassigned measurements into a constant.

Tracks that share no gated measurement are independent, so ``update`` splits
them into clusters (connected components of the track/measurement gating
graph) and ranks each cluster on its own. Measurements outside the
surveillance region cannot have been reported by the sensor and take part
in no hypothesis.
"""

import itertools
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.special import logsumexp
from scipy.stats import chi2

from ..exceptions import CombinatorialGuardError, DegenerateUpdateError
from ..models.sensor import KalmanUpdate, SensorModel, corrected_density, kalman_update_batch
from ..rfs.densities import BernoulliTrack, GlmbHypothesis, LmbDensity
from ..rfs.mixture import GaussianMixture, MixtureReduction, concatenate, reduce_with
from .assignment import ABSENT, MISSED, AssociationProblem, ranked_assignments
from .predict import PredictedLmb

DEFAULT_HYPOTHESES = 1000
LOG_WEIGHT_FLOOR = 60.0
MAX_EXHAUSTIVE_TRACKS = 8
MAX_EXHAUSTIVE_MEASUREMENTS = 8

# rank hypotheses that claim every zero-intensity measurement first
_UNCLAIMED_PENALTY = 1e6

Weighted = List[Tuple[Tuple[int, ...], float]]


@dataclass(frozen=True)
class UpdateSettings:
    """
    Args:
        existence_threshold: tracks below this existence are dropped
        gate_probability: chi-square gate on the innovation, ``None`` for
            no gating
        reduction: mixture housekeeping applied to every posterior density
        log_weight_floor: hypotheses more than this below the best one (in
            log weight) are discarded
    """
    existence_threshold: float = 1e-4
    gate_probability: Optional[float] = None
    reduction: MixtureReduction = field(default_factory=MixtureReduction)
    log_weight_floor: float = LOG_WEIGHT_FLOOR


@dataclass
class _Terms:
    tracks: Tuple[BernoulliTrack, ...]
    log_absent: np.ndarray
    log_missed: np.ndarray
    log_detect: np.ndarray
    log_kappa: np.ndarray
    required: np.ndarray  # in-region measurements with zero clutter intensity
    posteriors: Dict[Tuple[int, int], GaussianMixture]

    def log_weight(self, theta: Sequence[int]) -> float:
        total = 0.0
        claimed = set()
        for row, a in enumerate(theta):
            if a == ABSENT:
                total += self.log_absent[row]
            elif a == MISSED:
                total += self.log_missed[row]
            else:
                col = a - 1
                claimed.add(col)
                total += self.log_detect[row, col]
                if np.isfinite(self.log_kappa[col]):
                    total -= self.log_kappa[col]
        if set(np.flatnonzero(self.required).tolist()) - claimed:
            return -np.inf
        return float(total)

    def subset(self, rows: Sequence[int], cols: Sequence[int]) -> '_Terms':
        rows, cols = list(rows), list(cols)
        col_pos = {c: j for j, c in enumerate(cols)}
        posteriors = {(i, col_pos[c]): self.posteriors[(r, c)]
                      for i, r in enumerate(rows) for c in cols if (r, c) in self.posteriors}
        return _Terms(tuple(self.tracks[r] for r in rows),
                      self.log_absent[rows], self.log_missed[rows],
                      self.log_detect[np.ix_(rows, cols)],
                      self.log_kappa[cols], self.required[cols], posteriors)


def _association_terms(predicted: PredictedLmb, Z, sm: SensorModel,
                       gate_probability: Optional[float] = None) -> _Terms:
    tracks = predicted.tracks.tracks
    Z = np.asarray(Z, dtype=float).reshape(-1, 2)
    n, m = len(tracks), Z.shape[0]
    r = np.array([t.r for t in tracks], dtype=float)
    gate = np.inf if gate_probability is None else chi2.ppf(gate_probability, 2)
    inside = sm.contains(Z) if m else np.zeros(0, dtype=bool)
    if not np.all(inside):
        logging.debug(__name__ + f' : ignoring {int(np.sum(~inside))} measurements outside the region')

    with np.errstate(divide='ignore'):
        log_absent = np.log1p(-r)
        log_missed = np.log(r) + np.log1p(-sm.p_detect)
        log_detect_prefix = np.log(r) + np.log(sm.p_detect)
        log_kappa = np.log(sm.clutter_intensity(Z)) if m else np.zeros(0)
    required = inside & ~np.isfinite(log_kappa)

    log_detect = np.full((n, m), -np.inf)
    posteriors: Dict[Tuple[int, int], GaussianMixture] = {}
    for row, track in enumerate(tracks):
        if m == 0 or not np.isfinite(log_detect_prefix[row]):
            continue
        batch = kalman_update_batch(Z, track.density, sm)
        gated = inside & (np.min(batch.mahalanobis, axis=1) <= gate)
        for col in np.flatnonzero(gated):
            upd = KalmanUpdate(batch.log_likelihoods[col], batch.mahalanobis[col], batch.means[col], batch.covs)
            log_eta, posterior = corrected_density(track.density, upd)
            if not np.isfinite(log_eta):
                continue
            log_detect[row, col] = log_detect_prefix[row] + log_eta
            posteriors[(row, int(col))] = posterior
    return _Terms(tracks, log_absent, log_missed, log_detect, log_kappa, required, posteriors)


def association_problem(terms: _Terms) -> AssociationProblem:
    """
    Cost matrix for ranked assignment. Columns no track can claim are
    dropped unless their clutter intensity is zero.
    """
    claimable = np.any(np.isfinite(terms.log_detect), axis=0)
    columns = tuple(int(c) for c in np.flatnonzero(claimable | terms.required))
    log_scores = terms.log_detect[:, list(columns)]
    kappa = terms.log_kappa[list(columns)]
    with np.errstate(invalid='ignore'):
        divided = np.where(np.isfinite(kappa), log_scores - kappa, log_scores + _UNCLAIMED_PENALTY)
    cost = np.where(np.isfinite(log_scores), -divided, np.inf)
    return AssociationProblem(cost, -terms.log_missed, -terms.log_absent,
                              tuple(t.track for t in terms.tracks), columns)


def _gating_clusters(terms: _Terms) -> Tuple[List[Tuple[List[int], List[int]]], List[int]]:
    """
    Independent sub-problems of an update.

    Returns:
        (rows, columns) of every connected component of the gating graph
        that holds at least one track, ordered by first row, and the
        required measurements no track can claim
    """
    n, m = terms.log_detect.shape
    if n == 0:
        return [], [int(c) for c in np.flatnonzero(terms.required)]
    rows, cols = np.nonzero(np.isfinite(terms.log_detect))
    graph = coo_matrix((np.ones(len(rows)), (rows, n + cols)), shape=(n + m, n + m))
    _, labels = connected_components(graph, directed=False)
    members: Dict[int, Tuple[List[int], List[int]]] = {}
    for row in range(n):
        members.setdefault(int(labels[row]), ([], []))[0].append(row)
    orphans = []
    for col in range(m):
        label = int(labels[n + col])
        if label in members:
            members[label][1].append(col)
        elif terms.required[col]:
            orphans.append(col)
    return sorted(members.values(), key=lambda rc: rc[0][0]), orphans


def _to_hypothesis(terms: _Terms, theta: Sequence[int], log_weight: float) -> GlmbHypothesis:
    present = {terms.tracks[row].track: a for row, a in enumerate(theta) if a != ABSENT}
    return GlmbHypothesis(frozenset(present), present, log_weight)


def _ranked(terms: _Terms, K: int, floor: float) -> Weighted:
    if terms.log_detect.shape == (1, 0):
        both = [((ABSENT,), float(terms.log_absent[0])), ((MISSED,), float(terms.log_missed[0]))]
        return sorted(both, key=lambda h: -h[1])[:K]
    problem = association_problem(terms)
    return [(a.theta, terms.log_weight(a.theta))
            for a in ranked_assignments(problem, K, max_cost_gap=floor)]


def _exhaustive(terms: _Terms) -> Weighted:
    n = len(terms.tracks)
    m = terms.log_detect.shape[1]
    if n > MAX_EXHAUSTIVE_TRACKS or m > MAX_EXHAUSTIVE_MEASUREMENTS:
        raise CombinatorialGuardError(
            f'exhaustive update limited to {MAX_EXHAUSTIVE_TRACKS} tracks and '
            f'{MAX_EXHAUSTIVE_MEASUREMENTS} measurements, got {n} and {m}')
    options = [ABSENT, MISSED] + list(range(1, m + 1))
    out = []
    for theta in itertools.product(options, repeat=n):
        used = [a for a in theta if a > 0]
        if len(used) != len(set(used)):
            continue
        out.append((tuple(theta), terms.log_weight(theta)))
    return out


def _marginal_tracks(terms: _Terms, weighted: Weighted,
                     settings: UpdateSettings) -> List[Optional[BernoulliTrack]]:
    """Posterior track per row, ``None`` where the track is dropped."""
    if not weighted:
        raise DegenerateUpdateError('no feasible association hypothesis')
    log_w = np.array([lw for _, lw in weighted])
    if not np.any(np.isfinite(log_w)):
        raise DegenerateUpdateError('all association hypotheses have zero weight')
    keep = log_w >= np.max(log_w) - settings.log_weight_floor
    w = np.zeros_like(log_w)
    w[keep] = np.exp(log_w[keep] - logsumexp(log_w[keep]))

    n = len(terms.tracks)
    r = np.zeros(n)
    per_assoc: List[Dict[int, float]] = [defaultdict(float) for _ in range(n)]
    for (theta, _), wh in zip(weighted, w):
        if wh == 0.0:
            continue
        for row, a in enumerate(theta):
            if a != ABSENT:
                r[row] += wh
                per_assoc[row][a] += wh

    out: List[Optional[BernoulliTrack]] = []
    for row, track in enumerate(terms.tracks):
        if r[row] <= 0.0 or r[row] < settings.existence_threshold:
            out.append(None)
            continue
        parts = []
        for a in sorted(per_assoc[row]):
            density = track.density if a == MISSED else terms.posteriors[(row, a - 1)]
            parts.append(density.scaled(per_assoc[row][a] / r[row]))
        density = reduce_with(concatenate(parts), settings.reduction)
        out.append(BernoulliTrack(min(r[row], 1.0), density, track.label))
    return out


def _log_top_hypotheses(terms: _Terms, weighted: Weighted, count: int = 10) -> None:
    if not logging.getLogger().isEnabledFor(logging.DEBUG):
        return
    order = sorted(range(len(weighted)), key=lambda h: -weighted[h][1])[:count]
    for rank, h in enumerate(order, start=1):
        theta, lw = weighted[h]
        hyp = _to_hypothesis(terms, theta, lw)
        logging.debug(__name__ + f' : hypothesis {rank}: log w = {lw:.4f}, '
                      + ', '.join(f'{k},{i}->{a}' for (k, i), a in sorted(hyp.theta.items())))


def rank_hypotheses(predicted: PredictedLmb, Z, sm: SensorModel, K: int = DEFAULT_HYPOTHESES,
                    settings: Optional[UpdateSettings] = None) -> List[GlmbHypothesis]:
    """The ``K`` best joint hypotheses of the update, best first."""
    settings = settings or UpdateSettings()
    terms = _association_terms(predicted, Z, sm, settings.gate_probability)
    problem = association_problem(terms)
    return [_to_hypothesis(terms, a.theta, terms.log_weight(a.theta))
            for a in ranked_assignments(problem, K, max_cost_gap=settings.log_weight_floor)]


def enumerate_hypotheses(predicted: PredictedLmb, Z, sm: SensorModel) -> List[GlmbHypothesis]:
    """Every label subset with every association map, zero weights included."""
    terms = _association_terms(predicted, Z, sm)
    return [_to_hypothesis(terms, theta, lw) for theta, lw in _exhaustive(terms)]


def update(predicted: PredictedLmb, Z, sm: SensorModel, K: int = DEFAULT_HYPOTHESES,
           settings: Optional[UpdateSettings] = None) -> LmbDensity:
    """
    LMB update through the ``K`` best association hypotheses of every
    gating cluster.

    Args:
        predicted: predicted density
        Z: measurements of this scan, ``(m, 2)``
        sm: sensor model
        K: maximum number of hypotheses per cluster
        settings: thresholds, gating and mixture reduction
    """
    if K < 1:
        raise ValueError(f'K must be at least 1, got {K}')
    settings = settings or UpdateSettings()
    terms = _association_terms(predicted, Z, sm, settings.gate_probability)
    clusters, orphans = _gating_clusters(terms)
    if orphans:
        raise DegenerateUpdateError(f'{len(orphans)} measurements with zero clutter intensity '
                                    'fall outside every track gate')
    posterior: List[Optional[BernoulliTrack]] = [None] * len(terms.tracks)
    for rows, cols in clusters:
        sub = terms.subset(rows, cols)
        weighted = _ranked(sub, K, settings.log_weight_floor)
        if cols:
            _log_top_hypotheses(sub, weighted)
        for row, track in zip(rows, _marginal_tracks(sub, weighted, settings)):
            posterior[row] = track
    return LmbDensity(tuple(t for t in posterior if t is not None))


def update_exhaustive(predicted: PredictedLmb, Z, sm: SensorModel,
                      settings: Optional[UpdateSettings] = None) -> LmbDensity:
    """
    Same update with every joint hypothesis enumerated; refuses more than
    ``MAX_EXHAUSTIVE_TRACKS`` tracks or ``MAX_EXHAUSTIVE_MEASUREMENTS``
    measurements. Gating is not applied.
    """
    settings = settings or UpdateSettings()
    terms = _association_terms(predicted, Z, sm)
    tracks = _marginal_tracks(terms, _exhaustive(terms), settings)
    return LmbDensity(tuple(t for t in tracks if t is not None))
