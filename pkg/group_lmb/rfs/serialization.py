"""JSON records for LMB densities (one line per dumped step)."""

import json
from typing import Any, Dict, IO, Optional

import numpy as np

from .densities import BernoulliTrack, LmbDensity
from .labels import AugmentedLabel
from .mixture import GaussianMixture


def track_to_record(t: BernoulliTrack) -> Dict[str, Any]:
    return {
        'r': t.r,
        'k': t.label.k,
        'i': t.label.i,
        'g': t.label.g,
        'c': list(t.label.c),
        'components': [
            {'weight': float(w), 'mean': m.tolist(), 'covariance': P.tolist()}
            for w, m, P in zip(t.density.weights, t.density.means, t.density.covs)
        ],
    }


def track_from_record(record: Dict[str, Any]) -> BernoulliTrack:
    comps = record['components']
    density = GaussianMixture([c['weight'] for c in comps],
                              np.array([c['mean'] for c in comps], dtype=float),
                              np.array([c['covariance'] for c in comps], dtype=float))
    label = AugmentedLabel(int(record['k']), int(record['i']), int(record['g']), tuple(record['c']))
    return BernoulliTrack(float(record['r']), density, label)


def density_to_record(d: LmbDensity, **extra: Any) -> Dict[str, Any]:
    record = dict(extra)
    record['tracks'] = [track_to_record(t) for t in d]
    return record


def density_from_record(record: Dict[str, Any]) -> LmbDensity:
    return LmbDensity(tuple(track_from_record(t) for t in record['tracks']))


def dump_density(d: LmbDensity, stream: IO[str], step: Optional[int] = None, mode: Optional[str] = None) -> None:
    extra = {}
    if step is not None:
        extra['step'] = step
    if mode is not None:
        extra['mode'] = mode
    stream.write(json.dumps(density_to_record(d, **extra)) + '\n')


def load_densities(stream: IO[str]):
    """Yields (record header, density) for every line of a dump."""
    for line in stream:
        line = line.strip()
        if not line:
            continue
        record = json.loads(line)
        header = {key: value for key, value in record.items() if key != 'tracks'}
        yield header, density_from_record(record)
