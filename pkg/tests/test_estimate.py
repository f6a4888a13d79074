import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from conftest import make_density, make_track
from group_lmb.estimate import (ExtractionClampWarning, StepEstimate, TargetEstimate, estimate_step,
                                extract_targets, map_cardinality, summarize_groups)
from group_lmb.exceptions import GroupInconsistencyError
from group_lmb.rfs import AugmentedLabel, LmbDensity


def target(i, g=0, c=(1.0, 0.0, 1.0, 0.0)):
    label = AugmentedLabel(1, i) if g == 0 else AugmentedLabel(1, i, g, c)
    return TargetEstimate(np.zeros(4), label)


class TestCardinality:

    @pytest.mark.parametrize('existence, expected', [([], 0), ([0.9, 0.9], 2), ([0.5], 0),
                                                     ([0.6], 1), ([0.03] * 6, 0)])
    def test_map(self, existence, expected):
        assert map_cardinality(make_density(existence)) == expected

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=0, max_size=8))
    def test_map_never_exceeds_tracks(self, existence):
        d = make_density(existence)
        assert 0 <= map_cardinality(d) <= len(d)
        assert estimate_step(d).n_hat == map_cardinality(d)


class TestExtraction:

    def test_none(self):
        assert extract_targets(make_density([0.9, 0.8]), 0) == []

    def test_top_two(self):
        d = make_density([0.9, 0.2, 0.8])
        assert [t.label.track for t in extract_targets(d, 2)] == [(1, 1), (1, 3)]

    def test_ties_by_label(self):
        d = make_density([0.5, 0.5, 0.5])
        assert [t.label.track for t in extract_targets(d, 2)] == [(1, 1), (1, 2)]

    def test_single_gaussian_mean(self):
        d = LmbDensity((make_track(0.9, [3, 1, -4, 2]),))
        [est] = extract_targets(d, 1)
        assert_allclose(est.state, [3, 1, -4, 2])

    def test_clamped(self):
        with pytest.warns(ExtractionClampWarning):
            out = extract_targets(make_density([0.9]), 3)
        assert len(out) == 1

    def test_negative(self):
        with pytest.raises(ValueError):
            extract_targets(make_density([0.9]), -1)


class TestGroups:

    def test_ungrouped(self):
        count, groups = summarize_groups([target(1), target(2)])
        assert count == 0
        assert groups == []

    def test_two_groups(self):
        c7, c8 = (1.0, 0.0, 1.0, 0.0), (9.0, 0.0, 9.0, 0.0)
        targets = [target(1, 7, c7), target(2, 7, c7), target(3, 7, c7),
                   target(4, 8, c8), target(5, 8, c8), target(6)]
        count, groups = summarize_groups(targets)
        assert count == 2
        assert [g.g for g in groups] == [7, 8]
        assert groups[0].members == ((1, 1), (1, 2), (1, 3))
        assert groups[1].members == ((1, 4), (1, 5))
        assert_allclose(groups[1].center, c8)

    def test_single_target(self):
        assert summarize_groups([target(1)])[0] == 0

    def test_center_disagreement(self):
        with pytest.raises(GroupInconsistencyError):
            summarize_groups([target(1, 3, (0, 0, 0, 0.5)), target(2, 3, (0, 0, 0, 0.6))])

    def test_center_within_tolerance(self):
        count, _ = summarize_groups([target(1, 3, (0, 0, 0, 0.5)), target(2, 3, (0, 0, 0, 0.5 + 1e-9))])
        assert count == 1


class TestStep:

    def test_estimate(self):
        tracks = (make_track(0.95, [0, 0, 0, 0], k=1, i=1, g=2, c=[5, 0, 0, 0]),
                  make_track(0.95, [10, 0, 0, 0], k=1, i=2, g=2, c=[5, 0, 0, 0]),
                  make_track(0.01, [500, 0, 0, 0], k=1, i=3))
        est = estimate_step(LmbDensity(tracks))
        assert est.n_hat == 2
        assert est.group_count == 1
        assert_allclose(est.positions(), [[0, 0], [10, 0]])

    def test_empty(self):
        est = estimate_step(LmbDensity())
        assert est.n_hat == 0
        assert est.positions().shape == (0, 2)

    def test_no_warning_escapes(self):
        with warnings.catch_warnings():
            warnings.simplefilter('error')
            estimate_step(make_density([0.9, 0.9]))

    def test_consistency_checked(self):
        with pytest.raises(ValueError):
            StepEstimate(2, (target(1),))
        with pytest.raises(ValueError):
            StepEstimate(1, (target(1, 4),), 0, ())
