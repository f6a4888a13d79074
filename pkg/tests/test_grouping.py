import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from conftest import make_density, make_track
from group_lmb.estimate import estimate_step
from group_lmb.grouping import (AdjacencyMatrix, GroupPartition, build_adjacency, connected_components,
                                group_center, group_edges, update_group_info)
from group_lmb.rfs import LmbDensity

# three mutually close tracks, a linked pair and a loner
FORMATION = [(0.0, 1.0, 0.0, 0.0),
             (60.0, 1.0, 0.0, 0.0),
             (30.0, 1.0, 50.0, 0.0),
             (500.0, -1.0, 0.0, 0.0),
             (580.0, -1.0, 0.0, 0.0),
             (1000.0, 0.0, 1000.0, 0.0)]

FORMATION_ADJACENCY = np.array([[0, 1, 1, 0, 0, 0],
                                [1, 0, 1, 0, 0, 0],
                                [1, 1, 0, 0, 0, 0],
                                [0, 0, 0, 0, 1, 0],
                                [0, 0, 0, 1, 0, 0],
                                [0, 0, 0, 0, 0, 0]])


def flood_fill(a):
    n = len(a)
    seen = [False] * n
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        stack, comp = [start], []
        seen[start] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in np.flatnonzero(a[i]):
                if not seen[j]:
                    seen[j] = True
                    stack.append(int(j))
        comps.append(tuple(sorted(comp)))
    return set(comps)


def planar_states(points):
    return [(x, 0.0, y, 0.0) for x, y in points]


points_strategy = st.lists(st.tuples(st.floats(-500, 500), st.floats(-500, 500)), min_size=0, max_size=12)


class TestAdjacency:

    def test_close_pair(self):
        assert_array_equal(build_adjacency(planar_states([(0, 0), (50, 0)]), 100.0).a, [[0, 1], [1, 0]])

    def test_distant_pair(self):
        assert_array_equal(build_adjacency(planar_states([(0, 0), (150, 0)]), 100.0).a, 0)

    def test_threshold_inclusive(self):
        assert build_adjacency(planar_states([(0, 0), (60, 80)]), 100.0).a[0, 1] == 1

    def test_velocity_ignored(self):
        a = build_adjacency([(0, 100, 0, 100), (50, -100, 0, -100)], 100.0)
        assert a.a[0, 1] == 1

    def test_formation(self):
        assert_array_equal(build_adjacency(FORMATION, 100.0).a, FORMATION_ADJACENCY)

    def test_degenerate_sizes(self):
        assert build_adjacency(np.zeros((0, 4)), 100.0).a.shape == (0, 0)
        assert_array_equal(build_adjacency([(1, 0, 1, 0)], 100.0).a, [[0]])

    def test_negative_threshold(self):
        with pytest.raises(ValueError):
            build_adjacency(FORMATION, -1.0)

    @pytest.mark.parametrize('matrix', [[[0, 1], [0, 0]], [[1, 0], [0, 0]], [[0, 2], [2, 0]], [[0, 1, 0]]])
    def test_invalid_matrices(self, matrix):
        with pytest.raises(ValueError):
            AdjacencyMatrix(np.array(matrix))

    @settings(max_examples=50, deadline=None)
    @given(points_strategy)
    def test_matrix_invariants(self, points):
        a = build_adjacency(planar_states(points), 100.0).a
        assert_array_equal(a, a.T)
        assert not np.any(np.diag(a))
        assert set(np.unique(a)) <= {0, 1}


class TestComponents:

    def test_formation(self):
        partition = connected_components(AdjacencyMatrix(FORMATION_ADJACENCY))
        assert partition.components == ((0, 1, 2), (3, 4), (5,))
        assert partition.groups == ((0, 1, 2), (3, 4))
        assert partition.singletons == (False, False, True)

    def test_no_edges(self):
        partition = connected_components(AdjacencyMatrix(np.zeros((4, 4))))
        assert partition.components == ((0,), (1,), (2,), (3,))

    def test_complete_graph(self):
        partition = connected_components(AdjacencyMatrix(np.ones((5, 5)) - np.eye(5)))
        assert partition.components == ((0, 1, 2, 3, 4),)

    def test_partition_must_cover(self):
        with pytest.raises(ValueError):
            GroupPartition(((0, 1), (1, 2)))
        with pytest.raises(ValueError):
            GroupPartition(((0,), (2,)))

    def test_edges(self):
        a = AdjacencyMatrix(FORMATION_ADJACENCY)
        assert group_edges(a, connected_components(a)) == [[(0, 1), (0, 2), (1, 2)], [(3, 4)], []]

    def test_matches_flood_fill(self):
        rng = np.random.default_rng(99)
        for _ in range(200):
            n = int(rng.integers(1, 15))
            upper = np.triu(rng.random((n, n)) < rng.uniform(0.0, 0.4), k=1)
            a = (upper | upper.T).astype(int)
            partition = connected_components(AdjacencyMatrix(a))
            assert set(partition.components) == flood_fill(a)

    @settings(max_examples=50, deadline=None)
    @given(points_strategy, st.randoms(use_true_random=False))
    def test_permutation_invariant(self, points, random):
        order = list(range(len(points)))
        random.shuffle(order)
        base = connected_components(build_adjacency(planar_states(points), 100.0))
        shuffled = connected_components(build_adjacency(planar_states([points[j] for j in order]), 100.0))
        mapped = {tuple(sorted(order[j] for j in comp)) for comp in shuffled.components}
        assert mapped == set(base.components)

    @settings(max_examples=50, deadline=None)
    @given(points_strategy, st.floats(0, 300), st.floats(0, 300))
    def test_threshold_monotone(self, points, eps_a, eps_b):
        small, large = sorted((eps_a, eps_b))
        fine = connected_components(build_adjacency(planar_states(points), small))
        coarse = connected_components(build_adjacency(planar_states(points), large))
        for comp in fine.components:
            assert any(set(comp) <= set(other) for other in coarse.components)


class TestGroupInfo:

    def test_single_track_stays_ungrouped(self):
        d = make_density([0.9])
        out, counter = update_group_info(d, 100.0, 4)
        assert out.labels == d.labels
        assert out.tracks[0].label.g == 0
        assert counter == 4

    def test_lone_track_loses_stale_group(self):
        d = LmbDensity((make_track(0.9, (0, 0, 0, 0), k=1, i=1, g=3, c=(0, 0, 0, 0.5)),))
        out, counter = update_group_info(d, 100.0, 4)
        assert out.tracks[0].label.g == 0
        assert out.tracks[0].label.c == (0.0, 0.0, 0.0, 0.0)
        assert counter == 4
        assert estimate_step(out).group_count == 0

    def test_center_weighted_by_existence(self):
        d = make_density([0.999, 0.999, 6e-4], [(0, 12, 0, -4), (50, 12, 0, -4), (25, 0, 40, 0)])
        out, _ = update_group_info(d, 100.0, 1, weighting='existence')
        assert [t.label.g for t in out] == [1, 1, 1]
        assert_allclose(out.tracks[0].label.center[[1, 3]], [12, -4], atol=0.01)
        uniform, _ = update_group_info(d, 100.0, 1)
        assert_allclose(uniform.tracks[0].label.center[[1, 3]], [8, -8 / 3])

    def test_unknown_weighting(self):
        with pytest.raises(ValueError):
            group_center(np.zeros((2, 4)), [0.5, 0.5], 'median')

    def test_formation(self):
        d = make_density([0.9] * 6, FORMATION)
        out, counter = update_group_info(d, 100.0, 5)
        assert counter == 7
        assert [t.label.g for t in out] == [5, 5, 5, 6, 6, 0]
        assert_allclose(out.tracks[0].label.center, np.mean(FORMATION[:3], axis=0))
        assert_allclose(out.tracks[3].label.center, np.mean(FORMATION[3:5], axis=0))
        assert out.tracks[5].label.c == (0.0, 0.0, 0.0, 0.0)
        assert out.labels == d.labels
        assert_allclose(out.existence, d.existence)

    def test_identical_means(self):
        mean = (10.0, 1.0, -20.0, 2.0)
        d = make_density([0.5, 0.5], [mean, mean])
        out, counter = update_group_info(d, 100.0, 1)
        assert counter == 2
        assert [t.label.g for t in out] == [1, 1]
        assert_allclose(out.tracks[0].label.center, mean)

    def test_previous_group_dropped(self):
        tracks = (make_track(0.9, (0, 0, 0, 0), k=1, i=1, g=3, c=(0, 0, 0, 0.5)),
                  make_track(0.9, (500, 0, 0, 0), k=1, i=2, g=3, c=(0, 0, 0, 0.5)))
        out, counter = update_group_info(LmbDensity(tracks), 100.0, 4)
        assert counter == 4
        assert [t.label.g for t in out] == [0, 0]

    def test_zero_threshold_keeps_everyone_apart(self):
        d = make_density([0.9] * 6, FORMATION)
        out, counter = update_group_info(d, 0.0, 1)
        assert counter == 1
        assert all(t.label.g == 0 for t in out)
