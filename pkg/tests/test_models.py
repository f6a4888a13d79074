import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import trapezoid
from scipy.stats import chisquare, multivariate_normal, poisson

from group_lmb.exceptions import NumericalFailure
from group_lmb.models import (BirthModel, MotionModel, SensorModel, birth_tracks, measurement_loglikelihood,
                              predict_group_center, predict_in_group, predict_independent, sample_clutter)
from group_lmb.rfs import GaussianMixture


@pytest.fixture
def mm():
    return MotionModel(dt=1.0, varrho=5.0)


class TestMotion:

    def test_origin_is_fixed(self, mm):
        out = predict_independent(GaussianMixture.single(np.zeros(4), np.eye(4)), mm)
        assert_allclose(out.means[0], 0.0)

    def test_constant_velocity(self, mm):
        P = np.eye(4)
        out = predict_independent(GaussianMixture.single([100, 10, 0, 0], P), mm)
        assert_allclose(out.means[0], [110, 10, 0, 0])
        assert_allclose(out.covs[0], mm.F @ P @ mm.F.T + mm.Q)

    def test_process_noise(self, mm):
        assert_allclose(mm.Q[0, 0], 25 * 0.25)
        assert_allclose(mm.Q[1, 1], 25.0)
        assert_allclose(mm.Q[0, 1], 25 * 0.5)
        assert_allclose(mm.Q[0, 2], 0.0)

    def test_in_group_zero_center(self, mm):
        P = 3.0 * np.eye(4)
        out = predict_in_group(GaussianMixture.single([5, 1, 5, 1], P), np.zeros(4), mm)
        assert_allclose(out.means[0], [5, 1, 5, 1])
        assert_allclose(out.covs[0], P + mm.Q)
        propagated = predict_in_group(GaussianMixture.single([5, 1, 5, 1], P), np.zeros(4), mm, 'propagated')
        assert_allclose(propagated.means[0], [5, 1, 5, 1])
        assert_allclose(propagated.covs[0], mm.F @ P @ mm.F.T + mm.Q)

    def test_unknown_member_covariance(self, mm):
        with pytest.raises(ValueError):
            predict_in_group(GaussianMixture.single(np.zeros(4), np.eye(4)), np.zeros(4), mm, 'full')

    def test_in_group_centered_on_itself(self, mm):
        P = np.diag([4.0, 1.0, 9.0, 2.0])
        mu = np.array([-800.0, 10.0, 600.0, -4.0])
        grouped = predict_in_group(GaussianMixture.single(mu, P), mu, mm)
        free = predict_independent(GaussianMixture.single(mu, P), mm)
        assert_allclose(grouped.means[0], mm.F @ mu)
        assert_allclose(grouped.means, free.means)
        propagated = predict_in_group(GaussianMixture.single(mu, P), mu, mm, 'propagated')
        assert_allclose(propagated.means, free.means)
        assert_allclose(propagated.covs, free.covs)

    def test_in_group_correlates_velocity(self, mm):
        out = predict_in_group(GaussianMixture.single(np.zeros(4), np.eye(4)), [0, 10, 0, 0], mm, 'propagated')
        assert out.covs[0][0, 1] > 0.0
        assert out.covs[0][2, 3] > 0.0

    def test_in_group_shift(self, mm):
        out = predict_in_group(GaussianMixture.single(np.zeros(4), np.eye(4)), [0, 10, 0, 0], mm)
        assert_allclose(out.means[0], [10, 0, 0, 0])

    def test_in_group_shift_vanishes_with_dt(self):
        out = predict_in_group(GaussianMixture.single(np.zeros(4), np.eye(4)), [0, 10, 0, -3],
                               MotionModel(dt=0.0, varrho=5.0))
        assert_allclose(out.means[0], 0.0)

    def test_group_center(self, mm):
        assert_allclose(predict_group_center(np.zeros(4), mm), 0.0)
        assert_allclose(predict_group_center([-800, 5, 600, -5], mm), [-795, 5, 595, -5])
        c = np.array([-800.0, 5.0, 600.0, -5.0])
        assert_allclose(predict_group_center(c, MotionModel(dt=0.0)), c)

    def test_negative_noise_rejected(self):
        with pytest.raises(ValueError):
            MotionModel(dt=1.0, varrho=-1.0)


class TestSensor:

    def test_zero_innovation_gives_peak(self):
        sm = SensorModel(sigma_r=10.0)
        P = np.diag([100.0, 1.0, 100.0, 1.0])
        density = GaussianMixture.single([3, 0, -4, 0], P)
        log_eta, _ = measurement_loglikelihood([3, -4], density, sm)
        S = sm.H @ P @ sm.H.T + sm.R
        assert log_eta == pytest.approx(multivariate_normal(np.zeros(2), S).logpdf(np.zeros(2)), rel=1e-10)

    def test_matches_textbook_kalman(self):
        sm = SensorModel(sigma_r=10.0)
        P = np.array([[50.0, 5.0, 0.0, 0.0],
                      [5.0, 4.0, 0.0, 0.0],
                      [0.0, 0.0, 60.0, -3.0],
                      [0.0, 0.0, -3.0, 2.0]])
        m = np.array([10.0, 1.0, -20.0, 2.0])
        z = np.array([14.0, -25.0])
        _, post = measurement_loglikelihood(z, GaussianMixture.single(m, P), sm)
        H, R = sm.H, sm.R
        S = H @ P @ H.T + R
        K = P @ H.T @ np.linalg.inv(S)
        assert_allclose(post.means[0], m + K @ (z - H @ m), atol=1e-10)
        assert_allclose(post.covs[0], (np.eye(4) - K @ H) @ P, atol=1e-10)

    def test_uninformative_measurement(self):
        sm = SensorModel(sigma_r=1e8)
        m = np.array([10.0, 1.0, -20.0, 2.0])
        _, post = measurement_loglikelihood([500, 500], GaussianMixture.single(m, np.eye(4)), sm)
        assert_allclose(post.means[0], m, atol=1e-6)

    def test_likelihood_matches_quadrature(self):
        sm = SensorModel(sigma_r=5.0)
        P = np.diag([20.0, 1.0, 30.0, 1.0])
        density = GaussianMixture([0.3, 0.7], [[0, 0, 0, 0], [8, 0, -6, 0]], [P, P])
        z = np.array([4.0, -2.0])
        log_eta, _ = measurement_loglikelihood(z, density, sm)

        axis = np.linspace(-60.0, 60.0, 2401)
        grid = np.stack(np.meshgrid(axis, axis, indexing='ij'), axis=-1)
        prior = sum(w * multivariate_normal(m[[0, 2]], C[np.ix_([0, 2], [0, 2])]).pdf(grid)
                    for w, m, C in zip(density.weights, density.means, density.covs))
        integrand = prior * multivariate_normal(z, sm.R).pdf(grid)
        eta = trapezoid(trapezoid(integrand, axis, axis=1), axis)
        assert np.exp(log_eta) == pytest.approx(eta, rel=1e-6)

    def test_degenerate_innovation(self):
        sm = SensorModel(sigma_r=1e-300)
        with pytest.raises(NumericalFailure):
            measurement_loglikelihood([0, 0], GaussianMixture.single(np.zeros(4), np.zeros((4, 4))), sm)

    def test_no_clutter(self, rng):
        sm = SensorModel(clutter_rate=0.0)
        for _ in range(20):
            assert sample_clutter(sm, rng).shape == (0, 2)

    def test_clutter_count_and_support(self, rng):
        sm = SensorModel(clutter_rate=30.0)
        draws = [sample_clutter(sm, rng) for _ in range(10_000)]
        assert 29.0 <= np.mean([len(Z) for Z in draws]) <= 31.0
        points = np.vstack(draws)
        assert np.all(sm.contains(points))

    def test_clutter_count_is_poisson(self):
        sm = SensorModel(clutter_rate=30.0)
        rng = np.random.default_rng(20)
        counts = np.array([len(sample_clutter(sm, rng)) for _ in range(10_000)])
        edges = np.arange(20, 41)
        observed = np.concatenate([[np.sum(counts <= 19)],
                                   [np.sum(counts == k) for k in edges],
                                   [np.sum(counts >= 41)]])
        probs = np.concatenate([[poisson.cdf(19, 30.0)], poisson.pmf(edges, 30.0), [poisson.sf(40, 30.0)]])
        expected = counts.size * probs / probs.sum()
        assert chisquare(observed, expected).pvalue > 0.01

    def test_clutter_intensity(self):
        sm = SensorModel(clutter_rate=30.0)
        kappa = sm.clutter_intensity([[0.0, 0.0], [5000.0, 0.0]])
        assert_allclose(kappa, [30.0 / 4e6, 0.0])

    def test_detect_all(self, rng):
        sm = SensorModel(p_detect=1.0)
        states = np.array([[0, 0, 0, 0], [100, 0, 100, 0]], dtype=float)
        assert sm.detect(states, rng).shape == (2, 2)
        assert SensorModel(p_detect=0.0).detect(states, rng).shape == (0, 2)

    def test_detect_drops_returns_outside_region(self, rng):
        sm = SensorModel(sigma_r=1.0, p_detect=1.0)
        states = np.array([[0, 0, 0, 0], [1500, 0, 0, 0], [0, 0, -2000, 0]], dtype=float)
        Z = sm.detect(states, rng)
        assert Z.shape == (1, 2)
        assert np.all(sm.contains(Z))

    @pytest.mark.parametrize('kwargs', [{'p_detect': 1.5}, {'clutter_rate': -1.0},
                                        {'sigma_r': 0.0}, {'region': (1.0, -1.0, 0.0, 1.0)}])
    def test_invalid_parameters(self, kwargs):
        with pytest.raises(ValueError):
            SensorModel(**kwargs)


class TestBirth:

    def test_benchmark_births(self):
        tracks = birth_tracks(BirthModel.benchmark(), 4)
        assert len(tracks) == 6
        assert all(t.r == 0.03 for t in tracks)
        assert [t.track for t in tracks] == [(4, i) for i in range(1, 7)]
        assert all(t.label.g == 0 for t in tracks)
        assert_allclose(tracks[0].mean(), [-800, 0, 600, 0])
        assert_allclose(tracks[0].density.covs[0], 100.0 * np.eye(4))
