"""
Linear-Gaussian position sensor with Poisson clutter.

Each target is detected with probability p_D and produces z = H x + w,
w ~ N(0, sigma_r^2 I). Clutter is a Poisson RFS with mean count lambda,
uniform over the surveillance region, so its intensity is lambda / V inside
the region and zero outside.
"""

from dataclasses import dataclass, field
from typing import NamedTuple, Tuple

import numpy as np
from qcodes import validators as vals
from scipy.special import logsumexp

from ..exceptions import NumericalFailure
from ..rfs.mixture import GaussianMixture, symmetrize

POSITION_SELECTOR = np.array([[1.0, 0.0, 0.0, 0.0],
                              [0.0, 0.0, 1.0, 0.0]])

BENCHMARK_REGION = (-1000.0, 1000.0, -1000.0, 1000.0)

_LOG_2PI = np.log(2.0 * np.pi)

_probability = vals.Numbers(min_value=0.0, max_value=1.0)
_positive = vals.Numbers(min_value=np.nextafter(0.0, 1.0))
_nonnegative = vals.Numbers(min_value=0.0)
_region = vals.Sequence(elt_validator=vals.Numbers(), length=4)


@dataclass(frozen=True)
class SensorModel:
    """
    Args:
        sigma_r: per-axis measurement noise standard deviation in m
        p_detect: detection probability
        region: surveillance region (xmin, xmax, ymin, ymax) in m
        clutter_rate: mean number of clutter returns per scan (lambda)
    """
    sigma_r: float = 10.0
    p_detect: float = 0.98
    region: Tuple[float, float, float, float] = BENCHMARK_REGION
    clutter_rate: float = 30.0
    H: np.ndarray = field(init=False, repr=False, compare=False)
    R: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        _positive.validate(self.sigma_r, 'sensor.noise_std')
        _probability.validate(self.p_detect, 'sensor.detection_probability')
        _nonnegative.validate(self.clutter_rate, 'sensor.clutter_rate')
        region = tuple(float(v) for v in self.region)
        _region.validate(region, 'sensor.region')
        if not (region[0] < region[1] and region[2] < region[3]):
            raise ValueError(f'sensor.region must be nonempty, got {region}')
        object.__setattr__(self, 'region', region)
        object.__setattr__(self, 'H', POSITION_SELECTOR.copy())
        object.__setattr__(self, 'R', self.sigma_r ** 2 * np.eye(2))

    @property
    def volume(self) -> float:
        xmin, xmax, ymin, ymax = self.region
        return (xmax - xmin) * (ymax - ymin)

    def contains(self, z) -> np.ndarray:
        z = np.atleast_2d(np.asarray(z, dtype=float))
        xmin, xmax, ymin, ymax = self.region
        return (z[:, 0] >= xmin) & (z[:, 0] <= xmax) & (z[:, 1] >= ymin) & (z[:, 1] <= ymax)

    def clutter_intensity(self, z) -> np.ndarray:
        """kappa(z) = lambda / V inside the region, 0 outside; one value per row of z."""
        return np.where(self.contains(z), self.clutter_rate / self.volume, 0.0)

    def detect(self, states: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """
        Target-originated measurements of the given states. Missed
        detections and returns outside the region are dropped.
        """
        states = np.asarray(states, dtype=float).reshape(-1, 4)
        hits = rng.random(states.shape[0]) < self.p_detect
        noise = self.sigma_r * rng.standard_normal((states.shape[0], 2))
        Z = (states @ self.H.T + noise)[hits]
        return Z[self.contains(Z)]


class KalmanUpdate(NamedTuple):
    log_likelihoods: np.ndarray  # log N(z; H m_j, S_j)
    mahalanobis: np.ndarray  # squared innovation distance
    means: np.ndarray
    covs: np.ndarray


def kalman_update_batch(Z, density: GaussianMixture, sm: SensorModel) -> KalmanUpdate:
    """
    Per-component Kalman correction of a mixture with each row of ``Z``.

    The gain and the corrected covariances do not depend on the measurement,
    so they are computed once; ``log_likelihoods`` and ``mahalanobis`` are
    ``(m, J)``, ``means`` is ``(m, J, 4)`` and ``covs`` is ``(J, 4, 4)``.
    """
    Z = np.asarray(Z, dtype=float).reshape(-1, 2)
    H = sm.H
    PHt = density.covs @ H.T
    S = H @ PHt + sm.R
    try:
        chol = np.linalg.cholesky(S)
    except np.linalg.LinAlgError as err:
        raise NumericalFailure('innovation covariance is not positive definite') from err
    innov = Z[:, None, :] - (density.means @ H.T)[None, :, :]
    whitened = np.linalg.solve(chol[None, ...], innov[..., None])[..., 0]
    maha = np.sum(whitened ** 2, axis=-1)
    logdet = 2.0 * np.sum(np.log(np.diagonal(chol, axis1=1, axis2=2)), axis=1)
    loglik = -0.5 * (maha + logdet[None, :] + 2 * _LOG_2PI)
    gain = np.swapaxes(np.linalg.solve(S, np.swapaxes(PHt, 1, 2)), 1, 2)
    means = density.means[None, :, :] + (gain[None, ...] @ innov[..., None])[..., 0]
    covs = symmetrize(density.covs - gain @ H @ density.covs)
    return KalmanUpdate(loglik, maha, means, covs)


def kalman_update(z, density: GaussianMixture, sm: SensorModel) -> KalmanUpdate:
    """Per-component Kalman correction of a mixture with one measurement."""
    batch = kalman_update_batch(np.asarray(z, dtype=float).reshape(1, 2), density, sm)
    return KalmanUpdate(batch.log_likelihoods[0], batch.mahalanobis[0], batch.means[0], batch.covs)


def measurement_loglikelihood(z, density: GaussianMixture, sm: SensorModel) -> Tuple[float, GaussianMixture]:
    """
    Predicted likelihood of ``z`` under ``density`` and the corrected density.

    Returns:
        log eta, with eta = sum_j w_j N(z; H m_j, H P_j H^T + R), and the
        posterior mixture, reweighted and normalized.
    """
    return corrected_density(density, kalman_update(z, density, sm))


def corrected_density(density: GaussianMixture, upd: KalmanUpdate) -> Tuple[float, GaussianMixture]:
    """log eta and the normalized posterior mixture from a per-component correction."""
    with np.errstate(divide='ignore'):
        log_terms = np.log(density.weights) + upd.log_likelihoods
    log_eta = float(logsumexp(log_terms))
    if not np.isfinite(log_eta):
        return log_eta, density
    weights = np.exp(log_terms - log_eta)
    return log_eta, GaussianMixture(weights / weights.sum(), upd.means, upd.covs)


def sample_clutter(sm: SensorModel, rng: np.random.Generator) -> np.ndarray:
    """Poisson number of points, uniform over the region; shape (n, 2)."""
    count = rng.poisson(sm.clutter_rate)
    xmin, xmax, ymin, ymax = sm.region
    return rng.uniform((xmin, ymin), (xmax, ymax), size=(count, 2))

