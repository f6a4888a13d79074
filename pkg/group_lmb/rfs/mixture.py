"""
Gaussian mixtures for the spatial densities of Bernoulli tracks.

Components are stored stacked (weights ``(J,)``, means ``(J, n)``,
covariances ``(J, n, n)``) so that the Kalman recursions can run over a whole
mixture at once; ``GaussianMixture.components`` gives the per-component view.
"""

from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

import numpy as np
from scipy.special import logsumexp

SYMMETRY_RTOL = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def symmetrize(covs: np.ndarray) -> np.ndarray:
    return 0.5 * (covs + np.swapaxes(covs, -1, -2))


def _check_symmetric(covs: np.ndarray) -> None:
    scale = np.max(np.abs(covs), axis=(-1, -2), initial=0.0)
    asym = np.max(np.abs(covs - np.swapaxes(covs, -1, -2)), axis=(-1, -2), initial=0.0)
    if np.any(asym > SYMMETRY_RTOL * np.maximum(scale, 1.0)):
        raise ValueError('covariance matrices must be symmetric')


@dataclass(frozen=True)
class GaussianComponent:
    weight: float
    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self) -> None:
        if not self.weight >= 0:
            raise ValueError(f'component weight must be nonnegative, got {self.weight}')
        mean = _frozen(self.mean).ravel()
        cov = _frozen(self.covariance)
        if cov.shape != (mean.size, mean.size):
            raise ValueError(f'covariance shape {cov.shape} does not match mean of size {mean.size}')
        _check_symmetric(cov)
        object.__setattr__(self, 'weight', float(self.weight))
        object.__setattr__(self, 'mean', mean)
        object.__setattr__(self, 'covariance', cov)


class GaussianMixture:
    """
    Weighted sum of Gaussians.

    Args:
        weights: component weights, ``(J,)``
        means: component means, ``(J, n)``
        covs: component covariances, ``(J, n, n)``
    """

    __slots__ = ('weights', 'means', 'covs')

    def __init__(self, weights, means, covs) -> None:
        weights = np.atleast_1d(np.asarray(weights, dtype=float))
        means = np.asarray(means, dtype=float).reshape(weights.size, -1)
        covs = np.asarray(covs, dtype=float).reshape(weights.size, means.shape[1], means.shape[1])
        if np.any(weights < 0) or not np.all(np.isfinite(weights)):
            raise ValueError('mixture weights must be finite and nonnegative')
        _check_symmetric(covs)
        object.__setattr__(self, 'weights', _frozen(weights))
        object.__setattr__(self, 'means', _frozen(means))
        object.__setattr__(self, 'covs', _frozen(covs))

    def __setattr__(self, key, value):
        raise AttributeError('GaussianMixture is immutable')

    def __reduce__(self):
        return GaussianMixture, (np.array(self.weights), np.array(self.means), np.array(self.covs))

    @classmethod
    def single(cls, mean, cov) -> 'GaussianMixture':
        mean = np.asarray(mean, dtype=float).ravel()
        return cls(np.ones(1), mean[None, :], np.asarray(cov, dtype=float)[None, :, :])

    @classmethod
    def from_components(cls, components: Iterable[GaussianComponent]) -> 'GaussianMixture':
        components = list(components)
        if not components:
            raise ValueError('a mixture needs at least one component')
        return cls([c.weight for c in components],
                   np.stack([c.mean for c in components]),
                   np.stack([c.covariance for c in components]))

    @property
    def components(self) -> Tuple[GaussianComponent, ...]:
        return tuple(GaussianComponent(w, m, P) for w, m, P in zip(self.weights, self.means, self.covs))

    @property
    def dim(self) -> int:
        return self.means.shape[1]

    def __len__(self) -> int:
        return self.weights.size

    @property
    def total_weight(self) -> float:
        return float(np.sum(self.weights))

    def is_normalized(self, tol: float = 1e-9) -> bool:
        return abs(self.total_weight - 1.0) <= tol

    def normalized(self) -> 'GaussianMixture':
        total = self.total_weight
        if total <= 0:
            raise ValueError('cannot normalize a mixture with zero total weight')
        return GaussianMixture(self.weights / total, self.means, self.covs)

    def mean(self) -> np.ndarray:
        """First moment, the integral of x p(x)."""
        w = self.weights / self.total_weight
        return w @ self.means

    def covariance(self) -> np.ndarray:
        w = self.weights / self.total_weight
        mu = w @ self.means
        spread = self.means - mu
        return np.einsum('j,jab->ab', w, self.covs) + np.einsum('j,ja,jb->ab', w, spread, spread)

    def logpdf(self, x) -> float:
        x = np.asarray(x, dtype=float).ravel()
        diff = x[None, :] - self.means
        chol = np.linalg.cholesky(self.covs)
        sol = np.linalg.solve(chol, diff[..., None])[..., 0]
        maha = np.sum(sol ** 2, axis=1)
        logdet = 2.0 * np.sum(np.log(np.diagonal(chol, axis1=1, axis2=2)), axis=1)
        comp = -0.5 * (maha + logdet + self.dim * np.log(2.0 * np.pi))
        with np.errstate(divide='ignore'):
            return float(logsumexp(comp + np.log(self.weights)))

    def pdf(self, x) -> float:
        return float(np.exp(self.logpdf(x)))

    def scaled(self, factor: float) -> 'GaussianMixture':
        return GaussianMixture(self.weights * factor, self.means, self.covs)

    def __repr__(self) -> str:
        return f'GaussianMixture(J={len(self)}, mean={np.round(self.mean(), 3).tolist()})'


def concatenate(mixtures: List[GaussianMixture]) -> GaussianMixture:
    return GaussianMixture(np.concatenate([m.weights for m in mixtures]),
                           np.concatenate([m.means for m in mixtures]),
                           np.concatenate([m.covs for m in mixtures]))


@dataclass(frozen=True)
class MixtureReduction:
    """
    Housekeeping parameters for ``gm_reduce``.

    Args:
        prune_threshold: components lighter than this are dropped
        merge_distance: squared Mahalanobis distance under which components
            are merged into the heaviest remaining one
        max_components: cap on the number of components kept
    """
    prune_threshold: float = 1e-5
    merge_distance: float = 4.0
    max_components: int = 100


def gm_reduce(m: GaussianMixture, prune_threshold: float = 1e-5,
              merge_distance: float = 4.0, max_components: int = 100) -> GaussianMixture:
    """
    Prune, merge and cap a normalized mixture, then renormalize.

    Merging moment-matches every component whose squared Mahalanobis distance
    (under its own covariance) to the heaviest remaining component is at most
    ``merge_distance``. The heaviest component always survives pruning.
    """
    w = m.weights / m.total_weight
    keep = np.flatnonzero(w >= prune_threshold)
    if keep.size == 0:
        keep = np.array([int(np.argmax(w))])
    w, means, covs = w[keep], m.means[keep], m.covs[keep]

    if len(w) == 1:
        return GaussianMixture(np.ones(1), means, covs)

    inv_covs = np.linalg.inv(covs)
    remaining = list(np.argsort(-w, kind='stable'))
    out_w: List[float] = []
    out_m: List[np.ndarray] = []
    out_P: List[np.ndarray] = []
    while remaining:
        j = remaining[0]
        idx = np.array(remaining)
        diff = means[idx] - means[j]
        d2 = np.einsum('ja,jab,jb->j', diff, inv_covs[idx], diff)
        close = idx[d2 <= merge_distance]
        w_new = np.sum(w[close])
        m_new = (w[close] @ means[close]) / w_new
        spread = means[close] - m_new
        P_new = (np.einsum('j,jab->ab', w[close], covs[close])
                 + np.einsum('j,ja,jb->ab', w[close], spread, spread)) / w_new
        out_w.append(w_new)
        out_m.append(m_new)
        out_P.append(symmetrize(P_new))
        merged = set(close.tolist())
        remaining = [i for i in remaining if i not in merged]

    out_w_arr = np.array(out_w)
    order = np.argsort(-out_w_arr, kind='stable')[:max_components]
    out_w_arr = out_w_arr[order]
    return GaussianMixture(out_w_arr / out_w_arr.sum(),
                           np.stack(out_m)[order], np.stack(out_P)[order])


def reduce_with(m: GaussianMixture, settings: Optional[MixtureReduction]) -> GaussianMixture:
    if settings is None:
        return m.normalized()
    return gm_reduce(m, settings.prune_threshold, settings.merge_distance, settings.max_components)

