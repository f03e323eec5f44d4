"""Target densities: Gaussian mixtures, smoothed generalized-Gaussian mixtures,
and the banana family, with analytic gradients, Hessians, and known moments.

Evaluation methods accept a single point of shape (d,) or a batch of shape
(m, d) and return correspondingly shaped results.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import solve_triangular
from scipy.special import gammaln

from .exceptions import InvalidParameter, NonSmoothAtMean
from .numerics import LOG_2PI, SpdFactor, log_sum_exp, solve_spd, spd_factorize
from .validation import as_batch, as_vector, require


@dataclass(frozen=True)
class GroundTruth:
    """Known moments of a target, used for scoring estimators.

    Attributes
    ----------
    normalizing_constant : float, optional
        Integral of the unnormalized density.
    mean : ndarray, optional
    second_moment : ndarray, optional
        Componentwise E[X_i^2].
    """

    normalizing_constant: float | None = None
    mean: NDArray[np.float64] | None = None
    second_moment: NDArray[np.float64] | None = None

    def __post_init__(self):
        if self.normalizing_constant is not None and not self.normalizing_constant > 0:
            raise InvalidParameter("normalizing constant must be positive")


class TargetDensity(abc.ABC):
    """Unnormalized target log-density with analytic first and second derivatives."""

    dim: int

    @abc.abstractmethod
    def log_density(self, x: ArrayLike) -> float | NDArray[np.float64]:
        """Log of the unnormalized density at a point (d,) or batch (m, d)."""

    @abc.abstractmethod
    def grad_log_density(self, x: ArrayLike) -> NDArray[np.float64]:
        """Gradient of the log-density, shape (d,) or (m, d)."""

    @abc.abstractmethod
    def hessian_log_density(self, x: ArrayLike) -> NDArray[np.float64]:
        """Hessian of the log-density, shape (d, d) or (m, d, d)."""

    @property
    def truth(self) -> GroundTruth | None:
        """Known moments, or None when unavailable."""
        return None

    def density(self, x: ArrayLike) -> float | NDArray[np.float64]:
        return np.exp(self.log_density(x))


class _MixtureTarget(TargetDensity):
    """Shared machinery for mixtures: log-space responsibilities and the exact
    second-derivative identity

        hess log pi = sum_l r_l (H_l + g_l g_l^T) - g_bar g_bar^T,

    where r_l are responsibilities, g_l / H_l the component log-density
    derivatives, and g_bar the responsibility-weighted gradient.
    """

    _log_weights: NDArray[np.float64]

    def _component_logs(self, pts: NDArray) -> NDArray:
        """(L, m) array of log(w_l) + component log-density."""
        raise NotImplementedError

    def _component_grads(self, pts: NDArray) -> NDArray:
        """(L, m, d) array of component log-density gradients."""
        raise NotImplementedError

    def _component_hessians(self, pts: NDArray) -> NDArray:
        """(L, m, d, d) array of component log-density Hessians."""
        raise NotImplementedError

    def log_density(self, x):
        pts, single = as_batch(x, self.dim)
        out = log_sum_exp(self._component_logs(pts), axis=0)
        return float(out[0]) if single else out

    def _responsibilities(self, pts: NDArray) -> NDArray:
        logs = self._component_logs(pts)
        return np.exp(logs - log_sum_exp(logs, axis=0))

    def grad_log_density(self, x):
        pts, single = as_batch(x, self.dim)
        resp = self._responsibilities(pts)
        grads = self._component_grads(pts)
        out = np.einsum("lm,lmd->md", resp, grads)
        return out[0] if single else out

    def hessian_log_density(self, x):
        pts, single = as_batch(x, self.dim)
        resp = self._responsibilities(pts)
        grads = self._component_grads(pts)
        hessians = self._component_hessians(pts)
        mean_grad = np.einsum("lm,lmd->md", resp, grads)
        out = np.einsum("lm,lmde->mde", resp, hessians)
        out += np.einsum("lm,lmd,lme->mde", resp, grads, grads)
        out -= np.einsum("md,me->mde", mean_grad, mean_grad)
        return out[0] if single else out


class GaussianMixtureTarget(_MixtureTarget):
    """Normalized mixture of multivariate Gaussians.

    Parameters
    ----------
    weights : array_like of shape (L,)
        Positive mixture weights summing to 1.
    means : array_like of shape (L, d)
    covariances : array_like of shape (L, d, d)
        SPD component covariances.
    """

    def __init__(self, weights: ArrayLike, means: ArrayLike, covariances: ArrayLike):
        w = as_vector(weights, name="weights")
        mu = np.atleast_2d(np.asarray(means, dtype=float))
        covs = np.asarray(covariances, dtype=float)
        require(np.all(w > 0), "mixture weights must be positive")
        require(abs(float(np.sum(w)) - 1.0) <= 1e-9, "mixture weights must sum to 1")
        require(mu.ndim == 2, "means must have shape (L, d)")
        require(
            covs.shape == (mu.shape[0],) + (mu.shape[1],) * 2,
            "covariances must have shape (L, d, d)",
        )
        require(w.shape[0] == mu.shape[0], "one weight per component required")
        self.weights = w
        self.means = mu
        self.covariances = covs
        self.dim = mu.shape[1]
        self._log_weights = np.log(w)
        self._factors = [spd_factorize(c) for c in covs]
        self._precisions = np.stack(
            [solve_spd(f, np.eye(self.dim)) for f in self._factors]
        )
        self._log_norms = np.array(
            [
                lw - 0.5 * (self.dim * LOG_2PI + f.log_det)
                for lw, f in zip(self._log_weights, self._factors)
            ]
        )

    def _component_logs(self, pts):
        logs = np.empty((len(self._factors), pts.shape[0]))
        for l, f in enumerate(self._factors):
            y = solve_triangular(f.lower, (pts - self.means[l]).T, lower=True)
            logs[l] = self._log_norms[l] - 0.5 * np.einsum("ij,ij->j", y, y)
        return logs

    def _component_grads(self, pts):
        diffs = pts[None, :, :] - self.means[:, None, :]
        return -np.einsum("lde,lme->lmd", self._precisions, diffs)

    def _component_hessians(self, pts):
        m = pts.shape[0]
        return -np.broadcast_to(
            self._precisions[:, None, :, :],
            (len(self.weights), m, self.dim, self.dim),
        )

    @property
    def truth(self) -> GroundTruth:
        mean = self.weights @ self.means
        second = self.weights @ (
            self.means**2 + np.stack([np.diag(c) for c in self.covariances])
        )
        return GroundTruth(normalizing_constant=1.0, mean=mean, second_moment=second)


def gg_log_constant(dim: int, shape: float) -> float:
    """Log normalizing constant of the generalized Gaussian density,
    log[ d Gamma(d/2) / (pi^{d/2} Gamma(1 + d/(2 eta)) 2^{1 + d/(2 eta)}) ].
    """
    require(shape > 0, "shape parameter must be positive")
    half_dim_over_shape = dim / (2.0 * shape)
    return float(
        np.log(dim)
        + gammaln(0.5 * dim)
        - 0.5 * dim * np.log(np.pi)
        - gammaln(1.0 + half_dim_over_shape)
        - (1.0 + half_dim_over_shape) * np.log(2.0)
    )


def gg_covariance_factor(dim: int, shape: float) -> float:
    """Scalar kappa with component covariance = kappa * Sigma:
    2^{1/eta} Gamma((d+2)/(2 eta)) / (d Gamma(d/(2 eta))).
    """
    return float(
        np.exp(
            np.log(2.0) / shape
            + gammaln((dim + 2.0) / (2.0 * shape))
            - np.log(dim)
            - gammaln(dim / (2.0 * shape))
        )
    )


def gg_reparam(sigma: float, shape: float) -> tuple[float, float]:
    """Map the (sigma, eta) scalar parametrization to (alpha, beta):
    beta = 2 eta, alpha = 2^{1/(2 eta)} sigma.
    """
    if not sigma > 0 or not shape > 0:
        raise InvalidParameter("sigma and shape must be positive")
    return float(2.0 ** (1.0 / (2.0 * shape)) * sigma), float(2.0 * shape)


class GGMixtureTarget(_MixtureTarget):
    """Mixture of generalized Gaussian (exponential-power) densities.

    Each component has log-density

        log C - log|Sigma|/2 - ((theta + delta)^eta) / 2,
        theta = (x - nu)^T Sigma^{-1} (x - nu),

    where delta >= 0 smooths the density so that it is twice differentiable
    at the means for eta < 1. The density, gradient, and Hessian all use the
    stored delta together with the delta = 0 closed-form constant C, so one
    consistent smooth function feeds both line searches and weights; the
    normalization error this induces is far below experiment tolerances.

    Parameters
    ----------
    weights, means, scales : mixture weights, component means nu_l, and SPD
        scale matrices Sigma_l.
    shapes : array_like of shape (L,)
        Positive shape parameters eta_l; eta = 1 is the Gaussian case.
    delta : float
        Smoothing offset, default 1e-5.
    """

    def __init__(
        self,
        weights: ArrayLike,
        means: ArrayLike,
        scales: ArrayLike,
        shapes: ArrayLike,
        delta: float = 1e-5,
    ):
        w = as_vector(weights, name="weights")
        mu = np.atleast_2d(np.asarray(means, dtype=float))
        scale_mats = np.asarray(scales, dtype=float)
        eta = np.broadcast_to(np.asarray(shapes, dtype=float), w.shape).copy()
        require(np.all(w > 0), "mixture weights must be positive")
        require(abs(float(np.sum(w)) - 1.0) <= 1e-9, "mixture weights must sum to 1")
        require(
            scale_mats.shape == (mu.shape[0],) + (mu.shape[1],) * 2,
            "scales must have shape (L, d, d)",
        )
        require(np.all(eta > 0), "shape parameters must be positive")
        require(delta >= 0, "delta must be nonnegative")
        self.weights = w
        self.means = mu
        self.scales = scale_mats
        self.shapes = eta
        self.delta = float(delta)
        self.dim = mu.shape[1]
        self._log_weights = np.log(w)
        self._factors = [spd_factorize(s) for s in scale_mats]
        self._precisions = np.stack(
            [solve_spd(f, np.eye(self.dim)) for f in self._factors]
        )
        self._log_consts = np.array(
            [
                lw + gg_log_constant(self.dim, e) - 0.5 * f.log_det
                for lw, e, f in zip(self._log_weights, eta, self._factors)
            ]
        )

    def _theta(self, pts):
        """(L, m) quadratic forms (x - nu)^T Sigma^{-1} (x - nu)."""
        theta = np.empty((len(self._factors), pts.shape[0]))
        for l, f in enumerate(self._factors):
            y = solve_triangular(f.lower, (pts - self.means[l]).T, lower=True)
            theta[l] = np.einsum("ij,ij->j", y, y)
        return theta

    def _check_smooth(self, theta):
        if self.delta == 0.0 and np.any((self.shapes[:, None] < 1.0) & (theta == 0.0)):
            raise NonSmoothAtMean(
                "gradient of an unsmoothed component with shape < 1 at its mean; "
                "set delta > 0"
            )

    def _component_logs(self, pts):
        s = self._theta(pts) + self.delta
        return self._log_consts[:, None] - 0.5 * s ** self.shapes[:, None]

    def _component_grads(self, pts):
        theta = self._theta(pts)
        self._check_smooth(theta)
        s = theta + self.delta
        diffs = pts[None, :, :] - self.means[:, None, :]
        u = np.einsum("lde,lme->lmd", self._precisions, diffs)
        coef = -self.shapes[:, None] * s ** (self.shapes[:, None] - 1.0)
        return coef[:, :, None] * u

    def _component_hessians(self, pts):
        theta = self._theta(pts)
        self._check_smooth(theta)
        s = theta + self.delta
        eta = self.shapes[:, None]
        diffs = pts[None, :, :] - self.means[:, None, :]
        u = np.einsum("lde,lme->lmd", self._precisions, diffs)
        # At s = 0 (possible only with delta = 0, x at a mean, eta >= 1) the
        # outer-product term vanishes analytically because u = 0 there; guard
        # the s^{eta-2} power so eta in [1, 2) does not produce inf * 0.
        positive = s > 0.0
        safe_s = np.where(positive, s, 1.0)
        outer_coef = np.where(
            positive, -2.0 * eta * (eta - 1.0) * safe_s ** (eta - 2.0), 0.0
        )
        lin_coef = -eta * s ** (eta - 1.0)
        out = np.einsum("lm,lmd,lme->lmde", outer_coef, u, u)
        out += lin_coef[:, :, None, None] * self._precisions[:, None, :, :]
        return out

    @property
    def truth(self) -> GroundTruth:
        """Moments of the delta = 0 density; delta <= 1e-4 shifts them by far
        less than any tolerance used here."""
        mean = self.weights @ self.means
        kappas = np.array([gg_covariance_factor(self.dim, e) for e in self.shapes])
        diag = np.stack([np.diag(s) for s in self.scales])
        second = self.weights @ (self.means**2 + kappas[:, None] * diag)
        return GroundTruth(normalizing_constant=1.0, mean=mean, second_moment=second)


class BananaTarget(TargetDensity):
    """Curved-ridge density: the pushforward of N(0, diag(c^2, 1, ..., 1))
    under the map that bends the second coordinate along a parabola in the
    first. The inverse map

        phi_1 = x_1,  phi_2 = x_2 + b (x_1^2 - c^2),  phi_j = x_j (j >= 3)

    is volume-preserving, so log pi(x) = log N(phi(x); 0, diag(c^2, 1, ...)).

    Parameters
    ----------
    dim : int >= 2
    b : float
        Curvature; b = 0 recovers the axis-aligned Gaussian.
    c : float > 0
        Scale of the first coordinate.
    """

    def __init__(self, dim: int, b: float, c: float):
        require(int(dim) == dim and dim >= 2, "dim must be an integer >= 2")
        require(c > 0, "c must be positive")
        self.dim = int(dim)
        self.b = float(b)
        self.c = float(c)

    def _phi(self, pts):
        out = pts.copy()
        out[:, 1] += self.b * (pts[:, 0] ** 2 - self.c**2)
        return out

    def log_density(self, x):
        pts, single = as_batch(x, self.dim)
        phi = self._phi(pts)
        quad = phi[:, 0] ** 2 / self.c**2 + np.sum(phi[:, 1:] ** 2, axis=1)
        out = -0.5 * (self.dim * LOG_2PI + np.log(self.c**2) + quad)
        return float(out[0]) if single else out

    def grad_log_density(self, x):
        pts, single = as_batch(x, self.dim)
        phi = self._phi(pts)
        u = phi.copy()
        u[:, 0] /= self.c**2
        grad = -u
        grad[:, 0] -= 2.0 * self.b * pts[:, 0] * u[:, 1]
        return grad[0] if single else grad

    def hessian_log_density(self, x):
        pts, single = as_batch(x, self.dim)
        m = pts.shape[0]
        phi2 = pts[:, 1] + self.b * (pts[:, 0] ** 2 - self.c**2)
        hess = np.zeros((m, self.dim, self.dim))
        idx = np.arange(self.dim)
        hess[:, idx, idx] = -1.0
        hess[:, 0, 0] = -1.0 / self.c**2 - 4.0 * self.b**2 * pts[:, 0] ** 2 - 2.0 * self.b * phi2
        hess[:, 0, 1] = hess[:, 1, 0] = -2.0 * self.b * pts[:, 0]
        return hess[0] if single else hess

    @property
    def truth(self) -> GroundTruth:
        second = np.ones(self.dim)
        second[0] = self.c**2
        second[1] = 1.0 + 2.0 * self.b**2 * self.c**4
        return GroundTruth(
            normalizing_constant=1.0, mean=np.zeros(self.dim), second_moment=second
        )
