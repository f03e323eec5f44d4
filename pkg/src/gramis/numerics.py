"""Dense SPD linear algebra, stable log-space reductions, and Gaussian primitives.

Every function is pure: results depend only on the arguments and, where one is
accepted, an explicitly passed random stream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.linalg import LinAlgError
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import solve_triangular
from scipy.special import gammaln

from .exceptions import (
    AllNegInfinity,
    DimensionMismatch,
    InvalidDimension,
    InvalidParameter,
    NotPositiveDefinite,
)
from .validation import as_square_matrix, as_vector

LOG_2PI = float(np.log(2.0 * np.pi))

# Scale-aware pivot floor: a Cholesky pivot at or below
# PD_TOLERANCE * max(1, max diagonal) rejects the matrix as not positive
# definite. Numerically semi-definite Hessians must fail this test because
# callers use it as the SPD branch of the covariance update.
PD_TOLERANCE = 1e-10

_UINT64_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class SpdFactor:
    """Lower-triangular Cholesky factor of an SPD matrix plus its log-determinant.

    Attributes
    ----------
    lower : ndarray of shape (d, d)
        Lower-triangular factor L with ``L @ L.T`` equal to the factored matrix.
    log_det : float
        Log-determinant of the factored matrix, ``2 * sum(log(diag(L)))``.
    """

    lower: NDArray[np.float64]
    log_det: float

    @property
    def dim(self) -> int:
        return self.lower.shape[0]

    def matrix(self) -> NDArray[np.float64]:
        """Reconstruct the factored matrix as L @ L.T."""
        return self.lower @ self.lower.T


def spd_factorize(m: ArrayLike) -> SpdFactor:
    """Cholesky-factorize a symmetric positive definite matrix.

    The input is symmetrized as (M + M.T)/2 before factorization, since
    analytic Hessians accumulate asymmetric rounding. Any pivot at or below
    ``PD_TOLERANCE * max(1, max diagonal)`` raises :class:`NotPositiveDefinite`.

    Parameters
    ----------
    m : array_like of shape (d, d)
        Matrix to factor; symmetric up to rounding.

    Returns
    -------
    SpdFactor

    Raises
    ------
    NotPositiveDefinite
        If the matrix is not positive definite under the pivot tolerance.
    """
    a = as_square_matrix(m, name="m")
    a = 0.5 * (a + a.T)
    tol = PD_TOLERANCE * max(1.0, float(np.max(np.diag(a))))
    try:
        lower = np.linalg.cholesky(a)
    except LinAlgError as exc:
        raise NotPositiveDefinite(f"matrix is not positive definite: {exc}") from None
    pivots = np.diag(lower) ** 2
    if np.min(pivots) <= tol:
        raise NotPositiveDefinite(
            f"smallest pivot {np.min(pivots):.3e} is at or below tolerance {tol:.3e}"
        )
    log_det = 2.0 * float(np.sum(np.log(np.diag(lower))))
    return SpdFactor(lower=lower, log_det=log_det)


def solve_spd(factor: SpdFactor, v: ArrayLike) -> NDArray[np.float64]:
    """Solve (L @ L.T) x = v through two triangular solves.

    Parameters
    ----------
    factor : SpdFactor
    v : array_like of shape (d,) or (d, m)
        Right-hand side; a matrix solves all columns at once.
    """
    rhs = np.asarray(v, dtype=float)
    if rhs.shape[0] != factor.dim:
        raise DimensionMismatch(
            f"right-hand side has leading dimension {rhs.shape[0]}, expected {factor.dim}"
        )
    y = solve_triangular(factor.lower, rhs, lower=True)
    return solve_triangular(factor.lower.T, y, lower=False)


def log_mvn_pdf(x: ArrayLike, mean: ArrayLike, cov_factor: SpdFactor) -> float | NDArray[np.float64]:
    """Log density of a multivariate normal at one point or a batch.

    Parameters
    ----------
    x : array_like of shape (d,) or (m, d)
    mean : array_like of shape (d,)
    cov_factor : SpdFactor
        Factorization of the covariance matrix.

    Returns
    -------
    float or ndarray of shape (m,)
        ``-(d/2) log(2 pi) - log_det / 2 - quadratic_form / 2``.
    """
    mu = as_vector(mean, dim=cov_factor.dim, name="mean")
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.shape[1] != cov_factor.dim:
        raise DimensionMismatch(
            f"x has dimension {pts.shape[1]}, expected {cov_factor.dim}"
        )
    y = solve_triangular(cov_factor.lower, (pts - mu).T, lower=True)
    quad = np.einsum("ij,ij->j", y, y)
    out = -0.5 * (cov_factor.dim * LOG_2PI + cov_factor.log_det + quad)
    return float(out[0]) if single else out


def sample_mvn(
    mean: ArrayLike,
    cov_factor: SpdFactor,
    rng: np.random.Generator,
    size: int | None = None,
) -> NDArray[np.float64]:
    """Draw from a multivariate normal as mean + L z with z standard normal.

    Parameters
    ----------
    size : int, optional
        Number of draws; None gives a single vector of shape (d,), an
        integer k gives shape (k, d). Deterministic given the stream state.
    """
    mu = as_vector(mean, dim=cov_factor.dim, name="mean")
    k = 1 if size is None else int(size)
    z = rng.standard_normal((k, cov_factor.dim))
    draws = mu + z @ cov_factor.lower.T
    return draws[0] if size is None else draws


def log_sum_exp(values: ArrayLike, axis: int | None = None) -> float | NDArray[np.float64]:
    """log(sum(exp(values))) with max-subtraction stability.

    Raises
    ------
    AllNegInfinity
        If no finite value is present (in any reduced slice, for axis mode).
    InvalidParameter
        If the reduced axis is empty.
    """
    a = np.asarray(values, dtype=float)
    if a.size == 0:
        raise InvalidParameter("log_sum_exp of an empty array")
    if axis is None:
        m = float(np.max(a))
        if m == -np.inf:
            raise AllNegInfinity("log_sum_exp input has no finite value")
        return float(m + np.log(np.sum(np.exp(a - m))))
    m = np.max(a, axis=axis, keepdims=True)
    if np.any(np.isneginf(m)):
        raise AllNegInfinity("log_sum_exp input has a slice with no finite value")
    return np.squeeze(m, axis=axis) + np.log(np.sum(np.exp(a - m), axis=axis))


def unit_sphere_area(d: int) -> float:
    """Surface area of the unit sphere in R^d: 2 pi^{d/2} / Gamma(d/2)."""
    if int(d) != d or d < 1:
        raise InvalidDimension(f"dimension must be a positive integer, got {d!r}")
    d = int(d)
    return float(np.exp(np.log(2.0) + 0.5 * d * np.log(np.pi) - gammaln(0.5 * d)))


def rng_stream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator addressed by a 64-bit seed plus an integer key path.

    Distinct (seed, key) addresses give statistically independent streams,
    e.g. one stream per (run, proposal) pair.
    """
    ss = np.random.SeedSequence(
        entropy=int(seed) & _UINT64_MASK, spawn_key=tuple(int(k) for k in key)
    )
    return np.random.Generator(np.random.PCG64(ss))


def fd_gradient(f, x: ArrayLike, scale: float = 1e-5) -> NDArray[np.float64]:
    """Central finite-difference gradient of a scalar function.

    Steps are per-coordinate, ``scale * (1 + |x_i|)``.
    """
    x0 = as_vector(x, name="x")
    grad = np.zeros_like(x0)
    for i in range(x0.shape[0]):
        h = scale * (1.0 + abs(x0[i]))
        xp = x0.copy()
        xm = x0.copy()
        xp[i] += h
        xm[i] -= h
        grad[i] = (f(xp) - f(xm)) / (2.0 * h)
    return grad


def fd_jacobian(f, x: ArrayLike, scale: float = 1e-5) -> NDArray[np.float64]:
    """Central finite-difference Jacobian of a vector function.

    Used to check analytic Hessians against differences of the analytic
    gradient, which is better conditioned than double-differencing.
    """
    x0 = as_vector(x, name="x")
    cols = []
    for i in range(x0.shape[0]):
        h = scale * (1.0 + abs(x0[i]))
        xp = x0.copy()
        xm = x0.copy()
        xp[i] += h
        xm[i] -= h
        cols.append((np.asarray(f(xp)) - np.asarray(f(xm))) / (2.0 * h))
    return np.stack(cols, axis=-1)
