"""Gaussian proposal bank: construction, sampling, and mixture density."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .exceptions import DimensionMismatch, InvalidBox
from .numerics import SpdFactor, log_mvn_pdf, log_sum_exp, sample_mvn, spd_factorize
from .validation import as_vector, require


@dataclass
class GaussianProposal:
    """One adapted proposal: mean, covariance, and its cached factorization.

    ``xi`` is an opaque parameter block kept for proposal families with
    extra parameters (e.g. degrees of freedom); unused for Gaussians.
    """

    mean: NDArray[np.float64]
    cov: NDArray[np.float64]
    cov_factor: SpdFactor
    xi: object | None = None

    @classmethod
    def create(cls, mean: ArrayLike, cov: ArrayLike) -> "GaussianProposal":
        factor = spd_factorize(cov)
        mu = as_vector(mean, dim=factor.dim, name="mean")
        return cls(mean=mu, cov=factor.matrix(), cov_factor=factor)

    @property
    def dim(self) -> int:
        return self.mean.shape[0]


@dataclass
class SampleBatch:
    """N*K tagged draws in (proposal, draw) row order."""

    x: NDArray[np.float64]
    proposal_index: NDArray[np.int64]
    draw_index: NDArray[np.int64]

    def __len__(self) -> int:
        return self.x.shape[0]


@dataclass
class ProposalBank:
    """The set of adapted proposals at one iteration."""

    proposals: list[GaussianProposal]
    iteration: int = 0

    def __post_init__(self):
        require(len(self.proposals) >= 1, "bank needs at least one proposal")
        dims = {p.dim for p in self.proposals}
        if len(dims) != 1:
            raise DimensionMismatch("all proposals must share one dimension")

    @property
    def size(self) -> int:
        return len(self.proposals)

    @property
    def dim(self) -> int:
        return self.proposals[0].dim

    @property
    def means(self) -> NDArray[np.float64]:
        return np.stack([p.mean for p in self.proposals])

    @property
    def covariances(self) -> NDArray[np.float64]:
        return np.stack([p.cov for p in self.proposals])


def bank_init(
    box_low: ArrayLike,
    box_high: ArrayLike,
    n_proposals: int,
    init_cov: ArrayLike,
    rng: np.random.Generator,
) -> ProposalBank:
    """Initialize a bank with means uniform on a box and a shared covariance.

    Raises
    ------
    InvalidBox
        If low > high in any coordinate. A degenerate box (low == high)
        places every mean at that point.
    """
    low = as_vector(box_low, name="box_low")
    high = as_vector(box_high, dim=low.shape[0], name="box_high")
    if np.any(low > high):
        raise InvalidBox(f"box has low > high: low={low}, high={high}")
    require(n_proposals >= 1, "n_proposals must be >= 1")
    factor = spd_factorize(init_cov)
    if factor.dim != low.shape[0]:
        raise DimensionMismatch("init_cov dimension does not match the box")
    cov = factor.matrix()
    means = rng.uniform(low, high, size=(n_proposals, low.shape[0]))
    proposals = [
        GaussianProposal(mean=m, cov=cov.copy(), cov_factor=factor) for m in means
    ]
    return ProposalBank(proposals=proposals, iteration=0)


def bank_sample(
    bank: ProposalBank,
    draws_per_proposal: int,
    rng: np.random.Generator | list[np.random.Generator],
) -> SampleBatch:
    """Draw ``draws_per_proposal`` samples from each proposal, tagged (n, k).

    ``rng`` is either one generator used sequentially across proposals or a
    list with one independent stream per proposal, enabling concurrent
    sampling without changing results.
    """
    require(draws_per_proposal >= 1, "draws_per_proposal must be >= 1")
    n, k, d = bank.size, int(draws_per_proposal), bank.dim
    streams = rng if isinstance(rng, list) else [rng] * n
    if len(streams) != n:
        raise DimensionMismatch(f"need {n} streams, got {len(streams)}")
    x = np.empty((n * k, d))
    for i, (p, stream) in enumerate(zip(bank.proposals, streams)):
        x[i * k : (i + 1) * k] = sample_mvn(p.mean, p.cov_factor, stream, size=k)
    proposal_index = np.repeat(np.arange(n, dtype=np.int64), k)
    draw_index = np.tile(np.arange(k, dtype=np.int64), n)
    return SampleBatch(x=x, proposal_index=proposal_index, draw_index=draw_index)


def per_proposal_log_pdf(bank: ProposalBank, x: ArrayLike) -> NDArray[np.float64]:
    """(N, m) matrix of log q_n(x_m) for a batch of points."""
    pts = np.atleast_2d(np.asarray(x, dtype=float))
    if pts.shape[1] != bank.dim:
        raise DimensionMismatch(f"x has dimension {pts.shape[1]}, expected {bank.dim}")
    logs = np.empty((bank.size, pts.shape[0]))
    for i, p in enumerate(bank.proposals):
        logs[i] = log_mvn_pdf(pts, p.mean, p.cov_factor)
    return logs


def mixture_log_pdf(bank: ProposalBank, x: ArrayLike) -> float | NDArray[np.float64]:
    """Log of the equally-weighted proposal mixture (1/N) sum_n q_n at x.

    Accepts a point (d,) or batch (m, d), mirroring the input shape.
    """
    single = np.asarray(x).ndim == 1
    logs = per_proposal_log_pdf(bank, x)
    out = log_sum_exp(logs, axis=0) - np.log(bank.size)
    return float(out[0]) if single else out
