"""Importance-sampling estimators over accumulated weighted samples, the
chi-square proposal-quality diagnostic, and cross-run error aggregation."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .exceptions import (
    DegenerateWeights,
    DegenerateWeightsWarning,
    EmptyWindow,
    InvalidParameter,
    MissingTruth,
    RequiresKnownZ,
)
from .numerics import log_sum_exp, sample_mvn
from .proposals import ProposalBank, mixture_log_pdf
from .targets import GroundTruth, TargetDensity

# chi-square estimates above this threshold are reported as +inf; mirrors the
# way collapsed proposal mixtures produce astronomically large divergences.
CHI2_OVERFLOW = 1e12


@dataclass
class WeightedSampleSet:
    """Weighted samples with (iteration, proposal, draw) provenance tags."""

    x: NDArray[np.float64]
    log_weights: NDArray[np.float64]
    t: NDArray[np.int64]
    proposal_index: NDArray[np.int64]
    draw_index: NDArray[np.int64]

    def __post_init__(self):
        lengths = {
            self.x.shape[0],
            self.log_weights.shape[0],
            self.t.shape[0],
            self.proposal_index.shape[0],
            self.draw_index.shape[0],
        }
        if len(lengths) != 1:
            raise InvalidParameter("sample-set fields must have equal length")

    def __len__(self) -> int:
        return self.x.shape[0]

    @classmethod
    def from_records(cls, records) -> "WeightedSampleSet":
        """Concatenate the tagged samples of a run's iteration records."""
        if not records:
            raise EmptyWindow("no iteration records")
        return cls(
            x=np.concatenate([r.batch.x for r in records]),
            log_weights=np.concatenate([r.log_weights for r in records]),
            t=np.concatenate(
                [np.full(len(r.batch), r.t, dtype=np.int64) for r in records]
            ),
            proposal_index=np.concatenate([r.batch.proposal_index for r in records]),
            draw_index=np.concatenate([r.batch.draw_index for r in records]),
        )


def window_select(sample_set: WeightedSampleSet, policy: str = "last_half") -> WeightedSampleSet:
    """Restrict a sample set to an iteration window.

    "last_half" keeps iterations t > floor(T/2) where T is the largest tag
    present (so T=1 keeps its single iteration); "all" is the identity.
    """
    if len(sample_set) == 0:
        raise EmptyWindow("empty sample set")
    if policy == "all":
        return sample_set
    if policy != "last_half":
        raise InvalidParameter(f"unknown window policy {policy!r}")
    t_max = int(np.max(sample_set.t))
    keep = sample_set.t > t_max // 2
    if not np.any(keep):
        raise EmptyWindow("window selection kept no samples")
    return WeightedSampleSet(
        x=sample_set.x[keep],
        log_weights=sample_set.log_weights[keep],
        t=sample_set.t[keep],
        proposal_index=sample_set.proposal_index[keep],
        draw_index=sample_set.draw_index[keep],
    )


def identity(x: NDArray) -> NDArray:
    """h(x) = x."""
    return x


def componentwise_square(x: NDArray) -> NDArray:
    """h(x) = x^2 per coordinate."""
    return x**2


def resolve_test_function(spec):
    """Map "identity" / "square" / a callable to a callable."""
    if callable(spec):
        return spec
    named = {"identity": identity, "square": componentwise_square}
    if spec in named:
        return named[spec]
    raise InvalidParameter(f"unknown test function {spec!r}")


def _stabilized_weights(log_weights: NDArray) -> tuple[NDArray, float]:
    """Weights rescaled by exp(-shift) so the largest is 1; returns the shift."""
    finite = np.isfinite(log_weights)
    if not np.any(finite):
        raise DegenerateWeights("all importance weights are zero")
    shift = float(np.max(log_weights[finite]))
    return np.exp(log_weights - shift), shift


def uis_estimate(sample_set: WeightedSampleSet, h, z: float) -> float | NDArray:
    """Unnormalized estimate: the weighted sample average of h divided by the
    known normalizing constant (averaging over all window samples at once)."""
    if not z > 0:
        raise InvalidParameter("z must be positive")
    if len(sample_set) == 0:
        raise EmptyWindow("empty sample set")
    weights, shift = _stabilized_weights(sample_set.log_weights)
    hvals = np.asarray(resolve_test_function(h)(sample_set.x), dtype=float)
    if hvals.ndim == 1:
        est = float(np.mean(weights * hvals) * np.exp(shift) / z)
        return est
    est = np.mean(weights[:, None] * hvals, axis=0) * np.exp(shift) / z
    return est


def snis_estimate(sample_set: WeightedSampleSet, h) -> float | NDArray:
    """Self-normalized estimate: sum of h weighted by weights renormalized to
    sum to one."""
    if len(sample_set) == 0:
        raise EmptyWindow("empty sample set")
    weights, _ = _stabilized_weights(sample_set.log_weights)
    norm = weights / np.sum(weights)
    hvals = np.asarray(resolve_test_function(h)(sample_set.x), dtype=float)
    if hvals.ndim == 1:
        return float(np.sum(norm * hvals))
    return np.sum(norm[:, None] * hvals, axis=0)


def snis_weights(sample_set: WeightedSampleSet) -> NDArray:
    """The renormalized weights themselves (they sum to 1)."""
    weights, _ = _stabilized_weights(sample_set.log_weights)
    return weights / np.sum(weights)


def z_estimate(sample_set: WeightedSampleSet) -> float:
    """Arithmetic mean of the weights, log-space stabilized.

    All-zero weights return 0 with a DegenerateWeightsWarning rather than
    raising, so failed runs can be recorded and excluded downstream.
    """
    if len(sample_set) == 0:
        raise EmptyWindow("empty sample set")
    if np.all(np.isneginf(sample_set.log_weights)):
        warnings.warn(
            "all importance weights are zero; returning 0", DegenerateWeightsWarning
        )
        return 0.0
    return float(
        np.exp(log_sum_exp(sample_set.log_weights) - np.log(len(sample_set)))
    )


def chi2_estimate(
    target: TargetDensity,
    bank: ProposalBank,
    n_samples: int = 100_000,
    rng: np.random.Generator | None = None,
) -> float:
    """Chi-square divergence of the normalized target from the bank mixture,
    estimated with draws from the mixture: mean((pi/psi)^2) - 1, floored at 0.

    Values above CHI2_OVERFLOW report +inf. Requires a target whose
    normalizing constant is known, since the divergence is between normalized
    densities.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    truth = target.truth
    if truth is None or truth.normalizing_constant is None:
        raise RequiresKnownZ("chi-square diagnostic needs the normalizing constant")
    if n_samples < 1:
        raise InvalidParameter("n_samples must be >= 1")
    log_z = float(np.log(truth.normalizing_constant))
    choices = rng.integers(0, bank.size, size=n_samples)
    xs = np.empty((n_samples, bank.dim))
    for n, proposal in enumerate(bank.proposals):
        rows = np.where(choices == n)[0]
        if rows.size:
            xs[rows] = sample_mvn(proposal.mean, proposal.cov_factor, rng, size=rows.size)
    log_ratio = (np.atleast_1d(target.log_density(xs)) - log_z) - mixture_log_pdf(bank, xs)
    log_mean_sq = log_sum_exp(2.0 * log_ratio) - np.log(n_samples)
    if log_mean_sq > np.log(CHI2_OVERFLOW):
        return float("inf")
    return max(0.0, float(np.expm1(log_mean_sq)))


@dataclass
class EstimateReport:
    """Per-run estimates; NaN entries mark a degenerate run."""

    z_hat: float
    snis_mean: NDArray[np.float64] | None = None
    snis_second_moment: NDArray[np.float64] | None = None
    uis_mean: NDArray[np.float64] | None = None
    uis_second_moment: NDArray[np.float64] | None = None
    chi2: float | None = None
    window: tuple[int, int] | None = None
    failed: bool = False


@dataclass
class RmseTable:
    """Root-mean-square errors across runs; vector errors use the Euclidean
    norm so each quantity aggregates to one number."""

    z: float | None = None
    mean: float | None = None
    second_moment: float | None = None
    n_runs: int = 0
    n_failed: int = 0
    extras: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {
            "z": self.z,
            "mean": self.mean,
            "second_moment": self.second_moment,
            "n_runs": self.n_runs,
            "n_failed": self.n_failed,
        }
        out.update(self.extras)
        return out


def rmse_aggregate(
    reports: list[EstimateReport],
    truth: GroundTruth,
    quantities: tuple[str, ...] = ("z", "mean", "second_moment"),
) -> RmseTable:
    """RMSE of each requested quantity over the non-failed runs.

    Degenerate runs (failed flag or NaN entries) are excluded and counted.
    """
    if not reports:
        raise InvalidParameter("need at least one report")
    valid = [r for r in reports if not r.failed and np.isfinite(r.z_hat)]
    table = RmseTable(n_runs=len(reports), n_failed=len(reports) - len(valid))
    if not valid:
        return table

    def _rmse(errors):
        return float(np.sqrt(np.mean(np.square(errors))))

    for quantity in quantities:
        if quantity == "z":
            if truth.normalizing_constant is None:
                raise MissingTruth("normalizing constant unknown")
            table.z = _rmse([r.z_hat - truth.normalizing_constant for r in valid])
        elif quantity == "mean":
            if truth.mean is None:
                raise MissingTruth("true mean unknown")
            table.mean = _rmse(
                [np.linalg.norm(r.snis_mean - truth.mean) for r in valid]
            )
        elif quantity == "second_moment":
            if truth.second_moment is None:
                raise MissingTruth("true second moment unknown")
            table.second_moment = _rmse(
                [
                    np.linalg.norm(r.snis_second_moment - truth.second_moment)
                    for r in valid
                ]
            )
        elif quantity == "chi2":
            chis = [r.chi2 for r in valid if r.chi2 is not None]
            if chis:
                table.extras["chi2_mean"] = float(np.mean(chis))
        else:
            raise InvalidParameter(f"unknown quantity {quantity!r}")
    return table
