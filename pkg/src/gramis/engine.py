"""The adaptation engine: backtracked Newton mean updates with pairwise
repulsion, the positive-definite-or-keep covariance rule, deterministic-mixture
weighting, and the empirical-field cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .exceptions import (
    DegenerateWeights,
    InvalidParameter,
    NonFiniteGradient,
    NotPositiveDefinite,
)
from .numerics import SpdFactor, rng_stream, solve_spd, spd_factorize, unit_sphere_area
from .proposals import (
    GaussianProposal,
    ProposalBank,
    SampleBatch,
    bank_init,
    bank_sample,
    mixture_log_pdf,
    per_proposal_log_pdf,
)
from .targets import TargetDensity
from .validation import require


@dataclass(frozen=True)
class RepulsionConfig:
    """Pairwise repulsion between proposal means.

    Attributes
    ----------
    schedule : {"off", "constant", "exponential"}
        "constant" uses ``strength`` at every iteration; "exponential" decays
        from ``strength`` at t=1 by exp(-decay_rate * (t-1)).
    strength : float
        G for the constant schedule, the t=1 value for the exponential one.
    decay_rate : float, optional
        Exponential rate; None derives it so the value at t=T is
        ``attenuation * strength``.
    attenuation : float
        Fraction of the initial strength remaining at the last iteration when
        decay_rate is None. Default 1%.
    masses : tuple of float, optional
        Per-proposal masses m_n; None means all 1.
    distance_floor : float
        Pairwise distances are clamped below by this before the power, so
        coincident means produce a large but finite push.
    zero_final : bool
        Force zero repulsion at t=T regardless of schedule.
    """

    schedule: str = "off"
    strength: float = 0.0
    decay_rate: float | None = None
    attenuation: float = 0.01
    masses: tuple[float, ...] | None = None
    distance_floor: float = 1e-9
    zero_final: bool = False

    def __post_init__(self):
        require(self.schedule in ("off", "constant", "exponential"),
                f"unknown schedule {self.schedule!r}")
        require(self.strength >= 0, "repulsion strength must be >= 0")
        require(self.decay_rate is None or self.decay_rate > 0,
                "decay_rate must be positive when given")
        require(0 < self.attenuation < 1, "attenuation must lie in (0, 1)")
        require(self.distance_floor > 0, "distance_floor must be positive")
        if self.masses is not None:
            require(all(m > 0 for m in self.masses), "masses must be positive")

    def resolved_decay_rate(self, n_iterations: int) -> float:
        if self.decay_rate is not None:
            return self.decay_rate
        if n_iterations <= 1:
            return 0.0
        return float(-np.log(self.attenuation) / (n_iterations - 1))


@dataclass(frozen=True)
class BacktrackConfig:
    """Stepsize halving for the preconditioned gradient move."""

    max_halvings: int = 30
    initial_step: float = 1.0

    def __post_init__(self):
        require(self.max_halvings >= 1, "max_halvings must be >= 1")
        require(self.initial_step > 0, "initial_step must be positive")


@dataclass(frozen=True)
class GramisConfig:
    """Complete configuration of one adaptation run.

    ``precondition=False`` replaces the covariance in the mean update with
    ``fixed_step * I`` (plain scaled-gradient ascent); together with
    ``repulsion.schedule="off"`` this spans the ablation grid.
    ``init_cov_mode="hessian"`` applies the covariance rule already at the
    initial means, falling back to the isotropic value where the negated
    Hessian is not positive definite.
    """

    n_proposals: int
    samples_per_proposal: int
    n_iterations: int
    init_box_low: tuple[float, ...]
    init_box_high: tuple[float, ...]
    init_sigma: float = 1.0
    init_cov_mode: str = "isotropic"
    precondition: bool = True
    fixed_step: float = 0.1
    repulsion: RepulsionConfig = field(default_factory=RepulsionConfig)
    backtrack: BacktrackConfig = field(default_factory=BacktrackConfig)

    def __post_init__(self):
        require(self.n_proposals >= 1, "n_proposals must be >= 1")
        require(self.samples_per_proposal >= 1, "samples_per_proposal must be >= 1")
        require(self.n_iterations >= 1, "n_iterations must be >= 1")
        require(self.init_sigma > 0, "init_sigma must be positive")
        require(self.fixed_step > 0, "fixed_step must be positive")
        require(self.init_cov_mode in ("isotropic", "hessian"),
                f"unknown init_cov_mode {self.init_cov_mode!r}")
        require(len(self.init_box_low) == len(self.init_box_high),
                "box bounds must share a dimension")
        if self.repulsion.masses is not None:
            require(len(self.repulsion.masses) == self.n_proposals,
                    "need one mass per proposal")


@dataclass
class IterationRecord:
    """State and weighted samples of one iteration."""

    t: int
    means: NDArray[np.float64]
    covariances: NDArray[np.float64]
    step_sizes: NDArray[np.float64]
    hessian_updated: NDArray[np.bool_]
    batch: SampleBatch
    log_weights: NDArray[np.float64]


def schedule_value(config: RepulsionConfig, t: int, n_iterations: int) -> float:
    """Repulsion strength G_t at iteration t of n_iterations."""
    if not 1 <= t <= n_iterations:
        raise InvalidParameter(f"t={t} outside 1..{n_iterations}")
    if config.zero_final and t == n_iterations:
        return 0.0
    if config.schedule == "off":
        return 0.0
    if config.schedule == "constant":
        return config.strength
    beta = config.resolved_decay_rate(n_iterations)
    return float(config.strength * np.exp(-beta * (t - 1)))


def _inverse_power_sum(means: NDArray, n: int, distance_floor: float) -> NDArray:
    """sum_{j != n} d_{n,j} / max(||d_{n,j}||, floor)^d with d_{n,j} = mu_n - mu_j.

    The j = n row is a zero vector, so it drops out without masking.
    """
    diffs = means[n] - means
    norms = np.maximum(np.linalg.norm(diffs, axis=1), distance_floor)
    return np.sum(diffs / norms[:, None] ** means.shape[1], axis=0)


def repulsion_sum(
    means: ArrayLike,
    n: int,
    strength: float,
    masses: ArrayLike | None = None,
    distance_floor: float = 1e-9,
) -> NDArray[np.float64]:
    """Total repulsion on mean n: sum_{j != n} G m_n m_j d_{n,j} / ||d_{n,j}||^d.

    The exponent is always the ambient dimension d, as the field analogy
    dictates, including d < 3 where that analogy is only formal.
    """
    mu = np.atleast_2d(np.asarray(means, dtype=float))
    n_means, dim = mu.shape
    if strength == 0.0 or n_means == 1:
        return np.zeros(dim)
    if masses is None:
        return strength * _inverse_power_sum(mu, n, distance_floor)
    m = np.asarray(masses, dtype=float)
    diffs = mu[n] - mu
    norms = np.maximum(np.linalg.norm(diffs, axis=1), distance_floor)
    weighted = (m / norms**dim)[:, None] * diffs
    return strength * m[n] * np.sum(weighted, axis=0)


def poisson_field(means: ArrayLike, n: int, distance_floor: float = 1e-9) -> NDArray[np.float64]:
    """Empirical field at mean n with the other means as unit sources:

        (1 / (N-1)) sum_{j != n} d_{n,j} / (S_{d-1}(1) ||d_{n,j}||^d),

    where S_{d-1}(1) is the unit-sphere surface area. Scaling repulsion_sum
    with strength = gamma / ((N-1) S_{d-1}(1)) and unit masses reproduces
    gamma times this vector.
    """
    mu = np.atleast_2d(np.asarray(means, dtype=float))
    n_means, dim = mu.shape
    if n_means == 1:
        return np.zeros(dim)
    total = _inverse_power_sum(mu, n, distance_floor)
    return total / ((n_means - 1) * unit_sphere_area(dim))


def _repulsion_all(
    means: NDArray, strength: float, masses, distance_floor: float
) -> NDArray:
    """Repulsion for every mean at once; row n equals repulsion_sum(means, n, ...)."""
    n_means, dim = means.shape
    if strength == 0.0 or n_means == 1:
        return np.zeros_like(means)
    diffs = means[:, None, :] - means[None, :, :]
    norms = np.maximum(np.linalg.norm(diffs, axis=2), distance_floor)
    scale = 1.0 / norms**dim
    if masses is not None:
        m = np.asarray(masses, dtype=float)
        scale = scale * (m[:, None] * m[None, :])
    return strength * np.sum(scale[:, :, None] * diffs, axis=1)


def _backtrack_batch(
    target: TargetDensity,
    means: NDArray,
    steps: NDArray,
    config: BacktrackConfig,
) -> tuple[NDArray, NDArray]:
    """Per-row stepsize search: the largest theta in {1, 1/2, ...} whose
    candidate does not decrease the log-density, else theta = 0 and no move.

    Tries max_halvings + 1 values, evaluating all still-searching rows in one
    batched density call per level.
    """
    reference = np.atleast_1d(target.log_density(means))
    points = means.copy()
    thetas = np.zeros(means.shape[0])
    active = np.arange(means.shape[0])
    theta = config.initial_step
    for _ in range(config.max_halvings + 1):
        candidates = means[active] + theta * steps[active]
        logs = np.atleast_1d(target.log_density(candidates))
        accepted = logs >= reference[active]
        taken = active[accepted]
        points[taken] = candidates[accepted]
        thetas[taken] = theta
        active = active[~accepted]
        if active.size == 0:
            break
        theta *= 0.5
    return thetas, points


def backtrack_stepsize(
    target: TargetDensity,
    mean: ArrayLike,
    cov_factor: SpdFactor,
    config: BacktrackConfig | None = None,
) -> tuple[float, NDArray[np.float64]]:
    """Stepsize for one preconditioned gradient move from ``mean``.

    Returns (theta, candidate point); theta = 0 with the unmoved point when
    every halving fails. Repulsion plays no part here.
    """
    config = config or BacktrackConfig()
    mu = np.asarray(mean, dtype=float)
    grad = np.asarray(target.grad_log_density(mu))
    if not np.all(np.isfinite(grad)):
        raise NonFiniteGradient(f"gradient at {mu} is not finite")
    step = cov_factor.matrix() @ grad
    thetas, points = _backtrack_batch(target, mu[None, :], step[None, :], config)
    return float(thetas[0]), points[0]


def adapt_means(
    bank: ProposalBank,
    target: TargetDensity,
    t: int,
    config: GramisConfig,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """One mean update for the whole bank, computed from the bank's current
    state simultaneously (no sequential drift):

        mu_n <- backtracked Newton point + sum of pairwise repulsion.

    With precondition=False the covariance is replaced by fixed_step * I.
    Returns (new means, accepted stepsizes).
    """
    means = bank.means
    grads = np.atleast_2d(target.grad_log_density(means))
    if not np.all(np.isfinite(grads)):
        raise NonFiniteGradient("non-finite gradient in mean adaptation")
    if config.precondition:
        steps = np.einsum("nij,nj->ni", bank.covariances, grads)
    else:
        steps = config.fixed_step * grads
    thetas, points = _backtrack_batch(target, means, steps, config.backtrack)
    strength = schedule_value(config.repulsion, t, config.n_iterations)
    repulsion = _repulsion_all(
        means, strength, config.repulsion.masses, config.repulsion.distance_floor
    )
    return points + repulsion, thetas


def adapt_covariances(
    bank: ProposalBank,
    target: TargetDensity,
    means: NDArray,
) -> tuple[NDArray, list[SpdFactor], NDArray]:
    """Covariance rule at the updated means: the inverse negated Hessian when
    it is positive definite, otherwise the proposal's previous covariance.

    Total by construction: every failure keeps the previous value, and every
    returned covariance carries a fresh factorization.
    """
    hessians = target.hessian_log_density(means)
    if hessians.ndim == 2:
        hessians = hessians[None, :, :]
    dim = bank.dim
    eye = np.eye(dim)
    covs = np.empty((bank.size, dim, dim))
    factors: list[SpdFactor] = []
    updated = np.zeros(bank.size, dtype=bool)
    for n in range(bank.size):
        new_cov = None
        if np.all(np.isfinite(hessians[n])):
            try:
                precision_factor = spd_factorize(-hessians[n])
                candidate = solve_spd(precision_factor, eye)
                new_factor = spd_factorize(candidate)
                new_cov = new_factor.matrix()
            except NotPositiveDefinite:
                new_cov = None
        if new_cov is None:
            covs[n] = bank.proposals[n].cov
            factors.append(bank.proposals[n].cov_factor)
        else:
            covs[n] = new_cov
            factors.append(new_factor)
            updated[n] = True
    return covs, factors, updated


def dm_mis_log_weights(
    bank: ProposalBank,
    batch: SampleBatch,
    target: TargetDensity,
    smis: bool = False,
) -> NDArray[np.float64]:
    """Log importance weights for a batch drawn from this bank.

    Deterministic-mixture weights by default: log pi(x) minus the log of the
    equally-weighted mixture of all proposals, each with its own parameters.
    With ``smis=True``, each sample is weighted against its own proposal only
    (the standard-MIS comparison mode).
    """
    log_pi = np.atleast_1d(target.log_density(batch.x))
    if smis:
        logs = per_proposal_log_pdf(bank, batch.x)
        log_q = logs[batch.proposal_index, np.arange(len(batch))]
    else:
        log_q = mixture_log_pdf(bank, batch.x)
    log_w = log_pi - log_q
    if np.all(np.isneginf(log_w)):
        raise DegenerateWeights("every weight in the batch is zero")
    return log_w


def _resolve_streams(rng, n_proposals: int):
    """(init stream, per-proposal streams). An integer seed yields independent
    child streams keyed (seed, 0) for initialization and (seed, 1 + n) per
    proposal; a Generator instance is used sequentially for everything.
    """
    if isinstance(rng, np.random.Generator):
        return rng, [rng] * n_proposals
    seed = int(rng)
    init = rng_stream(seed, 0)
    return init, [rng_stream(seed, 1 + n) for n in range(n_proposals)]


def _rebuild_bank(means, covs, factors, iteration: int) -> ProposalBank:
    proposals = [
        GaussianProposal(mean=np.array(m), cov=np.array(c), cov_factor=f)
        for m, c, f in zip(means, covs, factors)
    ]
    return ProposalBank(proposals=proposals, iteration=iteration)


def run_gramis(
    target: TargetDensity,
    config: GramisConfig,
    rng: int | np.random.Generator,
) -> list[IterationRecord]:
    """Run the full adaptation loop and return one record per iteration.

    Per iteration: means adapt from the t-1 snapshot, covariances adapt at
    the new means, each proposal draws its samples, and the batch is weighted
    against the fresh mixture.
    """
    dim = target.dim
    if len(config.init_box_low) != dim:
        raise InvalidParameter(
            f"init box has dimension {len(config.init_box_low)}, target has {dim}"
        )
    init_stream, proposal_streams = _resolve_streams(rng, config.n_proposals)
    init_cov = config.init_sigma**2 * np.eye(dim)
    bank = bank_init(
        np.array(config.init_box_low),
        np.array(config.init_box_high),
        config.n_proposals,
        init_cov,
        init_stream,
    )
    if config.init_cov_mode == "hessian":
        covs, factors, _ = adapt_covariances(bank, target, bank.means)
        bank = _rebuild_bank(bank.means, covs, factors, iteration=0)

    records: list[IterationRecord] = []
    for t in range(1, config.n_iterations + 1):
        new_means, thetas = adapt_means(bank, target, t, config)
        covs, factors, updated = adapt_covariances(bank, target, new_means)
        bank = _rebuild_bank(new_means, covs, factors, iteration=t)
        batch = bank_sample(bank, config.samples_per_proposal, proposal_streams)
        log_weights = dm_mis_log_weights(bank, batch, target)
        records.append(
            IterationRecord(
                t=t,
                means=bank.means,
                covariances=bank.covariances,
                step_sizes=thetas,
                hessian_updated=updated,
                batch=batch,
                log_weights=log_weights,
            )
        )
    return records
