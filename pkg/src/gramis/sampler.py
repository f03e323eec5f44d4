"""Estimator-style front end over the adaptation engine."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .engine import BacktrackConfig, GramisConfig, RepulsionConfig, run_gramis
from .exceptions import RequiresKnownZ
from .estimators import (
    EstimateReport,
    WeightedSampleSet,
    chi2_estimate,
    componentwise_square,
    identity,
    snis_estimate,
    uis_estimate,
    window_select,
    z_estimate,
)
from .numerics import rng_stream
from .proposals import GaussianProposal, ProposalBank
from .targets import TargetDensity


class GramisSampler(BaseEstimator):
    """Adaptive multiple importance sampler with a scikit-learn style API.

    ``fit`` runs the adaptation loop against a target density; the fitted
    object then exposes the weighted samples and the moment / normalizing
    constant estimates computed from the configured iteration window.

    Parameters mirror the engine configuration; see
    :class:`gramis.engine.GramisConfig`. ``init_box_low`` / ``init_box_high``
    default to [-4, 4] in every coordinate of the target.

    Examples
    --------
    >>> from gramis import GramisSampler
    >>> from gramis.targets import GaussianMixtureTarget
    >>> target = GaussianMixtureTarget([1.0], [[0.0, 0.0]], [np.eye(2)])
    >>> sampler = GramisSampler(n_proposals=5, n_iterations=5, random_state=0)
    >>> sampler.fit(target).estimate_mean().shape
    (2,)
    """

    def __init__(
        self,
        n_proposals: int = 50,
        samples_per_proposal: int = 20,
        n_iterations: int = 20,
        init_box_low=None,
        init_box_high=None,
        init_sigma: float = 1.0,
        init_cov_mode: str = "isotropic",
        precondition: bool = True,
        fixed_step: float = 0.1,
        repulsion: str = "off",
        repulsion_strength: float = 0.0,
        repulsion_decay_rate: float | None = None,
        repulsion_attenuation: float = 0.01,
        repulsion_masses=None,
        distance_floor: float = 1e-9,
        zero_final_repulsion: bool = False,
        max_halvings: int = 30,
        window: str = "last_half",
        random_state=None,
    ):
        self.n_proposals = n_proposals
        self.samples_per_proposal = samples_per_proposal
        self.n_iterations = n_iterations
        self.init_box_low = init_box_low
        self.init_box_high = init_box_high
        self.init_sigma = init_sigma
        self.init_cov_mode = init_cov_mode
        self.precondition = precondition
        self.fixed_step = fixed_step
        self.repulsion = repulsion
        self.repulsion_strength = repulsion_strength
        self.repulsion_decay_rate = repulsion_decay_rate
        self.repulsion_attenuation = repulsion_attenuation
        self.repulsion_masses = repulsion_masses
        self.distance_floor = distance_floor
        self.zero_final_repulsion = zero_final_repulsion
        self.max_halvings = max_halvings
        self.window = window
        self.random_state = random_state

    def _engine_config(self, dim: int) -> GramisConfig:
        low = self.init_box_low if self.init_box_low is not None else (-4.0,) * dim
        high = self.init_box_high if self.init_box_high is not None else (4.0,) * dim
        masses = (
            tuple(float(m) for m in self.repulsion_masses)
            if self.repulsion_masses is not None
            else None
        )
        return GramisConfig(
            n_proposals=self.n_proposals,
            samples_per_proposal=self.samples_per_proposal,
            n_iterations=self.n_iterations,
            init_box_low=tuple(float(v) for v in low),
            init_box_high=tuple(float(v) for v in high),
            init_sigma=self.init_sigma,
            init_cov_mode=self.init_cov_mode,
            precondition=self.precondition,
            fixed_step=self.fixed_step,
            repulsion=RepulsionConfig(
                schedule=self.repulsion,
                strength=self.repulsion_strength,
                decay_rate=self.repulsion_decay_rate,
                attenuation=self.repulsion_attenuation,
                masses=masses,
                distance_floor=self.distance_floor,
                zero_final=self.zero_final_repulsion,
            ),
            backtrack=BacktrackConfig(max_halvings=self.max_halvings),
        )

    def fit(self, target: TargetDensity, y=None) -> "GramisSampler":
        """Run the adaptation loop against ``target`` and retain all records."""
        rng = self.random_state
        if rng is None:
            rng = np.random.default_rng()
        self.config_ = self._engine_config(target.dim)
        self.records_ = run_gramis(target, self.config_, rng)
        self.target_ = target
        self.n_features_in_ = target.dim
        self.sample_set_ = WeightedSampleSet.from_records(self.records_)
        return self

    def _check_fitted(self):
        if not hasattr(self, "records_"):
            raise NotFittedError("this sampler is not fitted; call fit first")

    @property
    def final_means_(self):
        self._check_fitted()
        return self.records_[-1].means

    @property
    def final_covariances_(self):
        self._check_fitted()
        return self.records_[-1].covariances

    def final_bank(self) -> ProposalBank:
        """Proposal bank of the last iteration."""
        self._check_fitted()
        proposals = [
            GaussianProposal.create(m, c)
            for m, c in zip(self.final_means_, self.final_covariances_)
        ]
        return ProposalBank(proposals=proposals, iteration=self.records_[-1].t)

    def weighted_samples(self, window: str | None = None) -> WeightedSampleSet:
        """Weighted samples of the configured (or overridden) window."""
        self._check_fitted()
        return window_select(self.sample_set_, window or self.window)

    def estimate_z(self, window: str | None = None) -> float:
        self._check_fitted()
        return z_estimate(self.weighted_samples(window))

    def estimate_mean(self, window: str | None = None, kind: str = "snis"):
        self._check_fitted()
        samples = self.weighted_samples(window)
        if kind == "snis":
            return snis_estimate(samples, identity)
        return uis_estimate(samples, identity, self._known_z())

    def estimate_second_moment(self, window: str | None = None, kind: str = "snis"):
        self._check_fitted()
        samples = self.weighted_samples(window)
        if kind == "snis":
            return snis_estimate(samples, componentwise_square)
        return uis_estimate(samples, componentwise_square, self._known_z())

    def chi2(self, n_samples: int = 100_000, rng=None) -> float:
        """Chi-square divergence diagnostic against the final mixture."""
        self._check_fitted()
        if rng is None:
            if isinstance(self.random_state, (int, np.integer)):
                rng = rng_stream(int(self.random_state), 10**6)
            else:
                rng = np.random.default_rng(0)
        return chi2_estimate(self.target_, self.final_bank(), n_samples, rng)

    def report(self, chi2_samples: int | None = None) -> EstimateReport:
        """Bundle the window estimates into one report."""
        self._check_fitted()
        samples = self.weighted_samples()
        chi2 = self.chi2(chi2_samples) if chi2_samples else None
        return EstimateReport(
            z_hat=z_estimate(samples),
            snis_mean=snis_estimate(samples, identity),
            snis_second_moment=snis_estimate(samples, componentwise_square),
            chi2=chi2,
            window=(int(np.min(samples.t)), int(np.max(samples.t))),
        )

    def _known_z(self) -> float:
        truth = self.target_.truth
        if truth is None or truth.normalizing_constant is None:
            raise RequiresKnownZ("unnormalized estimates need a known constant")
        return truth.normalizing_constant
