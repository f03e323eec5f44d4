"""Proposal bank: initialization, sampling, mixture density."""

import math

import numpy as np
import pytest

from gramis import (
    GaussianProposal,
    InvalidBox,
    ProposalBank,
    bank_init,
    bank_sample,
    mixture_log_pdf,
    rng_stream,
    spd_factorize,
)
from gramis.harness import TOY_TARGET, build_target


def small_bank():
    return bank_init([1.0, 1.0], [6.0, 6.0], 5, 0.25 * np.eye(2), rng_stream(42, 0))


class TestBankInit:
    def test_means_inside_box(self):
        bank = bank_init([1.0, 1.0], [6.0, 6.0], 50, np.eye(2), rng_stream(0, 0))
        means = np.array([p.mean for p in bank.proposals])
        assert means.shape == (50, 2)
        assert np.all(means >= 1.0) and np.all(means <= 6.0)

    def test_shared_initial_covariance(self):
        bank = small_bank()
        for p in bank.proposals:
            np.testing.assert_array_equal(p.cov, 0.25 * np.eye(2))

    def test_degenerate_box_pins_means(self):
        bank = bank_init([2.0, 3.0], [2.0, 3.0], 4, np.eye(2), rng_stream(1, 0))
        for p in bank.proposals:
            np.testing.assert_array_equal(p.mean, [2.0, 3.0])

    def test_inverted_box_rejected(self):
        with pytest.raises(InvalidBox):
            bank_init([6.0, 1.0], [1.0, 6.0], 3, np.eye(2), rng_stream(0, 0))

    def test_same_seed_identical(self):
        a = small_bank()
        b = small_bank()
        for pa, pb in zip(a.proposals, b.proposals):
            np.testing.assert_array_equal(pa.mean, pb.mean)


class TestBankSample:
    def test_count_and_tags(self):
        bank = small_bank()
        batch = bank_sample(bank, 3, rng_stream(7, 0))
        assert len(batch) == 15
        assert batch.x.shape == (15, 2)
        np.testing.assert_array_equal(batch.proposal_index, np.repeat(np.arange(5), 3))
        np.testing.assert_array_equal(batch.draw_index, np.tile(np.arange(3), 5))

    def test_samples_track_their_proposal(self):
        bank = ProposalBank(
            proposals=[GaussianProposal.create([0.0, 0.0], 1e-8 * np.eye(2)),
                       GaussianProposal.create([100.0, 100.0], 1e-8 * np.eye(2))],
            iteration=0,
        )
        batch = bank_sample(bank, 10, rng_stream(8, 0))
        for n in range(2):
            rows = batch.x[batch.proposal_index == n]
            assert np.max(np.abs(rows - bank.proposals[n].mean)) < 1e-3

    def test_same_seed_identical(self):
        bank = small_bank()
        a = bank_sample(bank, 4, rng_stream(9, 0))
        b = bank_sample(bank, 4, rng_stream(9, 0))
        np.testing.assert_array_equal(a.x, b.x)


class TestMixtureLogPdf:
    def test_identical_proposals_equal_single(self):
        p = GaussianProposal.create([0.5, -0.5], np.array([[1.0, 0.2], [0.2, 0.8]]))
        bank = ProposalBank(proposals=[p, p, p], iteration=0)
        pts = np.random.default_rng(2).normal(size=(100, 2))
        from gramis import log_mvn_pdf

        single = log_mvn_pdf(pts, p.mean, p.cov_factor)
        np.testing.assert_allclose(mixture_log_pdf(bank, pts), single, atol=1e-12)

    def test_two_far_components(self):
        bank = ProposalBank(
            proposals=[GaussianProposal.create([100.0, 0.0], np.eye(2)),
                       GaussianProposal.create([-100.0, 0.0], np.eye(2))],
            iteration=0,
        )
        val = mixture_log_pdf(bank, np.array([100.0, 0.0]))
        assert val == pytest.approx(math.log(0.5) - math.log(2 * math.pi), abs=1e-12)

    def test_far_point_finite(self):
        bank = small_bank()
        val = mixture_log_pdf(bank, np.array([1e6, 1e6]))
        assert np.isfinite(val) and val < -1e9

    def test_cached_factor_matches_fresh(self):
        p = GaussianProposal.create([0.0, 0.0], np.array([[2.0, 0.3], [0.3, 1.0]]))
        fresh = spd_factorize(p.cov)
        np.testing.assert_allclose(p.cov_factor.lower, fresh.lower, atol=1e-15)

    def test_self_consistency_z_estimate(self):
        # weights pi/psi from the bank's own draws estimate Z = 1
        target = build_target(TOY_TARGET)
        bank = ProposalBank(
            proposals=[GaussianProposal.create([-5.0, -5.0], 4.0 * np.eye(2)),
                       GaussianProposal.create([6.0, 4.0], 4.0 * np.eye(2))],
            iteration=0,
        )
        batch = bank_sample(bank, 50_000, rng_stream(10, 0))
        log_w = target.log_density(batch.x) - mixture_log_pdf(bank, batch.x)
        w = np.exp(log_w)
        se = w.std() / math.sqrt(len(w))
        assert abs(w.mean() - 1.0) < 3 * se
