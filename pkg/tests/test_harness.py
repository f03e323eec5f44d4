"""Experiment harness: config round trips, deterministic artifacts, sweeps,
derivative checking, and threshold verification.

Run-shaped tests use deliberately tiny configurations; the full-scale
settings live in the acceptance suite.
"""

import dataclasses
import json
from pathlib import Path

import numpy as np
import pytest

from gramis import (
    ExperimentConfig,
    GramisConfig,
    InvalidParameter,
    RepulsionConfig,
    build_target,
    builtin_cells,
    check_gradients,
    config_from_dict,
    config_to_dict,
    load_config,
    run_experiment,
    save_config,
    sweep,
)
from gramis.engine import BacktrackConfig
from gramis.harness import (
    BUILTINS,
    banana_init_box,
    banana_target,
    verify_results,
)


def tiny_config(name="tiny", **overrides):
    gramis = GramisConfig(
        n_proposals=4, samples_per_proposal=3, n_iterations=4,
        init_box_low=(-3.0, -3.0), init_box_high=(3.0, 3.0),
        init_sigma=1.0,
        repulsion=RepulsionConfig(schedule="exponential", strength=0.5),
        backtrack=BacktrackConfig(),
    )
    base = dict(
        name=name,
        target={"family": "gaussian_mixture", "weights": [1.0],
                "means": [[0.0, 0.0]], "covariances": [[[1.0, 0.0], [0.0, 1.0]]]},
        gramis=gramis,
        runs=3,
        base_seed=99,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


class TestConfigSerialization:
    @pytest.mark.parametrize("name", sorted(BUILTINS))
    def test_builtin_round_trip(self, name, tmp_path):
        for label, cfg in builtin_cells(name):
            path = tmp_path / f"{label}.json"
            save_config(cfg, path)
            assert load_config(path) == cfg

    def test_dict_round_trip(self):
        cfg = tiny_config()
        assert config_from_dict(config_to_dict(cfg)) == cfg

    def test_json_is_plain_data(self, tmp_path):
        path = tmp_path / "cfg.json"
        save_config(tiny_config(), path)
        payload = json.loads(path.read_text())
        assert payload["name"] == "tiny"
        assert payload["gramis"]["n_proposals"] == 4

    def test_unknown_builtin(self):
        with pytest.raises(InvalidParameter):
            builtin_cells("no-such-experiment")

    def test_unknown_family(self):
        with pytest.raises(InvalidParameter):
            build_target({"family": "cauchy"})


class TestRunExperiment:
    def test_reports_and_table(self, tmp_path):
        result = run_experiment(tiny_config(), out_dir=tmp_path)
        assert len(result.reports) == 3
        assert result.table.n_runs == 3
        assert result.table.z < 0.5  # unimodal Gaussian, trivially easy
        assert (tmp_path / "summary.json").exists()
        assert (tmp_path / "run_0.csv").exists()

    def test_deterministic_artifacts(self, tmp_path):
        a_dir, b_dir = tmp_path / "a", tmp_path / "b"
        run_experiment(tiny_config(), out_dir=a_dir, trace=True)
        run_experiment(tiny_config(), out_dir=b_dir, trace=True)
        for fname in ("run_0.csv", "run_2.csv", "trace_0.csv", "grid.csv"):
            assert (a_dir / fname).read_bytes() == (b_dir / fname).read_bytes()

    def test_run_csv_schema(self, tmp_path):
        import pandas as pd

        run_experiment(tiny_config(), out_dir=tmp_path)
        frame = pd.read_csv(tmp_path / "run_0.csv")
        assert list(frame.columns) == ["t", "n", "k", "x1", "x2", "log_w"]
        # 4 iterations x 4 proposals x 3 draws
        assert len(frame) == 48
        assert frame["t"].max() == 4

    def test_trace_csv_schema(self, tmp_path):
        import pandas as pd

        run_experiment(tiny_config(), out_dir=tmp_path, trace=True)
        frame = pd.read_csv(tmp_path / "trace_0.csv")
        assert list(frame.columns) == ["t", "n", "mu1", "mu2", "s11", "s12", "s22"]
        assert len(frame) == 16

    def test_grid_csv_written_for_planar_targets(self, tmp_path):
        import pandas as pd

        run_experiment(tiny_config(), out_dir=tmp_path, trace=True, grid_resolution=21)
        frame = pd.read_csv(tmp_path / "grid.csv")
        assert list(frame.columns) == ["x1", "x2", "log_density"]
        assert len(frame) == 21 * 21

    def test_summary_payload(self, tmp_path):
        run_experiment(tiny_config(), out_dir=tmp_path)
        payload = json.loads((tmp_path / "summary.json").read_text())
        assert payload["name"] == "tiny"
        assert payload["failures"] == 0
        assert len(payload["runs"]) == 3
        assert payload["rmse"]["z"] >= 0
        assert payload["config"]["runs"] == 3

    def test_seed_offsets_are_stream_independent(self, tmp_path):
        # run r of a batch must equal run 0 of a batch starting at seed+r
        batch = run_experiment(tiny_config())
        lone = run_experiment(tiny_config(runs=1, base_seed=99 + 2))
        assert batch.reports[2].z_hat == lone.reports[0].z_hat

    def test_parallel_matches_serial(self, tmp_path):
        serial = run_experiment(tiny_config())
        parallel = run_experiment(tiny_config(), n_jobs=2)
        for a, b in zip(serial.reports, parallel.reports):
            assert a.z_hat == b.z_hat
            np.testing.assert_array_equal(a.snis_mean, b.snis_mean)


class TestSweep:
    def test_iterations_axis(self, tmp_path):
        out = sweep(tiny_config(), "iterations", [2, 4], out_dir=tmp_path)
        rows = out["rows"]
        assert [r["value"] for r in rows] == [2, 4]
        for r in rows:
            assert r["mse_mean"] >= 0
        assert (tmp_path / "iterations-2" / "summary.json").exists()
        assert (tmp_path / "sweep_summary.json").exists()

    def test_dimension_axis_rebuilds_ridge_box(self):
        cfg = tiny_config(
            name="b", target=banana_target(2),
            gramis=dataclasses.replace(
                tiny_config().gramis,
                init_box_low=banana_init_box(2)[0],
                init_box_high=banana_init_box(2)[1],
            ),
        )
        from gramis.harness import _config_for_axis

        for dim in (2, 3, 5):
            sub = _config_for_axis(cfg, "dimension", dim)
            assert sub.target["dim"] == dim
            low, high = banana_init_box(dim)
            assert sub.gramis.init_box_low == low
            assert sub.gramis.init_box_high == high

    def test_dimension_axis_requires_banana(self):
        with pytest.raises(InvalidParameter):
            sweep(tiny_config(), "dimension", [2, 3])

    def test_unknown_axis(self):
        with pytest.raises(InvalidParameter):
            sweep(tiny_config(), "time", [1])


class TestCheckGradients:
    def test_gaussian_mixture_passes(self):
        report = check_gradients(tiny_config().target, n_points=30, seed=1)
        assert report["passed"]
        assert report["max_grad_rel_err"] < report["grad_threshold"]
        assert report["max_hessian_rel_err"] < report["hessian_threshold"]

    def test_heavy_tail_exclusion_zone(self):
        from gramis.harness import gg5_target

        report = check_gradients(gg5_target(0.5), n_points=30, seed=2)
        assert report["passed"]

    def test_banana_high_dimension(self):
        report = check_gradients(banana_target(20), n_points=15, seed=3)
        assert report["passed"]


class TestVerifyResults:
    def make_summaries(self, z_full=0.01, mean_full=0.5, z_neither=0.5):
        return {
            "full-sigma1": {"rmse": {"z": z_full, "mean": mean_full}},
            "neither-sigma1": {"rmse": {"z": z_neither}},
        }

    def test_passing_summaries(self):
        failures = verify_results("gm5-ablation", self.make_summaries())
        assert failures == []

    def test_threshold_violation_reported(self):
        failures = verify_results("gm5-ablation", self.make_summaries(z_full=0.2))
        assert any("z" in f for f in failures)

    def test_ratio_rule(self):
        # neither/full ratio below 5 must fail
        failures = verify_results("gm5-ablation", self.make_summaries(z_full=0.04, z_neither=0.1))
        assert any("ratio" in f.lower() or "x" in f for f in failures)

    def test_run_scale_widens_statistical_limits(self):
        # at quarter runs the scaled limit doubles
        summaries = self.make_summaries(z_full=0.08)
        assert verify_results("gm5-ablation", summaries) != []
        assert verify_results("gm5-ablation", summaries, run_scale=2.0) == []

    def test_unknown_name_has_no_rules(self):
        assert verify_results("toy-2comp", {"whatever": {}}) == []
