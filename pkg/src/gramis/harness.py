"""Config-driven experiment runner: builtin benchmark configurations, seeded
replication with a worker pool, dimension/iteration sweeps, gradient checking,
and flat CSV/JSON artifacts for downstream plotting."""

from __future__ import annotations

import dataclasses
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from numpy.typing import NDArray

from .engine import BacktrackConfig, GramisConfig, RepulsionConfig, run_gramis
from .estimators import (
    EstimateReport,
    RmseTable,
    WeightedSampleSet,
    chi2_estimate,
    componentwise_square,
    identity,
    rmse_aggregate,
    snis_estimate,
    uis_estimate,
    window_select,
    z_estimate,
)
from .exceptions import GramisError, InvalidParameter
from .numerics import fd_gradient, fd_jacobian, rng_stream
from .proposals import GaussianProposal, ProposalBank
from .targets import BananaTarget, GaussianMixtureTarget, GGMixtureTarget, TargetDensity

_UINT64_MASK = (1 << 64) - 1


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: a target, an engine configuration, and replication."""

    name: str
    target: dict
    gramis: GramisConfig
    runs: int = 100
    base_seed: int = 1234
    window: str = "last_half"
    metrics: tuple[str, ...] = ("z", "mean", "second_moment")
    chi2_samples: int = 100_000

    def __post_init__(self):
        if self.runs < 1:
            raise InvalidParameter("runs must be >= 1")


def config_to_dict(config: ExperimentConfig) -> dict:
    """JSON-compatible dictionary; inverse of config_from_dict."""
    g = config.gramis
    r = g.repulsion
    return {
        "name": config.name,
        "target": config.target,
        "gramis": {
            "n_proposals": g.n_proposals,
            "samples_per_proposal": g.samples_per_proposal,
            "n_iterations": g.n_iterations,
            "init_box_low": list(g.init_box_low),
            "init_box_high": list(g.init_box_high),
            "init_sigma": g.init_sigma,
            "init_cov_mode": g.init_cov_mode,
            "precondition": g.precondition,
            "fixed_step": g.fixed_step,
            "repulsion": {
                "schedule": r.schedule,
                "strength": r.strength,
                "decay_rate": r.decay_rate,
                "attenuation": r.attenuation,
                "masses": list(r.masses) if r.masses is not None else None,
                "distance_floor": r.distance_floor,
                "zero_final": r.zero_final,
            },
            "backtrack": {
                "max_halvings": g.backtrack.max_halvings,
                "initial_step": g.backtrack.initial_step,
            },
        },
        "runs": config.runs,
        "base_seed": config.base_seed,
        "window": config.window,
        "metrics": list(config.metrics),
        "chi2_samples": config.chi2_samples,
    }


def config_from_dict(data: dict) -> ExperimentConfig:
    g = data["gramis"]
    r = g.get("repulsion", {})
    b = g.get("backtrack", {})
    repulsion = RepulsionConfig(
        schedule=r.get("schedule", "off"),
        strength=r.get("strength", 0.0),
        decay_rate=r.get("decay_rate"),
        attenuation=r.get("attenuation", 0.01),
        masses=tuple(r["masses"]) if r.get("masses") is not None else None,
        distance_floor=r.get("distance_floor", 1e-9),
        zero_final=r.get("zero_final", False),
    )
    backtrack = BacktrackConfig(
        max_halvings=b.get("max_halvings", 30),
        initial_step=b.get("initial_step", 1.0),
    )
    gramis = GramisConfig(
        n_proposals=g["n_proposals"],
        samples_per_proposal=g["samples_per_proposal"],
        n_iterations=g["n_iterations"],
        init_box_low=tuple(float(v) for v in g["init_box_low"]),
        init_box_high=tuple(float(v) for v in g["init_box_high"]),
        init_sigma=g.get("init_sigma", 1.0),
        init_cov_mode=g.get("init_cov_mode", "isotropic"),
        precondition=g.get("precondition", True),
        fixed_step=g.get("fixed_step", 0.1),
        repulsion=repulsion,
        backtrack=backtrack,
    )
    return ExperimentConfig(
        name=data["name"],
        target=data["target"],
        gramis=gramis,
        runs=data.get("runs", 100),
        base_seed=data.get("base_seed", 1234),
        window=data.get("window", "last_half"),
        metrics=tuple(data.get("metrics", ("z", "mean", "second_moment"))),
        chi2_samples=data.get("chi2_samples", 100_000),
    )


def save_config(config: ExperimentConfig, path) -> None:
    Path(path).write_text(json.dumps(config_to_dict(config), indent=2) + "\n")


def load_config(path) -> ExperimentConfig:
    return config_from_dict(json.loads(Path(path).read_text()))


def build_target(spec: dict) -> TargetDensity:
    """Construct a target density from its config dictionary."""
    family = spec.get("family")
    if family == "gaussian_mixture":
        return GaussianMixtureTarget(spec["weights"], spec["means"], spec["covariances"])
    if family == "gg_mixture":
        return GGMixtureTarget(
            spec["weights"],
            spec["means"],
            spec["scales"],
            spec["shapes"],
            delta=spec.get("delta", 1e-5),
        )
    if family == "banana":
        return BananaTarget(dim=spec["dim"], b=spec["b"], c=spec["c"])
    raise InvalidParameter(f"unknown target family {family!r}")


# ---------------------------------------------------------------------------
# builtin experiment configurations

TOY_TARGET = {
    "family": "gaussian_mixture",
    "weights": [0.5, 0.5],
    "means": [[-5.0, -5.0], [6.0, 4.0]],
    "covariances": [
        [[0.25, 0.0], [0.0, 0.25]],
        [[0.52, 0.48], [0.48, 0.52]],
    ],
}

GM5_TARGET = {
    "family": "gaussian_mixture",
    "weights": [0.2, 0.2, 0.2, 0.2, 0.2],
    "means": [
        [-10.0, -10.0],
        [0.0, 16.0],
        [13.0, 8.0],
        [-9.0, 7.0],
        [14.0, -4.0],
    ],
    "covariances": [
        [[5.0, 2.0], [2.0, 5.0]],
        [[2.0, -1.3], [-1.3, 2.0]],
        [[2.0, 0.8], [0.8, 2.0]],
        [[3.0, 1.2], [1.2, 0.5]],
        [[0.2, -0.1], [-0.1, 0.2]],
    ],
}


def gg5_target(shape: float, delta: float = 1e-5) -> dict:
    eye = [[1.0, 0.0], [0.0, 1.0]]
    return {
        "family": "gg_mixture",
        "weights": [0.2] * 5,
        "means": GM5_TARGET["means"],
        "scales": [eye] * 5,
        "shapes": [shape] * 5,
        "delta": delta,
    }


def banana_target(dim: int, b: float = 3.0, c: float = 1.0) -> dict:
    return {"family": "banana", "dim": dim, "b": b, "c": c}


def _toy_config(label: str, *, precondition: bool, schedule: str, strength: float) -> ExperimentConfig:
    return ExperimentConfig(
        name=label,
        target=TOY_TARGET,
        gramis=GramisConfig(
            n_proposals=50,
            samples_per_proposal=20,
            n_iterations=20,
            init_box_low=(1.0, 1.0),
            init_box_high=(6.0, 6.0),
            init_sigma=1.0,
            precondition=precondition,
            fixed_step=0.1,
            repulsion=RepulsionConfig(schedule=schedule, strength=strength),
        ),
        runs=100,
        base_seed=1234,
    )


def _toy_builtin():
    return [("toy-2comp", _toy_config("toy-2comp", precondition=True,
                                      schedule="exponential", strength=0.5))]


def _toy_ablation_builtin():
    return [
        ("full", _toy_config("full", precondition=True, schedule="exponential", strength=0.5)),
        ("constant", _toy_config("constant", precondition=True, schedule="constant", strength=0.5)),
        ("no-repulsion", _toy_config("no-repulsion", precondition=True, schedule="off", strength=0.0)),
        ("no-precondition", _toy_config("no-precondition", precondition=False, schedule="off", strength=0.0)),
    ]


def _gm5_config(label: str, sigma: float, *, precondition: bool, repulsion_on: bool) -> ExperimentConfig:
    schedule = "exponential" if repulsion_on else "off"
    strength = 0.05 if repulsion_on else 0.0
    return ExperimentConfig(
        name=label,
        target=GM5_TARGET,
        gramis=GramisConfig(
            n_proposals=50,
            samples_per_proposal=20,
            n_iterations=20,
            init_box_low=(-15.0, -15.0),
            init_box_high=(15.0, 15.0),
            init_sigma=sigma,
            precondition=precondition,
            fixed_step=0.1,
            repulsion=RepulsionConfig(schedule=schedule, strength=strength),
        ),
        runs=100,
        base_seed=1234,
    )


def _gm5_ablation_builtin():
    cells = []
    variants = [
        ("full", True, True),
        ("no-repulsion", True, False),
        ("no-precondition", False, True),
        ("neither", False, False),
    ]
    for variant, precondition, repulsion_on in variants:
        for sigma in (1.0, 3.0, 5.0):
            label = f"{variant}-sigma{sigma:g}"
            cells.append(
                (label, _gm5_config(label, sigma, precondition=precondition,
                                    repulsion_on=repulsion_on))
            )
    return cells


def _gg5_config(shape: float) -> ExperimentConfig:
    label = f"eta{shape:g}"
    return ExperimentConfig(
        name=label,
        target=gg5_target(shape),
        gramis=GramisConfig(
            n_proposals=50,
            samples_per_proposal=20,
            n_iterations=20,
            init_box_low=(13.0, -8.0),
            init_box_high=(15.0, -6.0),
            init_sigma=1.0,
            repulsion=RepulsionConfig(schedule="exponential", strength=1.0),
        ),
        runs=100,
        base_seed=1234,
        metrics=("z", "mean", "second_moment", "chi2"),
    )


def _gg5_builtin():
    return [(f"eta{s:g}", _gg5_config(s)) for s in (0.5, 1.0, 1.5)]


def banana_init_box(dim: int, b: float = 3.0, c: float = 1.0) -> tuple[tuple, tuple]:
    """Initialization box covering the curved ridge of the banana target.

    The ridge x2 = b c^2 - b x1^2 spans x2 down to b c^2 - 9 b c^2 over the
    three-sigma range of x1; a box that stops short of that leaves the arms
    without proposals, and with repulsion off nothing ever moves them there
    (gradient flow only runs inward along the valley).
    """
    reach = 3.0 * c
    low = (-reach - 1.0, b * c * c - b * reach**2 - 3.0) + (-4.0,) * (dim - 2)
    high = (reach + 1.0, b * c * c + 3.0) + (4.0,) * (dim - 2)
    return low, high


def _banana_config(dim: int, repulsion_strength: float = 0.0) -> ExperimentConfig:
    schedule = "constant" if repulsion_strength > 0 else "off"
    low, high = banana_init_box(dim)
    return ExperimentConfig(
        name=f"banana-d{dim}",
        target=banana_target(dim),
        gramis=GramisConfig(
            n_proposals=50,
            samples_per_proposal=20,
            n_iterations=20,
            init_box_low=low,
            init_box_high=high,
            init_sigma=1.0,
            precondition=False,
            fixed_step=1.0,
            repulsion=RepulsionConfig(schedule=schedule, strength=repulsion_strength),
        ),
        runs=50,
        base_seed=1234,
    )


def _banana_builtin():
    return [("banana-d2", _banana_config(2))]


def _banana_rep_builtin():
    base = _banana_config(2, repulsion_strength=1e-2)
    gramis = dataclasses.replace(base.gramis, precondition=True)
    return [("banana-d2-rep", dataclasses.replace(base, gramis=gramis, name="banana-d2-rep"))]


BUILTINS = {
    "toy-2comp": _toy_builtin,
    "toy-2comp-ablation": _toy_ablation_builtin,
    "gm5-ablation": _gm5_ablation_builtin,
    "gg5": _gg5_builtin,
    "banana": _banana_builtin,
    "banana-rep": _banana_rep_builtin,
}


def builtin_cells(name: str) -> list[tuple[str, ExperimentConfig]]:
    """The labeled experiment cells of a builtin benchmark."""
    if name not in BUILTINS:
        raise InvalidParameter(
            f"unknown builtin {name!r}; available: {', '.join(sorted(BUILTINS))}"
        )
    return BUILTINS[name]()


# ---------------------------------------------------------------------------
# single runs and experiments


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    reports: list[EstimateReport]
    table: RmseTable
    chi2_mean: float | None
    wall_clock: float

    def summary_dict(self) -> dict:
        runs = []
        for r in self.reports:
            runs.append(
                {
                    "z_hat": _json_float(r.z_hat),
                    "snis_mean": _json_vec(r.snis_mean),
                    "snis_second_moment": _json_vec(r.snis_second_moment),
                    "chi2": _json_float(r.chi2) if r.chi2 is not None else None,
                    "failed": r.failed,
                }
            )
        return {
            "name": self.config.name,
            "config": config_to_dict(self.config),
            "rmse": {k: _json_float(v) if isinstance(v, float) else v
                     for k, v in self.table.as_dict().items()},
            "chi2_mean": _json_float(self.chi2_mean) if self.chi2_mean is not None else None,
            "failures": self.table.n_failed,
            "runs": runs,
            "wall_clock_s": round(self.wall_clock, 3),
        }


def _json_float(v):
    if v is None:
        return None
    v = float(v)
    if np.isnan(v):
        return None
    if np.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def _json_vec(v):
    if v is None:
        return None
    return [_json_float(x) for x in np.asarray(v, dtype=float).ravel()]


def _failed_report() -> EstimateReport:
    return EstimateReport(z_hat=float("nan"), failed=True)


def _estimates_from_records(target, config: ExperimentConfig, records, run_seed: int) -> EstimateReport:
    full = WeightedSampleSet.from_records(records)
    window = window_select(full, config.window)
    report = EstimateReport(
        z_hat=z_estimate(window),
        snis_mean=np.asarray(snis_estimate(window, identity)),
        snis_second_moment=np.asarray(snis_estimate(window, componentwise_square)),
        window=(int(np.min(window.t)), int(np.max(window.t))),
    )
    truth = target.truth
    if truth is not None and truth.normalizing_constant is not None:
        report.uis_mean = np.asarray(
            uis_estimate(window, identity, truth.normalizing_constant)
        )
        report.uis_second_moment = np.asarray(
            uis_estimate(window, componentwise_square, truth.normalizing_constant)
        )
    if "chi2" in config.metrics:
        last = records[-1]
        bank = ProposalBank(
            proposals=[
                GaussianProposal.create(m, c)
                for m, c in zip(last.means, last.covariances)
            ],
            iteration=last.t,
        )
        report.chi2 = chi2_estimate(
            target,
            bank,
            config.chi2_samples,
            rng_stream(run_seed, 1 + config.gramis.n_proposals),
        )
    return report


def _write_run_csv(path: Path, records, dim: int) -> None:
    frames = []
    for record in records:
        batch = record.batch
        data = {
            "t": np.full(len(batch), record.t, dtype=np.int64),
            "n": batch.proposal_index,
            "k": batch.draw_index,
        }
        for j in range(dim):
            data[f"x{j + 1}"] = batch.x[:, j]
        data["log_w"] = record.log_weights
        frames.append(pd.DataFrame(data))
    pd.concat(frames, ignore_index=True).to_csv(path, index=False, float_format="%.17g")


def _write_trace_csv(path: Path, records, dim: int) -> None:
    rows = []
    for record in records:
        for n in range(record.means.shape[0]):
            row = {"t": record.t, "n": n}
            for j in range(dim):
                row[f"mu{j + 1}"] = record.means[n, j]
            for i in range(dim):
                for j in range(i, dim):
                    row[f"s{i + 1}{j + 1}"] = record.covariances[n, i, j]
            rows.append(row)
    pd.DataFrame(rows).to_csv(path, index=False, float_format="%.17g")


def _default_grid_box(target: TargetDensity) -> tuple[tuple[float, float], tuple[float, float]]:
    if isinstance(target, (GaussianMixtureTarget, GGMixtureTarget)):
        lo = np.min(target.means, axis=0) - 6.0
        hi = np.max(target.means, axis=0) + 6.0
        return (float(lo[0]), float(hi[0])), (float(lo[1]), float(hi[1]))
    if isinstance(target, BananaTarget):
        reach = 3.0 * target.c
        ridge_low = target.b * target.c**2 - target.b * reach**2 - 3.0
        ridge_high = target.b * target.c**2 + 3.0
        return (-reach - 1.0, reach + 1.0), (ridge_low, ridge_high)
    return (-5.0, 5.0), (-5.0, 5.0)


def _write_grid_csv(path: Path, target: TargetDensity, box=None, resolution: int = 121) -> None:
    if target.dim != 2:
        raise InvalidParameter("density grids are exported for 2-d targets only")
    (x_lo, x_hi), (y_lo, y_hi) = box if box is not None else _default_grid_box(target)
    xs = np.linspace(x_lo, x_hi, resolution)
    ys = np.linspace(y_lo, y_hi, resolution)
    grid_x, grid_y = np.meshgrid(xs, ys, indexing="ij")
    points = np.column_stack([grid_x.ravel(), grid_y.ravel()])
    logs = np.asarray(target.log_density(points))
    pd.DataFrame({"x1": points[:, 0], "x2": points[:, 1], "log_density": logs}).to_csv(
        path, index=False, float_format="%.17g"
    )


def _run_one(config: ExperimentConfig, run_index: int, out_dir, trace: bool) -> EstimateReport:
    target = build_target(config.target)
    run_seed = (config.base_seed + run_index) & _UINT64_MASK
    try:
        records = run_gramis(target, config.gramis, run_seed)
    except GramisError:
        return _failed_report()
    if out_dir is not None:
        out = Path(out_dir)
        _write_run_csv(out / f"run_{run_index}.csv", records, target.dim)
        if trace:
            _write_trace_csv(out / f"trace_{run_index}.csv", records, target.dim)
    try:
        return _estimates_from_records(target, config, records, run_seed)
    except GramisError:
        return _failed_report()


def run_experiment(
    config: ExperimentConfig,
    out_dir=None,
    trace: bool = False,
    n_jobs: int = 1,
    grid_box=None,
    grid_resolution: int = 121,
) -> ExperimentResult:
    """Run R independent replications and aggregate their errors.

    Run r is seeded base_seed + r, so run order and worker count never change
    results. When ``out_dir`` is given, per-run sample files run_<i>.csv are
    written there (plus trace_<i>.csv and a density grid with ``trace=True``),
    then summary.json with the config echo, the error table, and per-run
    estimates. Runs whose weights degenerate are recorded as failed, excluded
    from the table, and counted.
    """
    target = build_target(config.target)
    truth = target.truth
    started = time.perf_counter()
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        if trace and target.dim == 2:
            _write_grid_csv(out / "grid.csv", target, box=grid_box, resolution=grid_resolution)
    if n_jobs == 1:
        reports = [_run_one(config, r, out_dir, trace) for r in range(config.runs)]
    else:
        reports = Parallel(n_jobs=n_jobs)(
            delayed(_run_one)(config, r, out_dir, trace) for r in range(config.runs)
        )
    quantities = tuple(m for m in config.metrics if m in ("z", "mean", "second_moment"))
    table = rmse_aggregate(reports, truth, quantities) if truth is not None else RmseTable(
        n_runs=len(reports), n_failed=sum(r.failed for r in reports)
    )
    chi2_mean = None
    if "chi2" in config.metrics:
        chis = [r.chi2 for r in reports if not r.failed and r.chi2 is not None]
        chi2_mean = float(np.mean(chis)) if chis else None
    result = ExperimentResult(
        config=config,
        reports=reports,
        table=table,
        chi2_mean=chi2_mean,
        wall_clock=time.perf_counter() - started,
    )
    if out_dir is not None:
        (Path(out_dir) / "summary.json").write_text(
            json.dumps(result.summary_dict(), indent=2) + "\n"
        )
    return result


# ---------------------------------------------------------------------------
# sweeps


def _config_for_axis(config: ExperimentConfig, axis: str, value: int) -> ExperimentConfig:
    if axis == "iterations":
        gramis = dataclasses.replace(config.gramis, n_iterations=int(value))
        return dataclasses.replace(config, gramis=gramis, name=f"{config.name}-T{value}")
    if axis == "dimension":
        if config.target.get("family") != "banana":
            raise InvalidParameter("dimension sweeps are defined for the banana family")
        dim = int(value)
        target = dict(config.target, dim=dim)
        low, high = banana_init_box(
            dim, b=float(target.get("b", 3.0)), c=float(target.get("c", 1.0))
        )
        gramis = dataclasses.replace(
            config.gramis, init_box_low=low, init_box_high=high
        )
        return dataclasses.replace(
            config, target=target, gramis=gramis, name=f"{config.name}-d{dim}"
        )
    raise InvalidParameter(f"unknown sweep axis {axis!r}")


def sweep(
    config: ExperimentConfig,
    axis: str,
    values,
    out_dir=None,
    n_jobs: int = 1,
) -> dict:
    """One experiment per axis value; returns (and optionally writes) a table.

    The mean-estimate error is reported both dimension-averaged
    (``mse_mean``: squared error averaged over runs and coordinates) and as
    the squared Euclidean norm (``mse_mean_norm2``), since the former is the
    scale on which curves across dimensions are comparable.
    """
    rows = []
    for value in values:
        cfg = _config_for_axis(config, axis, value)
        sub_dir = Path(out_dir) / f"{axis}-{value}" if out_dir is not None else None
        result = run_experiment(cfg, out_dir=sub_dir, n_jobs=n_jobs)
        target = build_target(cfg.target)
        truth = target.truth
        valid = [r for r in result.reports if not r.failed]
        mse_mean = None
        mse_norm2 = None
        if valid and truth is not None and truth.mean is not None:
            sq = [np.square(r.snis_mean - truth.mean) for r in valid]
            mse_mean = float(np.mean([np.mean(e) for e in sq]))
            mse_norm2 = float(np.mean([np.sum(e) for e in sq]))
        rows.append(
            {
                "axis": axis,
                "value": value,
                "mse_mean": _json_float(mse_mean),
                "mse_mean_norm2": _json_float(mse_norm2),
                "rmse": {k: _json_float(v) if isinstance(v, float) else v
                         for k, v in result.table.as_dict().items()},
                "failures": result.table.n_failed,
                "wall_clock_s": round(result.wall_clock, 3),
            }
        )
    summary = {
        "name": config.name,
        "axis": axis,
        "values": list(values),
        "rows": rows,
        "config": config_to_dict(config),
    }
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "sweep_summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    return summary


# ---------------------------------------------------------------------------
# gradient checking


def _relative_error(analytic: NDArray, reference: NDArray) -> float:
    scale = max(1.0, float(np.max(np.abs(reference))))
    return float(np.max(np.abs(analytic - reference)) / scale)


def _default_check_box(target: TargetDensity) -> tuple[NDArray, NDArray]:
    if isinstance(target, (GaussianMixtureTarget, GGMixtureTarget)):
        lo = np.min(target.means, axis=0) - 3.0
        hi = np.max(target.means, axis=0) + 3.0
        return lo, hi
    return np.full(target.dim, -4.0), np.full(target.dim, 4.0)


def check_gradients(
    target,
    n_points: int = 100,
    seed: int = 0,
    box=None,
    step: float = 1e-5,
    grad_tol: float = 1e-5,
    hessian_tol: float = 1e-4,
    exclusion_radius: float = 1e-3,
) -> dict:
    """Compare analytic derivatives against central finite differences.

    Gradients are checked against differences of the log-density, Hessians
    against differences of the analytic gradient. Points fall uniformly in a
    box around the target's support; for generalized-Gaussian targets with a
    shape below 1, points inside ``exclusion_radius`` of a component mean are
    resampled (the density is not smooth there in the delta = 0 limit, and
    differences lose accuracy nearby).
    """
    if isinstance(target, dict):
        target = build_target(target)
    rng = rng_stream(seed, 0)
    lo, hi = box if box is not None else _default_check_box(target)
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    exclude_means = None
    if isinstance(target, GGMixtureTarget) and np.any(target.shapes < 1.0):
        exclude_means = target.means
    max_grad_err = 0.0
    max_hess_err = 0.0
    for _ in range(int(n_points)):
        point = rng.uniform(lo, hi)
        if exclude_means is not None:
            for _ in range(100):
                dists = np.linalg.norm(exclude_means - point, axis=1)
                if np.min(dists) > exclusion_radius:
                    break
                point = rng.uniform(lo, hi)
        grad_fd = fd_gradient(lambda p: float(target.log_density(p)), point, scale=step)
        grad_an = np.asarray(target.grad_log_density(point))
        max_grad_err = max(max_grad_err, _relative_error(grad_an, grad_fd))
        hess_fd = fd_jacobian(lambda p: np.asarray(target.grad_log_density(p)), point, scale=step)
        hess_an = np.asarray(target.hessian_log_density(point))
        max_hess_err = max(max_hess_err, _relative_error(hess_an, hess_fd))
    return {
        "points": int(n_points),
        "max_grad_rel_err": max_grad_err,
        "max_hessian_rel_err": max_hess_err,
        "grad_threshold": grad_tol,
        "hessian_threshold": hessian_tol,
        "passed": bool(max_grad_err < grad_tol and max_hess_err < hessian_tol),
    }


# named targets for the gradient-check command line
CHECK_TARGETS = {
    "toy-2comp": lambda: TOY_TARGET,
    "gm5": lambda: GM5_TARGET,
    "gg5-eta0.5": lambda: gg5_target(0.5),
    "gg5-eta1": lambda: gg5_target(1.0),
    "gg5-eta1.5": lambda: gg5_target(1.5),
    "banana-d2": lambda: banana_target(2),
    "banana-d50": lambda: banana_target(50),
}


# ---------------------------------------------------------------------------
# verification thresholds for --verify runs

VERIFY_RULES = {
    "gm5-ablation": [
        {"kind": "max", "label": "full-sigma1", "metric": "rmse.z", "value": 0.05,
         "scales_with_runs": True},
        {"kind": "max", "label": "full-sigma1", "metric": "rmse.mean", "value": 2.0,
         "scales_with_runs": True},
        {"kind": "ratio-min", "numerator": "neither-sigma1", "denominator": "full-sigma1",
         "metric": "rmse.z", "value": 5.0},
    ],
    "gg5": [
        {"kind": "max", "label": "eta1", "metric": "rmse.z", "value": 1e-2,
         "scales_with_runs": True},
        {"kind": "max", "label": "eta1", "metric": "chi2_mean", "value": 0.5},
    ],
}


def _metric_value(summary: dict, metric: str):
    node = summary
    for part in metric.split("."):
        node = node[part]
    return node


def verify_results(name: str, summaries: dict[str, dict], run_scale: float = 1.0) -> list[str]:
    """Check a builtin's threshold rules; returns failure messages (empty = pass).

    ``run_scale`` widens variance-driven thresholds when fewer runs were used
    (sqrt of the run-count ratio).
    """
    failures = []
    for rule in VERIFY_RULES.get(name, []):
        if rule["kind"] == "max":
            summary = summaries.get(rule["label"])
            if summary is None:
                failures.append(f"missing cell {rule['label']}")
                continue
            value = _metric_value(summary, rule["metric"])
            bound = rule["value"] * (run_scale if rule.get("scales_with_runs") else 1.0)
            if value is None or not value <= bound:
                failures.append(
                    f"{rule['label']}: {rule['metric']} = {value} exceeds {bound:g}"
                )
        elif rule["kind"] == "ratio-min":
            num = summaries.get(rule["numerator"])
            den = summaries.get(rule["denominator"])
            if num is None or den is None:
                failures.append("missing cells for ratio rule")
                continue
            num_v = _metric_value(num, rule["metric"])
            den_v = _metric_value(den, rule["metric"])
            if not (num_v is not None and den_v and num_v >= rule["value"] * den_v):
                failures.append(
                    f"{rule['numerator']}/{rule['denominator']}: {rule['metric']} ratio "
                    f"{num_v}/{den_v} below {rule['value']:g}"
                )
    return failures
