"""Experiment driver: generate instances, dispatch runs, emit tables.

Directory layout of an experiment::

    <output_dir>/
      config.txt                                   # echo of the config
      manifest.json                                # versions, job report
      instances/size_<N>/instance_<iii>.txt        # instance records
      exact/size_<N>/instance_<iii>.json           # exact optima (N <= exact_limit)
      initial_points/size_<N>/instance_<iii>_run_<rr>.txt
      trajectories/size_<N>/instance_<iii>/run_<rr>_<alg>.csv
      analysis/*.csv, analysis/summary.json        # emit_tables output

Trajectory CSV columns: checkpoint (1-based iteration), n_evals
(checkpoint * n_shots), best_value (best-so-far normalized objective),
alpha (best_value / reference optimum; empty until the reference is
known), evaluated (1 if objective evaluations backed this window, 0 for
flat-extension checkpoints after early optimizer convergence). Header
comment lines carry the stream label, seed, config hash, reference kind,
and the final best assignment.

Every randomized step draws from a stream derived from (master_seed,
canonical label), so any job order and worker count produce bit-identical
files. Completed job files are skipped on rerun, which makes resumption
idempotent.
"""

from __future__ import annotations

import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import __version__ as package_version
from .config import ExperimentConfig, load_config
from .errors import IncompleteExperiment
from .instances import (
    ExactSolution,
    MaxCutInstance,
    build_instance,
    read_instance_record,
    solve_exact,
    write_instance_record,
)
from .mps import build_layout
from .seeding import derive_seed, derive_stream, make_label
from .solvers import Budget, InitialPoint, draw_initial_point, run_greedy, run_sampling, run_vqe
from .stats import (
    binned_correlation,
    difference_curve,
    max_advantage,
    mean_sem,
    prob_better,
    success_probability,
    wilson_interval,
)

__all__ = ["run_experiment", "emit_tables", "RunReport", "read_trajectory"]

CORRELATION_WINDOW = (0.87856, 1.0)
CORRELATION_BINS = 12


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _limit_blas_threads() -> None:
    try:
        import threadpoolctl

        threadpoolctl.threadpool_limits(1)
    except Exception:
        pass


# ---------------------------------------------------------------------------
# paths


def instance_path(exp: Path, size: int, instance_id: int) -> Path:
    return exp / "instances" / f"size_{size}" / f"instance_{instance_id:03d}.txt"


def exact_path(exp: Path, size: int, instance_id: int) -> Path:
    return exp / "exact" / f"size_{size}" / f"instance_{instance_id:03d}.json"


def initial_point_path(exp: Path, size: int, instance_id: int, run_id: int) -> Path:
    return (
        exp
        / "initial_points"
        / f"size_{size}"
        / f"instance_{instance_id:03d}_run_{run_id:02d}.txt"
    )


def trajectory_path(exp: Path, size: int, instance_id: int, run_id: int, alg: str) -> Path:
    return (
        exp
        / "trajectories"
        / f"size_{size}"
        / f"instance_{instance_id:03d}"
        / f"run_{run_id:02d}_{alg}.csv"
    )


# ---------------------------------------------------------------------------
# persistence helpers


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text)
    tmp.replace(path)


def write_initial_point(path: Path, point: InitialPoint, label: str) -> None:
    lines = [f"# label: {label}", f"# seed: {point.seed:016x}"]
    lines += [_fmt(v) for v in point.values]
    _atomic_write(path, "\n".join(lines) + "\n")


def read_initial_point(path: Path) -> InitialPoint:
    seed = 0
    values = []
    for line in Path(path).read_text().splitlines():
        if line.startswith("# seed:"):
            seed = int(line.split(":", 1)[1].strip(), 16)
        elif not line.startswith("#") and line.strip():
            values.append(float(line))
    return InitialPoint(values=np.array(values), seed=seed)


def write_trajectory(
    path: Path,
    trajectory,
    label: str,
    seed: int,
    config_hash: str,
    reference_kind: str,
    reference_value: float | None,
) -> None:
    header = [
        f"# label: {label}",
        f"# seed: {seed:016x}",
        f"# config_hash: {config_hash}",
        f"# algorithm: {trajectory.algorithm}",
        f"# instance_id: {trajectory.instance_id}",
        f"# run_id: {trajectory.run_id}",
        f"# reference: {reference_kind}",
        f"# reference_value: {'' if reference_value is None else _fmt(reference_value)}",
        f"# best_assignment: {''.join(str(int(b)) for b in trajectory.best_assignment)}",
    ]
    rows = ["checkpoint,n_evals,best_value,alpha,evaluated"]
    for idx in range(trajectory.n_checkpoints):
        best = trajectory.best_values[idx]
        alpha = "" if reference_value is None else _fmt(best / reference_value)
        rows.append(
            f"{idx + 1},{trajectory.n_evals[idx]},{_fmt(best)},{alpha},"
            f"{int(trajectory.evaluated[idx])}"
        )
    _atomic_write(path, "\n".join(header + rows) + "\n")


@dataclass(eq=False)
class StoredTrajectory:
    """A trajectory CSV parsed back into arrays."""

    algorithm: str
    instance_id: int
    run_id: int
    reference_kind: str
    reference_value: float | None
    best_values: np.ndarray
    alpha: np.ndarray | None
    evaluated: np.ndarray
    n_evals: np.ndarray
    header: dict[str, str]


def read_trajectory(path: Path) -> StoredTrajectory:
    header: dict[str, str] = {}
    rows: list[list[str]] = []
    with open(path, newline="") as handle:
        for line in handle:
            if line.startswith("#"):
                key, _, value = line[1:].partition(":")
                header[key.strip()] = value.strip()
            else:
                rows.append(line.rstrip("\n"))
    reader = csv.DictReader(rows)
    checkpoint, n_evals, best, alpha, evaluated = [], [], [], [], []
    for record in reader:
        checkpoint.append(int(record["checkpoint"]))
        n_evals.append(int(record["n_evals"]))
        best.append(float(record["best_value"]))
        alpha.append(float(record["alpha"]) if record["alpha"] else np.nan)
        evaluated.append(record["evaluated"] == "1")
    alpha_arr = np.array(alpha)
    ref_text = header.get("reference_value", "")
    return StoredTrajectory(
        algorithm=header.get("algorithm", ""),
        instance_id=int(header.get("instance_id", -1)),
        run_id=int(header.get("run_id", -1)),
        reference_kind=header.get("reference", "pending"),
        reference_value=float(ref_text) if ref_text else None,
        best_values=np.array(best),
        alpha=None if np.isnan(alpha_arr).all() else alpha_arr,
        evaluated=np.array(evaluated, dtype=bool),
        n_evals=np.array(n_evals, dtype=np.int64),
        header=header,
    )


def write_exact_solution(path: Path, solution: ExactSolution) -> None:
    payload = {
        "assignment": "".join(str(b) for b in solution.assignment),
        "value": solution.value,
        "normalized_value": solution.normalized_value,
    }
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_exact_solution(path: Path) -> ExactSolution:
    payload = json.loads(Path(path).read_text())
    return ExactSolution(
        assignment=tuple(int(c) for c in payload["assignment"]),
        value=float(payload["value"]),
        normalized_value=float(payload["normalized_value"]),
    )


# ---------------------------------------------------------------------------
# jobs (module-level so they pickle for worker processes)


@lru_cache(maxsize=8)
def _cached_config(exp_dir: str) -> ExperimentConfig:
    return load_config(Path(exp_dir) / "config.txt")


@lru_cache(maxsize=64)
def _cached_instance(exp_dir: str, size: int, instance_id: int) -> MaxCutInstance:
    return read_instance_record(instance_path(Path(exp_dir), size, instance_id))


def prepare_instance_job(exp_dir: str, size: int, instance_id: int) -> str:
    """Generate + normalize one instance; solve exactly when in range."""
    _limit_blas_threads()
    exp = Path(exp_dir)
    config = _cached_config(exp_dir)
    ipath = instance_path(exp, size, instance_id)
    if not ipath.exists():
        instance = build_instance(
            size, instance_id, config.master_seed, gw_roundings=config.gw_roundings
        )
        write_instance_record(ipath, instance)
    else:
        instance = read_instance_record(ipath)
    epath = exact_path(exp, size, instance_id)
    if size <= config.exact_limit and not epath.exists():
        write_exact_solution(epath, solve_exact(instance, limit=config.exact_limit))
    for run_id in range(config.runs_for(size)):
        ppath = initial_point_path(exp, size, instance_id, run_id)
        if ppath.exists():
            continue
        label = make_label(size=size, instance=instance_id, run=run_id, purpose="init")
        seed = derive_seed(config.master_seed, label)
        point = draw_initial_point(size, derive_stream(config.master_seed, label), seed=seed)
        write_initial_point(ppath, point, label)
    return f"size={size}/instance={instance_id}"


def solver_job(exp_dir: str, size: int, instance_id: int, run_id: int, alg: str) -> str:
    """Run one (size, instance, run, algorithm) trajectory and persist it."""
    _limit_blas_threads()
    exp = Path(exp_dir)
    config = _cached_config(exp_dir)
    tpath = trajectory_path(exp, size, instance_id, run_id, alg)
    if tpath.exists():
        return "skipped"
    instance = _cached_instance(exp_dir, size, instance_id)
    budget = Budget(n_shots=config.n_shots, n_iter=config.n_iter)
    layout = build_layout(size)

    purpose = {"vqe": "shots", "sampling": "draws", "greedy": "restarts"}[alg]
    label = make_label(size=size, instance=instance_id, run=run_id, alg=alg, purpose=purpose)
    seed = derive_seed(config.master_seed, label)
    rng = derive_stream(config.master_seed, label)

    if alg == "vqe":
        init = read_initial_point(initial_point_path(exp, size, instance_id, run_id))
        trajectory = run_vqe(instance, layout, init, budget, config.gamma, rng)
    elif alg == "greedy":
        init = read_initial_point(initial_point_path(exp, size, instance_id, run_id))
        trajectory = run_greedy(instance, layout, init, budget, rng)
    elif alg == "sampling":
        trajectory = run_sampling(instance, budget, rng)
    else:
        raise ValueError(f"unknown algorithm {alg!r}")
    trajectory.run_id = run_id

    epath = exact_path(exp, size, instance_id)
    if epath.exists():
        reference_kind = "exact"
        reference_value: float | None = read_exact_solution(epath).normalized_value
    else:
        reference_kind = "pending"
        reference_value = None
    write_trajectory(
        tpath, trajectory, label, seed, config.semantic_hash(), reference_kind, reference_value
    )
    return "done"


@dataclass
class RunReport:
    directory: Path
    completed: int
    skipped: int
    failures: list[dict]

    @property
    def ok(self) -> bool:
        return not self.failures


def _dispatch(jobs, fn, workers: int, failures: list[dict], counters: dict) -> None:
    if workers <= 1:
        for job in jobs:
            try:
                outcome = fn(*job)
                counters["skipped" if outcome == "skipped" else "completed"] += 1
            except Exception as exc:
                failures.append({"job": list(map(str, job)), "error": repr(exc)})
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = {pool.submit(fn, *job): job for job in jobs}
        for future, job in futures.items():
            try:
                outcome = future.result()
                counters["skipped" if outcome == "skipped" else "completed"] += 1
            except Exception as exc:
                failures.append({"job": list(map(str, job)), "error": repr(exc)})


def run_experiment(config: ExperimentConfig, analyze: bool = True) -> RunReport:
    """Execute all jobs of the configured experiment; resume is a no-op."""
    _limit_blas_threads()
    exp = Path(config.output_dir)
    exp.mkdir(parents=True, exist_ok=True)
    config_file = exp / "config.txt"
    if config_file.exists():
        existing = load_config(config_file)
        if existing.semantic_hash() != config.semantic_hash():
            raise IncompleteExperiment(
                f"{exp} already holds a different experiment "
                f"({existing.semantic_hash()} != {config.semantic_hash()})"
            )
    _atomic_write(config_file, config.to_text())

    failures: list[dict] = []
    counters = {"completed": 0, "skipped": 0}

    prep_jobs = [
        (str(exp), size, instance_id)
        for size in config.sizes
        for instance_id in range(config.instances_for(size))
    ]
    _dispatch(prep_jobs, prepare_instance_job, config.workers, failures, counters)

    if not failures:
        solver_jobs = [
            (str(exp), size, instance_id, run_id, alg)
            for size in config.sizes
            for instance_id in range(config.instances_for(size))
            for run_id in range(config.runs_for(size))
            for alg in config.algorithms
        ]
        _dispatch(solver_jobs, solver_job, config.workers, failures, counters)

    manifest = {
        "config": config.semantic_dict(),
        "config_hash": config.semantic_hash(),
        "versions": {
            "maxcutbench": package_version,
            "python": sys.version.split()[0],
            "numpy": np.__version__,
        },
        "jobs_completed": counters["completed"],
        "jobs_skipped": counters["skipped"],
        "failures": failures,
    }
    _atomic_write(exp / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")

    report = RunReport(
        directory=exp,
        completed=counters["completed"],
        skipped=counters["skipped"],
        failures=failures,
    )
    if analyze and report.ok:
        emit_tables(exp)
    return report


# ---------------------------------------------------------------------------
# analysis tables


def _load_size(
    exp: Path, config: ExperimentConfig, size: int
) -> tuple[dict[str, np.ndarray], dict[int, float], dict[int, str]]:
    """Alpha curves per algorithm plus per-instance references for one size.

    Returns (curves, references, reference_kinds) where curves[alg] has
    shape (n_instances * n_runs, n_iter), rows ordered by (instance, run).
    """
    n_instances = config.instances_for(size)
    n_runs = config.runs_for(size)

    references: dict[int, float] = {}
    kinds: dict[int, str] = {}
    pending: list[tuple[int, int, str, Path]] = []
    finals: dict[int, float] = {}

    for instance_id in range(n_instances):
        epath = exact_path(exp, size, instance_id)
        if epath.exists():
            references[instance_id] = read_exact_solution(epath).normalized_value
            kinds[instance_id] = "exact"
        else:
            kinds[instance_id] = "best_known"

    for instance_id in range(n_instances):
        for run_id in range(n_runs):
            for alg in config.algorithms:
                tpath = trajectory_path(exp, size, instance_id, run_id, alg)
                if not tpath.exists():
                    raise IncompleteExperiment(f"missing trajectory {tpath}")
                if kinds[instance_id] == "best_known":
                    stored = read_trajectory(tpath)
                    top = float(stored.best_values[-1])
                    finals[instance_id] = max(finals.get(instance_id, 0.0), top)
                    pending.append((instance_id, run_id, alg, tpath))

    # fill best-known references and rewrite the pending trajectories
    for instance_id, value in finals.items():
        references[instance_id] = value
    for instance_id, run_id, alg, tpath in pending:
        stored = read_trajectory(tpath)
        reference = references[instance_id]
        if (
            stored.reference_kind == "best_known"
            and stored.reference_value is not None
            and stored.reference_value == reference
        ):
            continue
        _rewrite_reference(tpath, "best_known", reference)

    curves: dict[str, np.ndarray] = {}
    for alg in config.algorithms:
        rows = []
        for instance_id in range(n_instances):
            reference = references[instance_id]
            for run_id in range(n_runs):
                stored = read_trajectory(trajectory_path(exp, size, instance_id, run_id, alg))
                rows.append(stored.best_values / reference)
        curves[alg] = np.vstack(rows)
    return curves, references, kinds


def _rewrite_reference(path: Path, kind: str, reference: float) -> None:
    lines = Path(path).read_text().splitlines()
    out = []
    data_started = False
    for line in lines:
        if line.startswith("# reference:"):
            out.append(f"# reference: {kind}")
        elif line.startswith("# reference_value:"):
            out.append(f"# reference_value: {_fmt(reference)}")
        elif line.startswith("#") or not data_started:
            out.append(line)
            if line.startswith("checkpoint,"):
                data_started = True
        else:
            parts = line.split(",")
            best = float(parts[2])
            parts[3] = _fmt(best / reference)
            out.append(",".join(parts))
    _atomic_write(path, "\n".join(out) + "\n")


def _success_counts(exp: Path, config: ExperimentConfig, size: int) -> tuple[int, int] | None:
    """(successes, trials) of exact hits over all VQE runs of a size."""
    if "vqe" not in config.algorithms:
        return None
    trials = 0
    successes = 0
    for instance_id in range(config.instances_for(size)):
        epath = exact_path(exp, size, instance_id)
        if not epath.exists():
            return None  # no exact reference at this size
        exact = read_exact_solution(epath)
        finals = np.array(
            [
                read_trajectory(
                    trajectory_path(exp, size, instance_id, run_id, "vqe")
                ).best_values[-1]
                for run_id in range(config.runs_for(size))
            ]
        )
        point, _, _ = success_probability(finals, exact.normalized_value)
        successes += round(point * finals.size)
        trials += finals.size
    return successes, trials


def emit_tables(exp_dir: str | Path) -> Path:
    """Write the per-figure analysis CSVs and the experiment summary."""
    exp = Path(exp_dir)
    config_file = exp / "config.txt"
    if not config_file.exists():
        raise IncompleteExperiment(f"no config.txt in {exp}")
    config = load_config(config_file)
    analysis = exp / "analysis"
    analysis.mkdir(exist_ok=True)

    per_size: dict[int, dict[str, np.ndarray]] = {}
    reference_kinds: dict[int, dict[int, str]] = {}
    for size in config.sizes:
        curves, _, kinds = _load_size(exp, config, size)
        per_size[size] = curves
        reference_kinds[size] = kinds

    iterations = np.arange(1, config.n_iter + 1)

    # mean/SEM of the VQE approximation ratio per checkpoint
    if "vqe" in config.algorithms:
        rows = ["size,iteration,n_evals,mean_alpha,sem_alpha"]
        for size in config.sizes:
            alpha = per_size[size]["vqe"]
            for idx in range(alpha.shape[1]):
                mean, sem = mean_sem(alpha[:, idx])
                rows.append(
                    f"{size},{iterations[idx]},{iterations[idx] * config.n_shots},"
                    f"{_fmt(mean)},{_fmt(sem)}"
                )
        _atomic_write(analysis / "fig2a_vqe_alpha.csv", "\n".join(rows) + "\n")

        rows = ["size,successes,trials,point,wilson_low,wilson_high"]
        for size in config.sizes:
            counts = _success_counts(exp, config, size)
            if counts is None:
                continue
            successes, trials = counts
            low, high = wilson_interval(successes, trials, 0.95)
            rows.append(
                f"{size},{successes},{trials},{_fmt(successes / trials)},"
                f"{_fmt(low)},{_fmt(high)}"
            )
        _atomic_write(analysis / "fig2b_vqe_success.csv", "\n".join(rows) + "\n")

    # difference curves and probability-of-better against each baseline
    comparisons = []
    if {"vqe", "sampling"} <= set(config.algorithms):
        comparisons.append(("fig3_vqe_vs_sampling.csv", "sampling", False))
    if {"vqe", "sampling", "greedy"} <= set(config.algorithms):
        comparisons.append(("fig4_vqe_vs_best_classical.csv", "best_classical", True))

    max_rows = ["comparison,size,iteration,n_evals,max_mean_diff"]
    for filename, tag, use_best in comparisons:
        rows = ["size,iteration,mean_diff,sem,prob_better,wilson_low,wilson_high"]
        for size in config.sizes:
            vqe = per_size[size]["vqe"]
            other = (
                np.maximum(per_size[size]["greedy"], per_size[size]["sampling"])
                if use_best
                else per_size[size][tag]
            )
            summary = difference_curve(vqe, other)
            for idx in range(vqe.shape[1]):
                point, low, high = prob_better(vqe[:, idx], other[:, idx])
                rows.append(
                    f"{size},{iterations[idx]},{_fmt(summary.mean[idx])},"
                    f"{_fmt(summary.sem[idx])},{_fmt(point)},{_fmt(low)},{_fmt(high)}"
                )
            iteration, diff, evals = max_advantage(summary, config.n_shots)
            max_rows.append(f"{tag},{size},{iteration},{evals},{_fmt(diff)}")
        _atomic_write(analysis / filename, "\n".join(rows) + "\n")
    if comparisons:
        _atomic_write(analysis / "fig5_max_advantage.csv", "\n".join(max_rows) + "\n")

    # binned correlation of final ratios, for sizes above the small regime
    if {"vqe", "sampling", "greedy"} <= set(config.algorithms):
        rows = ["comparison,size,bin_index,x_mean,x_std,y_mean,y_std,count"]
        for size in config.sizes:
            if size <= 21:
                continue
            vqe_final = per_size[size]["vqe"][:, -1]
            for tag in ("sampling", "greedy"):
                other_final = per_size[size][tag][:, -1]
                binned = binned_correlation(
                    vqe_final, other_final, CORRELATION_BINS, CORRELATION_WINDOW
                )
                for b in range(binned.bin_index.size):
                    rows.append(
                        f"{tag},{size},{binned.bin_index[b]},{_fmt(binned.x_mean[b])},"
                        f"{_fmt(binned.x_std[b])},{_fmt(binned.y_mean[b])},"
                        f"{_fmt(binned.y_std[b])},{binned.count[b]}"
                    )
        _atomic_write(analysis / "fig6_binned_correlation.csv", "\n".join(rows) + "\n")

    summary = {
        "config": config.semantic_dict(),
        "config_hash": config.semantic_hash(),
        "versions": {"maxcutbench": package_version, "numpy": np.__version__},
        "reference_kinds": {
            str(size): {str(i): kind for i, kind in kinds.items()}
            for size, kinds in reference_kinds.items()
        },
        "tables": sorted(p.name for p in analysis.glob("*.csv")),
    }
    _atomic_write(analysis / "summary.json", json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return analysis
