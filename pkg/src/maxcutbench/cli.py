"""Command-line entry points.

    maxcutbench generate    --config FILE [overrides]   # instances only
    maxcutbench run         --config FILE [overrides]   # full experiment
    maxcutbench analyze     --experiment DIR            # analysis tables
    maxcutbench solve-exact INSTANCE_FILE [--limit N]   # one instance

Every config key can be overridden on the command line; flags replace
values from --config (or the defaults when no file is given). Exit code
is 0 on success and 1 on any failure; failed runs leave a machine-
readable failure list in <output_dir>/manifest.json.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .config import ExperimentConfig, load_config
from .errors import MaxcutBenchError
from .experiment import emit_tables, run_experiment
from .instances import read_instance_record, solve_exact


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="config file (flat key = value)")
    parser.add_argument("--sizes", type=str, help="comma-separated problem sizes N")
    parser.add_argument("--n-instances", type=int)
    parser.add_argument("--n-runs", type=int)
    parser.add_argument("--n-shots", type=int)
    parser.add_argument("--n-iter", type=int)
    parser.add_argument("--gamma", type=float)
    parser.add_argument("--master-seed", type=int)
    parser.add_argument("--exact-limit", type=int)
    parser.add_argument("--gw-roundings", type=int)
    parser.add_argument("--output-dir", type=str)
    parser.add_argument("--algorithms", type=str, help="comma-separated subset of vqe,sampling,greedy")
    parser.add_argument("--workers", type=int)


def _config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    overrides = {}
    for key in (
        "n_instances",
        "n_runs",
        "n_shots",
        "n_iter",
        "gamma",
        "master_seed",
        "exact_limit",
        "gw_roundings",
        "output_dir",
        "workers",
    ):
        value = getattr(args, key)
        if value is not None:
            overrides[key] = value
    if args.sizes is not None:
        overrides["sizes"] = tuple(int(s) for s in args.sizes.replace(",", " ").split())
    if args.algorithms is not None:
        overrides["algorithms"] = tuple(
            a.strip() for a in args.algorithms.split(",") if a.strip()
        )
    if args.config is not None:
        return load_config(args.config, **overrides)
    return replace(ExperimentConfig(), **overrides) if overrides else ExperimentConfig()


def _cmd_run(args: argparse.Namespace, instances_only: bool) -> int:
    config = _config_from_args(args)
    if instances_only:
        config = replace(config, algorithms=config.algorithms)
        from .experiment import prepare_instance_job

        for size in config.sizes:
            for instance_id in range(config.instances_for(size)):
                Path(config.output_dir).mkdir(parents=True, exist_ok=True)
                (Path(config.output_dir) / "config.txt").write_text(config.to_text())
                prepare_instance_job(config.output_dir, size, instance_id)
        print(f"instances ready under {config.output_dir}")
        return 0
    report = run_experiment(config)
    print(
        f"{report.completed} jobs completed, {report.skipped} skipped, "
        f"{len(report.failures)} failed -> {report.directory}"
    )
    if not report.ok:
        print(f"failures recorded in {report.directory / 'manifest.json'}", file=sys.stderr)
        return 1
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    analysis = emit_tables(args.experiment)
    print(f"analysis tables written to {analysis}")
    return 0


def _cmd_solve_exact(args: argparse.Namespace) -> int:
    instance = read_instance_record(args.instance)
    solution = solve_exact(instance, limit=args.limit)
    print(
        json.dumps(
            {
                "instance_id": instance.instance_id,
                "node_count": instance.graph.node_count,
                "value": solution.value,
                "normalized_value": solution.normalized_value,
                "assignment": "".join(str(b) for b in solution.assignment),
            },
            indent=2,
        )
    )
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="maxcutbench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_generate = sub.add_parser("generate", help="generate instances (with GW and exact references)")
    _add_config_flags(p_generate)

    p_run = sub.add_parser("run", help="run the full experiment")
    _add_config_flags(p_run)

    p_analyze = sub.add_parser("analyze", help="emit analysis tables for a finished experiment")
    p_analyze.add_argument("--experiment", type=Path, required=True)

    p_solve = sub.add_parser("solve-exact", help="exactly solve one instance record")
    p_solve.add_argument("instance", type=Path)
    p_solve.add_argument("--limit", type=int, default=32)

    args = parser.parse_args(argv)
    try:
        if args.command == "generate":
            return _cmd_run(args, instances_only=True)
        if args.command == "run":
            return _cmd_run(args, instances_only=False)
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "solve-exact":
            return _cmd_solve_exact(args)
    except MaxcutBenchError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
