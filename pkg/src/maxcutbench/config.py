"""Experiment configuration: a flat key = value text format.

Example::

    # benchmark configuration
    sizes = 11, 21, 31
    n_instances = 25
    n_runs = 10
    n_shots = 1000
    n_iter = 1000
    gamma = 0.1
    master_seed = 2024
    exact_limit = 32
    gw_roundings = 50
    algorithms = vqe, sampling, greedy
    output_dir = runs/full
    workers = 2
    n_instances@31 = 10     # optional per-size overrides
    n_runs@31 = 5

Unknown keys are errors. ``output_dir`` and ``workers`` are execution
details: they are excluded from the semantic hash, so results are
byte-identical for any worker count.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import ConfigError
from .solvers import ALGORITHMS

__all__ = ["ExperimentConfig", "load_config", "parse_config_text"]


def _parse_int_list(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.replace(",", " ").split())


def _parse_str_list(text: str) -> tuple[str, ...]:
    return tuple(tok.strip() for tok in text.split(",") if tok.strip())


_KEY_PARSERS = {
    "sizes": _parse_int_list,
    "n_instances": int,
    "n_runs": int,
    "n_shots": int,
    "n_iter": int,
    "gamma": float,
    "master_seed": int,
    "exact_limit": int,
    "gw_roundings": int,
    "output_dir": str,
    "algorithms": _parse_str_list,
    "workers": int,
}

_OVERRIDE_KEYS = ("n_instances", "n_runs")


@dataclass(frozen=True)
class ExperimentConfig:
    sizes: tuple[int, ...] = (11, 21, 31)
    n_instances: int = 25
    n_runs: int = 10
    n_shots: int = 1000
    n_iter: int = 1000
    gamma: float = 0.1
    master_seed: int = 2024
    exact_limit: int = 32
    gw_roundings: int = 50
    output_dir: str = "experiment"
    algorithms: tuple[str, ...] = ALGORITHMS
    workers: int = 1
    n_instances_by_size: dict[int, int] = field(default_factory=dict)
    n_runs_by_size: dict[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for name in ("n_instances", "n_runs", "n_shots", "n_iter", "gw_roundings", "workers"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        if self.exact_limit < 0:
            raise ConfigError("exact_limit cannot be negative")
        if not self.sizes:
            raise ConfigError("need at least one size")
        for size in self.sizes:
            if size < 3 or size % 2 == 0:
                raise ConfigError(
                    f"size {size} invalid: node count N+1 must be even and >= 4"
                )
        if not (0.0 < self.gamma <= 1.0):
            raise ConfigError(f"gamma must lie in (0, 1], got {self.gamma}")
        if not self.algorithms:
            raise ConfigError("need at least one algorithm")
        for alg in self.algorithms:
            if alg not in ALGORITHMS:
                raise ConfigError(f"unknown algorithm {alg!r} (choose from {ALGORITHMS})")
        for mapping in (self.n_instances_by_size, self.n_runs_by_size):
            for size, value in mapping.items():
                if size not in self.sizes:
                    raise ConfigError(f"override for size {size} not in sizes")
                if value < 1:
                    raise ConfigError("per-size overrides must be positive")

    def instances_for(self, size: int) -> int:
        return self.n_instances_by_size.get(size, self.n_instances)

    def runs_for(self, size: int) -> int:
        return self.n_runs_by_size.get(size, self.n_runs)

    def job_count(self) -> int:
        return sum(
            self.instances_for(s) * self.runs_for(s) * len(self.algorithms)
            for s in self.sizes
        )

    def semantic_dict(self) -> dict:
        """Result-determining fields (no output_dir, no workers)."""
        return {
            "sizes": list(self.sizes),
            "n_instances": self.n_instances,
            "n_runs": self.n_runs,
            "n_shots": self.n_shots,
            "n_iter": self.n_iter,
            "gamma": self.gamma,
            "master_seed": self.master_seed,
            "exact_limit": self.exact_limit,
            "gw_roundings": self.gw_roundings,
            "algorithms": list(self.algorithms),
            "n_instances_by_size": {str(k): v for k, v in sorted(self.n_instances_by_size.items())},
            "n_runs_by_size": {str(k): v for k, v in sorted(self.n_runs_by_size.items())},
        }

    def semantic_hash(self) -> str:
        payload = json.dumps(self.semantic_dict(), sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    def to_text(self) -> str:
        lines = [
            f"sizes = {', '.join(str(s) for s in self.sizes)}",
            f"n_instances = {self.n_instances}",
            f"n_runs = {self.n_runs}",
            f"n_shots = {self.n_shots}",
            f"n_iter = {self.n_iter}",
            f"gamma = {self.gamma!r}",
            f"master_seed = {self.master_seed}",
            f"exact_limit = {self.exact_limit}",
            f"gw_roundings = {self.gw_roundings}",
            f"algorithms = {', '.join(self.algorithms)}",
            f"output_dir = {self.output_dir}",
            f"workers = {self.workers}",
        ]
        for size, value in sorted(self.n_instances_by_size.items()):
            lines.append(f"n_instances@{size} = {value}")
        for size, value in sorted(self.n_runs_by_size.items()):
            lines.append(f"n_runs@{size} = {value}")
        return "\n".join(lines) + "\n"


def parse_config_text(text: str) -> ExperimentConfig:
    plain: dict[str, object] = {}
    by_size: dict[str, dict[int, int]] = {key: {} for key in _OVERRIDE_KEYS}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if "@" in key:
            base, _, size_text = key.partition("@")
            base = base.strip()
            if base not in _OVERRIDE_KEYS:
                raise ConfigError(f"line {lineno}: key {base!r} takes no per-size override")
            try:
                size = int(size_text)
            except ValueError as exc:
                raise ConfigError(f"line {lineno}: bad size in {key!r}") from exc
            by_size[base][size] = int(value)
            continue
        if key not in _KEY_PARSERS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in plain:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            plain[key] = _KEY_PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {value!r}") from exc
    return ExperimentConfig(
        **plain,
        n_instances_by_size=by_size["n_instances"],
        n_runs_by_size=by_size["n_runs"],
    )


def load_config(path: str | Path, **overrides) -> ExperimentConfig:
    """Parse a config file and apply keyword overrides on top."""
    config = parse_config_text(Path(path).read_text())
    if overrides:
        config = replace(config, **overrides)
    return config
