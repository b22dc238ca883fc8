"""Benchmark instances: graph + GW normalization + exact reference.

The normalized objective O(x) = raw_reduced(x) / gw_value rescales every
instance so the trivial all-zero cut sits at 0 and the optimum at
beta = optimum / gw_value, which the GW guarantee pins into
[1, 1/0.87856] (up to single-run rounding variance).

An instance serializes to a flat text record (one file per instance):

    node_count: <int>
    instance_id: <int>
    seed: <16 hex digits>          # derived stream seed that built it
    gw_value: <%.17g float>
    edges: <int>
    <i> <j> <%.17g weight>         # one line per edge, 1-based, j < i

The format is stable; floats round-trip exactly at 17 significant digits.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import NoExactReference
from .exact import DEFAULT_ENUMERATION_LIMIT, gray_code_maximum
from .graphs import WeightedGraph, batch_reduced_objective, reduced_objective
from .gw import gw_normalizer
from .seeding import derive_seed, derive_stream, make_label

__all__ = [
    "MaxCutInstance",
    "ExactSolution",
    "build_instance",
    "solve_exact",
    "write_instance_record",
    "read_instance_record",
    "instance_record_text",
]


def _fmt(x: float) -> str:
    return format(x, ".17g")


@dataclass(frozen=True)
class MaxCutInstance:
    """A GW-normalized Max-Cut benchmark unit."""

    graph: WeightedGraph
    gw_value: float
    size_label: int  # N = number of reduced variables
    instance_id: int
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.gw_value > 0:
            raise ValueError("gw_value must be positive")
        if self.size_label != self.graph.n_variables:
            raise ValueError("size_label must equal node_count - 1")

    @property
    def n_variables(self) -> int:
        return self.size_label

    def normalized_objective(self, assignment) -> float:
        return reduced_objective(self.graph, assignment) / self.gw_value

    def batch_normalized_objective(self, assignments: np.ndarray) -> np.ndarray:
        return batch_reduced_objective(self.graph, assignments) / self.gw_value


@dataclass(frozen=True)
class ExactSolution:
    """Argmax assignment with raw and normalized optimum values."""

    assignment: tuple[int, ...]
    value: float
    normalized_value: float

    def __post_init__(self) -> None:
        if self.value < 0 or self.normalized_value < 0:
            raise ValueError("optimum values cannot be negative")


def solve_exact(
    instance: MaxCutInstance, limit: int = DEFAULT_ENUMERATION_LIMIT
) -> ExactSolution:
    value, bits = gray_code_maximum(instance.graph, limit)
    return ExactSolution(
        assignment=tuple(int(b) for b in bits),
        value=value,
        normalized_value=value / instance.gw_value,
    )


def build_instance(
    size: int,
    instance_id: int,
    master_seed: int,
    gw_roundings: int = 50,
) -> MaxCutInstance:
    """Generate, weight, and GW-normalize one instance of N = size."""
    graph_label = make_label(size=size, instance=instance_id, purpose="graph")
    gw_label = make_label(size=size, instance=instance_id, purpose="gw")
    graph = generate_for_size(size, derive_stream(master_seed, graph_label))
    gw_value, _ = gw_normalizer(
        graph, derive_stream(master_seed, gw_label), roundings=gw_roundings
    )
    return MaxCutInstance(
        graph=graph,
        gw_value=gw_value,
        size_label=size,
        instance_id=instance_id,
        seed=derive_seed(master_seed, graph_label),
    )


def generate_for_size(size: int, rng: np.random.Generator) -> WeightedGraph:
    """Random 3-regular graph with N = size variables (size+1 nodes)."""
    from .graphs import generate_graph

    return generate_graph(size + 1, rng)


def instance_record_text(instance: MaxCutInstance) -> str:
    lines = [
        f"node_count: {instance.graph.node_count}",
        f"instance_id: {instance.instance_id}",
        f"seed: {instance.seed:016x}",
        f"gw_value: {_fmt(instance.gw_value)}",
        f"edges: {len(instance.graph.edges)}",
    ]
    for i, j, w in instance.graph.edges:
        lines.append(f"{i} {j} {_fmt(w)}")
    return "\n".join(lines) + "\n"


def write_instance_record(path: Path, instance: MaxCutInstance) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(instance_record_text(instance))
    tmp.replace(path)


def read_instance_record(path: Path) -> MaxCutInstance:
    lines = Path(path).read_text().splitlines()
    header: dict[str, str] = {}
    edge_start = 0
    for idx, line in enumerate(lines):
        if ":" in line:
            key, _, val = line.partition(":")
            header[key.strip()] = val.strip()
        else:
            edge_start = idx
            break
    else:
        edge_start = len(lines)
    n_edges = int(header["edges"])
    edges = []
    for line in lines[edge_start : edge_start + n_edges]:
        si, sj, sw = line.split()
        edges.append((int(si), int(sj), float(sw)))
    graph = WeightedGraph(int(header["node_count"]), tuple(edges))
    return MaxCutInstance(
        graph=graph,
        gw_value=float(header["gw_value"]),
        size_label=graph.n_variables,
        instance_id=int(header["instance_id"]),
        seed=int(header["seed"], 16),
    )


def best_known_reference(final_values: np.ndarray) -> float:
    """Best normalized value observed across runs (fallback reference)."""
    values = np.asarray(final_values, dtype=float)
    if values.size == 0:
        raise NoExactReference("no trajectories to take a best-known value from")
    return float(values.max())
