"""Weighted graphs and the Max-Cut objective.

Node labels are 1-based to match the usual edge convention (i, j) with
j < i. The cut objective is exposed in two forms: the raw objective over
all node labels, and the symmetry-reduced objective over N = node_count-1
binary variables obtained by pinning node 1 to side 0. Variable k of a
reduced assignment corresponds to node k+2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    GenerationExhausted,
    IndexOutOfRange,
    LengthMismatch,
    OddNodeCount,
)

__all__ = [
    "WeightedGraph",
    "generate_graph",
    "raw_objective",
    "reduced_objective",
    "batch_reduced_objective",
    "flip_delta",
    "all_flip_deltas",
]


@dataclass(frozen=True)
class WeightedGraph:
    """Simple undirected graph with edge weights in (0, 1].

    edges holds (i, j, w) tuples with 1-based node labels and j < i.
    Construction checks well-formedness (label range and order, weight
    range, simplicity); 3-regularity and connectivity are properties of
    generated graphs and are checked by :func:`generate_graph` /
    :meth:`validate_regular`.
    """

    node_count: int
    edges: tuple[tuple[int, int, float], ...]

    # 0-based endpoint arrays and weights, derived once at construction
    _ei: np.ndarray = field(init=False, repr=False, compare=False)
    _ej: np.ndarray = field(init=False, repr=False, compare=False)
    _w: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.node_count < 1:
            raise ValueError("node_count must be positive")
        seen = set()
        for i, j, w in self.edges:
            if not (1 <= j < i <= self.node_count):
                raise ValueError(f"edge ({i}, {j}) violates 1 <= j < i <= node_count")
            if (i, j) in seen:
                raise ValueError(f"parallel edge ({i}, {j})")
            seen.add((i, j))
            if not (0.0 < w <= 1.0):
                raise ValueError(f"weight {w} outside (0, 1]")
        ei = np.array([i - 1 for i, _, _ in self.edges], dtype=np.int64)
        ej = np.array([j - 1 for _, j, _ in self.edges], dtype=np.int64)
        w = np.array([w for _, _, w in self.edges], dtype=np.float64)
        object.__setattr__(self, "_ei", ei)
        object.__setattr__(self, "_ej", ej)
        object.__setattr__(self, "_w", w)

    @property
    def n_variables(self) -> int:
        """Number of reduced binary variables (node 1 is pinned)."""
        return self.node_count - 1

    @property
    def total_weight(self) -> float:
        return float(self._w.sum())

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.node_count, dtype=np.int64)
        np.add.at(deg, self._ei, 1)
        np.add.at(deg, self._ej, 1)
        return deg

    def adjacency(self) -> np.ndarray:
        """Dense symmetric weight matrix (0-based indexing), cached."""
        cached = getattr(self, "_adj", None)
        if cached is None:
            W = np.zeros((self.node_count, self.node_count))
            W[self._ei, self._ej] = self._w
            W[self._ej, self._ei] = self._w
            W.flags.writeable = False
            object.__setattr__(self, "_adj", W)
            cached = W
        return cached

    def neighbor_csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Per-variable neighbor lists for the reduced objective, cached.

        Returns (ptr, node, wt): for variable v (node v+2), the incident
        edges are node[ptr[v]:ptr[v+1]] with weights wt[...]; neighbor
        entries are 0-based node indices (0 means the pinned node 1).
        """
        cached = getattr(self, "_csr", None)
        if cached is not None:
            return cached
        n = self.n_variables
        lists: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        for i, j, w in self.edges:
            if i >= 2:
                lists[i - 2].append((j - 1, w))
            if j >= 2:
                lists[j - 2].append((i - 1, w))
        ptr = np.zeros(n + 1, dtype=np.int64)
        for v, lst in enumerate(lists):
            ptr[v + 1] = ptr[v] + len(lst)
        node = np.empty(ptr[-1], dtype=np.int64)
        wt = np.empty(ptr[-1], dtype=np.float64)
        k = 0
        for lst in lists:
            for u, w in lst:
                node[k] = u
                wt[k] = w
                k += 1
        object.__setattr__(self, "_csr", (ptr, node, wt))
        return ptr, node, wt

    def is_connected(self) -> bool:
        if self.node_count == 1:
            return True
        adj: list[list[int]] = [[] for _ in range(self.node_count)]
        for a, b in zip(self._ei, self._ej):
            adj[a].append(b)
            adj[b].append(a)
        seen = np.zeros(self.node_count, dtype=bool)
        stack = [0]
        seen[0] = True
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
        return bool(seen.all())

    def validate_regular(self) -> None:
        """Check the full contract of generated graphs (3-regular etc.)."""
        if self.node_count % 2 != 0:
            raise OddNodeCount(f"node_count {self.node_count} is odd")
        if not (self.degrees() == 3).all():
            raise ValueError("graph is not 3-regular")
        if len(self.edges) != 3 * self.node_count // 2:
            raise ValueError("edge count does not match 3-regularity")
        if not self.is_connected():
            raise ValueError("graph is not connected")


def generate_graph(
    n_nodes: int,
    rng: np.random.Generator,
    max_attempts: int = 100_000,
) -> WeightedGraph:
    """Uniform random 3-regular connected graph with weights in (0, 1].

    Uses the pairing (configuration) model: node stubs are shuffled and
    paired; any outcome with self-loops, parallel edges, or a disconnected
    result is rejected wholesale, which leaves the accepted distribution
    uniform over simple connected 3-regular graphs. Weights are drawn as
    1 - u with u uniform on [0, 1), i.e. uniform on (0, 1].
    """
    if n_nodes % 2 != 0:
        raise OddNodeCount(f"no 3-regular graph on {n_nodes} (odd) nodes")
    if n_nodes < 4:
        raise ValueError("need at least 4 nodes for a simple 3-regular graph")

    stubs = np.repeat(np.arange(n_nodes, dtype=np.int64), 3)
    for _ in range(max_attempts):
        rng.shuffle(stubs)
        a = stubs[0::2]
        b = stubs[1::2]
        if (a == b).any():
            continue
        lo = np.minimum(a, b)
        hi = np.maximum(a, b)
        keys = lo * n_nodes + hi
        if len(np.unique(keys)) != len(keys):
            continue
        order = np.lexsort((lo, hi))
        edges = []
        for k in order:
            w = 1.0 - rng.random()
            edges.append((int(hi[k]) + 1, int(lo[k]) + 1, float(w)))
        graph = WeightedGraph(n_nodes, tuple(edges))
        if not graph.is_connected():
            continue
        graph.validate_regular()
        return graph
    raise GenerationExhausted(f"no simple connected pairing in {max_attempts} attempts")


def _as_bits(values, length: int, what: str) -> np.ndarray:
    bits = np.asarray(values)
    if bits.ndim != 1 or bits.shape[0] != length:
        raise LengthMismatch(f"{what} must have length {length}, got shape {bits.shape}")
    return bits.astype(np.int8, copy=False)


def _accumulate_cut(graph: WeightedGraph, full_bits: np.ndarray) -> np.ndarray:
    """Cut weight per row of an (m, node_count) bit matrix.

    Accumulates edge by edge in stored edge order, so every row's float
    result is a fixed chain of scalar additions, independent of the batch
    it sits in. BLAS dots and whole-array np.sum reductions change their
    accumulation order with the batch shape, which would break the
    exact-equality contracts between enumerators, the GW value, and
    trajectory values.
    """
    acc = np.zeros(full_bits.shape[0])
    for e in range(graph._w.shape[0]):
        cut = full_bits[:, graph._ei[e]] != full_bits[:, graph._ej[e]]
        acc += graph._w[e] * cut
    return acc


def raw_objective(graph: WeightedGraph, full_assignment) -> float:
    """Total weight of edges whose endpoints carry different labels."""
    bits = _as_bits(full_assignment, graph.node_count, "full assignment")
    return float(_accumulate_cut(graph, bits[None, :])[0])


def reduced_objective(graph: WeightedGraph, assignment) -> float:
    """Raw objective with node 1 pinned to 0 (N = node_count-1 variables)."""
    bits = _as_bits(assignment, graph.n_variables, "assignment")
    full = np.concatenate(([0], bits)).astype(np.int8)
    return raw_objective(graph, full)


def batch_reduced_objective(graph: WeightedGraph, assignments: np.ndarray) -> np.ndarray:
    """Reduced objective for each row of an (m, N) bit matrix."""
    bits = np.asarray(assignments)
    if bits.ndim != 2 or bits.shape[1] != graph.n_variables:
        raise LengthMismatch(
            f"assignments must have shape (m, {graph.n_variables}), got {bits.shape}"
        )
    full = np.empty((bits.shape[0], graph.node_count), dtype=np.int8)
    full[:, 0] = 0
    full[:, 1:] = bits
    return _accumulate_cut(graph, full)


def flip_delta(graph: WeightedGraph, assignment, var_index: int) -> float:
    """Objective change from flipping one variable, in O(degree) time."""
    n = graph.n_variables
    if not (0 <= var_index < n):
        raise IndexOutOfRange(f"var_index {var_index} outside [0, {n})")
    bits = _as_bits(assignment, n, "assignment")
    ptr, node, wt = graph.neighbor_csr()
    xv = bits[var_index]
    delta = 0.0
    for k in range(ptr[var_index], ptr[var_index + 1]):
        u = node[k]
        xu = 0 if u == 0 else bits[u - 1]
        delta += wt[k] if xu == xv else -wt[k]
    return float(delta)


def all_flip_deltas(graph: WeightedGraph, assignment) -> np.ndarray:
    """flip_delta for every variable at once (one matrix-vector product).

    With spins s = 1-2x (node 1 included as +1), the delta for flipping
    node v is s_v * (W s)_v.
    """
    bits = _as_bits(assignment, graph.n_variables, "assignment")
    s = np.empty(graph.node_count)
    s[0] = 1.0
    s[1:] = 1.0 - 2.0 * bits
    deltas = s * (graph.adjacency() @ s)
    return deltas[1:]
