import numpy as np
import pytest

from maxcutbench.errors import SizeLimitExceeded
from maxcutbench.exact import gray_code_maximum
from maxcutbench.graphs import WeightedGraph, batch_reduced_objective, generate_graph, reduced_objective
from maxcutbench.instances import MaxCutInstance, solve_exact


def naive_maximum(graph: WeightedGraph) -> tuple[float, np.ndarray]:
    """Full-recomputation enumeration in standard binary order."""
    n = graph.n_variables
    codes = np.arange(2**n, dtype=np.uint64)
    bits = ((codes[:, None] >> np.arange(n, dtype=np.uint64)) & 1).astype(np.uint8)
    values = batch_reduced_objective(graph, bits)
    idx = int(np.argmax(values))
    return float(values[idx]), bits[idx]


def test_unit_triangle():
    g = WeightedGraph(3, ((2, 1, 1.0), (3, 1, 1.0), (3, 2, 1.0)))
    value, bits = gray_code_maximum(g)
    assert value == 2.0
    # Gray order 00, 10, 11, 01: the three cuts of value 2 tie; the first is (1, 0)
    assert bits.tolist() == [1, 0]


def test_single_edge():
    g = WeightedGraph(2, ((2, 1, 0.625),))
    value, bits = gray_code_maximum(g)
    assert value == 0.625
    assert bits.tolist() == [1]


def test_size_limit():
    g = generate_graph(12, np.random.default_rng(0))
    with pytest.raises(SizeLimitExceeded):
        gray_code_maximum(g, limit=8)


@pytest.mark.parametrize("seed", range(50))
def test_gray_matches_naive_16_nodes(seed):
    g = generate_graph(16, np.random.default_rng(seed))
    gray_value, gray_bits = gray_code_maximum(g)
    naive_value, _ = naive_maximum(g)
    assert gray_value == naive_value
    assert reduced_objective(g, gray_bits) == naive_value


def test_solve_exact_normalizes():
    g = generate_graph(12, np.random.default_rng(3))
    instance = MaxCutInstance(graph=g, gw_value=2.0, size_label=11, instance_id=0)
    solution = solve_exact(instance)
    assert solution.normalized_value == solution.value / 2.0
    assert reduced_objective(g, np.array(solution.assignment)) == solution.value
