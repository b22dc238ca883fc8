import numpy as np
import pytest
from scipy import stats

from maxcutbench.errors import IndexOutOfRange, LengthMismatch, OddNodeCount
from maxcutbench.graphs import (
    WeightedGraph,
    all_flip_deltas,
    batch_reduced_objective,
    flip_delta,
    generate_graph,
    raw_objective,
    reduced_objective,
)


def unit_triangle() -> WeightedGraph:
    return WeightedGraph(3, ((2, 1, 1.0), (3, 1, 1.0), (3, 2, 1.0)))


def random_graph(seed: int, n_nodes: int = 12) -> WeightedGraph:
    return generate_graph(n_nodes, np.random.default_rng(seed))


class TestGeneration:
    def test_twelve_nodes_forced_counts(self):
        g = random_graph(0)
        assert g.node_count == 12
        assert len(g.edges) == 18
        assert (g.degrees() == 3).all()

    def test_four_nodes_is_k4(self):
        g = generate_graph(4, np.random.default_rng(1))
        assert sorted((i, j) for i, j, _ in g.edges) == [
            (2, 1),
            (3, 1),
            (3, 2),
            (4, 1),
            (4, 2),
            (4, 3),
        ]

    def test_odd_node_count_rejected(self):
        with pytest.raises(OddNodeCount):
            generate_graph(11, np.random.default_rng(0))

    def test_too_small_rejected(self):
        with pytest.raises(ValueError):
            generate_graph(2, np.random.default_rng(0))

    @pytest.mark.parametrize("seed", range(8))
    def test_invariants_hold(self, seed):
        g = random_graph(seed, 22)
        g.validate_regular()
        assert g.is_connected()
        for i, j, w in g.edges:
            assert 1 <= j < i <= g.node_count
            assert 0.0 < w <= 1.0

    def test_reproducible_for_fixed_stream(self):
        assert random_graph(3).edges == random_graph(3).edges

    def test_weights_uniform_ks(self):
        # pool weights from many generated graphs; KS against U(0, 1]
        rng = np.random.default_rng(123)
        weights = []
        while len(weights) < 100_000:
            g = generate_graph(52, rng)
            weights.extend(w for _, _, w in g.edges)
        result = stats.kstest(np.array(weights[:100_000]), "uniform")
        assert result.pvalue > 0.01


class TestObjectives:
    def test_raw_no_cut(self):
        assert raw_objective(unit_triangle(), [0, 0, 0]) == 0.0

    def test_raw_triangle_one_flipped(self):
        # enumeration by hand: cutting one node from the other two cuts 2 edges
        assert raw_objective(unit_triangle(), [0, 0, 1]) == 2.0

    def test_raw_single_edge(self):
        g = WeightedGraph(2, ((2, 1, 0.5),))
        assert raw_objective(g, [0, 1]) == 0.5

    def test_raw_length_checked(self):
        with pytest.raises(LengthMismatch):
            raw_objective(unit_triangle(), [0, 0])

    def test_reduced_zero_assignment(self):
        for seed in range(5):
            g = random_graph(seed)
            assert reduced_objective(g, np.zeros(g.n_variables, dtype=int)) == 0.0

    def test_reduced_triangle(self):
        assert reduced_objective(unit_triangle(), [1, 0]) == 2.0

    def test_reduced_equals_raw_with_pinned_node(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            g = random_graph(int(rng.integers(100)))
            bits = rng.integers(0, 2, g.n_variables)
            assert reduced_objective(g, bits) == raw_objective(g, np.concatenate(([0], bits)))

    def test_batch_matches_scalar_exactly(self):
        g = random_graph(11)
        rng = np.random.default_rng(0)
        bits = rng.integers(0, 2, (64, g.n_variables)).astype(np.uint8)
        batch = batch_reduced_objective(g, bits)
        for row, value in zip(bits, batch):
            assert reduced_objective(g, row) == value


class TestFlipDelta:
    def test_triangle_first_flip(self):
        assert flip_delta(unit_triangle(), [0, 0], 0) == 2.0

    def test_involution(self):
        g = random_graph(5)
        rng = np.random.default_rng(5)
        bits = rng.integers(0, 2, g.n_variables)
        for var in range(g.n_variables):
            flipped = bits.copy()
            d1 = flip_delta(g, bits, var)
            flipped[var] ^= 1
            d2 = flip_delta(g, flipped, var)
            assert d1 + d2 == pytest.approx(0.0, abs=1e-15)

    def test_index_range_checked(self):
        with pytest.raises(IndexOutOfRange):
            flip_delta(unit_triangle(), [0, 0], 2)

    def test_matches_recomputation_10k(self):
        rng = np.random.default_rng(2024)
        graphs = [random_graph(s, 12) for s in range(20)]
        for case in range(10_000):
            g = graphs[case % len(graphs)]
            bits = rng.integers(0, 2, g.n_variables)
            var = int(rng.integers(g.n_variables))
            flipped = bits.copy()
            flipped[var] ^= 1
            direct = reduced_objective(g, flipped) - reduced_objective(g, bits)
            assert abs(flip_delta(g, bits, var) - direct) < 1e-12

    def test_all_flip_deltas_matches_single(self):
        g = random_graph(9)
        rng = np.random.default_rng(9)
        bits = rng.integers(0, 2, g.n_variables)
        vector = all_flip_deltas(g, bits)
        for var in range(g.n_variables):
            assert vector[var] == pytest.approx(flip_delta(g, bits, var), abs=1e-12)
