import numpy as np
import pytest
from statsmodels.stats.proportion import proportion_confint

from maxcutbench.errors import (
    BadCounts,
    EmptyRange,
    EmptySummary,
    LengthMismatch,
    TooFewValues,
    ZeroReference,
)
from maxcutbench.stats import (
    approximation_ratio,
    binned_correlation,
    difference_curve,
    max_advantage,
    mean_sem,
    prob_better,
    success_probability,
    wilson_interval,
)


class TestApproximationRatio:
    def test_best_equals_optimum(self):
        assert approximation_ratio([2.0], 2.0)[0] == 1.0

    def test_all_zero_best(self):
        assert approximation_ratio([0.0, 0.0], 1.3).tolist() == [0.0, 0.0]

    def test_zero_reference(self):
        with pytest.raises(ZeroReference):
            approximation_ratio([1.0], 0.0)


class TestMeanSem:
    def test_one_two_three(self):
        mean, sem = mean_sem([1.0, 2.0, 3.0])
        assert mean == 2.0
        assert sem == pytest.approx(1.0 / np.sqrt(3.0), abs=1e-12)

    def test_constant(self):
        assert mean_sem([4.0, 4.0, 4.0]) == (4.0, 0.0)

    def test_two_values(self):
        mean, sem = mean_sem([0.0, 1.0])
        assert mean == 0.5
        assert sem == pytest.approx(0.5, abs=1e-12)

    def test_too_few(self):
        with pytest.raises(TooFewValues):
            mean_sem([1.0])


class TestWilson:
    def test_zero_successes_pins_lower_bound(self):
        low, high = wilson_interval(0, 10, 0.95)
        assert low == 0.0
        assert 0 < high < 1

    def test_all_successes_pins_upper_bound(self):
        low, high = wilson_interval(10, 10, 0.95)
        assert high == 1.0
        assert 0 < low < 1

    def test_eight_of_ten(self):
        low, high = wilson_interval(8, 10, 0.95)
        assert low == pytest.approx(0.490, abs=0.002)
        assert high == pytest.approx(0.943, abs=0.002)

    @pytest.mark.parametrize(
        "successes,trials", [(0, 1), (1, 1), (3, 7), (25, 60), (200, 250), (997, 1000)]
    )
    def test_matches_statsmodels(self, successes, trials):
        low, high = wilson_interval(successes, trials, 0.95)
        ref_low, ref_high = proportion_confint(successes, trials, 0.05, method="wilson")
        assert low == pytest.approx(ref_low, abs=1e-10)
        assert high == pytest.approx(ref_high, abs=1e-10)

    def test_bounds_ordering_and_narrowing(self):
        point = 0.35
        widths = []
        for trials in (20, 80, 320):
            successes = int(point * trials)
            low, high = wilson_interval(successes, trials, 0.95)
            assert 0.0 <= low <= successes / trials <= high <= 1.0
            widths.append(high - low)
        assert widths[0] > widths[1] > widths[2]

    def test_bad_counts(self):
        with pytest.raises(BadCounts):
            wilson_interval(5, 4, 0.95)
        with pytest.raises(BadCounts):
            wilson_interval(-1, 4, 0.95)
        with pytest.raises(BadCounts):
            wilson_interval(0, 0, 0.95)


class TestProbBetter:
    def test_identical_values_no_strict_wins(self):
        values = np.linspace(0, 1, 50)
        point, low, high = prob_better(values, values)
        assert point == 0.0 and low == 0.0

    def test_all_wins_over_250_pairs(self):
        a = np.ones(250)
        b = np.zeros(250)
        point, low, high = prob_better(a, b)
        assert point == 1.0 and high == 1.0
        assert low == pytest.approx(0.985, abs=0.002)

    def test_alternating_wins(self):
        a = np.tile([1.0, 0.0], 125)
        b = np.tile([0.0, 1.0], 125)
        point, _, _ = prob_better(a, b)
        assert point == 0.5

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            prob_better([1.0], [1.0, 2.0])


class TestSuccessProbability:
    def test_every_run_succeeds(self):
        point, _, high = success_probability(np.full(20, 1.25), 1.25)
        assert point == 1.0 and high == 1.0

    def test_no_run_succeeds(self):
        point, low, _ = success_probability(np.full(20, 1.0), 1.25)
        assert point == 0.0 and low == 0.0

    def test_200_of_250(self):
        values = np.concatenate([np.full(200, 1.1), np.full(50, 0.9)])
        point, low, high = success_probability(values, 1.1)
        assert point == pytest.approx(0.8)
        assert low == pytest.approx(0.746, abs=0.002)
        assert high == pytest.approx(0.845, abs=0.002)

    def test_tolerance_is_tight(self):
        assert success_probability([1.0 + 2e-9], 1.0)[0] == 0.0
        assert success_probability([1.0 + 0.5e-9], 1.0)[0] == 1.0


class TestDifferenceCurve:
    def test_equal_curves_zero(self):
        curves = np.random.default_rng(0).random((6, 9))
        summary = difference_curve(curves, curves)
        assert (summary.mean == 0).all() and (summary.sem == 0).all()

    def test_constant_offset(self):
        base = np.random.default_rng(1).random((5, 7))
        summary = difference_curve(base + 0.125, base)
        assert summary.mean == pytest.approx([0.125] * 7, abs=1e-12)
        assert summary.sem == pytest.approx([0.0] * 7, abs=1e-12)

    def test_hand_computed_pairs(self):
        a = np.array([[1.0], [0.8], [0.6], [1.0]])
        b = np.array([[0.9], [0.9], [0.5], [0.6]])
        summary = difference_curve(a, b)
        diffs = np.array([0.1, -0.1, 0.1, 0.4])
        assert summary.mean[0] == pytest.approx(diffs.mean())
        assert summary.sem[0] == pytest.approx(diffs.std(ddof=1) / 2.0)

    def test_antisymmetry_exact(self):
        rng = np.random.default_rng(2)
        a, b = rng.random((8, 5)), rng.random((8, 5))
        ab = difference_curve(a, b)
        ba = difference_curve(b, a)
        assert np.array_equal(ab.mean, -ba.mean)
        assert np.array_equal(ab.sem, ba.sem)

    def test_shape_mismatch(self):
        with pytest.raises(LengthMismatch):
            difference_curve(np.zeros((3, 4)), np.zeros((3, 5)))


class TestMaxAdvantage:
    def test_monotone_curve_picks_last(self):
        summary = difference_curve(np.cumsum(np.ones((3, 6)), axis=1), np.zeros((3, 6)))
        iteration, value, evals = max_advantage(summary, 100)
        assert iteration == 6 and evals == 600

    def test_peak_in_middle(self):
        mean = np.array([0.0, 0.1, 0.5, 0.2, 0.0])
        summary = difference_curve(np.tile(mean, (2, 1)), np.zeros((2, 5)))
        iteration, value, evals = max_advantage(summary, 1000)
        assert (iteration, value, evals) == (3, 0.5, 3000)

    def test_plateau_tie_picks_earliest(self):
        mean = np.array([0.0, 0.1, 0.1, 0.1, 0.0])
        summary = difference_curve(np.tile(mean, (2, 1)), np.zeros((2, 5)))
        iteration, _, _ = max_advantage(summary, 10)
        assert iteration == 2

    def test_empty(self):
        from maxcutbench.stats import SummaryStatistics

        with pytest.raises(EmptySummary):
            max_advantage(SummaryStatistics(np.array([]), np.array([]), 0), 10)


class TestBinnedCorrelation:
    def test_all_x_identical_single_bin(self):
        x = np.full(10, 0.95)
        y = np.linspace(0, 1, 10)
        binned = binned_correlation(x, y, n_bins=12)
        assert binned.bin_index.size == 1
        assert binned.count[0] == 10
        assert binned.x_std[0] == pytest.approx(0.0, abs=1e-12)

    def test_identity_pairing(self):
        rng = np.random.default_rng(3)
        x = rng.uniform(0.88, 1.0, 200)
        binned = binned_correlation(x, x, n_bins=8)
        assert np.array_equal(binned.x_mean, binned.y_mean)
        assert np.array_equal(binned.x_std, binned.y_std)
        assert binned.count.sum() == 200

    def test_hand_computed_two_bins(self):
        x = np.array([0.1, 0.2, 0.3, 0.6, 0.7, 0.8])
        y = np.array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
        binned = binned_correlation(x, y, n_bins=2, x_range=(0.0, 1.0))
        assert binned.bin_index.tolist() == [0, 1]
        assert binned.count.tolist() == [3, 3]
        assert binned.x_mean == pytest.approx([0.2, 0.7])
        assert binned.y_mean == pytest.approx([2.0, 5.0])
        assert binned.y_std == pytest.approx([1.0, 1.0])

    def test_bin_population_and_width_invariants(self):
        rng = np.random.default_rng(4)
        x = rng.uniform(0.87856, 1.0, 500)
        y = rng.random(500)
        binned = binned_correlation(x, y)
        assert binned.count.sum() == 500
        assert (binned.x_std <= binned.bin_width).all()

    def test_outside_range_excluded_and_edges(self):
        x = np.array([0.0, 0.5, 1.0, 1.5])
        binned = binned_correlation(x, x, n_bins=2, x_range=(0.0, 1.0))
        # 1.5 excluded; x == 1.0 lands in the closed last bin
        assert binned.count.sum() == 3
        assert binned.bin_index.tolist() == [0, 1]

    def test_empty_range(self):
        with pytest.raises(EmptyRange):
            binned_correlation([1.0], [1.0], n_bins=2, x_range=(1.0, 1.0))
