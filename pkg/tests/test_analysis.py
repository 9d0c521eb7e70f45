"""Tests for binning, ranking, agreement metrics and the simulation harnesses."""

import math

import numpy as np
import pytest

from kendalltrans import (
    DomainError,
    FeatureRanking,
    bin_equal_frequency,
    bin_equal_width,
    jaccard_max,
    make_correlated_table,
    rank_features,
    simulate_bivariate,
    simulate_integration,
    simulate_multivariate,
    spearman_rho,
    split_merge_rankings,
)
from kendalltrans.analysis import PERCENTILE_LEVELS, _rng

LOG2 = math.log(2.0)


def increasing_map(rng, x):
    finite = x[~np.isnan(x)]
    lo, hi = finite.min() - 1.0, finite.max() + 1.0
    knots = np.concatenate([[lo], np.sort(rng.uniform(lo, hi, 6)), [hi]])
    values = np.cumsum(rng.uniform(0.1, 2.0, knots.size))
    return np.interp(x, knots, values)


class TestEqualWidth:
    def test_boundary_goes_to_upper_bin(self):
        np.testing.assert_array_equal(bin_equal_width([0.0, 0.5, 1.0], 2), [0, 1, 1])

    def test_labels_within_range(self):
        rng = np.random.default_rng(0)
        x = rng.normal(size=100)
        labels = bin_equal_width(x, 3)
        assert set(np.unique(labels)) <= {0, 1, 2}

    def test_not_monotone_invariant(self):
        x = np.array([0.0, 1.0, 2.0])
        before = bin_equal_width(x, 2)
        after = bin_equal_width(np.exp(x), 2)
        assert not np.array_equal(before, after)

    def test_nan_stays_missing(self):
        labels = bin_equal_width([0.0, np.nan, 1.0], 2)
        assert labels[1] == -1

    def test_constant_rejected(self):
        with pytest.raises(DomainError):
            bin_equal_width([2.0, 2.0, 2.0], 3)
        with pytest.raises(DomainError):
            bin_equal_width([1.0, 2.0], 1)


class TestEqualFrequency:
    def test_exact_tertiles(self):
        labels = bin_equal_frequency(np.arange(1.0, 10.0), 3)
        np.testing.assert_array_equal(labels, [0, 0, 0, 1, 1, 1, 2, 2, 2])

    def test_monotone_invariant(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            x = rng.normal(size=30)
            before = bin_equal_frequency(x, 4)
            after = bin_equal_frequency(increasing_map(rng, x), 4)
            np.testing.assert_array_equal(before, after)

    def test_tie_block_falls_into_lower_bin(self):
        labels = bin_equal_frequency([1.0, 2.0, 2.0, 2.0, 3.0], 2)
        np.testing.assert_array_equal(labels, [0, 0, 0, 0, 1])

    def test_constant_rejected(self):
        with pytest.raises(DomainError):
            bin_equal_frequency([5.0, 5.0], 2)


class TestRankFeatures:
    def test_identical_feature_tops_with_log2(self):
        rng = np.random.default_rng(2)
        y = rng.permutation(12).astype(float)
        table = {"noise": rng.normal(size=12), "copy": y.copy(), "y": y}
        ranking = rank_features(table, "y")
        assert ranking.names[0] == "copy"
        assert ranking.scores["copy"] == LOG2

    def test_independent_features_score_near_zero(self):
        rng = np.random.default_rng(3)
        table = {
            "a": rng.normal(size=300),
            "b": rng.normal(size=300),
            "y": rng.normal(size=300),
        }
        ranking = rank_features(table, "y")
        assert all(score < 0.02 for score in ranking.scores.values())

    def test_monotone_invariance_of_scores_and_order(self):
        rng = np.random.default_rng(4)
        y = rng.normal(size=15)
        table = {
            "f1": y + rng.normal(size=15),
            "f2": rng.normal(size=15),
            "y": y,
        }
        base = rank_features(table, "y")
        warped = {name: increasing_map(rng, np.asarray(v, float)) for name, v in table.items()}
        assert rank_features(warped, "y") == base

    def test_tie_break_keeps_column_order(self):
        y = np.arange(8.0)
        table = {"beta": y.copy(), "alpha": y.copy(), "y": y}
        ranking = rank_features(table, "y")
        assert ranking.names == ("beta", "alpha")

    def test_binary_categorical_decision_matches_numeric_indicator(self):
        rng = np.random.default_rng(5)
        x = rng.normal(size=14)
        labels = np.array(["hi" if v > 0 else "lo" for v in x], dtype=object)
        numeric = np.array([1.0 if v > 0 else 0.0 for v in x])
        table_cat = {"f": x, "y": labels}
        table_num = {"f": x, "y": numeric}
        got = rank_features(table_cat, "y")
        want = rank_features(table_num, "y")
        assert got.entries == want.entries

    def test_multiclass_categorical_decision(self):
        rng = np.random.default_rng(6)
        x = rng.normal(size=30)
        labels = np.array(
            ["low" if v < -0.5 else "high" if v > 0.5 else "mid" for v in x],
            dtype=object,
        )
        ranking = rank_features({"f": x, "noise": rng.normal(size=30), "y": labels}, "y")
        assert ranking.names[0] == "f"

    def test_binned_method_tags_and_difference(self):
        rng = np.random.default_rng(7)
        y = rng.normal(size=40)
        feat = increasing_map(rng, y)
        feat_out = feat.copy()
        feat_out[0] += 1e4  # outlier collapses its equal-width bins
        noisy = y + 0.4 * rng.normal(size=40)
        table = {"mono": feat_out, "noisy": noisy, "y": y}
        kend = rank_features(table, "y", method="kendall")
        width = rank_features(table, "y", method="width", bins=3)
        assert kend.method == "kendall"
        assert width.method == "width:3"
        assert kend.names[0] == "mono"
        assert width.names[0] == "noisy"

    def test_errors(self):
        y = np.arange(6.0)
        with pytest.raises(DomainError):
            rank_features({"f": y, "y": y}, "missing")
        with pytest.raises(DomainError):
            rank_features({"y": y}, "y")
        with pytest.raises(DomainError):
            rank_features({"f": y, "y": np.ones(6)}, "y")
        with pytest.raises(DomainError):
            rank_features({"f": y[:5], "y": y}, "y")
        with pytest.raises(DomainError):
            rank_features({"f": y, "y": y}, "y", method="magic")

    def test_degenerate_decision_rejected_in_binned_methods(self):
        y = np.arange(6.0)
        with pytest.raises(DomainError):
            rank_features({"f": y, "y": np.ones(6)}, "y", method="width")
        constant_labels = np.array(["same"] * 6, dtype=object)
        with pytest.raises(DomainError):
            rank_features({"f": y, "y": constant_labels}, "y", method="freq")


class TestJaccardMax:
    def ranking(self, *names):
        scores = np.linspace(1.0, 0.1, len(names))
        return FeatureRanking(
            entries=tuple((n, float(s)) for n, s in zip(names, scores)),
            method="kendall",
        )

    def test_perfect_head_agreement(self):
        ranking = self.ranking("a", "b", "c", "d")
        assert jaccard_max(ranking, {"a", "b"}) == 1.0

    def test_singleton_ranked_first(self):
        assert jaccard_max(self.ranking("a", "b", "c"), {"a"}) == 1.0

    def test_singleton_ranked_last_of_ten(self):
        names = [f"f{i}" for i in range(10)]
        assert jaccard_max(self.ranking(*names), {"f9"}) == pytest.approx(0.1)

    def test_errors(self):
        with pytest.raises(DomainError):
            jaccard_max(self.ranking("a", "b"), set())
        with pytest.raises(DomainError):
            jaccard_max(self.ranking("a", "b"), {"zzz"})


class TestSpearmanRho:
    def test_perfect_and_inverse(self):
        x = [3.0, 1.0, 2.0, 5.0]
        assert spearman_rho(x, x) == pytest.approx(1.0)
        assert spearman_rho(x, [-v for v in x]) == pytest.approx(-1.0)

    def test_hand_computed(self):
        assert spearman_rho([1, 2, 3], [2, 1, 3]) == pytest.approx(0.5)

    def test_constant_rejected(self):
        with pytest.raises(DomainError):
            spearman_rho([1, 2, 3], [4, 4, 4])


class TestSimulateBivariate:
    def test_deterministic_per_seed(self):
        a = simulate_bivariate(0.5, 30, reps=5, seed=11)
        b = simulate_bivariate(0.5, 30, reps=5, seed=11)
        for key in a.estimates:
            np.testing.assert_array_equal(a.estimates[key], b.estimates[key])
        assert a.percentiles == b.percentiles

    def test_estimator_keys_and_shape(self):
        result = simulate_bivariate(0.3, 25, reps=7, seed=0)
        assert set(result.estimates) == {"kendall", "width3", "width5", "gauss"}
        assert all(v.shape == (7,) for v in result.estimates.values())

    def test_percentiles_are_order_statistics(self):
        result = simulate_bivariate(0.7, 25, reps=9, seed=1)
        for key, bands in result.percentiles.items():
            sample = set(result.estimates[key].tolist())
            assert set(bands) == set(PERCENTILE_LEVELS)
            assert all(v in sample for v in bands.values())

    def test_domain(self):
        with pytest.raises(DomainError):
            simulate_bivariate(1.0, 30)
        with pytest.raises(DomainError):
            simulate_bivariate(0.5, 3)


class TestSimulateMultivariate:
    def test_pure_first_component_is_fully_informative(self):
        scores = simulate_multivariate(1.0, "linear", n=50, seed=3)
        assert scores["mi_a_y"] == LOG2

    def test_deterministic_and_keyed(self):
        a = simulate_multivariate(0.4, "max", n=30, seed=5)
        b = simulate_multivariate(0.4, "max", n=30, seed=5)
        assert a == b
        assert set(a) == {
            "mi_a_y", "mi_b_y", "mi_ab_y",
            "cmi_a_b_given_y", "cmi_a_c_given_y", "interaction_a_b_y",
        }

    def test_domain(self):
        with pytest.raises(DomainError):
            simulate_multivariate(1.5, "linear", n=30)
        with pytest.raises(DomainError):
            simulate_multivariate(0.5, "linear", n=10)
        with pytest.raises(DomainError):
            simulate_multivariate(0.5, "cubic", n=30)


class TestSimulateIntegration:
    def test_identity_scale_keeps_naive_perfect(self):
        table = make_correlated_table(16, 6, seed=2)
        result = simulate_integration(table, "y", scale=1.0, reps=5, seed=7)
        np.testing.assert_allclose(result.estimates["naive"], 1.0, atol=1e-12)

    def test_merged_rankings_scale_invariant(self):
        table = make_correlated_table(16, 6, seed=2)
        rankings = []
        for scale in (0.1, 3.0, 1000.0):
            _, merged = split_merge_rankings(table, "y", scale, _rng(7, 0))
            rankings.append(merged)
        assert rankings[0] == rankings[1] == rankings[2]

    def test_deterministic(self):
        table = make_correlated_table(16, 6, seed=2)
        a = simulate_integration(table, "y", scale=3.0, reps=4, seed=1)
        b = simulate_integration(table, "y", scale=3.0, reps=4, seed=1)
        for key in a.estimates:
            np.testing.assert_array_equal(a.estimates[key], b.estimates[key])

    def test_domain(self):
        table = make_correlated_table(16, 6, seed=2)
        with pytest.raises(DomainError):
            simulate_integration(table, "y", scale=0.0)
        with pytest.raises(DomainError):
            simulate_integration(table, "y", reps=0)


class TestMakeCorrelatedTable:
    def test_shape_names_and_determinism(self):
        t1 = make_correlated_table(12, 5, seed=9)
        t2 = make_correlated_table(12, 5, seed=9)
        assert list(t1) == ["f00", "f01", "f02", "f03", "f04", "y"]
        for key in t1:
            np.testing.assert_array_equal(t1[key], t2[key])
        assert all(len(v) == 12 for v in t1.values())
        assert all((t1[k] > 0).all() for k in t1 if k != "y")
