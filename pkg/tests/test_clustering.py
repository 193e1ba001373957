import numpy as np
import pytest

from peernudge.clustering import (
    kmeans_1d,
    kmeanspp_init,
    lloyd,
    select_k,
    silhouette,
)
from peernudge.errors import SingleClusterError, TooFewDistinctValuesError


def silhouette_oracle(values, assignments):
    """Independent O(n^2) silhouette: plain Python loops, no shared code."""
    values = list(map(float, values))
    assignments = list(assignments)
    labels = sorted(set(assignments))
    if len(labels) < 2:
        raise ValueError("need two clusters")
    total = 0.0
    for i, (x, c) in enumerate(zip(values, assignments)):
        own = [abs(x - values[j]) for j in range(len(values))
               if assignments[j] == c and j != i]
        if not own:
            continue
        a = sum(own) / len(own)
        b = min(
            sum(abs(x - values[j]) for j in range(len(values))
                if assignments[j] == lab)
            / sum(1 for j in range(len(values)) if assignments[j] == lab)
            for lab in labels if lab != c
        )
        denom = max(a, b)
        if denom > 0.0:
            total += (b - a) / denom
    return total / len(values)


BLOBS = np.array([0.0, 0.1, 10.0, 10.1])
BLOB_ASSIGN = np.array([0, 0, 1, 1])
# hand computation: a = 0.1 for every point; b = 10.05, 9.95, 9.95, 10.05;
# mean((b - a) / b) = (9.95/10.05 + 9.85/9.95) / 2
BLOB_SCORE = (9.95 / 10.05 + 9.85 / 9.95) / 2.0


class TestKmeans:
    def test_two_well_separated_blobs(self):
        assign, centroids = kmeans_1d(BLOBS, k=2, restarts=5, seed=0)
        assert list(assign) == [0, 0, 1, 1]
        assert centroids == pytest.approx([0.05, 10.05])

    def test_k_one_is_mean(self):
        assign, centroids = kmeans_1d([1.0, 2.0, 6.0], k=1)
        assert list(assign) == [0, 0, 0]
        assert centroids[0] == pytest.approx(3.0)

    def test_k_equals_distinct_gives_zero_wcss(self):
        values = np.array([1.0, 1.0, 5.0, 9.0])
        assign, centroids = kmeans_1d(values, k=3, restarts=8, seed=1)
        assert np.sum((values - centroids[assign]) ** 2) == pytest.approx(0.0)

    def test_too_few_distinct(self):
        with pytest.raises(TooFewDistinctValuesError):
            kmeans_1d([1.0, 1.0, 2.0], k=3)

    def test_centroids_sorted_ascending(self, rng):
        values = rng.normal(size=50)
        _, centroids = kmeans_1d(values, k=4, restarts=6, seed=3)
        assert np.all(np.diff(centroids) >= 0)

    def test_deterministic_for_seed(self, rng):
        values = rng.normal(size=40)
        a = kmeans_1d(values, k=3, restarts=10, seed=5)
        b = kmeans_1d(values, k=3, restarts=10, seed=5)
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])

    def test_wcss_never_increases(self, rng):
        for _ in range(25):
            values = rng.normal(size=int(rng.integers(8, 60)))
            k = int(rng.integers(2, 5))
            if np.unique(values).size < k:
                continue
            init = kmeanspp_init(values, k, rng)
            _, _, history = lloyd(values, init)
            assert np.all(np.diff(history) <= 1e-9)


class TestSilhouette:
    def test_blob_case_frozen_value(self):
        score = silhouette(BLOBS, BLOB_ASSIGN)
        assert score == pytest.approx(BLOB_SCORE, abs=1e-12)
        assert score == pytest.approx(silhouette_oracle(BLOBS, BLOB_ASSIGN), abs=1e-12)
        assert score == pytest.approx(0.98999975, abs=1e-8)

    def test_identical_points_per_cluster(self):
        values = [2.0, 2.0, 7.0, 7.0]
        assert silhouette(values, [0, 0, 1, 1]) == pytest.approx(1.0)

    def test_split_blob_scores_low(self, rng):
        values = np.concatenate([rng.normal(0, 0.05, 20)])
        assignments = rng.integers(0, 2, size=20)
        if len(set(assignments.tolist())) < 2:
            assignments[0] = 0
            assignments[1] = 1
        score = silhouette(values, assignments)
        assert score == pytest.approx(silhouette_oracle(values, assignments), abs=1e-9)
        assert score < 0.5

    def test_single_cluster_rejected(self):
        with pytest.raises(SingleClusterError):
            silhouette([1.0, 2.0], [0, 0])

    def test_singleton_cluster_contributes_zero(self):
        values = [0.0, 0.1, 5.0]
        score = silhouette(values, [0, 0, 1])
        assert score == pytest.approx(silhouette_oracle(values, [0, 0, 1]), abs=1e-12)

    def test_matches_oracle_random(self, rng):
        for _ in range(100):
            n = int(rng.integers(4, 60))
            values = rng.normal(size=n) * rng.uniform(0.1, 10)
            k = int(rng.integers(2, 5))
            assignments = rng.integers(0, k, size=n)
            if len(set(assignments.tolist())) < 2:
                assignments[0], assignments[1] = 0, 1
            fast = silhouette(values, assignments)
            slow = silhouette_oracle(values, assignments)
            assert fast == pytest.approx(slow, abs=1e-9)
            assert -1.0 <= fast <= 1.0


class TestSelectK:
    def test_two_blobs(self, rng):
        values = np.concatenate([rng.normal(0, 0.1, 15), rng.normal(8, 0.1, 15)])
        k, _, _ = select_k(values, seed=2)
        assert k == 2

    def test_three_blobs_oracle_agreement(self, rng):
        values = np.concatenate([rng.normal(0, 0.1, 12), rng.normal(5, 0.1, 12),
                                 rng.normal(11, 0.1, 12)])
        k, assign, _ = select_k(values, seed=2)
        # oracle: recompute the silhouette of every candidate clustering
        scores = {}
        for candidate in range(2, 9):
            a, _ = kmeans_1d(values, candidate, restarts=10, seed=2)
            scores[candidate] = silhouette_oracle(values, a)
        assert k == max(scores, key=lambda c: (scores[c], -c))
        assert k == 3

    def test_boolean_bypass(self):
        values = np.array([True, False, True, True])
        k, assign, centroids = select_k(values)
        assert k == 2
        assert list(assign) == [1, 0, 1, 1]
        assert list(centroids) == [0.0, 1.0]

    def test_range_validation(self):
        with pytest.raises(ValueError):
            select_k(np.arange(10.0), k_range=range(1, 4))
        with pytest.raises(ValueError):
            select_k(np.arange(10.0), k_range=range(2, 12))

    def test_low_cardinality_caps_k(self):
        # three distinct values: only k in {2, 3} is feasible
        values = np.array([0.0, 0.0, 5.0, 5.0, 9.0, 9.0])
        k, _, _ = select_k(values, k_range=range(2, 9), seed=0)
        assert k == 3

    def test_no_feasible_k(self):
        with pytest.raises(TooFewDistinctValuesError):
            select_k(np.ones(5), k_range=range(2, 9))
