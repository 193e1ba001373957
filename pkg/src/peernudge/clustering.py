"""One-dimensional k-means with silhouette-based model selection.

Each metadata feature is clustered independently, so everything here works
on scalar value lists.  Determinism rules: k-means++ restarts draw from a
seeded generator, the best restart is chosen by within-cluster sum of
squares, and final cluster ids are relabeled in ascending centroid order.
"""

from __future__ import annotations

import numpy as np

from peernudge.errors import SingleClusterError, TooFewDistinctValuesError

MAX_LLOYD_ITERS = 300


def _assign(values: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    # nearest centroid; argmin takes the first (lowest id) on exact ties
    return np.argmin(np.abs(values[:, None] - centroids[None, :]), axis=1)


def _wcss(values: np.ndarray, centroids: np.ndarray, assign: np.ndarray) -> float:
    return float(np.sum((values - centroids[assign]) ** 2))


def kmeanspp_init(values: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Seeded k-means++ seeding: each center drawn proportional to d^2."""
    centers = [values[rng.integers(values.size)]]
    while len(centers) < k:
        d2 = np.min((values[:, None] - np.array(centers)[None, :]) ** 2, axis=1)
        total = d2.sum()
        if total == 0.0:  # all remaining points coincide with a center
            remaining = np.setdiff1d(values, np.array(centers))
            centers.append(remaining[0])
            continue
        centers.append(values[rng.choice(values.size, p=d2 / total)])
    return np.array(centers, dtype=np.float64)


def lloyd(values: np.ndarray, centroids: np.ndarray):
    """Lloyd's iterations to an assignment fixpoint (or the iteration cap).

    Returns (assignments, centroids, wcss_history) where the history holds
    the within-cluster sum of squares after every assignment step; it is
    non-increasing.
    """
    assign = _assign(values, centroids)
    history = [_wcss(values, centroids, assign)]
    for _ in range(MAX_LLOYD_ITERS):
        new_centroids = centroids.copy()
        for c in range(centroids.size):
            members = values[assign == c]
            if members.size:
                new_centroids[c] = members.mean()
            else:
                # revive an empty cluster with the point farthest from its
                # current centroid (deterministic: first argmax)
                dist = np.abs(values - new_centroids[assign])
                far = int(np.argmax(dist))
                new_centroids[c] = values[far]
        new_assign = _assign(values, new_centroids)
        centroids = new_centroids
        history.append(_wcss(values, centroids, new_assign))
        if np.array_equal(new_assign, assign):
            break
        assign = new_assign
    return assign, centroids, history


def kmeans_1d(values, k: int, restarts: int = 10, seed: int = 0):
    """Cluster scalars into k groups; returns (assignments, centroids).

    Best of ``restarts`` k-means++ initializations by WCSS; centroids come
    back sorted ascending with cluster ids relabeled to match.
    """
    values = np.asarray(values, dtype=np.float64).ravel()
    if k < 1:
        raise ValueError("k must be >= 1")
    distinct = np.unique(values)
    if distinct.size < k:
        raise TooFewDistinctValuesError(
            f"need at least {k} distinct values, got {distinct.size}"
        )
    if k == 1:
        return np.zeros(values.size, dtype=np.int64), np.array([values.mean()])
    best = None
    for restart in range(max(restarts, 1)):
        rng = np.random.default_rng((seed, restart))
        assign, centroids, _ = lloyd(values, kmeanspp_init(values, k, rng))
        score = _wcss(values, centroids, assign)
        if best is None or score < best[0] - 1e-12:
            best = (score, assign, centroids)
    _, assign, centroids = best
    order = np.argsort(centroids, kind="stable")
    relabel = np.empty(k, dtype=np.int64)
    relabel[order] = np.arange(k)
    return relabel[assign], centroids[order]


def silhouette(values, assignments) -> float:
    """Mean silhouette score of a 1-D clustering, in [-1, 1].

    Per point: a = mean distance to its own cluster's other members, b = the
    smallest mean distance to another cluster, score = (b - a) / max(a, b).
    Points in singleton clusters contribute 0, as does the degenerate
    max(a, b) == 0 case.
    """
    values = np.asarray(values, dtype=np.float64).ravel()
    assignments = np.asarray(assignments).ravel()
    labels = np.unique(assignments)
    if labels.size < 2:
        raise SingleClusterError("silhouette needs at least two clusters")
    dist = np.abs(values[:, None] - values[None, :])
    scores = np.zeros(values.size)
    for i in range(values.size):
        own = assignments == assignments[i]
        n_own = int(own.sum())
        if n_own <= 1:
            continue
        a = dist[i, own].sum() / (n_own - 1)
        b = min(
            float(dist[i, assignments == lab].mean())
            for lab in labels if lab != assignments[i]
        )
        denom = max(a, b)
        if denom > 0.0:
            scores[i] = (b - a) / denom
    return float(scores.mean())


def select_k(values, k_range=range(2, 9), restarts: int = 10, seed: int = 0):
    """Best k by silhouette; returns (k, assignments, centroids).

    Boolean inputs bypass k-means entirely: the two values are the two
    clusters (False -> 0, True -> 1).  For numeric inputs, every k in
    ``k_range`` that is feasible (k <= number of distinct values) is tried
    and the highest silhouette wins, smaller k on ties.
    """
    values = np.asarray(values)
    if values.dtype == np.bool_:
        assignments = values.astype(np.int64)
        centroids = np.unique(assignments).astype(np.float64)
        return int(centroids.size), assignments, centroids
    values = values.astype(np.float64)
    ks = sorted(set(int(k) for k in k_range))
    if not ks or ks[0] < 2 or ks[-1] > 8:
        raise ValueError("k_range must lie within [2, 8]")
    n_distinct = np.unique(values).size
    feasible = [k for k in ks if k <= n_distinct]
    if not feasible:
        raise TooFewDistinctValuesError(
            f"no k in {ks} is feasible for {n_distinct} distinct values"
        )
    best = None
    for k in feasible:
        assign, centroids = kmeans_1d(values, k, restarts=restarts, seed=seed)
        score = silhouette(values, assign)
        if best is None or score > best[0] + 1e-12:
            best = (score, k, assign, centroids)
    _, k, assign, centroids = best
    return k, assign, centroids
