"""Deterministic k-means with k-means++ seeding and multi-restart search.

Self-contained implementation so the exact tie-breaking and restart
semantics are pinned down: nearest-center ties go to the lowest center
index, clusters that empty out stay empty (no reseeding), and restart r
draws from the r-th spawned child of ``SeedSequence(seed)`` so results
are reproducible independent of execution order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class KMeansResult:
    """Best clustering over all restarts.

    Attributes:
        labels: (n,) cluster index per point, values in {0..k-1}.
        centers: (k, d) cluster centers. A center whose cluster emptied
            out keeps its last position; its objective contribution is 0.
        objective: sum of squared distances of points to assigned centers.
        best_restart: index of the restart that produced this result.
        n_iter: Lloyd iterations used by the winning restart.
    """

    labels: np.ndarray
    centers: np.ndarray
    objective: float
    best_restart: int
    n_iter: int


def _squared_distances(points, centers):
    """(n, k) matrix of squared Euclidean point-to-center distances."""
    # ||x - c||^2 = ||x||^2 - 2 x.c + ||c||^2, clipped to ward off
    # tiny negative values from cancellation
    d2 = (
        np.sum(points**2, axis=1)[:, None]
        - 2.0 * points @ centers.T
        + np.sum(centers**2, axis=1)[None, :]
    )
    return np.maximum(d2, 0.0)


def _plusplus_init(points, k, rng):
    """k-means++ seeding: squared-distance-proportional sampling."""
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]), dtype=np.float64)
    chosen = np.empty(k, dtype=np.int64)
    chosen[0] = rng.integers(n)
    centers[0] = points[chosen[0]]
    d2 = _squared_distances(points, centers[:1]).ravel()
    for c in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            # all remaining mass sits on existing centers; fall back to
            # the lowest-index points not yet chosen
            leftover = np.setdiff1d(np.arange(n), chosen[:c])
            chosen[c] = leftover[0] if leftover.size else chosen[c - 1]
        else:
            target = rng.random() * total
            chosen[c] = np.searchsorted(np.cumsum(d2), target, side="right")
            chosen[c] = min(chosen[c], n - 1)
        centers[c] = points[chosen[c]]
        d2 = np.minimum(d2, _squared_distances(points, centers[c : c + 1]).ravel())
    return centers


def _lloyd(points, centers, max_iter):
    """Lloyd iterations to an assignment fixpoint; returns (labels, centers,
    objective, n_iter)."""
    n, k = points.shape[0], centers.shape[0]
    labels = np.full(n, -1, dtype=np.int64)
    it = 0
    for it in range(1, max_iter + 1):
        d2 = _squared_distances(points, centers)
        new_labels = np.argmin(d2, axis=1)  # ties -> lowest center index
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
        counts = np.bincount(labels, minlength=k)
        sums = np.zeros_like(centers)
        np.add.at(sums, labels, points)
        nonempty = counts > 0
        centers = centers.copy()
        centers[nonempty] = sums[nonempty] / counts[nonempty, None]
    else:
        # iteration cap: one last assignment so labels match final centers
        d2 = _squared_distances(points, centers)
        labels = np.argmin(d2, axis=1)
    d2 = _squared_distances(points, centers)
    objective = float(d2[np.arange(n), labels].sum())
    return labels, centers, objective, it


def kmeans(points, k: int, *, seed: int = 0, restarts: int = 100,
           max_iter: int = 300) -> KMeansResult:
    """Cluster points into k groups, keeping the best of many restarts.

    Args:
        points: (n, d) array of points.
        k: number of clusters, 1 <= k <= n.
        seed: master seed; restart r uses the r-th spawned child stream,
            and restarts run sequentially in index order.
        restarts: independent k-means++ initializations (best objective
            wins; earlier restart wins exact ties).
        max_iter: Lloyd iteration cap per restart.

    Returns:
        KMeansResult for the restart with the smallest objective.

    Raises:
        ValueError: k out of range or points not 2-D.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2:
        raise ValueError("points must be a 2-D array")
    n = points.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k} with n={n}")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")

    best = None
    seeds = np.random.SeedSequence(seed).spawn(restarts)
    for r in range(restarts):
        rng = np.random.default_rng(seeds[r])
        centers0 = _plusplus_init(points, k, rng)
        labels, centers, objective, n_iter = _lloyd(points, centers0, max_iter)
        if best is None or objective < best.objective:
            best = KMeansResult(labels=labels, centers=centers,
                                objective=objective, best_restart=r,
                                n_iter=n_iter)
    return best
