"""Evaluation metrics: label-permutation error, eigen-gap, variance ratios.

Estimated community labels are only defined up to relabeling, so the
error metrics search over label permutations. The variance-ratio
diagnostic measures how much of an eigenvector's variance lies between
ground-truth communities — a cheap answer to "which eigenvectors carry
community signal".
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import NamedTuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from .graphs import Graph
from .spectral import build_regularized_laplacian, top_eigenpairs

# exhaustive permutation search is exact and affordable up to 8 classes
_EXHAUSTIVE_LIMIT = 8

_DEGENERATE_TOTAL = 1e-24


class ErrorRate(NamedTuple):
    """Clustering error under the best relabeling: node count and rate."""

    count: int
    rate: float


def _check_labels(estimated, truth):
    estimated = np.asarray(estimated, dtype=np.int64)
    truth = np.asarray(truth, dtype=np.int64)
    if truth.ndim != 1 or truth.shape != estimated.shape:
        raise ValueError("label arrays must be 1-D and of equal length")
    if truth.size == 0:
        raise ValueError("empty label arrays")
    if truth.min() < 1 or estimated.min() < 1:
        raise ValueError("labels must be positive integers (1..K)")
    if estimated.max() > truth.max():
        raise ValueError(
            f"estimated labels use {int(estimated.max())} classes but the "
            f"ground truth has only {int(truth.max())}"
        )
    return estimated, truth


def confusion_matrix(estimated, truth) -> np.ndarray:
    """Square confusion matrix ``C[e-1, t-1] = #{i : est=e, truth=t}``.

    The matrix is K x K with K the ground-truth class count, so labels
    the estimator never used appear as all-zero rows.
    """
    estimated, truth = _check_labels(estimated, truth)
    k = int(truth.max())
    c = np.zeros((k, k), dtype=np.int64)
    np.add.at(c, (estimated - 1, truth - 1), 1)
    return c


def error_count(estimated, truth) -> int:
    """Misclustered nodes under the best relabeling of the estimate.

    Minimizes ``#{i : tau(est_i) != truth_i}`` over permutations tau of
    {1..K}. Exact: exhaustive search up to 8 classes, Hungarian
    assignment on the confusion matrix beyond.
    """
    c = confusion_matrix(estimated, truth)
    k = c.shape[0]
    n = int(c.sum())
    if k <= _EXHAUSTIVE_LIMIT:
        best = max(
            sum(c[e, perm[e]] for e in range(k))
            for perm in permutations(range(k))
        )
    else:
        rows, cols = linear_sum_assignment(c, maximize=True)
        best = int(c[rows, cols].sum())
    return n - int(best)


def error_rate(estimated, truth) -> ErrorRate:
    """Error count and rate under the best relabeling of the estimate.

    Returns:
        ErrorRate(count, rate) with ``rate = count / n``.

    Raises:
        ValueError: length mismatch, labels below 1, or the estimate
            using more classes than the ground truth.
    """
    estimated, truth = _check_labels(estimated, truth)
    count = error_count(estimated, truth)
    return ErrorRate(count=count, rate=count / truth.size)


def gap_statistic(values, k: int) -> float:
    """Relative eigen-gap ``1 - lambda_{k+1} / lambda_k`` (signed ratio).

    The k+1 largest-magnitude values are taken (on a magnitude tie the
    positive value first), arranged in descending signed order, and the
    gap is one minus the ratio of the last two. On a basis of exactly
    k+1 pairs this is simply ``1 - values[k]/values[k-1]``; on deeper
    bases the subset step keeps the statistic independent of depth.

    The ratio is signed: a sign change across the gap gives a statistic
    above 1. By convention the gap is exactly 1 when the (k+1)-th value
    is zero.

    Raises:
        ValueError: fewer than k + 1 values, or lambda_k == 0.
    """
    values = np.asarray(values, dtype=np.float64)
    if k < 1:
        raise ValueError("k must be >= 1")
    if values.shape[0] < k + 1:
        raise ValueError(f"need at least {k + 1} eigenvalues, got {values.shape[0]}")
    if values.shape[0] > k + 1:
        order = np.lexsort((-np.sign(values), -np.abs(values)))
        values = values[order[: k + 1]]
        values = -np.sort(-values)
    if values[k - 1] == 0.0:
        raise ValueError(f"eigenvalue {k} is exactly zero; gap undefined")
    if values[k] == 0.0:
        return 1.0
    return float(1.0 - values[k] / values[k - 1])


def rayleigh_quotient(vector, labels) -> float:
    """Fraction of a vector's variance explained by a partition.

    With group means x_bar_g and grand mean x_bar:

        Q = sum_g n_g (x_bar_g - x_bar)^2 / sum_i (x_i - x_bar)^2

    Q is in [0, 1], invariant under affine maps of the vector, and ~1/n
    for community-free vectors. A vector with total variance below 1e-24
    (numerically constant) returns 0 by convention.
    """
    x = np.asarray(vector, dtype=np.float64).ravel()
    labels = np.asarray(labels, dtype=np.int64)
    if x.shape != labels.shape:
        raise ValueError("vector and labels must have equal length")
    if labels.min() < 1:
        raise ValueError("labels must be positive integers (1..K)")
    centered = x - x.mean()
    total = float(centered @ centered)
    if total < _DEGENERATE_TOTAL:
        return 0.0
    counts = np.bincount(labels)[1:]
    sums = np.bincount(labels, weights=centered)[1:]
    nonzero = counts > 0
    between = float((sums[nonzero] ** 2 / counts[nonzero]).sum())
    return between / total


@dataclass(frozen=True, eq=False)
class ScreeRQReport:
    """Leading-eigenvalue scree and per-eigenvector variance ratios.

    Computed for both spectral matrices side by side: the raw adjacency
    matrix and the regularized Laplacian with the given delta. Arrays
    have length ``depth`` (clipped to n), in presentation order.
    """

    depth: int
    delta: float
    adjacency_values: np.ndarray
    adjacency_rq: np.ndarray
    laplacian_values: np.ndarray
    laplacian_rq: np.ndarray


def scree_and_rq_report(g: Graph, depth: int, delta: float = 0.1,
                        seed: int = 0) -> ScreeRQReport:
    """Spectral diagnostics against ground truth, for both matrices.

    Args:
        g: labeled graph.
        depth: number of leading eigenpairs to report (clipped to n).
        delta: ridge for the regularized Laplacian panel.
        seed: eigensolver start-vector seed.

    Raises:
        ValueError: unlabeled graph or depth < 1.
    """
    if g.labels is None:
        raise ValueError("scree/variance report needs ground-truth labels")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    depth = min(depth, g.n)

    panels = {}
    for name, matrix in (
        ("adjacency", g.adjacency()),
        ("laplacian", build_regularized_laplacian(g, delta)),
    ):
        basis = top_eigenpairs(matrix, depth, seed=seed)
        rq = np.array([
            rayleigh_quotient(basis.vectors[:, j], g.labels)
            for j in range(depth)
        ])
        panels[name] = (basis.values, rq)

    return ScreeRQReport(
        depth=depth,
        delta=delta,
        adjacency_values=panels["adjacency"][0],
        adjacency_rq=panels["adjacency"][1],
        laplacian_values=panels["laplacian"][0],
        laplacian_rq=panels["laplacian"][1],
    )
