"""Community detection via entry-wise eigenvector ratios.

Two presets cover the method family:

* ``PipelineConfig.score(k)`` — the orthodox ratio method: leading
  eigenvectors of the adjacency matrix, entry-wise ratios against the
  leading vector, k-means on the ratio rows.
* ``PipelineConfig.score_plus(k)`` — the refined variant: a
  degree-regularized Laplacian replaces the adjacency matrix (pre-PCA),
  an eigen-gap rule optionally keeps one extra vector for weak-signal
  graphs, and ratios are weighted by their eigenvalues.

All stages are deterministic given the config seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .graphs import Graph, is_connected
from .spectral import EigenBasis, SymMatrix, build_regularized_laplacian, top_eigenpairs
from .kmeans import kmeans

LEADING_ENTRY_TOL = 1e-12


@dataclass(frozen=True)
class PipelineConfig:
    """Tuning knobs for the detection pipeline.

    Attributes:
        k: number of communities to recover (>= 2).
        pre_pca: run the spectral step on the regularized Laplacian
            instead of the raw adjacency matrix.
        post_pca: cluster entry-wise ratio rows; when False, cluster the
            (optionally eigenvalue-weighted) eigenvector rows directly —
            an ablation switch, not a recommended setting.
        extra_vector: apply the eigen-gap rule that may include one extra
            eigenvector when the signal is weak; when False the vector
            count is always k.
        weighted: scale each eigenvector by its eigenvalue before taking
            ratios.
        delta: ridge fraction for the regularized Laplacian (> 0 when
            pre_pca is set).
        threshold: eigen-gap threshold t in (0, 1); the extra vector is
            kept when 1 - lambda_{k+1}/lambda_k <= t.
        log_threshold: clip ratio entries to +/- log(n) instead of
            erroring on vanishing leading-vector entries. Off by default.
        seed: master seed for k-means restarts and solver start vectors.
        restarts: k-means restarts.
    """

    k: int
    pre_pca: bool = True
    post_pca: bool = True
    extra_vector: bool = True
    weighted: bool = True
    delta: float = 0.1
    threshold: float = 0.1
    log_threshold: bool = False
    seed: int = 0
    restarts: int = 100

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 2:
            raise ValueError(f"k must be an integer >= 2, got {self.k}")
        if self.pre_pca and not self.delta > 0:
            raise ValueError("pre_pca requires delta > 0")
        if self.extra_vector and not 0 < self.threshold < 1:
            raise ValueError("threshold must lie in (0, 1)")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")

    @classmethod
    def score(cls, k: int, **overrides) -> "PipelineConfig":
        """Orthodox ratio method: adjacency, k vectors, unweighted ratios."""
        base = dict(pre_pca=False, post_pca=True, extra_vector=False,
                    weighted=False)
        base.update(overrides)
        return cls(k=k, **base)

    @classmethod
    def score_plus(cls, k: int, **overrides) -> "PipelineConfig":
        """Refined variant: all stages on, (threshold, delta) = (0.1, 0.1)."""
        return cls(k=k, **overrides)

    def with_(self, **overrides) -> "PipelineConfig":
        return replace(self, **overrides)


@dataclass(frozen=True, eq=False)
class DetectionResult:
    """Output of one pipeline run.

    Attributes:
        labels: (n,) estimated community per node, values in {1..k}.
        m_used: number of eigenvectors fed to the ratio/clustering stage
            (k, or k + 1 when the weak-signal rule fired).
        eigenvalues: the k + 1 leading eigenvalues that were computed,
            in presentation order.
        gap: the eigen-gap statistic 1 - lambda_{k+1}/lambda_k (NaN when
            lambda_k was exactly zero and the rule was not required).
        weak_signal: whether gap <= threshold.
        kmeans_objective: within-cluster sum of squares of the clustering.
        config: the exact configuration that produced this result.
    """

    labels: np.ndarray
    m_used: int
    eigenvalues: np.ndarray
    gap: float
    weak_signal: bool
    kmeans_objective: float
    config: PipelineConfig


def select_vector_count(values, k: int, threshold: float = 0.1) -> int:
    """Eigen-gap rule for how many eigenvectors to keep.

    Keeps k + 1 vectors iff ``1 - values[k] / values[k-1] <= threshold``
    (signed ratio, indices in presentation order), else k. Equal
    consecutive eigenvalues give a zero gap, hence k + 1.

    Args:
        values: at least k + 1 leading eigenvalues in presentation order.
        k: target community count.
        threshold: gap threshold t in (0, 1).

    Raises:
        ValueError: fewer than k + 1 values, or values[k-1] == 0 (the
            ratio is undefined).
    """
    values = np.asarray(values, dtype=np.float64)
    if values.shape[0] < k + 1:
        raise ValueError(f"need at least {k + 1} eigenvalues, got {values.shape[0]}")
    if not 0 < threshold < 1:
        raise ValueError("threshold must lie in (0, 1)")
    if values[k - 1] == 0.0:
        raise ValueError(f"eigenvalue {k} is exactly zero; gap undefined")
    gap = 1.0 - values[k] / values[k - 1]
    return k + 1 if gap <= threshold else k


def _subset_by_magnitude(basis: EigenBasis, m: int) -> EigenBasis:
    """The m largest-magnitude pairs of ``basis``, re-presented.

    Selection prefers the positive value on a magnitude tie; the result
    is again in descending signed order. Equals ``basis`` when m == basis.m.
    """
    if m == basis.m:
        return basis
    order = np.lexsort((-np.sign(basis.values), -np.abs(basis.values)))
    pick = order[:m]
    present = pick[np.argsort(-basis.values[pick], kind="stable")]
    return EigenBasis(values=basis.values[present],
                      vectors=basis.vectors[:, present],
                      residual=basis.residual)


def build_ratio_matrix(basis: EigenBasis, m: int | None = None, *,
                       weighted: bool = True, log_threshold: bool = False,
                       node_names=None, _zero_rows: bool = False) -> np.ndarray:
    """Entry-wise eigenvector ratios against the leading vector.

    Uses the m largest-magnitude pairs of ``basis``; the leading vector
    is the first in presentation order. Column j of the result is
    ``v_{j+1}[i] / v_1[i]`` per node i, times ``lambda_{j+1}/lambda_1``
    when weighted.

    Args:
        basis: eigenpairs (at least m of them).
        m: number of vectors to use (>= 2); defaults to basis.m.
        weighted: scale each vector by its eigenvalue before the ratio.
        log_threshold: clip entries to +/- log(n); with this on, rows
            with a vanishing leading entry saturate instead of erroring.
        node_names: optional names used in the error message for a
            vanishing leading entry.

    Returns:
        (n, m - 1) float array.

    Raises:
        ValueError: m < 2, m > basis.m, or some ``|v_1[i]| < 1e-12``
            while log_threshold is off.
    """
    if m is None:
        m = basis.m
    if m < 2:
        raise ValueError(f"ratio matrix needs m >= 2 vectors, got {m}")
    if m > basis.m:
        raise ValueError(f"basis holds {basis.m} pairs, need {m}")
    sub = _subset_by_magnitude(basis, m)
    lead = sub.vectors[:, 0].copy()
    rest = sub.vectors[:, 1:].copy()
    if weighted:
        if sub.values[0] == 0.0:
            raise ValueError("leading eigenvalue is zero; weighted ratios undefined")
        rest = rest * (sub.values[1:] / sub.values[0])

    n = lead.shape[0]
    tiny = np.abs(lead) < LEADING_ENTRY_TOL
    if tiny.any() and not log_threshold and not _zero_rows:
        i = int(np.flatnonzero(tiny)[0])
        name = str(node_names[i]) if node_names is not None else str(i + 1)
        raise ValueError(
            f"leading eigenvector vanishes at node {name} "
            f"(|entry| < {LEADING_ENTRY_TOL:g}); cannot form ratios"
        )
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = rest / lead[:, None]
    if tiny.any():
        if _zero_rows and not log_threshold:
            ratios[tiny, :] = 0.0
        else:
            # saturate: sign of the numerator decides the clip direction
            bad = ratios[tiny, :]
            bad[np.isnan(bad)] = 0.0
            ratios[tiny, :] = bad
    if log_threshold:
        bound = np.log(n)
        ratios = np.clip(np.nan_to_num(ratios, nan=0.0,
                                       posinf=bound, neginf=-bound),
                         -bound, bound)
    return ratios


def run_pipeline(g: Graph, config: PipelineConfig) -> DetectionResult:
    """Run the full detection pipeline on a connected graph.

    Stages: build the spectral matrix (regularized Laplacian or raw
    adjacency) -> compute the k + 1 leading eigenpairs -> choose the
    vector count via the eigen-gap rule (when enabled) -> form feature
    rows (ratio matrix, or eigenvector rows when post_pca is off) ->
    k-means into k clusters.

    Returns labels in {1..k}; fewer than k clusters may be populated
    (that is a legitimate outcome, not an error).

    Raises:
        ValueError: disconnected graph (run largest_connected_component
            first) or n <= k.
    """
    if g.n <= config.k:
        raise ValueError(f"need more nodes than communities: n={g.n}, k={config.k}")
    if not is_connected(g):
        raise ValueError(
            "graph is disconnected; extract the largest connected component first"
        )

    if config.pre_pca:
        matrix = build_regularized_laplacian(g, config.delta)
    else:
        matrix = g.adjacency()
    basis = top_eigenpairs(SymMatrix(matrix), config.k + 1, seed=config.seed)

    if np.abs(basis.values[config.k - 1]) > 0:
        gap = 1.0 - float(basis.values[config.k] / basis.values[config.k - 1])
    else:
        if config.extra_vector:
            raise ValueError(f"eigenvalue {config.k} is exactly zero; gap undefined")
        gap = float("nan")
    weak_signal = bool(gap <= config.threshold) if np.isfinite(gap) else False
    m_used = config.k + 1 if (config.extra_vector and weak_signal) else config.k

    if config.post_pca:
        features = build_ratio_matrix(
            basis, m_used, weighted=config.weighted,
            log_threshold=config.log_threshold,
            node_names=g.node_names, _zero_rows=True,
        )
    else:
        sub = _subset_by_magnitude(basis, m_used)
        features = sub.vectors.copy()
        if config.weighted:
            features = features * sub.values[None, :]

    km = kmeans(features, config.k, seed=config.seed, restarts=config.restarts)
    return DetectionResult(
        labels=km.labels + 1,
        m_used=m_used,
        eigenvalues=basis.values,
        gap=gap,
        weak_signal=weak_signal,
        kmeans_objective=km.objective,
        config=config,
    )
