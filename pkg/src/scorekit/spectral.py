"""Symmetric eigensolvers and the regularized graph Laplacian.

Eigenpairs follow the classic sparse-eigensolver output convention:
the ``m`` pairs with largest ``|lambda|`` are selected, then presented
in descending order of the signed eigenvalue. Eigenvector signs are
normalized so the entry of largest magnitude is positive.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .graphs import Graph, degree_info

logger = logging.getLogger(__name__)

# Dense solves are exact and cheap up to a few hundred nodes; beyond that
# the implicitly restarted Lanczos path wins.
DENSE_CUTOFF = 512

_RESIDUAL_RTOL = 1e-8


class ConvergenceError(RuntimeError):
    """Eigensolver failed to reach the requested residual accuracy."""


class SymMatrix:
    """A validated, exactly symmetric square matrix (dense or sparse).

    Construction fails unless the input equals its transpose exactly —
    entry-wise, not within a tolerance — which catches accidentally
    directed adjacency matrices early.
    """

    __slots__ = ("matrix", "n")

    def __init__(self, matrix):
        if sp.issparse(matrix):
            matrix = sp.csr_array(matrix)
            if matrix.shape[0] != matrix.shape[1]:
                raise ValueError("matrix must be square")
            if (matrix != matrix.T).nnz != 0:
                raise ValueError("matrix is not exactly symmetric")
        else:
            matrix = np.asarray(matrix, dtype=np.float64)
            if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
                raise ValueError("matrix must be square")
            if not np.array_equal(matrix, matrix.T):
                raise ValueError("matrix is not exactly symmetric")
        self.matrix = matrix
        self.n = matrix.shape[0]


@dataclass(frozen=True, eq=False)
class EigenBasis:
    """Leading eigenpairs of a symmetric matrix.

    Attributes:
        values: (m,) eigenvalues — the m of largest magnitude, presented
            in descending signed order.
        vectors: (n, m) matched unit eigenvectors; column k has its
            largest-magnitude entry positive (ties: lowest index).
        residual: max over columns of ||A v - lambda v||_inf, as checked.
    """

    values: np.ndarray
    vectors: np.ndarray
    residual: float

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        vectors = np.asarray(self.vectors, dtype=np.float64)
        values.setflags(write=False)
        vectors.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "vectors", vectors)

    @property
    def m(self) -> int:
        return int(self.values.shape[0])


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Make each column's largest-|entry| positive (argmax breaks ties low)."""
    vectors = vectors.copy()
    for k in range(vectors.shape[1]):
        lead = np.argmax(np.abs(vectors[:, k]))
        if vectors[lead, k] < 0:
            vectors[:, k] = -vectors[:, k]
    return vectors


def _present(values, vectors):
    """Reorder already-selected pairs into descending signed-value order."""
    order = np.argsort(-values, kind="stable")
    return values[order], vectors[:, order]


def _dense_eigenpairs(a: np.ndarray, m: int):
    w, v = np.linalg.eigh(a)
    # select the m pairs of largest magnitude; on |value| ties take the
    # positive one first (eigh returns ascending, so sort keys make this
    # explicit rather than relying on output order)
    order = np.lexsort((-np.sign(w), -np.abs(w)))
    pick = np.sort(order[:m])  # keep discovery (ascending-value) order
    return w[pick], v[:, pick]


def _sparse_eigenpairs(matrix, m: int, seed: int):
    n = matrix.shape[0]
    rng = np.random.default_rng(seed)
    v0 = rng.standard_normal(n)
    v0 /= np.linalg.norm(v0)
    try:
        w, v = spla.eigsh(matrix, k=m, which="LM", v0=v0,
                          tol=1e-10, maxiter=10 * n)
    except spla.ArpackNoConvergence as exc:
        raise ConvergenceError(
            f"sparse eigensolver did not converge for k={m} "
            f"({len(exc.eigenvalues)} of {m} pairs found)"
        ) from exc
    return w, v


def top_eigenpairs(matrix, m: int, *, method: str = "auto",
                   seed: int = 0) -> EigenBasis:
    """Compute the ``m`` leading eigenpairs of a symmetric matrix.

    Selection is by largest eigenvalue magnitude; the selected pairs are
    presented in descending signed order (so for adjacency-like matrices
    the top of the list is the Perron value and large negative values
    appear at the end). Vectors are unit-norm with the largest-magnitude
    entry positive. Every returned pair is verified against the matrix:
    ``||A v - lambda v||_inf <= 1e-8 * (max|lambda| + 1)``.

    Args:
        matrix: symmetric matrix — SymMatrix, ndarray, or scipy sparse.
        m: number of pairs, 1 <= m <= n.
        method: "auto" (dense below a size cutoff, or when m is too large
            for the Lanczos path), "dense", or "sparse".
        seed: seed for the Lanczos starting vector (determinism).

    Raises:
        ValueError: m out of range or invalid method.
        ConvergenceError: the solver stalled or a residual check failed.
    """
    sym = matrix if isinstance(matrix, SymMatrix) else SymMatrix(matrix)
    n = sym.n
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got m={m} with n={n}")
    if method not in ("auto", "dense", "sparse"):
        raise ValueError(f"unknown method {method!r}")

    # ARPACK needs k < n and enough room for its Krylov basis
    sparse_ok = m < n and n - m >= 2
    if method == "sparse" and not sparse_ok:
        raise ValueError("sparse path requires m <= n - 2")
    use_dense = method == "dense" or (
        method == "auto" and (n <= DENSE_CUTOFF or not sparse_ok)
    )

    if use_dense:
        a = sym.matrix.toarray() if sp.issparse(sym.matrix) else sym.matrix
        w, v = _dense_eigenpairs(a, m)
    else:
        w, v = _sparse_eigenpairs(sym.matrix, m, seed)

    w, v = _present(np.asarray(w, dtype=np.float64),
                    np.asarray(v, dtype=np.float64))
    norms = np.linalg.norm(v, axis=0)
    if np.any(norms == 0):
        raise ConvergenceError("eigensolver returned a zero vector")
    v = v / norms
    v = _fix_signs(v)

    op = sym.matrix
    resid = op @ v - v * w
    residual = float(np.max(np.abs(resid))) if resid.size else 0.0
    bound = _RESIDUAL_RTOL * (float(np.max(np.abs(w))) + 1.0)
    if residual > bound:
        raise ConvergenceError(
            f"eigenpair residual {residual:.3e} exceeds bound {bound:.3e}"
        )
    return EigenBasis(values=w, vectors=v, residual=residual)


def build_regularized_laplacian(g: Graph, delta: float = 0.1):
    """Build the degree-regularized symmetric Laplacian-type matrix.

    With degree matrix D, max degree d_max, and ridge delta:

        L = (D + delta * d_max * I)^{-1/2} A (D + delta * d_max * I)^{-1/2}

    The ridge keeps the scaling bounded on low-degree nodes; delta = 0 is
    allowed only when every node has degree >= 1.

    Args:
        g: graph with at least one node.
        delta: ridge fraction of the max degree (>= 0).

    Returns:
        Sparse CSR matrix of shape (n, n), exactly symmetric.

    Raises:
        ValueError: empty graph, negative delta, or delta == 0 with an
            isolated node (the scaling would divide by zero).
    """
    if g.n == 0:
        raise ValueError("empty graph")
    if delta < 0:
        raise ValueError(f"delta must be >= 0, got {delta}")
    info = degree_info(g)
    if delta == 0 and info.d_min < 1:
        raise ValueError("delta == 0 requires minimum degree >= 1")
    if info.d_max == 0:
        # no edges at all: the scaled matrix is all zeros regardless
        return sp.csr_array((g.n, g.n), dtype=np.float64)
    scale = 1.0 / np.sqrt(info.degrees + delta * info.d_max)
    a = g.adjacency()
    d = sp.dia_array((scale[np.newaxis, :], [0]), shape=(g.n, g.n))
    lap = sp.csr_array(d @ a @ d)
    # rounding in the two one-sided scalings can differ; symmetrize exactly
    lap = (lap + lap.T) * 0.5
    return sp.csr_array(lap)
