import numpy as np
import pytest
import scipy.sparse as sp

from scorekit.graphs import parse_edge_list
from scorekit.spectral import (
    ConvergenceError,
    build_regularized_laplacian,
    top_eigenpairs,
)

# Presentation convention used throughout: the m pairs with largest
# |eigenvalue| (ties: positive first), listed in descending algebraic
# order. All oracles below are stated in that convention.

# frozen oracle: dense eigendecomposition of the karate-club adjacency
# and of its delta=0.1 regularized Laplacian, top five by magnitude
KARATE_ADJ_TOP5 = [6.7257, 4.9771, -3.1107, -3.4479, -4.4872]
KARATE_LAP_TOP5 = [0.7501, 0.6128, 0.4939, -0.4315, -0.5199]


def _random_graph_matrix(n, p, seed):
    rng = np.random.default_rng(seed)
    a = (rng.random((n, n)) < p).astype(np.float64)
    a = np.triu(a, 1)
    return a + a.T


# ======================================================================
# selection / presentation convention
# ======================================================================

def test_diagonal_selection_by_magnitude():
    a = sp.csr_array(sp.diags([3.0, -2.0, 1.0]))
    basis = top_eigenpairs(a, 2)
    assert np.allclose(basis.values, [3.0, -2.0], atol=1e-12)
    # m=3 pulls in the remaining pair; presentation stays algebraic-desc
    basis = top_eigenpairs(a, 3)
    assert np.allclose(basis.values, [3.0, 1.0, -2.0], atol=1e-12)


def test_magnitude_tie_prefers_positive():
    a = sp.csr_array(sp.diags([2.0, -2.0, 0.5]))
    basis = top_eigenpairs(a, 1)
    assert basis.values[0] == pytest.approx(2.0)


def test_single_edge_pair():
    g = parse_edge_list("u v\n")
    basis = top_eigenpairs(g.adjacency(), 2)
    assert np.allclose(basis.values, [1.0, -1.0], atol=1e-12)


def test_karate_adjacency_oracle(karate):
    basis = top_eigenpairs(karate.adjacency(), 5)
    assert np.allclose(basis.values, KARATE_ADJ_TOP5, atol=2e-4)


def test_karate_laplacian_oracle(karate):
    lap = build_regularized_laplacian(karate, delta=0.1)
    basis = top_eigenpairs(lap, 5)
    assert np.allclose(basis.values, KARATE_LAP_TOP5, atol=2e-4)


# ======================================================================
# solver agreement and quality
# ======================================================================

@pytest.mark.parametrize("n,seed", [(40, 0), (120, 1), (200, 2)])
def test_dense_vs_sparse_agreement(n, seed):
    a = _random_graph_matrix(n, 0.1, seed)
    m = 6
    dense = top_eigenpairs(a, m, method="dense")
    sparse = top_eigenpairs(sp.csr_array(a), m, method="sparse", seed=seed)
    assert np.allclose(dense.values, sparse.values, atol=1e-8)
    # eigenvectors agree up to numerical error once signs are fixed
    assert np.allclose(np.abs(dense.vectors), np.abs(sparse.vectors),
                       atol=1e-6)


def test_orthonormal_vectors(karate):
    basis = top_eigenpairs(karate.adjacency(), 4)
    gram = basis.vectors.T @ basis.vectors
    assert np.allclose(gram, np.eye(4), atol=1e-10)


def test_leading_vector_positive_on_connected_graph(karate):
    # Perron-Frobenius: the leading eigenvector of a connected graph has
    # one sign; the sign-fixing step must make it entrywise positive
    basis = top_eigenpairs(karate.adjacency(), 1)
    assert (basis.vectors[:, 0] > 0).all()


def test_residual_reported_small(karate):
    basis = top_eigenpairs(karate.adjacency(), 3)
    assert basis.residual <= 1e-8 * (abs(basis.values).max() + 1)


# ======================================================================
# argument validation
# ======================================================================

def test_asymmetric_rejected():
    a = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(ValueError):
        top_eigenpairs(a, 1)


def test_m_out_of_range(karate):
    with pytest.raises(ValueError):
        top_eigenpairs(karate.adjacency(), 0)
    with pytest.raises(ValueError):
        top_eigenpairs(karate.adjacency(), 35)


def test_sparse_method_needs_headroom():
    a = sp.csr_array(sp.diags([1.0, 2.0, 3.0]))
    with pytest.raises(ValueError):
        top_eigenpairs(a, 2, method="sparse")  # needs m <= n - 2


# ======================================================================
# regularized Laplacian
# ======================================================================

def test_laplacian_path_graph_entry():
    # path 1-2-3: degrees (1,2,1), d_max=2, so the (1,2) entry is
    # 1/sqrt((1 + 0.2)(2 + 0.2))
    g = parse_edge_list("1 2\n2 3\n")
    lap = build_regularized_laplacian(g, delta=0.1)
    dense = lap.toarray() if sp.issparse(lap) else np.asarray(lap)
    assert dense[0, 1] == pytest.approx(1.0 / np.sqrt(1.2 * 2.2))
    assert dense[0, 1] == pytest.approx(0.61546, abs=1e-5)
    assert dense[0, 0] == 0.0
    assert np.array_equal(dense, dense.T)


def test_laplacian_eigenvalues_bounded(karate):
    lap = build_regularized_laplacian(karate, delta=0.1)
    basis = top_eigenpairs(lap, 5)
    assert (np.abs(basis.values) <= 1.0 + 1e-12).all()


def test_laplacian_delta_zero_needs_positive_degrees():
    g = parse_edge_list("a b\n", label_text="a 1\nb 1\nc 2\n")  # c isolated
    with pytest.raises(ValueError):
        build_regularized_laplacian(g, delta=0.0)
    # positive delta regularizes the isolated node instead
    lap = build_regularized_laplacian(g, delta=0.1)
    assert np.isfinite(lap.toarray() if sp.issparse(lap) else lap).all()


def test_laplacian_negative_delta_rejected(karate):
    with pytest.raises(ValueError):
        build_regularized_laplacian(karate, delta=-0.5)
