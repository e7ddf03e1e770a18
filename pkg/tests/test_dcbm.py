import numpy as np
import pytest

from scorekit import dcbm
from scorekit.dcbm import (
    build_balanced_pi,
    clamped_pair_count,
    expected_adjacency,
    experiment_model,
    experiment_theta_scale,
    make_dcbm,
    sample_adjacency,
    sample_theta,
)


# ======================================================================
# degree parameters
# ======================================================================

def test_pareto_mean():
    # theta_i = scale * 0.8 * U^(-1/5); E[U^(-1/5)] = 5/4, so the mean of
    # theta/scale is exactly 1
    theta = sample_theta(100_000, 1.0, seed=0)
    assert theta.mean() == pytest.approx(1.0, abs=0.02)


def test_theta_support_lower_bound():
    theta = sample_theta(5000, 2.0, seed=1)
    assert theta.min() >= 2.0 * 0.8 - 1e-12
    assert (theta > 0).all()


def test_theta_deterministic():
    assert np.array_equal(sample_theta(100, 1.0, seed=7),
                          sample_theta(100, 1.0, seed=7))


def test_experiment_scale_decreases():
    # sparsity scale shrinks with n (log n / n rate)
    scales = [experiment_theta_scale(n) for n in (500, 1000, 5000)]
    assert scales[0] > scales[1] > scales[2] > 0


# ======================================================================
# model assembly
# ======================================================================

def test_balanced_pi_remainder_goes_last():
    pi = build_balanced_pi(10, 4)
    assert np.bincount(pi)[1:].tolist() == [2, 2, 2, 4]
    assert build_balanced_pi(9, 3).max() == 3


def test_make_dcbm_validation():
    theta = np.ones(6)
    pi = build_balanced_pi(6, 2)
    with pytest.raises(ValueError):
        make_dcbm(theta, pi, np.array([[1.0, 0.2], [0.3, 1.0]]))  # asym
    with pytest.raises(ValueError):
        make_dcbm(-theta, pi, np.eye(2))
    with pytest.raises(ValueError):
        make_dcbm(theta, np.zeros(6, dtype=int), np.eye(2))  # labels start at 1


def test_expected_adjacency_rank_at_most_k():
    model = experiment_model(1, 60, seed=0)
    omega = expected_adjacency(model)
    rank = np.linalg.matrix_rank(omega, tol=1e-10)
    assert rank <= model.k
    assert np.array_equal(omega, omega.T)


def test_expected_adjacency_refuses_huge():
    model = make_dcbm(np.full(4001, 0.1), np.ones(4001, dtype=int),
                      np.eye(1))
    with pytest.raises(ValueError):
        expected_adjacency(model)


# ======================================================================
# sampling
# ======================================================================

def test_zero_p_gives_empty_graph():
    model = make_dcbm(np.ones(30), build_balanced_pi(30, 2),
                      np.zeros((2, 2)))
    g = sample_adjacency(model, seed=0)
    assert g.num_edges == 0


def test_erdos_renyi_edge_count_within_4_sigma():
    # K=1, constant theta: every pair is Bernoulli(q) with q = theta^2 p
    n, theta0, p = 400, 0.5, 0.6
    model = make_dcbm(np.full(n, theta0), np.ones(n, dtype=int),
                      np.array([[p]]))
    q = theta0 * theta0 * p
    pairs = n * (n - 1) // 2
    mean, sd = pairs * q, np.sqrt(pairs * q * (1 - q))
    counts = [sample_adjacency(model, seed=s).num_edges for s in range(5)]
    for c in counts:
        assert abs(c - mean) < 4 * sd


def test_expected_degree_matches_population():
    model = experiment_model(2, 500, seed=3)
    omega = expected_adjacency(model)
    np.fill_diagonal(omega, 0.0)
    expected = np.minimum(omega, 1.0).sum(axis=1)
    reps = 20
    acc = np.zeros(model.n)
    for s in range(reps):
        g = sample_adjacency(model, seed=100 + s)
        deg = np.zeros(model.n)
        np.add.at(deg, g.edges[:, 0], 1)
        np.add.at(deg, g.edges[:, 1], 1)
        acc += deg
    mean_deg = acc / reps
    # per-node binomial SE, averaged; test the aggregate to 5 SE
    se_total = np.sqrt(np.maximum(expected, 1e-9).sum() / reps) / model.n
    assert abs(mean_deg.mean() - expected.mean()) < 5 * se_total


def test_clamp_counter_matches_dense():
    model = experiment_model(1, 200, seed=5)
    omega = expected_adjacency(model)
    dense_count = int((np.triu(omega, 1) > 1.0).sum())
    assert clamped_pair_count(model) == dense_count


def test_sampling_blockwise_matches_single_block(monkeypatch):
    model = experiment_model(1, 300, seed=6)
    whole = sample_adjacency(model, seed=9)
    monkeypatch.setattr(dcbm, "_BLOCK_ROWS", 7)
    blocked = sample_adjacency(model, seed=9)
    assert np.array_equal(whole.edges, blocked.edges)


def test_sample_carries_membership_as_labels():
    model = experiment_model(2, 100, seed=1)
    g = sample_adjacency(model, seed=1)
    assert np.array_equal(g.labels, model.membership)
    assert g.num_communities == 4


def test_experiment_model_validation():
    with pytest.raises(ValueError):
        experiment_model(3, 100)
    with pytest.raises(ValueError):
        experiment_model(1, 4)  # n too small for K=4
