"""Degree-corrected block model: specification and sampling.

A model is (theta, membership, P): node degree parameters theta_i > 0,
community memberships in {1..K}, and a symmetric K x K mixing matrix P.
The edge-probability matrix is

    Omega = Theta Pi P Pi' Theta,   Omega_ij = theta_i theta_j P[g_i, g_j]

and a sample draws each upper-triangle entry independently as
Bernoulli(min(Omega_ij, 1)) with a zero diagonal.

Degree parameters are drawn from a Pareto distribution with unit mean,
times a caller-chosen scale, so the scale alone controls sparsity.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .graphs import Graph

logger = logging.getLogger(__name__)

# row-block size for sampling without materializing dense Omega; fixed so
# that a given seed always yields the same graph
_BLOCK_ROWS = 1024

PARETO_SHAPE = 5.0
PARETO_SCALE = 0.8  # unit mean: shape*scale/(shape-1) = 1


@dataclass(frozen=True, eq=False)
class DCBMModel:
    """A fully specified degree-corrected block model.

    Attributes:
        theta: (n,) positive degree parameters.
        membership: (n,) community per node, values in {1..K}.
        p: (K, K) symmetric nonnegative mixing matrix.
    """

    theta: np.ndarray
    membership: np.ndarray
    p: np.ndarray

    @property
    def n(self) -> int:
        return int(self.theta.shape[0])

    @property
    def k(self) -> int:
        return int(self.p.shape[0])


def make_dcbm(theta, membership, p) -> DCBMModel:
    """Validate and assemble a DCBM specification.

    Raises:
        ValueError: nonpositive theta, asymmetric or negative P,
            memberships outside {1..K}, or shape mismatches.
    """
    theta = np.asarray(theta, dtype=np.float64)
    membership = np.asarray(membership, dtype=np.int64)
    p = np.asarray(p, dtype=np.float64)
    if theta.ndim != 1 or theta.size == 0:
        raise ValueError("theta must be a nonempty 1-D array")
    if (theta <= 0).any():
        raise ValueError("theta entries must be positive")
    if membership.shape != theta.shape:
        raise ValueError("membership and theta must have equal length")
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise ValueError("P must be square")
    if not np.allclose(p, p.T, rtol=0.0, atol=0.0):
        raise ValueError("P must be exactly symmetric")
    if (p < 0).any():
        raise ValueError("P entries must be nonnegative")
    k = p.shape[0]
    if membership.min() < 1 or membership.max() > k:
        raise ValueError(f"memberships must lie in 1..{k}")
    theta = theta.copy()
    membership = membership.copy()
    p = p.copy()
    for arr in (theta, membership, p):
        arr.setflags(write=False)
    return DCBMModel(theta=theta, membership=membership, p=p)


def sample_theta(n: int, scale: float, *, shape: float = PARETO_SHAPE,
                 pareto_scale: float = PARETO_SCALE, seed: int = 0) -> np.ndarray:
    """Draw degree parameters ``theta_i = scale * X_i``, X ~ Pareto.

    X follows the shape-scale Pareto with density
    ``shape * pareto_scale**shape / x**(shape+1)`` on x >= pareto_scale;
    the defaults (5, 4/5) give E[X] = 1, so ``scale`` is the mean of
    theta. Every draw satisfies ``theta_i >= scale * pareto_scale``.

    Args:
        n: number of nodes.
        scale: positive multiplier (the mean degree parameter).
        shape: Pareto tail exponent (> 1 for a finite mean).
        pareto_scale: Pareto lower bound.
        seed: RNG seed.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if scale <= 0:
        raise ValueError("scale must be positive")
    if shape <= 1 or pareto_scale <= 0:
        raise ValueError("need shape > 1 and pareto_scale > 0")
    rng = np.random.default_rng(seed)
    u = 1.0 - rng.random(n)  # in (0, 1], keeps the inverse CDF finite
    x = pareto_scale * u ** (-1.0 / shape)
    return scale * x


def build_balanced_pi(n: int, k: int) -> np.ndarray:
    """Contiguous balanced memberships: first floor(n/k) nodes in community
    1, the next block in 2, ..., with any remainder joining the last one.

    Raises:
        ValueError: k < 1 or k > n.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    base = n // k
    membership = np.repeat(np.arange(1, k + 1), base)
    if membership.size < n:
        membership = np.concatenate(
            [membership, np.full(n - membership.size, k, dtype=np.int64)]
        )
    return membership.astype(np.int64)


def expected_adjacency(model: DCBMModel) -> np.ndarray:
    """Dense ``Omega = Theta Pi P Pi' Theta`` (diagonal included).

    This is the rank-<=K population matrix; the expected adjacency of a
    sample is Omega with its diagonal zeroed (and entries above 1
    clipped). Guarded against accidental huge allocations.

    Raises:
        ValueError: n > 4000 (use blockwise sampling instead).
    """
    if model.n > 4000:
        raise ValueError("expected_adjacency is dense-only; n > 4000 refused")
    block = model.p[model.membership - 1][:, model.membership - 1]
    # multiply the symmetric factors entrywise so the result is exactly
    # symmetric (theta_i * theta_j rounds identically to theta_j * theta_i)
    return np.multiply.outer(model.theta, model.theta) * block


def clamped_pair_count(model: DCBMModel) -> int:
    """Number of node pairs i < j whose edge probability had to be
    clamped at 1 (a model-misspecification diagnostic, deterministic)."""
    total = 0
    theta = model.theta
    block_rows = _BLOCK_ROWS
    for i0 in range(0, model.n, block_rows):
        i1 = min(i0 + block_rows, model.n)
        rows = model.p[model.membership[i0:i1] - 1][:, model.membership - 1]
        omega = theta[i0:i1, None] * rows * theta[None, :]
        j = np.arange(model.n)[None, :]
        i = np.arange(i0, i1)[:, None]
        total += int(((omega > 1.0) & (j > i)).sum())
    return total


def sample_adjacency(model: DCBMModel, seed: int = 0) -> Graph:
    """Draw one graph from the model.

    Upper-triangle entries are independent Bernoulli(min(Omega_ij, 1));
    the diagonal is zero. Sampling is blockwise over rows, so dense
    Omega is never materialized and memory stays O(block * n) at any n.
    The draw is reproducible given the seed. If any probability needed
    clamping at 1, a warning with the pair count is logged.

    Returns:
        Graph with ground-truth labels set to the model memberships.
    """
    rng = np.random.default_rng(seed)
    theta = model.theta
    n = model.n
    edges = []
    clamped = 0
    for i0 in range(0, n, _BLOCK_ROWS):
        i1 = min(i0 + _BLOCK_ROWS, n)
        rows = model.p[model.membership[i0:i1] - 1][:, model.membership - 1]
        omega = theta[i0:i1, None] * rows * theta[None, :]
        j = np.arange(n)[None, :]
        i = np.arange(i0, i1)[:, None]
        upper = j > i
        clamped += int(((omega > 1.0) & upper).sum())
        prob = np.where(upper, np.minimum(omega, 1.0), 0.0)
        draws = rng.random(prob.shape) < prob
        bi, bj = np.nonzero(draws)
        if bi.size:
            edges.append(np.column_stack([bi + i0, bj]))
    if clamped:
        logger.warning("clamped %d edge probabilities at 1", clamped)
    edge_arr = (np.concatenate(edges, axis=0) if edges
                else np.empty((0, 2), dtype=np.int64))
    return Graph(n=n, edges=edge_arr, labels=model.membership.copy())


# ----------------------------------------------------------------------
# benchmark experiment presets
# ----------------------------------------------------------------------

# mixing matrices for the two simulation experiments: four balanced
# communities, strong diagonal; the second is asymmetric across
# communities, which stresses the extra-eigenvector rule
MIXING_EXP1 = 0.5 * np.ones((4, 4)) + 0.5 * np.eye(4)
MIXING_EXP2 = np.array([
    [1.0, 2 / 3, 0.1, 0.1],
    [2 / 3, 1.0, 0.5, 0.5],
    [0.1, 0.5, 1.0, 0.5],
    [0.1, 0.5, 0.5, 1.0],
])

EXPERIMENT_MIXING = {1: MIXING_EXP1, 2: MIXING_EXP2}


def experiment_theta_scale(n: int) -> float:
    """Degree-parameter scale used by the benchmark experiments.

    ``sqrt(10 log(n) / n)``: the expected average degree then grows like
    10 log(n) times the mean mixing weight, which lands the sampled
    graphs in the moderately-sparse regime the benchmark error-rate
    targets were measured in (calibrated empirically; see the benchmark
    suite). Graphs stay almost surely connected at the benchmark sizes.
    """
    return float(np.sqrt(10.0 * np.log(n) / n))


def experiment_model(which: int, n: int, *, seed: int = 0) -> DCBMModel:
    """Benchmark DCBM: 4 balanced communities, Pareto degree weights.

    Args:
        which: experiment id, 1 or 2 (selects the mixing matrix).
        n: number of nodes.
        seed: seed for the theta draw.
    """
    if which not in EXPERIMENT_MIXING:
        raise ValueError(f"unknown experiment {which!r}; choose 1 or 2")
    if n < 8:
        raise ValueError("experiments need n >= 8")
    theta = sample_theta(n, experiment_theta_scale(n), seed=seed)
    membership = build_balanced_pi(n, 4)
    return make_dcbm(theta, membership, EXPERIMENT_MIXING[which])
