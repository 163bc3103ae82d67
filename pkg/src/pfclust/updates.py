"""Block updates of the joint clustering objective.

The model couples, per view v: a self-expressive graph S_v, a spectral
partition F_v (n x c, orthonormal columns), a simplex weight w_v, and a
shared consensus embedding Y. The joint objective is

    sum_v w_v * [ ||X_v - X_v S_v||_F^2 + alpha * tr(F_v' L_v F_v)
                  + beta * ||S_v||_F^2 ]
        + || Y Y' - sum_v w_v F_v F_v' ||_F^2

with L_v the Laplacian of the symmetrized graph. Each function here
minimizes the objective over one block with the others held fixed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ConvergenceError
from .linalg import (
    _check_symmetric,
    factor_spd,
    project_simplex,
    sym_eigs_largest,
    sym_eigs_smallest,
)
from .types import M_VARIANTS


def build_laplacian(s):
    """Graph Laplacian L = D - W of the symmetrized affinity W = (S + S') / 2.

    The graph solve generally returns an asymmetric S; symmetrizing first
    keeps L symmetric positive semi-definite with zero row sums.
    """
    s = np.asarray(s, dtype=np.float64)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError(f"graph must be square, got shape {s.shape}")
    if s.size and float(s.min()) < 0.0:
        raise ValueError("graph has negative entries")
    w = 0.5 * (s + s.T)
    lap = np.diag(w.sum(axis=1)) - w
    return lap


class ViewCache:
    """Per-view quantities that stay fixed while beta is fixed.

    Holds the gram matrix X'X and a factorization of (X'X + beta I) so the
    graph update can reuse one factorization for every column and every
    outer iteration. Rebuild the cache if beta changes.
    """

    def __init__(self, x, beta):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 2:
            raise ValueError("view data must be 2-D (features x samples)")
        if beta <= 0:
            raise ValueError("beta must be positive")
        self.x = x
        self.beta = float(beta)
        self.gram = x.T @ x
        self.factor = factor_spd(self.gram + self.beta * np.eye(x.shape[1]))

    @property
    def n_samples(self):
        return self.x.shape[1]


def update_graph(cache, partition, alpha, *, clamp=True):
    """Refresh one view's self-expressive graph.

    Column i solves (X'X + beta I) s = X'X[:, i] - (alpha / 4) d_i, where
    d_i stacks the squared distances between partition row i and every
    other row. With ``clamp`` the negative entries of the solution are set
    to zero (projection onto the non-negative orthant).
    """
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    rhs = cache.gram.copy()
    if alpha != 0.0:
        f = np.asarray(partition, dtype=np.float64)
        if f.shape[0] != cache.n_samples:
            raise ValueError(
                f"partition has {f.shape[0]} rows, expected {cache.n_samples}"
            )
        sq = np.einsum("ij,ij->i", f, f)
        dist = sq[:, None] + sq[None, :] - 2.0 * (f @ f.T)
        np.maximum(dist, 0.0, out=dist)
        rhs -= 0.25 * alpha * dist
    s = cache.factor.solve(rhs)
    if clamp:
        np.maximum(s, 0.0, out=s)
    return s


def update_partition(lap, n_clusters, own_weight, consensus, others, alpha,
                     variant="attract"):
    """Refresh one view's partition as bottom eigenvectors of a coupling matrix.

    Parameters
    ----------
    lap : (n, n) ndarray
        Laplacian of this view's graph.
    own_weight : float
        This view's simplex weight (enters only the "attract" variant,
        where it shifts the whole spectrum and leaves the minimizer
        unchanged; kept for fidelity to the update's printed form).
    consensus : (n, c) ndarray or None
        Consensus embedding; None drops the consensus coupling term.
    others : sequence of (weight, partition) pairs
        Remaining views' weights and partitions.
    variant : {"attract", "repel"}
        "attract": M = alpha L + w I - 2 Y Y' - 2 sum_j F_j F_j'.
        "repel":   M = alpha L - 2 Y Y' + 2 sum_j w_j F_j F_j', the exact
        block minimizer of the fused objective.
    """
    lap = np.asarray(lap, dtype=np.float64)
    n = lap.shape[0]
    if variant not in M_VARIANTS:
        raise ValueError(f"variant must be one of {M_VARIANTS}")
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    m = alpha * lap
    if variant == "attract":
        m = m + float(own_weight) * np.eye(n)
        for _, fj in others:
            m -= 2.0 * (fj @ fj.T)
    else:
        for wj, fj in others:
            m += (2.0 * float(wj)) * (fj @ fj.T)
    if consensus is not None:
        y = np.asarray(consensus, dtype=np.float64)
        if y.shape[0] != n:
            raise ValueError(f"consensus has {y.shape[0]} rows, expected {n}")
        m -= 2.0 * (y @ y.T)
    vecs, _ = sym_eigs_smallest(m, n_clusters)
    return vecs


def per_view_loss(x, graph, partition, lap, alpha, beta):
    """One view's loss: reconstruction + alpha * smoothness + beta * graph norm."""
    x = np.asarray(x, dtype=np.float64)
    s = np.asarray(graph, dtype=np.float64)
    f = np.asarray(partition, dtype=np.float64)
    lap = np.asarray(lap, dtype=np.float64)
    n = x.shape[1]
    if s.shape != (n, n) or lap.shape != (n, n) or f.shape[0] != n:
        raise ValueError("inconsistent dimensions in per-view loss")
    resid = x - x @ s
    recon = float(np.sum(resid * resid))
    smooth = float(np.sum(f * (lap @ f)))
    ridge = float(np.sum(s * s))
    return recon + alpha * smooth + beta * ridge


@dataclass(frozen=True)
class WeightQp:
    """Quadratic program min_w w'Pw - q'w over the probability simplex.

    P[i, j] is the alignment tr(F_i F_i' F_j F_j') between partitions i
    and j (so diag(P) = c exactly), q[i] = -g[i] + 2 tr(Y Y' F_i F_i')
    combines the per-view loss g[i] with the consensus alignment.
    """

    p: np.ndarray
    q: np.ndarray
    g: np.ndarray


def build_weight_qp(partitions, consensus, losses) -> WeightQp:
    """Assemble the weight QP from partitions, consensus, and per-view losses."""
    t = len(partitions)
    if t == 0:
        raise ValueError("need at least one view")
    g = np.asarray(losses, dtype=np.float64)
    if g.shape != (t,):
        raise ValueError("one loss per view required")
    p = np.empty((t, t))
    for i in range(t):
        for j in range(i, t):
            cross = partitions[i].T @ partitions[j]
            p[i, j] = p[j, i] = float(np.sum(cross * cross))
    y = np.asarray(consensus, dtype=np.float64)
    align = np.array([float(np.sum((y.T @ f) ** 2)) for f in partitions])
    return WeightQp(p=p, q=-g + 2.0 * align, g=g)


def update_weights(qp, max_iters=10000, step_tol=1e-10):
    """Solve the weight QP by projected gradient descent.

    Fixed step 1 / (2 ||P||_2 + eps), exact simplex projection after each
    step, stop when the infinity-norm of the step falls below tolerance.
    """
    p = np.asarray(qp.p, dtype=np.float64)
    q = np.asarray(qp.q, dtype=np.float64)
    t = q.shape[0]
    if p.shape != (t, t):
        raise ValueError("P and q sizes disagree")
    if t == 1:
        return np.ones(1)
    _check_symmetric(p, 1e-8, "P")
    min_eig = float(np.linalg.eigvalsh(0.5 * (p + p.T)).min())
    if min_eig < -1e-8 * max(1.0, float(np.abs(p).max())):
        raise ValueError(f"P is not positive semi-definite (min eig {min_eig:.3e})")
    step = 1.0 / (2.0 * float(np.linalg.norm(p, 2)) + 1e-12)
    w = np.full(t, 1.0 / t)
    for _ in range(max_iters):
        w_next = project_simplex(w - step * (2.0 * (p @ w) - q))
        if float(np.max(np.abs(w_next - w))) < step_tol:
            return w_next
        w = w_next
    raise ConvergenceError("weight update hit the projected-gradient iteration limit")


def update_consensus(partitions, weights):
    """Refresh the consensus embedding.

    The consensus minimizes tr[Y'(I - 2 sum_v w_v F_v F_v')Y] over
    orthonormal Y, i.e. it spans the top-c eigenvectors of the weighted
    sum of partition projectors.
    """
    t = len(partitions)
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape != (t,) or t == 0:
        raise ValueError("one weight per partition required")
    n, c = partitions[0].shape
    agg = np.zeros((n, n))
    for wv, f in zip(weights, partitions):
        f = np.asarray(f, dtype=np.float64)
        if f.shape != (n, c):
            raise ValueError("partitions must share one shape")
        agg += float(wv) * (f @ f.T)
    vecs, _ = sym_eigs_largest(agg, c)
    return vecs


def objective(state, data, params):
    """Joint objective value at a model state.

    Equals sum_v weights[v] * per_view_loss(v) plus the squared Frobenius
    distance between the consensus projector and the weighted sum of
    partition projectors.
    """
    if data.n_views != state.n_views:
        raise ValueError("state and dataset cover different view counts")
    n = data.n_samples
    mix = np.zeros((n, n))
    total = 0.0
    for view, s, f, wv in zip(data.views, state.graphs, state.partitions,
                              state.weights):
        lap = build_laplacian(s)
        total += float(wv) * per_view_loss(view.data, s, f, lap,
                                           params.alpha, params.beta)
        mix += float(wv) * (f @ f.T)
    fuse = state.consensus @ state.consensus.T - mix
    return float(total + np.sum(fuse * fuse))
