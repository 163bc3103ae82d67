"""Value types shared across the toolkit.

Everything here is immutable after construction (arrays are marked
read-only), so instances can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

# Tolerances used when validating model states.
ORTHO_TOL = 1e-8
SIMPLEX_SUM_TOL = 1e-12
WEIGHT_NEG_TOL = 1e-12

M_VARIANTS = ("attract", "repel")
PARTITION_SWEEPS = ("gauss_seidel", "jacobi")


def _freeze(a, name, ndim):
    arr = np.array(a, dtype=np.float64)
    if arr.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ViewMatrix:
    """One view of a dataset, stored features x samples."""

    name: str
    data: np.ndarray

    def __post_init__(self):
        if not self.name:
            raise ValueError("view name must be non-empty")
        arr = _freeze(self.data, f"view {self.name!r}", 2)
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"view {self.name!r} has empty dimension {arr.shape}")
        object.__setattr__(self, "data", arr)

    @property
    def n_features(self) -> int:
        return self.data.shape[0]

    @property
    def n_samples(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class MultiViewDataset:
    """A collection of views over the same samples, optionally labelled.

    Every view must cover exactly the same ``n`` samples; views may have
    different feature counts. ``labels`` are 0-based cluster ids.
    """

    views: tuple
    labels: Optional[np.ndarray] = None

    def __post_init__(self):
        views = tuple(self.views)
        if not views:
            raise ValueError("dataset needs at least one view")
        for v in views:
            if not isinstance(v, ViewMatrix):
                raise TypeError("views must be ViewMatrix instances")
        n = views[0].n_samples
        for v in views:
            if v.n_samples != n:
                raise ValueError(
                    f"view {v.name!r} has {v.n_samples} samples, expected {n}"
                )
        object.__setattr__(self, "views", views)
        if self.labels is not None:
            lab = np.array(self.labels, dtype=np.int64)
            if lab.ndim != 1 or lab.shape[0] != n:
                raise ValueError("labels must be a flat list with one id per sample")
            if lab.min(initial=0) < 0:
                raise ValueError("labels must be non-negative cluster ids")
            lab.setflags(write=False)
            object.__setattr__(self, "labels", lab)

    @property
    def n_samples(self) -> int:
        return self.views[0].n_samples

    @property
    def n_views(self) -> int:
        return len(self.views)


@dataclass(frozen=True)
class HyperParams:
    """Model and solver settings.

    alpha scales the graph-smoothness term, beta the graph ridge penalty.
    ``m_variant`` picks how the per-view partition eigenproblem couples to
    the other views: "attract" uses the unweighted attracting form,
    "repel" the weight-scaled form obtained by direct expansion of the
    fused objective. ``partition_sweep`` controls whether a partition
    update sees partitions already refreshed in the current pass
    ("gauss_seidel") or the snapshot from the start of the pass ("jacobi").
    """

    n_clusters: int
    alpha: float = 1.0
    beta: float = 1.0
    max_outer_iters: int = 50
    rel_obj_tol: float = 1e-6
    seed: int = 0
    m_variant: str = "attract"
    row_normalize_embedding: bool = True
    weight_update_per_view: bool = True
    partition_sweep: str = "gauss_seidel"

    def __post_init__(self):
        if self.n_clusters < 2:
            raise ValueError("n_clusters must be at least 2")
        if self.alpha < 0:
            raise ValueError("alpha must be non-negative")
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        if self.max_outer_iters < 1:
            raise ValueError("max_outer_iters must be at least 1")
        if self.rel_obj_tol <= 0:
            raise ValueError("rel_obj_tol must be positive")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if self.m_variant not in M_VARIANTS:
            raise ValueError(f"m_variant must be one of {M_VARIANTS}")
        if self.partition_sweep not in PARTITION_SWEEPS:
            raise ValueError(f"partition_sweep must be one of {PARTITION_SWEEPS}")


@dataclass(frozen=True)
class ModelState:
    """Joint model iterate: per-view graphs and partitions, view weights,
    and the consensus embedding.

    Construction validates the invariants the solver must maintain:
    graphs are non-negative, partitions and consensus have orthonormal
    columns, weights lie on the probability simplex.
    """

    graphs: tuple
    partitions: tuple
    weights: np.ndarray
    consensus: np.ndarray

    def __post_init__(self):
        graphs = tuple(_freeze(s, "graph", 2) for s in self.graphs)
        partitions = tuple(_freeze(f, "partition", 2) for f in self.partitions)
        weights = _freeze(self.weights, "weights", 1)
        consensus = _freeze(self.consensus, "consensus", 2)
        t = len(graphs)
        if not (len(partitions) == t == weights.shape[0]) or t == 0:
            raise ValueError("graphs, partitions and weights must cover the same views")
        n, c = consensus.shape
        for s in graphs:
            if s.shape != (n, n):
                raise ValueError(f"graph must be {n}x{n}, got {s.shape}")
            if s.min(initial=0.0) < 0.0:
                raise ValueError("graphs must be non-negative")
        for f in partitions:
            if f.shape != (n, c):
                raise ValueError(f"partition must be {n}x{c}, got {f.shape}")
            _check_orthonormal(f, "partition")
        _check_orthonormal(consensus, "consensus")
        if abs(weights.sum() - 1.0) > SIMPLEX_SUM_TOL:
            raise ValueError("weights must sum to 1")
        if weights.min() < -WEIGHT_NEG_TOL:
            raise ValueError("weights must be non-negative")
        object.__setattr__(self, "graphs", graphs)
        object.__setattr__(self, "partitions", partitions)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "consensus", consensus)

    @property
    def n_views(self) -> int:
        return len(self.graphs)


def _check_orthonormal(f, name):
    gram = f.T @ f
    err = np.max(np.abs(gram - np.eye(f.shape[1])))
    if err > ORTHO_TOL:
        raise ValueError(f"{name} columns are not orthonormal (error {err:.3e})")


@dataclass(frozen=True)
class FitTrace:
    """Per-iteration record of a solver run.

    ``objective_per_iter[k]`` is the joint objective after outer iteration
    k+1; ``initial_objective`` is its value at the random initial state.
    ``monotonicity_violations`` lists (iteration, delta) pairs where the
    objective strictly increased over the previous iteration.
    """

    objective_per_iter: tuple
    weights_per_iter: tuple
    iters_run: int
    converged: bool
    monotonicity_violations: tuple = ()
    initial_objective: float = float("nan")

    def __post_init__(self):
        objs = tuple(float(x) for x in self.objective_per_iter)
        weights = tuple(_freeze(w, "weights", 1) for w in self.weights_per_iter)
        if len(objs) != self.iters_run or len(weights) != self.iters_run:
            raise ValueError("trace lengths must match iters_run")
        object.__setattr__(self, "objective_per_iter", objs)
        object.__setattr__(self, "weights_per_iter", weights)
        object.__setattr__(
            self, "monotonicity_violations", tuple(self.monotonicity_violations)
        )


@dataclass(frozen=True)
class Labeling:
    """Discrete cluster assignment: one id in [0, n_clusters) per sample."""

    assignments: np.ndarray
    n_clusters: int

    def __post_init__(self):
        arr = np.array(self.assignments, dtype=np.int64)
        if arr.ndim != 1 or arr.shape[0] == 0:
            raise ValueError("assignments must be a non-empty flat array")
        if self.n_clusters < 1:
            raise ValueError("n_clusters must be positive")
        if arr.min() < 0 or arr.max() >= self.n_clusters:
            raise ValueError("cluster ids must lie in [0, n_clusters)")
        arr.setflags(write=False)
        object.__setattr__(self, "assignments", arr)

    @property
    def n_samples(self) -> int:
        return self.assignments.shape[0]
