"""Outer loop: alternate graph, partition, weight, and consensus updates.

One outer iteration sweeps the views in order; for each view it refreshes
the graph, rebuilds the Laplacian, refreshes the partition, and (by
default) re-solves the weight program, then refreshes the consensus once
at the end of the sweep. The joint objective is recorded after every
iteration and the loop stops when its relative change falls below
tolerance.

During the first sweep the coupling terms of the partition update only
include quantities that have already been refreshed from data: the
consensus embedding starts as an arbitrary random basis (nothing in the
model defines it before the first consensus update) and likewise the
still-random partitions of views not yet visited. Coupling to those
arbitrary bases anchors every partition to the random initialization and
the iteration never recovers the data's structure; deferring them for one
sweep bootstraps each partition from its own graph, after which all
coupling terms are active.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kmeans import KMeansConfig, embedding_to_labels
from .linalg import make_rng
from .types import FitTrace, HyperParams, Labeling, ModelState, MultiViewDataset
from .updates import (
    ViewCache,
    build_laplacian,
    build_weight_qp,
    objective,
    per_view_loss,
    update_consensus,
    update_graph,
    update_partition,
    update_weights,
)


@dataclass(frozen=True)
class FitResult:
    state: ModelState
    trace: FitTrace
    labels: Labeling


def _random_orthonormal(n, c, rng):
    q, _ = np.linalg.qr(rng.standard_normal((n, c)))
    return q[:, :c]


def init_state(data: MultiViewDataset, params: HyperParams, rng) -> ModelState:
    """Initial iterate: random orthonormal partitions and consensus,
    uniform weights, zero graphs. Deterministic given the generator state."""
    n = data.n_samples
    t = data.n_views
    c = params.n_clusters
    if c > n:
        raise ValueError(f"n_clusters={c} exceeds the {n} available samples")
    partitions = [_random_orthonormal(n, c, rng) for _ in range(t)]
    consensus = _random_orthonormal(n, c, rng)
    return ModelState(
        graphs=tuple(np.zeros((n, n)) for _ in range(t)),
        partitions=tuple(partitions),
        weights=np.full(t, 1.0 / t),
        consensus=consensus,
    )


def _solve_weights(data, graphs, partitions, laps, consensus, params):
    losses = [
        per_view_loss(view.data, graphs[j], partitions[j], laps[j],
                      params.alpha, params.beta)
        for j, view in enumerate(data.views)
    ]
    return update_weights(build_weight_qp(partitions, consensus, losses))


def fit(data: MultiViewDataset, params: HyperParams, callback=None) -> FitResult:
    """Run the alternating solver to convergence.

    ``callback``, when given, is invoked as ``callback(iteration, state)``
    with the validated model state after every outer iteration.
    """
    if not isinstance(data, MultiViewDataset):
        raise TypeError("data must be a MultiViewDataset")
    rng = make_rng(params.seed)
    state = init_state(data, params, rng)
    t = data.n_views
    caches = [ViewCache(view.data, params.beta) for view in data.views]

    graphs = list(state.graphs)
    partitions = list(state.partitions)
    weights = np.array(state.weights)
    consensus = np.array(state.consensus)
    laps = [build_laplacian(s) for s in graphs]
    refreshed = [False] * t
    consensus_refreshed = False

    initial_obj = objective(state, data, params)
    prev_obj = initial_obj
    objs = []
    weight_hist = []
    violations = []
    converged = False

    for it in range(1, params.max_outer_iters + 1):
        if params.partition_sweep == "jacobi":
            source = list(partitions)
            source_refreshed = list(refreshed)
        else:
            source = partitions
            source_refreshed = refreshed
        for v in range(t):
            graphs[v] = update_graph(caches[v], partitions[v], params.alpha)
            laps[v] = build_laplacian(graphs[v])
            others = [
                (weights[j], source[j])
                for j in range(t)
                if j != v and source_refreshed[j]
            ]
            y_ref = consensus if consensus_refreshed else None
            if params.m_variant == "repel" and weights[v] == 0.0 and refreshed[v]:
                pass  # degenerate subproblem: keep the current partition
            else:
                partitions[v] = update_partition(
                    laps[v], params.n_clusters, weights[v], y_ref, others,
                    params.alpha, params.m_variant,
                )
            refreshed[v] = True
            if params.weight_update_per_view:
                weights = _solve_weights(data, graphs, partitions, laps,
                                         consensus, params)
        if not params.weight_update_per_view:
            weights = _solve_weights(data, graphs, partitions, laps,
                                     consensus, params)
        consensus = update_consensus(partitions, weights)
        consensus_refreshed = True

        state = ModelState(
            graphs=tuple(graphs),
            partitions=tuple(partitions),
            weights=weights,
            consensus=consensus,
        )
        obj = objective(state, data, params)
        objs.append(obj)
        weight_hist.append(np.array(weights))
        if obj > prev_obj:
            violations.append((it, obj - prev_obj))
        if callback is not None:
            callback(it, state)
        if abs(obj - prev_obj) <= params.rel_obj_tol * max(abs(prev_obj), 1.0):
            converged = True
            prev_obj = obj
            break
        prev_obj = obj

    trace = FitTrace(
        objective_per_iter=tuple(objs),
        weights_per_iter=tuple(weight_hist),
        iters_run=len(objs),
        converged=converged,
        monotonicity_violations=tuple(violations),
        initial_objective=initial_obj,
    )
    labels = embedding_to_labels(
        state.consensus,
        KMeansConfig(n_clusters=params.n_clusters, seed=params.seed),
        row_normalize=params.row_normalize_embedding,
    )
    return FitResult(state=state, trace=trace, labels=labels)


def write_trace(trace: FitTrace, path):
    """Write a trace as CSV: one line per outer iteration, 17-digit floats."""
    t = trace.weights_per_iter[0].shape[0] if trace.iters_run else 0
    header = "iter,objective," + ",".join(f"w_{k + 1}" for k in range(t))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(header + "\n")
        for k in range(trace.iters_run):
            row = [str(k + 1), "%.17g" % trace.objective_per_iter[k]]
            row.extend("%.17g" % w for w in trace.weights_per_iter[k])
            fh.write(",".join(row) + "\n")


def read_trace(path):
    """Read a trace CSV back as (iterations, objectives, weights-per-iteration)."""
    iters = []
    objs = []
    weights = []
    with open(path, "r", encoding="utf-8") as fh:
        next(fh)  # header
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            iters.append(int(parts[0]))
            objs.append(float(parts[1]))
            weights.append(np.array([float(x) for x in parts[2:]]))
    return iters, objs, weights


def fit_with_trace_export(data, params, path, callback=None) -> FitResult:
    """Run ``fit`` and write the trace file to ``path``."""
    result = fit(data, params, callback=callback)
    write_trace(result.trace, path)
    return result
