"""Seeded k-means used to discretize spectral embeddings.

Lloyd iterations with k-means++ seeding and best-of-restarts selection.
All randomness flows through per-restart seeds derived from the config
seed, so results are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import make_rng
from .types import Labeling


@dataclass(frozen=True)
class KMeansConfig:
    n_clusters: int
    restarts: int = 10
    max_iters: int = 300
    seed: int = 0
    init: str = "kmeanspp"

    def __post_init__(self):
        if self.n_clusters < 1:
            raise ValueError("n_clusters must be positive")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.init != "kmeanspp":
            raise ValueError("only k-means++ initialization is supported")


def _plus_plus_centers(points, c, rng):
    n = points.shape[0]
    centers = np.empty((c, points.shape[1]))
    centers[0] = points[int(rng.integers(n))]
    sq = np.sum((points - centers[0]) ** 2, axis=1)
    for k in range(1, c):
        total = float(sq.sum())
        if total <= 0.0:
            idx = int(rng.integers(n))  # all remaining points coincide
        else:
            idx = int(rng.choice(n, p=sq / total))
        centers[k] = points[idx]
        sq = np.minimum(sq, np.sum((points - centers[k]) ** 2, axis=1))
    return centers


def _assign(points, centers):
    # argmin breaks distance ties toward the lowest cluster index
    d2 = (
        np.sum(points**2, axis=1)[:, None]
        - 2.0 * points @ centers.T
        + np.sum(centers**2, axis=1)[None, :]
    )
    labels = np.argmin(d2, axis=1)
    return labels


def _lloyd(points, centers, max_iters):
    """One restart of Lloyd's algorithm; returns per-iteration inertias too."""
    c = centers.shape[0]
    history = []
    labels = np.zeros(points.shape[0], dtype=np.int64)
    for _ in range(max_iters):
        labels = _assign(points, centers)
        shifted = points - centers[labels]
        inertia = float(np.sum(shifted * shifted))
        history.append(inertia)
        new_centers = np.empty_like(centers)
        counts = np.bincount(labels, minlength=c)
        for k in range(c):
            if counts[k] > 0:
                new_centers[k] = points[labels == k].mean(axis=0)
        empties = np.nonzero(counts == 0)[0]
        if empties.size:
            # Re-seed each empty centroid at the point farthest from its
            # assigned centroid so exactly c clusters survive.
            dist = np.sum((points - new_centers[labels]) ** 2, axis=1)
            for k in empties:
                far = int(np.argmax(dist))
                new_centers[k] = points[far]
                dist[far] = -1.0
        if np.array_equal(new_centers, centers):
            break
        centers = new_centers
    labels = _assign(points, centers)
    shifted = points - centers[labels]
    inertia = float(np.sum(shifted * shifted))
    history.append(inertia)
    return labels, centers, inertia, history


def kmeans(points, cfg: KMeansConfig):
    """Cluster rows of ``points``; returns (Labeling, inertia).

    Runs ``cfg.restarts`` independent k-means++ seedings (restart r uses
    seed ``cfg.seed + r``) and keeps the labeling with the smallest
    within-cluster sum of squares, ties resolved toward the earlier
    restart.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2:
        raise ValueError("points must be 2-D (samples x dims)")
    n = points.shape[0]
    if n < cfg.n_clusters:
        raise ValueError(f"need at least {cfg.n_clusters} samples, got {n}")
    best = None
    for r in range(cfg.restarts):
        rng = make_rng(cfg.seed + r)
        centers = _plus_plus_centers(points, cfg.n_clusters, rng)
        labels, _, inertia, _ = _lloyd(points, centers, cfg.max_iters)
        if best is None or inertia < best[0]:
            best = (inertia, labels)
    return Labeling(best[1], cfg.n_clusters), best[0]


def embedding_to_labels(embedding, cfg: KMeansConfig, row_normalize=True) -> Labeling:
    """Discretize an orthonormal embedding by k-means on its rows.

    With ``row_normalize`` each row is scaled to unit length first (rows
    with norm below 1e-12 are left as zero), the usual preprocessing for
    spectral embeddings.
    """
    e = np.asarray(embedding, dtype=np.float64)
    if e.ndim != 2:
        raise ValueError("embedding must be 2-D")
    if row_normalize:
        norms = np.linalg.norm(e, axis=1)
        safe = np.where(norms < 1e-12, 1.0, norms)
        e = e / safe[:, None]
    labeling, _ = kmeans(e, cfg)
    return labeling
