"""External clustering evaluation: pairwise F-score family, NMI, adjusted Rand.

All five measures are computed from the contingency table between the
predicted and reference labelings, so they cost O(n + c_pred * c_true)
and are invariant to any permutation of cluster ids on either side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .types import Labeling


@dataclass(frozen=True)
class PairCounts:
    """Agreement counts over the n(n-1)/2 sample pairs.

    tp: co-clustered in both labelings, fp: in the prediction only,
    fn: in the reference only, tn: in neither.
    """

    tp: int
    fp: int
    fn: int
    tn: int


def _as_ids(labeling):
    if isinstance(labeling, Labeling):
        return labeling.assignments
    return np.asarray(labeling, dtype=np.int64)


def _contingency(pred, truth):
    a = _as_ids(pred)
    b = _as_ids(truth)
    if a.shape != b.shape:
        raise ValueError(f"labelings have different lengths: {a.shape[0]} vs {b.shape[0]}")
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    table = np.zeros((int(ai.max()) + 1, int(bi.max()) + 1), dtype=np.int64)
    np.add.at(table, (ai, bi), 1)
    return table


def _pairs(x):
    x = np.asarray(x, dtype=object)  # python ints; immune to overflow
    return (x * (x - 1) // 2).sum()


def pair_counts(pred, truth) -> PairCounts:
    """Count pair agreements between two labelings of the same samples."""
    table = _contingency(pred, truth)
    n = int(table.sum())
    if n < 2:
        raise ValueError("pair counting needs at least two samples")
    tp = int(_pairs(table.ravel()))
    same_pred = int(_pairs(table.sum(axis=1)))
    same_truth = int(_pairs(table.sum(axis=0)))
    total = n * (n - 1) // 2
    fp = same_pred - tp
    fn = same_truth - tp
    tn = total - tp - fp - fn
    return PairCounts(tp=tp, fp=fp, fn=fn, tn=tn)


def precision_recall_fscore(counts: PairCounts):
    """Pairwise precision, recall, and F-score; 0 where a denominator is 0."""
    precision = counts.tp / (counts.tp + counts.fp) if counts.tp + counts.fp else 0.0
    recall = counts.tp / (counts.tp + counts.fn) if counts.tp + counts.fn else 0.0
    f_score = (
        2.0 * precision * recall / (precision + recall) if precision + recall else 0.0
    )
    return precision, recall, f_score


def nmi(pred, truth) -> float:
    """Mutual information normalized by the geometric mean of the entropies.

    Conventions: 1.0 when both labelings are the trivial single cluster
    (identical partitions), 0.0 when exactly one entropy is zero.
    """
    table = _contingency(pred, truth)
    n = float(table.sum())
    pa = table.sum(axis=1) / n
    pb = table.sum(axis=0) / n
    h_pred = -sum(p * math.log(p) for p in pa if p > 0.0)
    h_truth = -sum(p * math.log(p) for p in pb if p > 0.0)
    if h_pred == 0.0 and h_truth == 0.0:
        return 1.0
    if h_pred == 0.0 or h_truth == 0.0:
        return 0.0
    mi = 0.0
    for i in range(table.shape[0]):
        for j in range(table.shape[1]):
            nij = table[i, j]
            if nij:
                pij = nij / n
                mi += pij * math.log(pij / (pa[i] * pb[j]))
    return min(1.0, max(0.0, mi / math.sqrt(h_pred * h_truth)))


def adjusted_rand_index(pred, truth) -> float:
    """Pair-counting Rand index corrected for chance; 1.0 on the 0/0 case."""
    counts = pair_counts(pred, truth)
    total = counts.tp + counts.fp + counts.fn + counts.tn
    same_pred = counts.tp + counts.fp
    same_truth = counts.tp + counts.fn
    expected = same_pred * same_truth / total
    denom = 0.5 * (same_pred + same_truth) - expected
    if denom == 0.0:
        return 1.0
    return (counts.tp - expected) / denom


class Scores(NamedTuple):
    f_score: float
    precision: float
    recall: float
    nmi: float
    ari: float


def evaluate_all(pred, truth) -> Scores:
    """All five measures at once."""
    counts = pair_counts(pred, truth)
    precision, recall, f_score = precision_recall_fscore(counts)
    return Scores(
        f_score=f_score,
        precision=precision,
        recall=recall,
        nmi=nmi(pred, truth),
        ari=adjusted_rand_index(pred, truth),
    )
