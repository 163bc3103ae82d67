"""
How view weights react to a featureless view
============================================

Add a pure-noise view to two informative ones and watch the learned view
weights. The weight program trades per-view losses against partition
alignment on the probability simplex; on easy, consistent data its
optimum is a simplex vertex, so expect all mass on the single cheapest
view rather than a soft ranking. The consensus still tracks the best
view, which is the point of fusing partitions instead of graphs.
"""

import numpy as np

from pfclust import (
    HyperParams,
    KMeansConfig,
    Labeling,
    MultiViewDataset,
    ViewMatrix,
    embedding_to_labels,
    fit,
    make_rng,
    nmi,
    synth_blobs,
)

###############################################################################
# Two clean views plus one featureless view
# -----------------------------------------

rng = make_rng(42)
clean = synth_blobs(n_per_cluster=50, n_clusters=3,
                    views=[(5, 0.5), (8, 0.5)], separation=10.0, rng=rng)
noise_view = ViewMatrix("noise", rng.standard_normal((50, clean.n_samples)))
data = MultiViewDataset(views=clean.views + (noise_view,), labels=clean.labels)
truth = Labeling(data.labels, 3)

###############################################################################
# Fit and inspect the weight trajectory
# -------------------------------------

result = fit(data, HyperParams(n_clusters=3, seed=7))
print("weights per iteration (first 5):")
for it, w in enumerate(result.trace.weights_per_iter[:5], 1):
    print(f"  iter {it}: {np.round(w, 4)}")
print(f"final weights: {np.round(result.state.weights, 4)}")

###############################################################################
# Per-view partitions versus the consensus
# ----------------------------------------
# k-means on each per-view partition gives a per-view labeling; the
# consensus labeling comes from the fused embedding.

cfg = KMeansConfig(n_clusters=3, seed=7)
for view, partition in zip(data.views, result.state.partitions):
    labels = embedding_to_labels(partition, cfg)
    print(f"view {view.name:>6}: NMI = {nmi(labels, truth):.3f}")
print(f"consensus   : NMI = {nmi(result.labels, truth):.3f}")
