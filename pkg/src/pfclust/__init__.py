"""Multi-view subspace clustering via weighted partition fusion.

The solver jointly learns, per view, a self-expressive graph and a
spectral partition, plus a simplex weight per view and one consensus
embedding shared by all views; k-means on the consensus rows yields the
final cluster labels.
"""

from .exceptions import ConvergenceError, DataFormatError, NotPositiveDefiniteError
from .kmeans import KMeansConfig, embedding_to_labels, kmeans
from .linalg import (
    factor_spd,
    make_rng,
    project_simplex,
    sym_eigs_largest,
    sym_eigs_smallest,
)
from .metrics import (
    PairCounts,
    Scores,
    adjusted_rand_index,
    evaluate_all,
    nmi,
    pair_counts,
    precision_recall_fscore,
)
from .data import (
    Manifest,
    NoiseSpec,
    add_gaussian_noise,
    add_salt_pepper_noise,
    load_dataset,
    load_labels,
    load_weights,
    make_noisy_multiview,
    normalize_dataset,
    save_dataset,
    save_labels,
    save_view_csv,
    save_weights,
    synth_blobs,
)
from .solver import FitResult, fit, fit_with_trace_export, init_state, read_trace, write_trace
from .types import (
    FitTrace,
    HyperParams,
    Labeling,
    ModelState,
    MultiViewDataset,
    ViewMatrix,
)
from .updates import (
    ViewCache,
    WeightQp,
    build_laplacian,
    build_weight_qp,
    objective,
    per_view_loss,
    update_consensus,
    update_graph,
    update_partition,
    update_weights,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DataFormatError",
    "NotPositiveDefiniteError",
    "KMeansConfig",
    "embedding_to_labels",
    "kmeans",
    "factor_spd",
    "make_rng",
    "project_simplex",
    "sym_eigs_largest",
    "sym_eigs_smallest",
    "PairCounts",
    "Scores",
    "adjusted_rand_index",
    "evaluate_all",
    "nmi",
    "pair_counts",
    "precision_recall_fscore",
    "Manifest",
    "NoiseSpec",
    "add_gaussian_noise",
    "add_salt_pepper_noise",
    "load_dataset",
    "load_labels",
    "load_weights",
    "make_noisy_multiview",
    "normalize_dataset",
    "save_dataset",
    "save_labels",
    "save_view_csv",
    "save_weights",
    "synth_blobs",
    "FitResult",
    "fit",
    "fit_with_trace_export",
    "init_state",
    "read_trace",
    "write_trace",
    "FitTrace",
    "HyperParams",
    "Labeling",
    "ModelState",
    "MultiViewDataset",
    "ViewMatrix",
    "ViewCache",
    "WeightQp",
    "build_laplacian",
    "build_weight_qp",
    "objective",
    "per_view_loss",
    "update_consensus",
    "update_graph",
    "update_partition",
    "update_weights",
    "__version__",
]
