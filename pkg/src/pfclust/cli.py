"""Batch command-line frontend.

Subcommands: cluster, eval, corrupt, synth, grid. Exit codes: 0 success,
1 runtime failure (bad files, solver errors), 2 usage errors. All stdout
is machine-parsable ``key,value`` lines.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import data as dio
from .kmeans import KMeansConfig, embedding_to_labels
from .linalg import make_rng
from .metrics import Scores, evaluate_all
from .solver import fit_with_trace_export
from .types import M_VARIANTS, HyperParams, Labeling, ViewMatrix

FLOAT_FMT = "%.17g"


def _nonneg_float(text):
    val = float(text)
    if val < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return val


def _pos_float(text):
    val = float(text)
    if val <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return val


def _clusters(text):
    val = int(text)
    if val < 2:
        raise argparse.ArgumentTypeError("needs at least 2 clusters")
    return val


def _pos_int(text):
    val = int(text)
    if val < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return val


def _seed(text):
    val = int(text)
    if not 0 <= val < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return val


def _float_list(text):
    try:
        return [float(tok) for tok in text.split(",") if tok]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated numbers") from None


def _view_specs(text):
    specs = []
    for tok in text.split(","):
        dim, sep, sigma = tok.partition(":")
        if not sep:
            raise argparse.ArgumentTypeError("expected dim:sigma pairs")
        try:
            specs.append((int(dim), float(sigma)))
        except ValueError:
            raise argparse.ArgumentTypeError("expected dim:sigma pairs") from None
    if not specs:
        raise argparse.ArgumentTypeError("expected at least one dim:sigma pair")
    return specs


def _add_fit_flags(p):
    p.add_argument("--clusters", type=_clusters, required=True)
    p.add_argument("--alpha", type=_nonneg_float, default=1.0)
    p.add_argument("--beta", type=_pos_float, default=1.0)
    p.add_argument("--max-iters", type=_pos_int, default=50)
    p.add_argument("--tol", type=_pos_float, default=1e-6)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--m-variant", choices=M_VARIANTS, default="attract")
    p.add_argument("--no-row-normalize", action="store_true",
                   help="skip row normalization of embeddings before k-means")


def _params(args, alpha=None, beta=None):
    return HyperParams(
        n_clusters=args.clusters,
        alpha=args.alpha if alpha is None else alpha,
        beta=args.beta if beta is None else beta,
        max_outer_iters=args.max_iters,
        rel_obj_tol=args.tol,
        seed=args.seed,
        m_variant=args.m_variant,
        row_normalize_embedding=not args.no_row_normalize,
    )


def _kv(key, value):
    print(f"{key},{value}")


def cmd_cluster(args):
    dataset = dio.normalize_dataset(dio.load_dataset(args.manifest))
    params = _params(args)
    os.makedirs(args.out_dir, exist_ok=True)
    result = fit_with_trace_export(dataset, params,
                                   os.path.join(args.out_dir, "trace.csv"))
    dio.save_labels(result.labels, os.path.join(args.out_dir, "labels.csv"))
    cfg = KMeansConfig(n_clusters=params.n_clusters, seed=params.seed)
    for k, partition in enumerate(result.state.partitions, 1):
        lab = embedding_to_labels(partition, cfg,
                                  row_normalize=params.row_normalize_embedding)
        dio.save_labels(lab, os.path.join(args.out_dir, f"labels_view_{k}.csv"))
    dio.save_weights(result.state.weights, os.path.join(args.out_dir, "weights.csv"))
    _kv("n", dataset.n_samples)
    _kv("views", dataset.n_views)
    _kv("iterations", result.trace.iters_run)
    _kv("converged", str(result.trace.converged).lower())
    _kv("objective", FLOAT_FMT % result.trace.objective_per_iter[-1])
    return 0


def cmd_eval(args):
    pred = dio.load_labels(args.pred)
    truth = dio.load_labels(args.truth)
    if pred.shape != truth.shape:
        raise ValueError(
            f"label files have different lengths: {pred.shape[0]} vs {truth.shape[0]}"
        )
    scores = evaluate_all(pred, truth)
    _kv("fscore", FLOAT_FMT % scores.f_score)
    _kv("precision", FLOAT_FMT % scores.precision)
    _kv("recall", FLOAT_FMT % scores.recall)
    _kv("nmi", FLOAT_FMT % scores.nmi)
    _kv("ari", FLOAT_FMT % scores.ari)
    return 0


def cmd_corrupt(args):
    table = dio._read_csv_matrix(args.in_path, has_header=False)
    view = ViewMatrix("view", table.T)
    rng = make_rng(args.seed)
    if args.noise == "gaussian":
        noisy = dio.add_gaussian_noise(view, args.level, rng)
    else:
        noisy = dio.add_salt_pepper_noise(view, args.level, rng)
    dio.save_view_csv(noisy, args.out)
    _kv("entries", noisy.data.size)
    _kv("changed", int(np.count_nonzero(noisy.data != view.data)))
    return 0


def cmd_synth(args):
    rng = make_rng(args.seed)
    dataset = dio.synth_blobs(args.per_cluster, args.clusters, args.views,
                              args.separation, rng)
    manifest = dio.save_dataset(dataset, args.out_dir, "synthetic_blobs")
    _kv("manifest", manifest)
    _kv("n", dataset.n_samples)
    _kv("views", dataset.n_views)
    return 0


def cmd_grid(args):
    dataset = dio.normalize_dataset(dio.load_dataset(args.manifest))
    if dataset.labels is None:
        raise ValueError("grid evaluation needs ground-truth labels in the manifest")
    truth = Labeling(dataset.labels, int(dataset.labels.max()) + 1)
    os.makedirs(args.out_dir, exist_ok=True)
    out_path = os.path.join(args.out_dir, "grid_results.csv")
    rows = []
    from .solver import fit  # local import keeps startup light

    for alpha in args.alpha_list:
        for beta in args.beta_list:
            params = _params(args, alpha=alpha, beta=beta)
            result = fit(dataset, params)
            scores = evaluate_all(result.labels, truth)
            rows.append((alpha, beta, scores))
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        fh.write("alpha,beta,fscore,precision,recall,nmi,ari\n")
        for alpha, beta, s in rows:
            vals = [alpha, beta, s.f_score, s.precision, s.recall, s.nmi, s.ari]
            fh.write(",".join(FLOAT_FMT % v for v in vals) + "\n")
    _kv("results", out_path)
    _kv("rows", len(rows))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pfclust",
        description="Multi-view subspace clustering via weighted partition fusion",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="fit a dataset and write labels/weights/trace")
    p.add_argument("manifest")
    _add_fit_flags(p)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("eval", help="score a predicted labeling against a reference")
    p.add_argument("--pred", required=True)
    p.add_argument("--truth", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("corrupt", help="add noise to a view CSV")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--noise", choices=("gaussian", "saltpepper"), required=True)
    p.add_argument("--level", type=_pos_float, required=True)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_corrupt)

    p = sub.add_parser("synth", help="generate a synthetic multi-view blob dataset")
    p.add_argument("--clusters", type=_pos_int, required=True)
    p.add_argument("--per-cluster", type=_pos_int, required=True)
    p.add_argument("--views", type=_view_specs, required=True,
                   help="comma-separated dim:sigma pairs, e.g. 5:1.0,8:1.0")
    p.add_argument("--separation", type=_pos_float, default=10.0)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("grid", help="fit over an alpha/beta grid and score each run")
    p.add_argument("manifest")
    _add_fit_flags(p)
    p.add_argument("--alpha-list", type=_float_list, required=True)
    p.add_argument("--beta-list", type=_float_list, required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_grid)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, RuntimeError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
