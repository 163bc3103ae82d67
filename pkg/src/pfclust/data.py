"""Dataset ingestion, normalization, noise injection, and synthetic data.

File formats
------------
Manifest: line-oriented text, ``key: value`` pairs plus one ``view:`` line
per view, for example::

    name: coil3
    n: 480
    labels_path: labels.csv
    view: name=level1 path=view_level1.csv m=1024 has_header=false

View paths are resolved relative to the manifest's directory. View CSVs
are samples x features (one row per sample), comma separated, UTF-8, LF
endings, optional single header row as declared in the manifest. Labels
files hold one integer per line; weights files one comma-separated line.
Floats are written with 17 significant digits so values round-trip
exactly.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .exceptions import DataFormatError
from .types import Labeling, MultiViewDataset, ViewMatrix

FLOAT_FMT = "%.17g"

NOISE_KINDS = ("gaussian", "salt_pepper")


@dataclass(frozen=True)
class ManifestView:
    name: str
    path: str
    m: int
    has_header: bool = False


@dataclass(frozen=True)
class Manifest:
    name: str
    n: int
    views: tuple
    labels_path: Optional[str] = None
    base_dir: str = "."


@dataclass(frozen=True)
class NoiseSpec:
    """One corruption level: Gaussian variance or salt-and-pepper density."""

    kind: str
    level: float
    seed: int = 0

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ValueError(f"kind must be one of {NOISE_KINDS}")
        if self.level <= 0:
            raise ValueError("noise level must be positive")
        if self.kind == "salt_pepper" and self.level >= 1:
            raise ValueError("salt-and-pepper density must be below 1")


def _parse_bool(token, where):
    if token in ("true", "True", "1"):
        return True
    if token in ("false", "False", "0"):
        return False
    raise DataFormatError(f"{where}: expected a boolean, got {token!r}")


def _parse_int(token, where):
    try:
        return int(token)
    except ValueError:
        raise DataFormatError(f"{where}: expected an integer, got {token!r}") from None


def load_manifest(path) -> Manifest:
    """Parse a dataset manifest; errors report file and line."""
    name = None
    n = None
    labels_path = None
    views = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            where = f"{path}:{lineno}"
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition(":")
            if not sep:
                raise DataFormatError(f"{where}: expected 'key: value'")
            key = key.strip()
            value = value.strip()
            if key == "name":
                name = value
            elif key == "n":
                n = _parse_int(value, where)
            elif key == "labels_path":
                labels_path = value
            elif key == "view":
                fields = {}
                for token in value.split():
                    fkey, fsep, fval = token.partition("=")
                    if not fsep:
                        raise DataFormatError(f"{where}: expected field=value, got {token!r}")
                    fields[fkey] = fval
                missing = {"name", "path", "m"} - fields.keys()
                if missing:
                    raise DataFormatError(f"{where}: view line missing {sorted(missing)}")
                views.append(
                    ManifestView(
                        name=fields["name"],
                        path=fields["path"],
                        m=_parse_int(fields["m"], where),
                        has_header=_parse_bool(fields.get("has_header", "false"), where),
                    )
                )
            else:
                raise DataFormatError(f"{where}: unknown key {key!r}")
    if name is None or n is None:
        raise DataFormatError(f"{path}: manifest must set 'name' and 'n'")
    if not views:
        raise DataFormatError(f"{path}: manifest declares no views")
    return Manifest(
        name=name,
        n=n,
        views=tuple(views),
        labels_path=labels_path,
        base_dir=os.path.dirname(os.path.abspath(path)),
    )


def _read_csv_matrix(path, has_header):
    rows = []
    width = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            if has_header and lineno == 1:
                continue
            line = raw.strip()
            if not line:
                continue
            parts = line.split(",")
            if width is None:
                width = len(parts)
            elif len(parts) != width:
                raise DataFormatError(
                    f"{path}:{lineno}: expected {width} columns, got {len(parts)}"
                )
            try:
                rows.append([float(tok) for tok in parts])
            except ValueError:
                raise DataFormatError(f"{path}:{lineno}: non-numeric value") from None
    if not rows:
        raise DataFormatError(f"{path}: no data rows")
    return np.asarray(rows, dtype=np.float64)


def load_dataset(manifest_path) -> MultiViewDataset:
    """Load the views (and labels, when declared) behind a manifest."""
    manifest = load_manifest(manifest_path)
    views = []
    for mv in manifest.views:
        full = os.path.join(manifest.base_dir, mv.path)
        if not os.path.exists(full):
            raise FileNotFoundError(f"view file not found: {full}")
        table = _read_csv_matrix(full, mv.has_header)
        if table.shape != (manifest.n, mv.m):
            raise ValueError(
                f"view {mv.name!r}: file is {table.shape[0]}x{table.shape[1]}, "
                f"manifest declares {manifest.n}x{mv.m}"
            )
        views.append(ViewMatrix(mv.name, table.T))
    labels = None
    if manifest.labels_path is not None:
        full = os.path.join(manifest.base_dir, manifest.labels_path)
        if not os.path.exists(full):
            raise FileNotFoundError(f"labels file not found: {full}")
        labels = load_labels(full)
        if labels.shape[0] != manifest.n:
            raise ValueError(
                f"labels file has {labels.shape[0]} entries, manifest declares {manifest.n}"
            )
    return MultiViewDataset(views=tuple(views), labels=labels)


def normalize_dataset(data: MultiViewDataset) -> MultiViewDataset:
    """Rescale every feature to [-1, 1]; constant features map to 0."""
    views = []
    for view in data.views:
        x = np.array(view.data)
        lo = x.min(axis=1, keepdims=True)
        hi = x.max(axis=1, keepdims=True)
        span = hi - lo
        flat = (span == 0.0).ravel()
        span[span == 0.0] = 1.0
        out = 2.0 * (x - lo) / span - 1.0
        out[flat, :] = 0.0
        views.append(ViewMatrix(view.name, out))
    return MultiViewDataset(views=tuple(views), labels=data.labels)


def add_gaussian_noise(view: ViewMatrix, variance, rng) -> ViewMatrix:
    """Add i.i.d. zero-mean Gaussian noise of the given variance to every entry."""
    if variance <= 0:
        raise ValueError("variance must be positive")
    noise = rng.normal(0.0, np.sqrt(variance), size=view.data.shape)
    return ViewMatrix(view.name, view.data + noise)


def add_salt_pepper_noise(view: ViewMatrix, density, rng, lo=None, hi=None) -> ViewMatrix:
    """Replace a ``density`` fraction of entries with extreme values.

    Each entry is corrupted independently with probability ``density``;
    corrupted entries become ``lo`` or ``hi`` with equal probability.
    The endpoints default to the view's current min and max. Entries not
    corrupted are bit-identical to the input.
    """
    if not 0 < density < 1:
        raise ValueError("density must lie strictly between 0 and 1")
    if lo is None:
        lo = float(view.data.min())
    if hi is None:
        hi = float(view.data.max())
    if not lo < hi:
        raise ValueError("need lo < hi for salt-and-pepper endpoints")
    corrupt = rng.random(view.data.shape) < density
    salt = rng.random(view.data.shape) < 0.5
    out = np.array(view.data)
    out[corrupt & salt] = hi
    out[corrupt & ~salt] = lo
    return ViewMatrix(view.name, out)


def make_noisy_multiview(base: ViewMatrix, specs: Sequence[NoiseSpec],
                         labels=None) -> MultiViewDataset:
    """Build a multi-view dataset by corrupting one base view at several levels.

    Each spec produces one view from an independent corruption of the same
    base matrix, seeded by the spec's own seed.
    """
    specs = list(specs)
    if not specs:
        raise ValueError("need at least one noise level")
    views = []
    for spec in specs:
        rng = np.random.default_rng(spec.seed)
        name = f"{base.name}_{spec.kind}_{spec.level:g}"
        if spec.kind == "gaussian":
            noisy = add_gaussian_noise(base, spec.level, rng)
        else:
            noisy = add_salt_pepper_noise(base, spec.level, rng)
        views.append(ViewMatrix(name, noisy.data))
    return MultiViewDataset(views=tuple(views), labels=labels)


def _blob_centers(n_clusters, dim, spacing, rng):
    # Equal-norm centers along mutually orthogonal directions whenever the
    # dimension allows; minimum pairwise distance is exactly ``spacing``.
    if dim >= n_clusters:
        q, _ = np.linalg.qr(rng.standard_normal((dim, n_clusters)))
        return (q[:, :n_clusters] * (spacing / np.sqrt(2.0))).T
    centers = rng.standard_normal((n_clusters, dim))
    gaps = [
        np.linalg.norm(centers[i] - centers[j])
        for i in range(n_clusters)
        for j in range(i + 1, n_clusters)
    ]
    dmin = min(gaps)
    if dmin == 0.0:
        raise ValueError("degenerate center draw; use another seed")
    return centers * (spacing / dmin)


def synth_blobs(n_per_cluster, n_clusters, views, separation, rng) -> MultiViewDataset:
    """Sample consistent Gaussian blobs rendered independently in each view.

    ``views`` is a sequence of (dim, noise_sigma) pairs. Within each view
    the cluster centers keep a minimum mutual distance of
    ``separation * noise_sigma``; cluster membership is shared across
    views and returned as labels.
    """
    if n_per_cluster < 1 or n_clusters < 1:
        raise ValueError("cluster sizes must be positive")
    views = list(views)
    if not views:
        raise ValueError("need at least one view spec")
    if separation <= 0:
        raise ValueError("separation must be positive")
    labels = np.repeat(np.arange(n_clusters), n_per_cluster)
    out = []
    for k, (dim, sigma) in enumerate(views):
        dim = int(dim)
        sigma = float(sigma)
        if dim < 1 or sigma <= 0:
            raise ValueError("view specs need dim >= 1 and sigma > 0")
        if n_clusters > 1:
            centers = _blob_centers(n_clusters, dim, separation * sigma, rng)
        else:
            centers = rng.standard_normal((1, dim))
        points = centers[labels] + sigma * rng.standard_normal((labels.size, dim))
        out.append(ViewMatrix(f"view{k + 1}", points.T))
    return MultiViewDataset(views=tuple(out), labels=labels)


def save_view_csv(view: ViewMatrix, path):
    """Write one view as samples x features CSV."""
    rows = view.data.T
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for row in rows:
            fh.write(",".join(FLOAT_FMT % x for x in row))
            fh.write("\n")


def save_labels(labeling, path):
    """Write cluster ids, one integer per line."""
    ids = labeling.assignments if isinstance(labeling, Labeling) else np.asarray(labeling)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for x in ids:
            fh.write(f"{int(x)}\n")


def load_labels(path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return np.array(
                [int(line.strip()) for line in fh if line.strip()], dtype=np.int64
            )
        except ValueError:
            raise DataFormatError(f"{path}: labels must be integers, one per line") from None


def save_weights(weights, path):
    """Write view weights as a single comma-separated line."""
    weights = np.asarray(weights, dtype=np.float64)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(FLOAT_FMT % x for x in weights))
        fh.write("\n")


def load_weights(path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        line = fh.readline().strip()
    try:
        return np.array([float(tok) for tok in line.split(",")], dtype=np.float64)
    except ValueError:
        raise DataFormatError(f"{path}: weights must be comma-separated floats") from None


def save_dataset(data: MultiViewDataset, out_dir, name) -> str:
    """Write views, labels, and a manifest under ``out_dir``; returns manifest path."""
    os.makedirs(out_dir, exist_ok=True)
    lines = [f"name: {name}", f"n: {data.n_samples}"]
    if data.labels is not None:
        save_labels(data.labels, os.path.join(out_dir, "labels.csv"))
        lines.append("labels_path: labels.csv")
    for view in data.views:
        fname = f"{view.name}.csv"
        save_view_csv(view, os.path.join(out_dir, fname))
        lines.append(
            f"view: name={view.name} path={fname} m={view.n_features} has_header=false"
        )
    manifest_path = os.path.join(out_dir, "manifest.txt")
    with open(manifest_path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")
    return manifest_path
