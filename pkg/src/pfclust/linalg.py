"""Dense deterministic numerical kernels.

Symmetric eigensolvers with a fixed sign convention, cached SPD
factorizations, Euclidean simplex projection, and the seeded random
generator used everywhere randomness is needed.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .exceptions import ConvergenceError, NotPositiveDefiniteError

SIGN_EPS = 1e-10


def make_rng(seed) -> np.random.Generator:
    """Seeded deterministic generator: identical seed, identical stream."""
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError("seed must fit in 64 unsigned bits")
    return np.random.default_rng(seed)


def _as_square(m, name):
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    return m


def _check_symmetric(m, rtol, name):
    scale = max(1.0, float(np.max(np.abs(m))) if m.size else 0.0)
    asym = float(np.max(np.abs(m - m.T))) if m.size else 0.0
    if asym > rtol * scale:
        raise ValueError(f"{name} is not symmetric (asymmetry {asym:.3e})")


class SpdFactorization:
    """Cholesky factorization cached for repeated right-hand sides."""

    def __init__(self, cho, size):
        self._cho = cho
        self.size = size

    def solve(self, b):
        """Solve A x = b for one vector or a matrix of stacked columns."""
        b = np.asarray(b, dtype=np.float64)
        if b.shape[0] != self.size:
            raise ValueError(f"right-hand side has {b.shape[0]} rows, expected {self.size}")
        return scipy.linalg.cho_solve(self._cho, b)


def factor_spd(a) -> SpdFactorization:
    """Factor a symmetric positive-definite matrix for repeated solves.

    Raises
    ------
    NotPositiveDefiniteError
        If the Cholesky factorization fails, which signals an indefinite
        or numerically singular input.
    """
    a = _as_square(a, "matrix")
    _check_symmetric(a, 1e-10, "matrix")
    a = 0.5 * (a + a.T)
    try:
        cho = scipy.linalg.cho_factor(a, lower=True, check_finite=True)
    except scipy.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(
            f"Cholesky factorization failed: {exc}"
        ) from exc
    return SpdFactorization(cho, a.shape[0])


def _fix_signs(vecs):
    # First component with magnitude above SIGN_EPS is made positive so
    # repeated runs return bit-identical eigenvectors.
    out = np.array(vecs)
    for k in range(out.shape[1]):
        col = out[:, k]
        idx = int(np.argmax(np.abs(col) > SIGN_EPS))
        if col[idx] < 0.0:
            out[:, k] = -col
    return out


def _eigh_all(m):
    sym = 0.5 * (m + m.T)
    try:
        vals, vecs = scipy.linalg.eigh(sym)
    except scipy.linalg.LinAlgError as exc:
        raise ConvergenceError(f"symmetric eigendecomposition failed: {exc}") from exc
    return vals, vecs


def sym_eigs_smallest(m, c):
    """Bottom-c eigenpairs of a symmetric matrix.

    Returns an (n, c) matrix of orthonormal eigenvectors and the c
    eigenvalues in ascending order. Inputs symmetric to within 1e-8
    (relative) are symmetrized before decomposition.
    """
    m = _as_square(m, "matrix")
    n = m.shape[0]
    if not 1 <= c <= n:
        raise ValueError(f"need 1 <= c <= {n}, got c={c}")
    _check_symmetric(m, 1e-8, "matrix")
    vals, vecs = _eigh_all(m)
    return _fix_signs(vecs[:, :c]), vals[:c].copy()


def sym_eigs_largest(m, c):
    """Top-c eigenpairs of a symmetric matrix, eigenvalues descending."""
    m = _as_square(m, "matrix")
    n = m.shape[0]
    if not 1 <= c <= n:
        raise ValueError(f"need 1 <= c <= {n}, got c={c}")
    _check_symmetric(m, 1e-8, "matrix")
    vals, vecs = _eigh_all(m)
    order = np.arange(n - 1, n - c - 1, -1)
    return _fix_signs(vecs[:, order]), vals[order].copy()


def project_simplex(v):
    """Euclidean projection onto the probability simplex.

    Sort-and-threshold algorithm; exact up to floating point for the small
    vectors (one entry per view) this toolkit uses.
    """
    v = np.asarray(v, dtype=np.float64).ravel()
    if v.size == 0:
        raise ValueError("cannot project an empty vector")
    if not np.all(np.isfinite(v)):
        raise ValueError("simplex projection needs finite entries")
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    ks = np.arange(1, v.size + 1)
    mask = u - (css - 1.0) / ks > 0.0
    rho = int(np.nonzero(mask)[0][-1])
    theta = (css[rho] - 1.0) / (rho + 1.0)
    return np.maximum(v - theta, 0.0)
