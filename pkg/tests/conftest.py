import numpy as np

from pfclust import make_rng


def random_orthonormal(n, c, rng):
    q, _ = np.linalg.qr(rng.standard_normal((n, c)))
    return q[:, :c]


def random_spd(k, rng):
    b = rng.standard_normal((k, k))
    return b.T @ b + np.eye(k)


def rng_for(seed):
    return make_rng(seed)
