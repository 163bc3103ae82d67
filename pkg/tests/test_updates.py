import numpy as np
import pytest
from numpy.testing import assert_allclose

from pfclust import (
    HyperParams,
    ModelState,
    MultiViewDataset,
    ViewCache,
    ViewMatrix,
    WeightQp,
    build_laplacian,
    build_weight_qp,
    make_rng,
    objective,
    per_view_loss,
    update_consensus,
    update_graph,
    update_partition,
    update_weights,
)

from conftest import random_orthonormal


def pairwise_sq_dists(f):
    # independent O(n^2 c) oracle for the squared row-distance matrix
    n = f.shape[0]
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            d[i, j] = np.sum((f[i] - f[j]) ** 2)
    return d


class TestBuildLaplacian:
    def test_symmetric_two_node_graph(self):
        lap = build_laplacian(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert_allclose(lap, [[1.0, -1.0], [-1.0, 1.0]])

    def test_zero_graph(self):
        assert_allclose(build_laplacian(np.zeros((3, 3))), np.zeros((3, 3)))

    def test_asymmetric_input_symmetrized(self):
        # S = [[0,2],[0,0]] symmetrizes to W = [[0,1],[1,0]]
        lap = build_laplacian(np.array([[0.0, 2.0], [0.0, 0.0]]))
        assert_allclose(lap, [[1.0, -1.0], [-1.0, 1.0]])

    def test_rejects_negative_entries(self):
        with pytest.raises(ValueError):
            build_laplacian(np.array([[0.0, -1.0], [1.0, 0.0]]))

    def test_psd_and_zero_row_sums(self):
        for seed in range(8):
            rng = make_rng(seed)
            n = int(rng.integers(2, 31))
            lap = build_laplacian(rng.random((n, n)))
            assert np.max(np.abs(lap.sum(axis=1))) <= 1e-10
            assert np.max(np.abs(lap - lap.T)) == 0.0
            assert np.linalg.eigvalsh(lap).min() >= -1e-10

    def test_smoothness_identity(self):
        # tr(F' L F) equals 0.5 * sum_ij ||F_i - F_j||^2 W_ij on the
        # symmetrized graph.
        rng = make_rng(42)
        n = 12
        s = rng.random((n, n))
        lap = build_laplacian(s)
        f = random_orthonormal(n, 3, rng)
        w = 0.5 * (s + s.T)
        direct = 0.5 * np.sum(pairwise_sq_dists(f) * w)
        via_lap = np.sum(f * (lap @ f))
        assert abs(direct - via_lap) <= 1e-8 * max(1.0, abs(direct))


class TestUpdateGraph:
    def test_identity_data_alpha_zero(self):
        cache = ViewCache(np.eye(2), beta=1.0)
        s = update_graph(cache, np.eye(2), alpha=0.0)
        assert_allclose(s, 0.5 * np.eye(2), atol=1e-12)

    def test_alpha_zero_ignores_partition(self):
        rng = make_rng(1)
        cache = ViewCache(rng.standard_normal((3, 5)), beta=2.0)
        f1 = random_orthonormal(5, 2, rng)
        f2 = random_orthonormal(5, 2, rng)
        s1 = update_graph(cache, f1, alpha=0.0)
        s2 = update_graph(cache, f2, alpha=0.0)
        assert np.array_equal(s1, s2)

    def test_hand_solved_two_by_two(self):
        # X = I, beta = 1, alpha = 4, F = I: distances d = [[0,2],[2,0]],
        # rhs = I - [[0,2],[2,0]] = [[1,-2],[-2,1]], system matrix 2I,
        # pre-clamp solution [[0.5,-1],[-1,0.5]].
        cache = ViewCache(np.eye(2), beta=1.0)
        pre = update_graph(cache, np.eye(2), alpha=4.0, clamp=False)
        assert_allclose(pre, [[0.5, -1.0], [-1.0, 0.5]], atol=1e-12)
        post = update_graph(cache, np.eye(2), alpha=4.0)
        assert_allclose(post, 0.5 * np.eye(2), atol=1e-12)

    def test_preclamp_solves_linear_system(self):
        for seed in range(6):
            rng = make_rng(200 + seed)
            m, n = int(rng.integers(2, 7)), int(rng.integers(4, 12))
            x = rng.standard_normal((m, n))
            alpha, beta = float(rng.random() * 3), float(rng.random() + 0.5)
            f = random_orthonormal(n, 2, rng)
            cache = ViewCache(x, beta=beta)
            pre = update_graph(cache, f, alpha, clamp=False)
            gram = x.T @ x
            rhs = gram - 0.25 * alpha * pairwise_sq_dists(f)
            lhs = (gram + beta * np.eye(n)) @ pre
            assert np.linalg.norm(lhs - rhs) <= 1e-8 * max(1.0, np.linalg.norm(rhs))

    def test_clamped_output_nonnegative(self):
        rng = make_rng(7)
        cache = ViewCache(rng.standard_normal((4, 9)), beta=1.0)
        s = update_graph(cache, random_orthonormal(9, 3, rng), alpha=2.0)
        assert s.min() >= 0.0

    def test_rejects_negative_alpha(self):
        cache = ViewCache(np.eye(2), beta=1.0)
        with pytest.raises(ValueError):
            update_graph(cache, np.eye(2), alpha=-1.0)


class TestUpdatePartition:
    def test_single_view_follows_consensus(self):
        # alpha = 0, no other views: M = I - 2 Y Y', whose bottom
        # eigenspace is exactly span(Y).
        rng = make_rng(31)
        y = random_orthonormal(10, 3, rng)
        f = update_partition(np.zeros((10, 10)), 3, 1.0, y, [], alpha=0.0)
        assert np.linalg.norm(f @ f.T - y @ y.T, "fro") <= 1e-8

    def test_diagonal_coupling_matrix(self):
        lap = np.diag([5.0, 1.0, 4.0, 2.0])
        f = update_partition(lap, 2, 0.0, None, [], alpha=1.0)
        expect = np.zeros((4, 2))
        expect[1, 0] = 1.0  # smallest diagonal entry
        expect[3, 1] = 1.0  # second smallest
        assert_allclose(f, expect, atol=1e-12)

    def test_matches_dense_oracle_trace(self):
        rng = make_rng(32)
        n, c = 8, 2
        lap = build_laplacian(rng.random((n, n)))
        y = random_orthonormal(n, c, rng)
        others = [(0.3, random_orthonormal(n, c, rng)),
                  (0.2, random_orthonormal(n, c, rng))]
        for variant in ("attract", "repel"):
            alpha, w_own = 1.7, 0.5
            f = update_partition(lap, c, w_own, y, others, alpha, variant)
            m = alpha * lap - 2.0 * (y @ y.T)
            if variant == "attract":
                m = m + w_own * np.eye(n)
                for _, fj in others:
                    m -= 2.0 * (fj @ fj.T)
            else:
                for wj, fj in others:
                    m += 2.0 * wj * (fj @ fj.T)
            got = np.sum(f * (m @ f))
            oracle = np.sort(np.linalg.eigvalsh(m))[:c].sum()
            assert abs(got - oracle) <= 1e-8 * max(1.0, abs(oracle))

    def test_own_subproblem_never_increased(self):
        rng = make_rng(33)
        n, c = 9, 3
        lap = build_laplacian(rng.random((n, n)))
        y = random_orthonormal(n, c, rng)
        f_old = random_orthonormal(n, c, rng)
        f_new = update_partition(lap, c, 0.4, y, [], alpha=1.0)
        m = 1.0 * lap + 0.4 * np.eye(n) - 2.0 * (y @ y.T)
        before = np.sum(f_old * (m @ f_old))
        after = np.sum(f_new * (m @ f_new))
        assert after <= before + 1e-9 * abs(before)

    def test_orthonormal_output(self):
        rng = make_rng(34)
        lap = build_laplacian(rng.random((7, 7)))
        f = update_partition(lap, 3, 0.1, None, [], alpha=2.0)
        assert np.max(np.abs(f.T @ f - np.eye(3))) <= 1e-8

    def test_bad_variant(self):
        with pytest.raises(ValueError):
            update_partition(np.zeros((3, 3)), 2, 0.5, None, [], 1.0, "bogus")


class TestPerViewLoss:
    def test_zero_graph(self):
        rng = make_rng(41)
        x = rng.standard_normal((3, 5))
        f = random_orthonormal(5, 2, rng)
        val = per_view_loss(x, np.zeros((5, 5)), f, np.zeros((5, 5)), 0.0, 1.0)
        assert_allclose(val, np.sum(x * x), rtol=1e-12)

    def test_identity_reconstruction(self):
        val = per_view_loss(np.eye(2), np.eye(2), np.eye(2), np.zeros((2, 2)), 0.0, 1.0)
        assert_allclose(val, 2.0)

    def test_matches_term_by_term_oracle(self):
        rng = make_rng(43)
        x = rng.standard_normal((3, 4))
        s = rng.random((4, 4))
        lap = build_laplacian(s)
        f = random_orthonormal(4, 2, rng)
        got = per_view_loss(x, s, f, lap, 1.0, 1.0)
        recon = np.linalg.norm(x - x @ s, "fro") ** 2
        smooth = np.trace(f.T @ lap @ f)
        ridge = np.linalg.norm(s, "fro") ** 2
        assert abs(got - (recon + smooth + ridge)) <= 1e-10 * max(1.0, got)

    def test_nonnegative(self):
        rng = make_rng(44)
        for seed in range(5):
            x = rng.standard_normal((4, 6))
            s = rng.random((6, 6))
            f = random_orthonormal(6, 2, rng)
            assert per_view_loss(x, s, f, build_laplacian(s), 2.0, 0.5) >= 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            per_view_loss(np.eye(2), np.eye(3), np.eye(2), np.eye(2), 1.0, 1.0)


def simplex_grid(resolution=0.01):
    ticks = np.round(np.arange(0.0, 1.0 + 1e-12, resolution), 10)
    pts = []
    for a in ticks:
        for b in ticks:
            c = 1.0 - a - b
            if c >= -1e-12:
                pts.append((a, b, max(c, 0.0)))
    return np.array(pts)


class TestWeightQp:
    def test_invariants_of_built_qp(self):
        rng = make_rng(51)
        n, c, t = 10, 3, 4
        partitions = [random_orthonormal(n, c, rng) for _ in range(t)]
        y = random_orthonormal(n, c, rng)
        losses = rng.random(t) * 5
        qp = build_weight_qp(partitions, y, losses)
        assert np.array_equal(qp.p, qp.p.T)
        assert_allclose(np.diag(qp.p), np.full(t, float(c)), atol=1e-10)
        assert np.linalg.eigvalsh(qp.p).min() >= -1e-10
        assert np.all(qp.g >= 0.0)
        # q definition against an independent trace computation
        for i in range(t):
            proj = partitions[i] @ partitions[i].T
            align = np.trace(y @ y.T @ proj)
            assert abs(qp.q[i] - (-losses[i] + 2.0 * align)) <= 1e-10

    def test_single_view(self):
        qp = WeightQp(p=np.array([[3.0]]), q=np.array([0.5]), g=np.array([0.5]))
        assert_allclose(update_weights(qp), [1.0])

    def test_symmetric_problem(self):
        qp = WeightQp(p=np.eye(2), q=np.array([0.7, 0.7]), g=np.zeros(2))
        assert_allclose(update_weights(qp), [0.5, 0.5], atol=1e-9)

    def test_beats_grid_search(self):
        grid = simplex_grid(0.01)
        for seed in range(5):
            rng = make_rng(500 + seed)
            b = rng.standard_normal((3, 3))
            p = b.T @ b
            q = rng.standard_normal(3) * 2
            w = update_weights(WeightQp(p=p, q=q, g=np.abs(q)))
            f_w = w @ p @ w - q @ w
            f_grid = np.einsum("ij,jk,ik->i", grid, p, grid) - grid @ q
            assert f_w <= f_grid.min() + 1e-6

    def test_decoupled_regime_picks_min_loss(self):
        # With P = 0 and q = -g the program is linear and all mass lands
        # exactly on the smallest per-view loss.
        for seed in range(20):
            rng = make_rng(700 + seed)
            g = rng.random(int(rng.integers(2, 6))) * 10
            w = update_weights(WeightQp(p=np.zeros((g.size, g.size)), q=-g, g=g))
            k = int(np.argmin(g))
            assert w[k] == 1.0
            assert np.count_nonzero(w) == 1

    def test_never_increases_objective_from_uniform(self):
        for seed in range(5):
            rng = make_rng(800 + seed)
            b = rng.standard_normal((4, 4))
            p = b.T @ b
            q = rng.standard_normal(4)
            w = update_weights(WeightQp(p=p, q=q, g=np.abs(q)))
            w0 = np.full(4, 0.25)
            before = w0 @ p @ w0 - q @ w0
            after = w @ p @ w - q @ w
            assert after <= before + 1e-9 * abs(before)

    def test_rejects_indefinite(self):
        p = np.array([[1.0, 2.0], [2.0, 1.0]])
        with pytest.raises(ValueError):
            update_weights(WeightQp(p=p, q=np.zeros(2), g=np.zeros(2)))


class TestUpdateConsensus:
    def test_single_partition(self):
        rng = make_rng(61)
        f = random_orthonormal(9, 3, rng)
        y = update_consensus([f], np.array([1.0]))
        assert np.linalg.norm(y @ y.T - f @ f.T, "fro") <= 1e-8

    def test_identical_partitions(self):
        rng = make_rng(62)
        f = random_orthonormal(9, 3, rng)
        y = update_consensus([f, f], np.array([0.3, 0.7]))
        assert np.linalg.norm(y @ y.T - f @ f.T, "fro") <= 1e-8

    def test_matches_dense_oracle(self):
        rng = make_rng(63)
        n, c = 8, 2
        f1 = random_orthonormal(n, c, rng)
        f2 = random_orthonormal(n, c, rng)
        w = np.array([0.5, 0.5])
        y = update_consensus([f1, f2], w)
        mix = 0.5 * (f1 @ f1.T) + 0.5 * (f2 @ f2.T)
        got = np.trace(y.T @ (np.eye(n) - 2.0 * mix) @ y)
        oracle = c - 2.0 * np.sort(np.linalg.eigvalsh(mix))[::-1][:c].sum()
        assert abs(got - oracle) <= 1e-8

    def test_never_increases_own_objective(self):
        rng = make_rng(64)
        n, c = 10, 3
        parts = [random_orthonormal(n, c, rng) for _ in range(3)]
        w = np.array([0.2, 0.5, 0.3])
        y_old = random_orthonormal(n, c, rng)
        y_new = update_consensus(parts, w)
        mix = sum(wv * (f @ f.T) for wv, f in zip(w, parts))
        m = np.eye(n) - 2.0 * mix
        before = np.trace(y_old.T @ m @ y_old)
        after = np.trace(y_new.T @ m @ y_new)
        assert after <= before + 1e-9 * abs(before)


def small_instance(seed=71, t=2, n=6, c=2, m=4):
    rng = make_rng(seed)
    views = tuple(
        ViewMatrix(f"v{k}", rng.standard_normal((m + k, n))) for k in range(t)
    )
    data = MultiViewDataset(views=views)
    graphs = tuple(rng.random((n, n)) for _ in range(t))
    partitions = tuple(random_orthonormal(n, c, rng) for _ in range(t))
    weights = np.full(t, 1.0 / t)
    consensus = random_orthonormal(n, c, rng)
    state = ModelState(graphs=graphs, partitions=partitions, weights=weights,
                       consensus=consensus)
    return data, state


class TestObjective:
    def test_single_view_consensus_cancels(self):
        rng = make_rng(72)
        n, c = 6, 2
        x = rng.standard_normal((4, n))
        f = random_orthonormal(n, c, rng)
        data = MultiViewDataset(views=(ViewMatrix("v", x),))
        state = ModelState(
            graphs=(np.zeros((n, n)),),
            partitions=(f,),
            weights=np.array([1.0]),
            consensus=f,
        )
        params = HyperParams(n_clusters=c, alpha=0.0, beta=1.0)
        assert_allclose(objective(state, data, params), np.sum(x * x), rtol=1e-12)

    def test_equal_partitions_zero_fusion(self):
        rng = make_rng(73)
        n, c, t = 6, 2, 3
        f = random_orthonormal(n, c, rng)
        views = tuple(ViewMatrix(f"v{k}", rng.standard_normal((3, n))) for k in range(t))
        graphs = tuple(rng.random((n, n)) for _ in range(t))
        weights = np.array([0.2, 0.3, 0.5])
        state = ModelState(graphs=graphs, partitions=(f, f, f), weights=weights,
                           consensus=f)
        data = MultiViewDataset(views=views)
        params = HyperParams(n_clusters=c, alpha=1.5, beta=0.5)
        losses = [
            per_view_loss(v.data, s, f, build_laplacian(s), 1.5, 0.5)
            for v, s in zip(views, graphs)
        ]
        assert_allclose(objective(state, data, params), np.dot(weights, losses),
                        rtol=1e-12)

    def test_matches_direct_expression(self):
        data, state = small_instance()
        params = HyperParams(n_clusters=2, alpha=1.0, beta=1.0)
        got = objective(state, data, params)
        total = 0.0
        mix = np.zeros((data.n_samples, data.n_samples))
        for view, s, f, wv in zip(data.views, state.graphs, state.partitions,
                                  state.weights):
            lap = build_laplacian(s)
            term = (
                np.linalg.norm(view.data - view.data @ s, "fro") ** 2
                + np.trace(f.T @ lap @ f)
                + np.linalg.norm(s, "fro") ** 2
            )
            total += wv * term
            mix += wv * (f @ f.T)
        fusion = np.linalg.norm(state.consensus @ state.consensus.T - mix, "fro") ** 2
        assert abs(got - (total + fusion)) <= 1e-9 * max(1.0, abs(got))

    def test_fusion_term_nonnegative(self):
        data, state = small_instance(seed=74)
        params = HyperParams(n_clusters=2, alpha=0.0, beta=1.0)
        loss_only = sum(
            wv * per_view_loss(v.data, s, f, build_laplacian(s), 0.0, 1.0)
            for v, s, f, wv in zip(data.views, state.graphs, state.partitions,
                                   state.weights)
        )
        assert objective(state, data, params) >= loss_only - 1e-12
