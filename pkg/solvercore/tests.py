import itertools

import numpy as np
from django.test import SimpleTestCase
from scipy.optimize import linprog
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from equinorm.exceptions import ArgumentError
from solvercore.arrangement import arrangement_regions, region_bound
from solvercore.linalg import solve_square_system
from solvercore.lp import INFEASIBLE, UNBOUNDED, LinearProgram, solve_lp
from solvercore.matching import max_bipartite_matching
from solvercore.ordered_lp import minimize_ordered_norm, weight_levels


class SolveLpTests(SimpleTestCase):
    def test_single_variable_max(self):
        result = solve_lp(LinearProgram([1.0], A_ub=[[1.0]], b_ub=[3.0], sense="max"))
        self.assertTrue(result.is_optimal)
        self.assertAlmostEqual(result.value, 3.0)

    def test_infeasible(self):
        result = solve_lp(LinearProgram([1.0], A_ub=[[1.0]], b_ub=[-1.0]))
        self.assertEqual(result.status, INFEASIBLE)

    def test_unbounded(self):
        result = solve_lp(LinearProgram([1.0], sense="max"))
        self.assertEqual(result.status, UNBOUNDED)

    def test_free_and_boxed_variables(self):
        # min x - y, x free with x >= -2 via row, y in [0, 4]
        lp = LinearProgram(
            [1.0, -1.0],
            A_ub=[[-1.0, 0.0]],
            b_ub=[2.0],
            bounds=[(None, None), (0.0, 4.0)],
        )
        result = solve_lp(lp)
        self.assertAlmostEqual(result.value, -6.0)
        np.testing.assert_allclose(result.x, [-2.0, 4.0], atol=1e-9)

    def test_upper_bound_only_variable(self):
        lp = LinearProgram([-1.0], bounds=[(None, 5.0)])
        self.assertAlmostEqual(solve_lp(lp).value, -5.0)

    def test_equality_rows_and_redundancy(self):
        lp = LinearProgram(
            [1.0, 2.0, 3.0],
            A_eq=[[1.0, 1.0, 1.0], [2.0, 2.0, 2.0]],
            b_eq=[1.0, 2.0],
        )
        result = solve_lp(lp)
        self.assertAlmostEqual(result.value, 1.0)

    def test_degenerate_cycling_example(self):
        # Beale's example cycles under the textbook rule without anti-cycling
        c = [-0.75, 150.0, -0.02, 6.0]
        A = [
            [0.25, -60.0, -0.04, 9.0],
            [0.5, -90.0, -0.02, 3.0],
            [0.0, 0.0, 1.0, 0.0],
        ]
        result = solve_lp(LinearProgram(c, A_ub=A, b_ub=[0.0, 0.0, 1.0]))
        self.assertAlmostEqual(result.value, -0.05, places=9)

    def test_matches_scipy_on_random_programs(self):
        rng = np.random.default_rng(0)
        for _ in range(40):
            m, n = rng.integers(1, 6), rng.integers(1, 6)
            A = rng.uniform(-1.0, 3.0, size=(m, n))
            b = rng.uniform(0.5, 4.0, size=m)
            c = rng.uniform(-2.0, 1.0, size=n)
            bounds = [(0.0, float(rng.uniform(1.0, 5.0))) for _ in range(n)]
            ours = solve_lp(LinearProgram(c, A_ub=A, b_ub=b, bounds=bounds))
            reference = linprog(c, A_ub=A, b_ub=b, bounds=bounds, method="highs")
            self.assertTrue(ours.is_optimal)
            self.assertAlmostEqual(ours.value, reference.fun, places=7)
            self.assertTrue(np.all(A @ ours.x <= b + 1e-8))

    def test_weak_duality_on_random_programs(self):
        rng = np.random.default_rng(1)
        for _ in range(30):
            m, n = rng.integers(1, 5), rng.integers(1, 5)
            A = rng.uniform(0.1, 2.0, size=(m, n))
            b = rng.uniform(1.0, 3.0, size=m)
            c = rng.uniform(0.0, 2.0, size=n)
            primal = solve_lp(LinearProgram(c, A_ub=A, b_ub=b, sense="max"))
            dual = solve_lp(LinearProgram(b, A_ub=-A.T, b_ub=-c))
            self.assertLessEqual(primal.value, dual.value + 1e-8)
            self.assertAlmostEqual(primal.value, dual.value, places=7)

    def test_bad_shapes_rejected(self):
        with self.assertRaises(ArgumentError):
            LinearProgram([1.0, 2.0], A_ub=[[1.0]], b_ub=[1.0])


class MatchingTests(SimpleTestCase):
    def test_complete_two_by_two(self):
        pairs = max_bipartite_matching([(0, 0), (0, 1), (1, 0), (1, 1)], 2, 2)
        self.assertEqual(len(pairs), 2)

    def test_empty_graph(self):
        self.assertEqual(max_bipartite_matching([], 3, 3), [])

    def test_deterministic(self):
        edges = [(0, 1), (0, 0), (1, 0), (2, 1), (2, 2)]
        self.assertEqual(
            max_bipartite_matching(edges, 3, 3),
            max_bipartite_matching(list(reversed(edges)), 3, 3),
        )

    def test_matches_scipy_and_lp_relaxation(self):
        rng = np.random.default_rng(2)
        for _ in range(40):
            nl, nr = rng.integers(1, 8), rng.integers(1, 8)
            mask = rng.random((nl, nr)) < 0.35
            edges = [(int(u), int(v)) for u, v in zip(*np.nonzero(mask))]
            pairs = max_bipartite_matching(edges, nl, nr)
            self.assertEqual(len({u for u, _ in pairs}), len(pairs))
            self.assertEqual(len({v for _, v in pairs}), len(pairs))
            self.assertTrue(all(mask[u, v] for u, v in pairs))

            reference = maximum_bipartite_matching(csr_matrix(mask.astype(int)), perm_type="column")
            self.assertEqual(len(pairs), int((reference >= 0).sum()))

            if edges:
                # fractional matching LP has an integral optimum on bipartite graphs
                A = np.zeros((nl + nr, len(edges)))
                for e, (u, v) in enumerate(edges):
                    A[u, e] = 1.0
                    A[nl + v, e] = 1.0
                relaxed = solve_lp(
                    LinearProgram(np.ones(len(edges)), A_ub=A, b_ub=np.ones(nl + nr), sense="max")
                )
                self.assertAlmostEqual(relaxed.value, len(pairs), places=7)


class SquareSystemTests(SimpleTestCase):
    def test_identity(self):
        solution = solve_square_system(np.eye(3), [1.0, 2.0, 3.0])
        np.testing.assert_allclose(solution.x, [1.0, 2.0, 3.0])

    def test_rank_deficient(self):
        solution = solve_square_system([[1.0, 2.0], [2.0, 4.0]], [1.0, 2.0])
        self.assertTrue(solution.singular)
        self.assertFalse(solution)

    def test_random_well_conditioned(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            n = rng.integers(1, 7)
            M = rng.normal(size=(n, n)) + n * np.eye(n)
            v = rng.normal(size=n)
            solution = solve_square_system(M, v)
            self.assertFalse(solution.singular)
            self.assertLessEqual(np.abs(M @ solution.x - v).max(), 1e-8 * (1 + np.abs(v).max()))

    def test_not_square(self):
        with self.assertRaises(ArgumentError):
            solve_square_system(np.ones((2, 3)), [1.0, 1.0])


class ArrangementTests(SimpleTestCase):
    def test_point_simplex(self):
        result = arrangement_regions([[1.0]], 1)
        self.assertEqual(len(result), 1)
        self.assertTrue(result.exact)

    def test_segment_one_crossing(self):
        result = arrangement_regions([[1.0, -1.0]], 2, mode="exact")
        self.assertEqual(len(result), 2)
        signs = sorted(np.sign(p[0] - p[1]) for p in result)
        self.assertEqual(signs, [-1.0, 1.0])

    def test_segment_bound(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            H = rng.normal(size=(rng.integers(1, 8), 2))
            result = arrangement_regions(H, 2, mode="exact")
            self.assertLessEqual(len(result), region_bound(len(H), 2))

    def test_triangle_against_dense_sampling(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            H = rng.normal(size=(rng.integers(1, 5), 3))
            result = arrangement_regions(H, 3, mode="exact")
            self.assertLessEqual(len(result), region_bound(len(H), 3))
            exact_keys = {tuple(np.sign(H @ p).astype(int)) for p in result}
            self.assertEqual(len(exact_keys), len(result))
            lam = rng.dirichlet(np.ones(3), size=20000)
            values = H @ lam.T
            clear = np.all(np.abs(values) > 1e-6, axis=0)
            sampled_keys = {tuple(col) for col in np.sign(values[:, clear]).astype(int).T}
            self.assertTrue(sampled_keys <= exact_keys)

    def test_exact_mode_needs_small_simplex(self):
        with self.assertRaises(ArgumentError):
            arrangement_regions(np.ones((1, 4)), 4, mode="exact")

    def test_sampled_mode_is_labelled(self):
        H = np.array([[1.0, -1.0, 0.0, 0.0], [0.0, 1.0, -1.0, 0.0]])
        result = arrangement_regions(H, 4, samples=2000, seed=0)
        self.assertFalse(result.exact)
        self.assertEqual(len(result), 4)


class OrderedNormLpTests(SimpleTestCase):
    def test_levels(self):
        ks, drops = weight_levels([1.0, 1.0, 0.5, 0.0])
        self.assertEqual(ks.tolist(), [2, 3])
        np.testing.assert_allclose(drops, [0.5, 0.5])

    def test_half_plane(self):
        cover = dict(A_ub=[[-1.0, -1.0]], b_ub=[-1.0])
        self.assertAlmostEqual(minimize_ordered_norm([1, 1], **cover).value, 1.0)
        self.assertAlmostEqual(minimize_ordered_norm([1, 0], **cover).value, 0.5)
        result = minimize_ordered_norm([1, 0.5], **cover)
        self.assertAlmostEqual(result.value, 0.75)
        np.testing.assert_allclose(result.x, [0.5, 0.5], atol=1e-9)

    def test_matches_per_order_programs(self):
        rng = np.random.default_rng(9)
        for _ in range(30):
            d = int(rng.integers(1, 5))
            r = int(rng.integers(1, 4))
            A = rng.uniform(0.0, 2.0, size=(r, d)) + 0.05
            w = np.sort(rng.random(d))[::-1]
            w[0] = 1.0
            best = np.inf
            for order in itertools.permutations(range(d)):
                chain = np.zeros((d - 1, d))
                for i in range(d - 1):
                    chain[i, order[i + 1]] = 1.0
                    chain[i, order[i]] = -1.0
                c = np.zeros(d)
                c[list(order)] = w
                A_ub = np.vstack([-A, chain])
                b_ub = np.concatenate([-np.ones(r), np.zeros(d - 1)])
                res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=[(0, None)] * d, method="highs")
                best = min(best, res.fun)
            result = minimize_ordered_norm(w, A_ub=-A, b_ub=-np.ones(r))
            self.assertTrue(result.is_optimal)
            self.assertAlmostEqual(result.value, best, places=7)
