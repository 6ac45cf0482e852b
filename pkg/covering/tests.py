import math

import numpy as np
from django.test import SimpleTestCase

from covering.forms import polyhedron_from_json
from covering.orders import enumerate_reduced_orders, vertices_for_order
from covering.polyhedron import (
    CoveringPolyhedron,
    distinct_row_values,
    example_polyhedron,
    group_columns,
    normalize,
    random_covering,
    reduced_order_of,
    reduced_polyhedron,
    row_value_bound,
    satisfies_order,
    sparsify,
    witness,
)
from covering.portfolios import build_portfolio, dual_objective, lp_min_ordered_norm
from equinorm.exceptions import ArgumentError, InfeasibleError
from norms.ordered import ordered_norm
from norms.vectors import WeightVector, all_top_k, prefix_sums, sample_weight_vectors


def feasible_point(P, rng):
    x = rng.uniform(0.1, 2.0, size=P.d)
    return x / (P.A @ x).min()


def as_rows(vectors):
    return sorted(tuple(np.round(v, 9).tolist()) for v in vectors)


class NormalizeTests(SimpleTestCase):
    def test_divides_rows(self):
        P = normalize([[2, 0], [0, 4]], [2, 2])
        np.testing.assert_array_equal(P.A, [[1, 0], [0, 2]])

    def test_drops_zero_rhs(self):
        P = normalize([[2, 0], [0, 4], [1, 1]], [2, 2, 0])
        self.assertEqual(P.r, 2)

    def test_zero_row(self):
        with self.assertRaises(InfeasibleError):
            normalize([[0, 0], [1, 1]], [1, 1])

    def test_nothing_left(self):
        with self.assertRaises(ArgumentError):
            normalize([[1, 1]], [0])

    def test_negative_entries(self):
        with self.assertRaises(ArgumentError):
            CoveringPolyhedron([[1, -1]])

    def test_json(self):
        data = example_polyhedron().to_json()
        self.assertEqual(data["type"], "covering")
        self.assertEqual(data["b"], [1.0, 1.0, 1.0])


class SparsifyTests(SimpleTestCase):
    def test_equal_entries_snap_down(self):
        P = sparsify(CoveringPolyhedron([[1.0, 1.0]]), 1.0)
        expected = (1.0 / 12.0) * 1.5 ** 6
        np.testing.assert_allclose(P.A, [[expected, expected]])
        self.assertAlmostEqual(expected, 0.94922, places=5)

    def test_small_entry_zeroed(self):
        P = sparsify(CoveringPolyhedron([[1.0, 0.01]]), 1.0)
        self.assertEqual(P.A[0, 1], 0.0)
        self.assertGreater(P.A[0, 0], 0.0)

    def test_grid_entries_kept(self):
        row = [1.0, (1.0 / 27.0) * 1.5 ** 2, (1.0 / 27.0) * 1.5 ** 7]
        P = sparsify(CoveringPolyhedron([row]), 1.0)
        self.assertEqual(P.A[0, 1], row[1])
        self.assertEqual(P.A[0, 2], row[2])

    def test_bad_epsilon(self):
        with self.assertRaises(ArgumentError):
            sparsify(example_polyhedron(), 0.0)
        with self.assertRaises(ArgumentError):
            sparsify(example_polyhedron(), 1.5)

    def test_entrywise_smaller_and_few_values(self):
        for seed in range(10):
            P = random_covering(3, 8, seed=seed)
            for eps in (0.25, 1.0):
                S = sparsify(P, eps)
                self.assertTrue(np.all(S.A <= P.A))
                self.assertLessEqual(distinct_row_values(S), row_value_bound(P.d, eps))

    def test_witness(self):
        rng = np.random.default_rng(3)
        for seed in range(10):
            P = random_covering(2, 6, seed=seed)
            eps = 0.5
            S = sparsify(P, eps)
            x = feasible_point(P, rng)
            y = witness(P, x, eps)
            self.assertTrue(S.contains(y))
            self.assertTrue(np.all(prefix_sums(y) <= (1.0 + eps) * prefix_sums(x) + 1e-12))

    def test_sparse_points_stay_feasible(self):
        rng = np.random.default_rng(4)
        P = random_covering(3, 5, seed=1)
        S = sparsify(P, 0.5)
        for _ in range(20):
            x = feasible_point(S, rng)
            self.assertTrue(P.contains(x))


class GroupTests(SimpleTestCase):
    def test_identical_columns(self):
        groups = group_columns(CoveringPolyhedron([[1, 1, 1], [2, 2, 2]]))
        self.assertEqual(groups.m, 1)

    def test_distinct_columns(self):
        groups = group_columns(CoveringPolyhedron([[1, 2, 3]]))
        self.assertEqual(groups.groups, [[0], [1], [2]])

    def test_example(self):
        P = example_polyhedron()
        groups = group_columns(P)
        self.assertEqual(groups.groups, [[0], [1, 2]])
        np.testing.assert_array_equal(groups.expand([3.0, 2.0]), [3.0, 2.0, 2.0])
        self.assertEqual(reduced_order_of([3.0, 2.0, 2.0], groups), (0, 1))

    def test_reduced_polyhedron(self):
        P = example_polyhedron()
        R = reduced_polyhedron(P, group_columns(P))
        # z1 >= 2, z2 >= 2, z1 + z2 >= 5
        np.testing.assert_allclose(R.A, [[0.5, 0.0], [0.0, 0.5], [0.2, 0.2]])


class ReducedOrderTests(SimpleTestCase):
    def test_single_row(self):
        P = CoveringPolyhedron([[1.0, 2.0, 4.0]])
        orders = enumerate_reduced_orders(P, group_columns(P))
        self.assertEqual(orders.orders, [(2, 1, 0)])
        self.assertTrue(orders.exact)

    def test_two_rows_swap(self):
        P = CoveringPolyhedron([[1.0, 0.0], [0.0, 1.0]])
        orders = enumerate_reduced_orders(P, group_columns(P))
        self.assertEqual(sorted(orders.orders), [(0, 1), (1, 0)])
        self.assertLessEqual(len(orders), orders.bound)

    def test_single_group(self):
        P = CoveringPolyhedron([[1.0, 1.0], [3.0, 3.0]])
        self.assertEqual(enumerate_reduced_orders(P, group_columns(P)).orders, [(0,)])

    def test_example_optimum_order(self):
        P = example_polyhedron()
        groups = group_columns(P)
        orders = enumerate_reduced_orders(P, groups)
        x, value = lp_min_ordered_norm(P, WeightVector.ones(3))
        self.assertIn(reduced_order_of(x, groups), orders)

    def test_region_bound(self):
        for seed in range(5):
            P = random_covering(3, 5, seed=seed)
            orders = enumerate_reduced_orders(P, group_columns(P))
            self.assertTrue(orders.exact)
            self.assertLessEqual(len(orders), orders.bound)

    def test_sampled_mode(self):
        P = random_covering(2, 4, seed=2)
        groups = group_columns(P)
        exact = enumerate_reduced_orders(P, groups, mode="exact")
        with self.assertLogs("solvercore.arrangement", level="WARNING"):
            sampled = enumerate_reduced_orders(P, groups, mode="sampled", samples=2000, seed=1)
        self.assertFalse(sampled.exact)
        self.assertTrue(set(sampled.orders) <= set(exact.orders))


class VertexTests(SimpleTestCase):
    def test_example_vertices(self):
        P = example_polyhedron()
        groups = group_columns(P)
        vertices = vertices_for_order(P, groups, (0, 1))
        self.assertEqual(as_rows(x for _, x in vertices), [(2.5, 2.5, 2.5), (3.0, 2.0, 2.0)])

    def test_vertices_respect_order(self):
        for seed in range(5):
            P = random_covering(2, 5, seed=seed)
            groups = group_columns(P)
            for order in enumerate_reduced_orders(P, groups):
                vertices = vertices_for_order(P, groups, order)
                self.assertTrue(vertices)
                for z, x in vertices:
                    self.assertTrue(P.contains(x))
                    self.assertTrue(satisfies_order(z, order))

    def test_single_row_prefix_vectors(self):
        P = CoveringPolyhedron([[1.0, 2.0, 4.0]])
        groups = group_columns(P)
        vertices = vertices_for_order(P, groups, (2, 1, 0))
        expected = [(0.0, 0.0, 0.25), (0.0, 1 / 6, 1 / 6), (1 / 7, 1 / 7, 1 / 7)]
        self.assertEqual(as_rows(x for _, x in vertices), as_rows(np.array(expected)))

    def test_bad_order(self):
        P = example_polyhedron()
        with self.assertRaises(ArgumentError):
            vertices_for_order(P, group_columns(P), (0, 0))


class PortfolioTests(SimpleTestCase):
    def test_example_l1(self):
        portfolio = build_portfolio(example_polyhedron(), 0.5)
        best = min(ordered_norm(x, WeightVector.ones(3)) for x in portfolio)
        self.assertAlmostEqual(best, 7.0)
        self.assertEqual(portfolio.claimed_alpha, 1.5)

    def test_uniform_single_row(self):
        portfolio = build_portfolio(CoveringPolyhedron([[1.0, 1.0, 1.0, 1.0]]), 0.5)
        self.assertEqual(len(portfolio), 1)
        np.testing.assert_allclose(portfolio.matrix[0], np.full(4, 0.25))

    def test_sparsified_path(self):
        P = CoveringPolyhedron([[1.0, 0.99, 0.98], [0.5, 0.51, 0.5]])
        portfolio = build_portfolio(P, 1.0)
        self.assertTrue(any(note.startswith("sparsified") for note in portfolio.notes))
        for x in portfolio:
            self.assertTrue(P.contains(x))
        for w in all_top_k(3):
            _, optimum = lp_min_ordered_norm(P, w)
            best = min(ordered_norm(x, w) for x in portfolio)
            self.assertLessEqual(best, 2.0 * optimum + 1e-7)

    def test_guarantee_random(self):
        for seed in range(30):
            d = 2 + seed % 5
            P = random_covering(2, d, seed=seed)
            groups = group_columns(P)
            orders = enumerate_reduced_orders(P, groups)
            self.assertTrue(orders.exact)
            self.assertLessEqual(len(orders), orders.bound)
            self.assertLessEqual(len(orders), math.comb(groups.m, 2) + 1)
            weights = all_top_k(d) + sample_weight_vectors(d, 100, seed=seed)
            optima = []
            for w in weights:
                x, optimum = lp_min_ordered_norm(P, w)
                z = [x[g].mean() for g in groups.groups]
                self.assertTrue(any(satisfies_order(z, order, tol=1e-5) for order in orders))
                optima.append(optimum)
            for eps in (0.25, 0.5, 1.0):
                with self.subTest(seed=seed, eps=eps):
                    portfolio = build_portfolio(P, eps)
                    for w, optimum in zip(weights, optima):
                        best = min(ordered_norm(x, w) for x in portfolio)
                        self.assertLessEqual(best, (1.0 + eps) * optimum + 1e-6)


class LpTests(SimpleTestCase):
    def test_example_l1(self):
        x, value = lp_min_ordered_norm(example_polyhedron(), WeightVector.ones(3))
        self.assertAlmostEqual(value, 7.0, places=7)
        np.testing.assert_allclose(x, [3.0, 2.0, 2.0], atol=1e-7)

    def test_single_constraint(self):
        x, value = lp_min_ordered_norm(CoveringPolyhedron([[1.0, 0.0, 0.0]]), [3.0, 2.0, 1.0])
        self.assertAlmostEqual(value, 3.0, places=7)
        np.testing.assert_allclose(x, [1.0, 0.0, 0.0], atol=1e-7)

    def test_reduced_space_minimizer(self):
        P = example_polyhedron()
        R = reduced_polyhedron(P, group_columns(P))
        x, value = lp_min_ordered_norm(R, [1.0, 0.5])
        np.testing.assert_allclose(x, [2.5, 2.5], atol=1e-7)
        self.assertAlmostEqual(value, 3.75, places=7)

    def test_dimension_mismatch(self):
        with self.assertRaises(ArgumentError):
            lp_min_ordered_norm(example_polyhedron(), [1.0, 1.0])


class DualTests(SimpleTestCase):
    def test_single_row(self):
        P = CoveringPolyhedron([[1.0, 3.0]])
        # max(3/1, 4/1.5)
        self.assertAlmostEqual(dual_objective(P, [1.0], [1.0, 0.5]), 3.0)

    def test_outside_simplex(self):
        with self.assertRaises(ArgumentError):
            dual_objective(example_polyhedron(), [0.5, 0.5, 0.5], WeightVector.ones(3))
        with self.assertRaises(ArgumentError):
            dual_objective(example_polyhedron(), [1.5, -0.5, 0.0], WeightVector.ones(3))

    def test_weak_duality(self):
        rng = np.random.default_rng(7)
        for seed in range(5):
            P = random_covering(3, 4, seed=seed)
            w = sample_weight_vectors(4, 1, seed=seed)[0]
            for _ in range(10):
                x = feasible_point(P, rng)
                lam = rng.dirichlet(np.ones(3))
                self.assertGreaterEqual(dual_objective(P, lam, w) * ordered_norm(x, w), 1.0 - 1e-9)

    def test_strong_duality_on_grid(self):
        for seed in range(3):
            P = random_covering(2, 4, seed=seed)
            w = sample_weight_vectors(4, 1, seed=seed)[0]
            _, optimum = lp_min_ordered_norm(P, w)
            grid = np.linspace(0.0, 1.0, 10001)
            best = min(dual_objective(P, [t, 1.0 - t], w) for t in grid)
            self.assertAlmostEqual(best * optimum, 1.0, delta=1e-3)


class FormTests(SimpleTestCase):
    def test_parse(self):
        P = polyhedron_from_json({"type": "covering", "A": [[2, 0], [0, 4]], "b": [2, 2]})
        np.testing.assert_array_equal(P.A, [[1, 0], [0, 2]])

    def test_default_rhs(self):
        P = polyhedron_from_json({"A": [[1, 2]]})
        np.testing.assert_array_equal(P.A, [[1, 2]])

    def test_wrong_type(self):
        with self.assertRaises(ArgumentError):
            polyhedron_from_json({"type": "mlij", "A": [[1]]})

    def test_ragged(self):
        with self.assertRaises(ArgumentError):
            polyhedron_from_json({"A": [[1, 2], [1]]})

    def test_zero_row(self):
        with self.assertRaises(InfeasibleError):
            polyhedron_from_json({"A": [[0, 0]], "b": [1]})
