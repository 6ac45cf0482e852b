import math

import numpy as np
from django.test import SimpleTestCase

from clustering.certificates import (
    best_single_ufl_ratio,
    kclustering_lower_bound,
    kclustering_optima,
    kclustering_ratio,
    nearest_facility_distances,
    ufl_lower_bound,
    ufl_ratio_table,
    ufl_values,
)
from clustering.forms import metric_from_json
from clustering.iterative import (
    facility_bound,
    guarantee,
    iterative_clustering,
    ufl_cost,
    ufl_portfolio,
)
from clustering.metric import Metric, coverage, distance_vector, random_metric, star_metric
from clustering.partial import (
    EXACT,
    GREEDY3,
    kcenter_radius,
    partial_clustering_exhaustive,
    partial_clustering_greedy3,
)
from equinorm.exceptions import ArgumentError, SizeCapError
from norms.vectors import WeightVector, all_top_k, sample_weight_vectors


def line_metric(n):
    points = np.arange(n, dtype=float)
    return Metric(np.abs(points[:, None] - points[None, :]))


class MetricTests(SimpleTestCase):
    def test_rejects_triangle_violation(self):
        with self.assertRaises(ArgumentError):
            Metric([[0, 1, 5], [1, 0, 1], [5, 1, 0]])

    def test_rejects_asymmetric_distances(self):
        with self.assertRaises(ArgumentError):
            Metric([[0, 1], [2, 0]])

    def test_rejects_empty_allowed_mask(self):
        with self.assertRaises(ArgumentError):
            Metric([[0, 1], [1, 0]], allowed=[False, False])

    def test_all_points_open_gives_zero_vector(self):
        metric = random_metric(6, seed=3)
        np.testing.assert_array_equal(distance_vector(metric, range(6)), np.zeros(6))

    def test_single_point(self):
        self.assertEqual(distance_vector(Metric([[0.0]]), [0]).tolist(), [0.0])

    def test_empty_facility_set_raises(self):
        with self.assertRaises(ArgumentError):
            distance_vector(line_metric(3), [])

    def test_star_hub_only(self):
        x = distance_vector(star_metric(16), [0])
        self.assertEqual(x[0], 0.0)
        np.testing.assert_allclose(x[1:], 4.0)

    def test_star_leaves_are_two_spokes_apart(self):
        self.assertAlmostEqual(star_metric(9).dist[1, 2], 6.0)


class PartialClusteringTests(SimpleTestCase):
    def test_middle_of_a_line_covers_it(self):
        self.assertEqual(list(partial_clustering_exhaustive(line_metric(3), 1, 1.0)), [1])

    def test_radius_at_diameter_first_point_wins(self):
        chosen = partial_clustering_exhaustive(line_metric(4), 1, 3.0)
        self.assertEqual(list(chosen), [0])
        self.assertTrue(coverage(line_metric(4), chosen, 3.0).all())

    def test_k_at_least_n_opens_everything(self):
        metric = random_metric(5, seed=1)
        for partial in (partial_clustering_greedy3, partial_clustering_exhaustive):
            chosen = partial(metric, 5, 0.0)
            self.assertTrue(coverage(metric, chosen, 0.0).all())

    def test_tight_cluster_with_one_center(self):
        metric = Metric([[0, 0.1, 0.1], [0.1, 0, 0.1], [0.1, 0.1, 0]])
        chosen = partial_clustering_greedy3(metric, 1, 0.1)
        self.assertTrue(coverage(metric, chosen, 0.3).all())

    def test_subset_cap(self):
        with self.assertRaises(SizeCapError) as ctx:
            partial_clustering_exhaustive(random_metric(6, seed=0), 3, 0.5, cap=10)
        self.assertEqual(ctx.exception.size, 20)

    def test_greedy_coverage_dominates_exhaustive(self):
        for seed in range(12):
            n = 4 + seed % 7
            metric = random_metric(n, seed=seed)
            radii = metric.candidate_radii()
            for k in (1, 2, 3):
                for R in radii[:: max(1, len(radii) // 6)]:
                    best = coverage(metric, partial_clustering_exhaustive(metric, k, R), R).sum()
                    greedy = coverage(metric, partial_clustering_greedy3(metric, k, R), 3.0 * R).sum()
                    self.assertGreaterEqual(greedy, best, msg=f"seed={seed} k={k} R={R}")

    def test_exhaustive_matches_recount(self):
        metric = random_metric(7, seed=5)
        R = float(np.median(metric.candidate_radii()))
        chosen = partial_clustering_exhaustive(metric, 2, R)
        best = max(
            (metric.dist[:, [a, b]].min(axis=1) <= R).sum()
            for a in range(7) for b in range(a + 1, 7)
        )
        self.assertEqual(coverage(metric, chosen, R).sum(), best)


class KCenterTests(SimpleTestCase):
    def test_line(self):
        self.assertEqual(kcenter_radius(line_metric(3), 1, EXACT), 1.0)
        self.assertEqual(kcenter_radius(line_metric(3), 1, GREEDY3), 1.0)

    def test_greedy_radius_never_exceeds_optimum(self):
        for seed in range(8):
            metric = random_metric(7, seed=seed)
            for k in (1, 2):
                exact = kcenter_radius(metric, k, EXACT)
                greedy = kcenter_radius(metric, k, GREEDY3)
                self.assertLessEqual(greedy, exact + 1e-12)
                chosen = partial_clustering_greedy3(metric, k, greedy)
                self.assertTrue(coverage(metric, chosen, 3.0 * greedy).all())

    def test_unknown_mode(self):
        with self.assertRaises(ArgumentError):
            kcenter_radius(line_metric(3), 1, "median")


class IterativeClusteringTests(SimpleTestCase):
    def test_single_point(self):
        for mode in (EXACT, GREEDY3):
            self.assertEqual(list(iterative_clustering(Metric([[0.0]]), 1, 0.5, mode)), [0])

    def test_epsilon_range(self):
        with self.assertRaises(ArgumentError):
            iterative_clustering(line_metric(3), 1, 1.5)
        with self.assertRaises(ArgumentError):
            iterative_clustering(line_metric(3), 1, 0.0)

    def test_line_union_over_radii(self):
        result = iterative_clustering(line_metric(3), 1, 1.0, EXACT)
        self.assertEqual(list(result), [0, 1])
        self.assertEqual(result.rounds[-1], {"radius": 1.0, "open": [1]})

    def test_simultaneous_topk_guarantee(self):
        for seed in range(20):
            n = 5 + seed % 4
            metric = random_metric(n, seed=100 + seed)
            weights = all_top_k(n)
            for k in (1, 2):
                for eps in (0.5, 1.0):
                    for mode in (EXACT, GREEDY3):
                        C = iterative_clustering(metric, k, eps, mode)
                        ratio = kclustering_ratio(metric, C, k, weights)
                        self.assertLessEqual(ratio, guarantee(eps, mode) + 1e-9,
                                             msg=f"seed={seed} k={k} eps={eps} {mode}")
                        self.assertLessEqual(len(C), facility_bound(n, k, eps, mode))

    def test_small_slack_opens_everything(self):
        metric = random_metric(8, seed=2)
        # eps/6 <= 1/8
        self.assertEqual(len(iterative_clustering(metric, 1, 0.5, GREEDY3)), 8)

    def test_allowed_facilities_only(self):
        points = np.arange(5, dtype=float)
        metric = Metric(np.abs(points[:, None] - points[None, :]), allowed=[0, 4])
        result = iterative_clustering(metric, 1, 1.0, EXACT)
        self.assertTrue(set(result) <= {0, 4})
        self.assertEqual(kcenter_radius(metric, 1, EXACT), 4.0)

    def test_optima_of_line(self):
        optima = kclustering_optima(line_metric(3), 1, [WeightVector.ones(3), WeightVector.top_k(3, 1)])
        self.assertEqual(optima.tolist(), [2.0, 1.0])


class UflTests(SimpleTestCase):
    def setUp(self):
        self.star = star_metric(9)
        self.weights = [WeightVector.ones(10), WeightVector.top_k(10, 1)]

    def test_star_costs(self):
        self.assertEqual(ufl_cost(self.star, range(10), WeightVector.ones(10)), 10.0)
        self.assertAlmostEqual(ufl_cost(self.star, [0], WeightVector.ones(10)), 28.0)
        self.assertAlmostEqual(ufl_cost(self.star, [0], WeightVector.top_k(10, 1)), 1.0 + math.sqrt(9))

    def test_portfolio_matches_both_extremes(self):
        portfolio = ufl_portfolio(self.star)
        self.assertEqual(portfolio.claimed_alpha, "O(log n)")
        self.assertLessEqual(len(portfolio), math.ceil(math.log2(10)) + 1)
        for label, ratio in ufl_ratio_table(self.star, portfolio, self.weights):
            self.assertAlmostEqual(ratio, 1.0, msg=label)

    def test_no_single_solution_serves_both(self):
        ratio, chosen = best_single_ufl_ratio(self.star, self.weights)
        self.assertAlmostEqual(ratio, 2.0)
        self.assertIn(0, chosen)

    def test_two_points(self):
        portfolio = ufl_portfolio(Metric([[0, 1], [1, 0]]))
        self.assertLessEqual(len(portfolio), 2)

    def test_random_metric_ratios_reported(self):
        metric = random_metric(7, seed=4)
        portfolio = ufl_portfolio(metric)
        table = ufl_ratio_table(metric, portfolio, all_top_k(7))
        self.assertEqual(len(table), 7)
        self.assertTrue(all(ratio >= 1.0 - 1e-12 for _, ratio in table))


class LowerBoundTests(SimpleTestCase):
    def test_nearest_distances(self):
        np.testing.assert_allclose(nearest_facility_distances(line_metric(4)), [1.0, 1.0, 1.0, 1.0])
        lone = Metric(line_metric(3).dist, allowed=[True, False, False])
        np.testing.assert_allclose(nearest_facility_distances(lone), [0.0, 1.0, 2.0])

    def test_star_hub(self):
        # every point is 3 from its nearest neighbour and one facility serves only itself at 0
        self.assertAlmostEqual(kclustering_lower_bound(star_metric(9), 1, WeightVector.ones(10)), 27.0)

    def test_kclustering_bound_below_optimum(self):
        for seed in range(10):
            metric = random_metric(7, seed=seed)
            weights = all_top_k(7) + sample_weight_vectors(7, 20, seed=seed)
            for k in (1, 2, 3):
                optima = kclustering_optima(metric, k, weights)
                for w, optimum in zip(weights, optima):
                    self.assertLessEqual(kclustering_lower_bound(metric, k, w), optimum + 1e-9)

    def test_ufl_bound_below_optimum(self):
        for seed in range(5):
            metric = random_metric(6, seed=seed)
            weights = all_top_k(6) + sample_weight_vectors(6, 20, seed=seed)
            _, values = ufl_values(metric, weights)
            for w, optimum in zip(weights, values.min(axis=0)):
                bound = ufl_lower_bound(metric, w)
                self.assertGreaterEqual(bound, 1.0)
                self.assertLessEqual(bound, optimum + 1e-9)


class FormTests(SimpleTestCase):
    def test_metric_with_allowed(self):
        metric = metric_from_json({"type": "metric", "dist": [[0, 1], [1, 0]], "allowed": [1]})
        self.assertEqual(metric.allowed.tolist(), [1])
        self.assertEqual(metric.to_json(), {"type": "metric", "dist": [[0.0, 1.0], [1.0, 0.0]], "allowed": [1]})

    def test_bad_metric(self):
        with self.assertRaises(ArgumentError):
            metric_from_json({"type": "metric", "dist": [[0, 1], [1, 1]]})
        with self.assertRaises(ArgumentError):
            metric_from_json({"type": "graph", "dist": [[0]]})
