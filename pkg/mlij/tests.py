import math

import numpy as np
from django.test import SimpleTestCase

from equinorm.exceptions import ArgumentError, PreconditionError, SizeCapError
from mlij.forms import instance_from_json
from mlij.instance import (
    MlijInstance,
    Schedule,
    brute_force_schedules,
    doubling_transform,
    example2_instance,
    intro_instance,
    load_vector,
    random_instance,
)
from mlij.lower_bound import check_lower_bound_claims, lower_bound_instance
from mlij.portfolios import build_portfolio, schedules_of, topk_two_portfolio
from mlij.vertices import (
    balanced_load_bound,
    is_good_vertex,
    lp_relaxation,
    max_good_index,
    round_good_vertex,
    selected_indices,
    vertex,
)
from norms.ordered import majorizes, ordered_norm
from norms.vectors import WeightVector, sample_weight_vectors
from portfolio.domain import NormFamily, Portfolio
from portfolio.oracles import brute_force_min_norm, certify_topk_ratio, estimate_ordered_ratio


class InstanceTests(SimpleTestCase):
    def test_load_vector(self):
        inst = MlijInstance([1, 2], 3)
        np.testing.assert_array_equal(load_vector(inst, Schedule([2, 1])), [2, 2])

    def test_one_job_per_machine(self):
        inst = intro_instance(16)
        np.testing.assert_array_equal(load_vector(inst, np.ones(16)), [1.0] + [4.0] * 15)

    def test_all_on_fast_machine(self):
        inst = intro_instance(9)
        counts = np.zeros(9)
        counts[0] = 9
        np.testing.assert_array_equal(load_vector(inst, counts), [9.0] + [0.0] * 8)

    def test_job_count_mismatch(self):
        with self.assertRaises(ArgumentError):
            load_vector(MlijInstance([1, 2], 3), Schedule([1, 1]))

    def test_sorted_with_index_map(self):
        inst = MlijInstance([3, 1, 2], 2)
        np.testing.assert_array_equal(inst.p, [1, 2, 3])
        np.testing.assert_array_equal(inst.to_original([1, 1, 0]), [0, 1, 1])

    def test_invalid(self):
        for p, n in (([], 1), ([1, 0], 1), ([1, -2], 1), ([1], 0), ([1], 1.5)):
            with self.assertRaises(ArgumentError):
                MlijInstance(p, n)

    def test_example2_times(self):
        np.testing.assert_allclose(example2_instance(4, 10).p, [1, math.sqrt(2), math.sqrt(3), 2])


class DoublingTests(SimpleTestCase):
    def test_powers_of_two_fixed(self):
        np.testing.assert_array_equal(doubling_transform(MlijInstance([1, 2, 4], 1)).p, [1, 2, 4])

    def test_rounds_in_log_scale(self):
        np.testing.assert_array_equal(doubling_transform(MlijInstance([3], 1)).p, [4])
        np.testing.assert_array_equal(doubling_transform(MlijInstance([0.3], 1)).p, [0.25])

    def test_midpoint_rounds_down(self):
        np.testing.assert_array_equal(doubling_transform(MlijInstance([math.sqrt(2)], 1)).p, [1])

    def test_sandwich(self):
        rng = np.random.default_rng(20)
        p = np.exp(rng.uniform(-5, 5, size=500))
        doubled = doubling_transform(MlijInstance(p, 1)).original_p
        self.assertTrue(np.all(doubled <= math.sqrt(2) * p * (1 + 1e-12)))
        self.assertTrue(np.all(p <= math.sqrt(2) * doubled * (1 + 1e-12)))
        self.assertTrue(MlijInstance(doubled, 1).is_doubling())


class VertexTests(SimpleTestCase):
    def test_vertices(self):
        inst = MlijInstance([1, 2, 2, 2], 4)
        np.testing.assert_allclose(vertex(inst, 1), [4, 0, 0, 0])
        np.testing.assert_allclose(vertex(inst, 4), [1.6, 1.6, 1.6, 1.6])
        np.testing.assert_allclose(vertex(MlijInstance([1, 1], 3), 2), [1.5, 1.5])

    def test_good(self):
        inst = MlijInstance([1, 2, 2, 2], 4)
        self.assertTrue(is_good_vertex(inst, 1))
        self.assertFalse(is_good_vertex(inst, 4))

    def test_good_is_downward_closed(self):
        rng = np.random.default_rng(21)
        for seed in range(100):
            inst = random_instance(int(rng.integers(1, 12)), int(rng.integers(1, 40)), seed=seed)
            flags = [is_good_vertex(inst, l) for l in range(1, inst.d + 1)]
            self.assertTrue(flags[0])
            L = max_good_index(inst)
            self.assertEqual(flags, [True] * L + [False] * (inst.d - L))

    def test_rounding_examples(self):
        inst = MlijInstance([1, 1], 3)
        schedule = round_good_vertex(inst, 2)
        np.testing.assert_array_equal(schedule.counts, [2, 1])
        np.testing.assert_array_equal(load_vector(inst, schedule), [2, 1])
        inst = MlijInstance([1, 2], 3)
        np.testing.assert_array_equal(round_good_vertex(inst, 2).counts, [2, 1])

    def test_integral_vertex_unchanged(self):
        inst = MlijInstance([1, 1, 1], 6)
        np.testing.assert_array_equal(round_good_vertex(inst, 3).counts, [2, 2, 2])

    def test_rounding_needs_good_vertex(self):
        with self.assertRaises(PreconditionError):
            round_good_vertex(MlijInstance([1, 2, 2, 2], 4), 4)

    def test_rounding_within_factor_two(self):
        rng = np.random.default_rng(22)
        for seed in range(100):
            inst = random_instance(int(rng.integers(1, 10)), int(rng.integers(1, 60)), seed=seed)
            for l in range(1, max_good_index(inst) + 1):
                schedule = round_good_vertex(inst, l)
                self.assertEqual(schedule.total, inst.n)
                loads = inst.to_sorted(load_vector(inst, schedule))
                x = vertex(inst, l)
                self.assertTrue(np.all(loads >= 0.5 * x - 1e-9))
                self.assertTrue(np.all(loads <= 2.0 * x + 1e-9))


class BruteForceTests(SimpleTestCase):
    def test_counts(self):
        self.assertEqual(len(brute_force_schedules(MlijInstance([1], 5))), 1)
        self.assertEqual(len(brute_force_schedules(MlijInstance([1, 2], 2))), 3)
        self.assertEqual(len(brute_force_schedules(MlijInstance([1, 2, 3], 4))), 15)

    def test_cap(self):
        with self.assertRaises(SizeCapError):
            brute_force_schedules(MlijInstance([1] * 10, 30), cap=1000)

    def test_monotone_optimum_on_doubling_instances(self):
        rng = np.random.default_rng(23)
        for seed in range(50):
            inst = random_instance(int(rng.integers(1, 7)), int(rng.integers(1, 11)), seed=seed, doubling=True)
            D = brute_force_schedules(inst)
            sorted_loads = D.matrix[:, inst.order]
            monotone = np.all(np.diff(sorted_loads, axis=1) <= 0.0, axis=1)
            for w in sample_weight_vectors(inst.d, 200, seed=seed):
                _, best = brute_force_min_norm(D, w)
                _, best_monotone = brute_force_min_norm(D.matrix[monotone], w)
                self.assertAlmostEqual(best_monotone, best, places=9)


class SelectionTests(SimpleTestCase):
    def test_indices(self):
        self.assertEqual(selected_indices(16, 8), [1, 2, 4, 8, 16])
        self.assertEqual(selected_indices(13, 8), [1, 2, 4, 8, 13])
        self.assertEqual(selected_indices(1, 5), [1])

    def test_every_index_has_a_close_selection(self):
        for alpha in (4.5, 5, 6, 8, 12, 16, 32):
            c = alpha / 4.0
            for L in range(1, 200):
                chosen = selected_indices(L, alpha)
                self.assertLessEqual(len(chosen), 1 + math.ceil(math.log(L) / math.log(c) - 1e-12) if L > 1 else 1)
                for target in range(1, L + 1):
                    self.assertTrue(any(target <= s <= c * target + 1e-9 for s in chosen))

    def test_two_sided_majorization(self):
        rng = np.random.default_rng(24)
        for seed in range(50):
            inst = random_instance(int(rng.integers(2, 16)), 1000, seed=seed, doubling=True)
            L = max_good_index(inst)
            for alpha in (5.0, 8.0):
                c = alpha / 4.0
                for l in range(1, L + 1):
                    for i in range(1, L + 1):
                        if max(l, i) <= c * min(l, i):
                            self.assertTrue(majorizes(vertex(inst, l), c * vertex(inst, i)))

    def test_one_sided_statement_fails(self):
        inst = MlijInstance([1] + [16] * 15, 16)
        self.assertFalse(majorizes(vertex(inst, 16), 2.0 * vertex(inst, 1)))


class RelaxationTests(SimpleTestCase):
    def test_vertex_optimum_on_doubling_instances(self):
        rng = np.random.default_rng(25)
        for seed in range(20):
            inst = random_instance(int(rng.integers(1, 7)), int(rng.integers(1, 10)), seed=seed, doubling=True)
            for w in sample_weight_vectors(inst.d, 5, seed=seed):
                x, value = lp_relaxation(inst, w)
                self.assertAlmostEqual(value, ordered_norm(x, w), places=7)
                best_vertex = min(ordered_norm(vertex(inst, l), w) for l in range(1, inst.d + 1))
                self.assertLessEqual(abs(value - best_vertex), 1e-7 * (1.0 + best_vertex))
                _, integral = brute_force_min_norm(brute_force_schedules(inst), w)
                self.assertLessEqual(value, integral + 1e-7)

    def test_balanced_load_bound(self):
        inst = MlijInstance([1, 1], 3)
        self.assertAlmostEqual(balanced_load_bound(inst, WeightVector.top_k(2, 1)), 1.5)
        rng = np.random.default_rng(26)
        for seed in range(20):
            inst = random_instance(int(rng.integers(1, 7)), int(rng.integers(1, 10)), seed=seed)
            for w in sample_weight_vectors(inst.d, 5, seed=seed):
                bound = balanced_load_bound(inst, w)
                self.assertLessEqual(bound, lp_relaxation(inst, w)[1] + 1e-7)

    def test_weight_length(self):
        with self.assertRaises(ArgumentError):
            lp_relaxation(MlijInstance([1, 2], 3), [1.0])
        with self.assertRaises(ArgumentError):
            balanced_load_bound(MlijInstance([1, 2], 3), [1.0])


class PortfolioTests(SimpleTestCase):
    def test_intro_instance(self):
        inst = intro_instance(16)
        P = build_portfolio(inst, 8)
        self.assertEqual(P.claimed_alpha, 8.0)
        self.assertLessEqual(len(P), 1 + math.ceil(math.log2(16)))
        counts = schedules_of(P)
        self.assertTrue(any(c[0] == 16 for c in counts))
        self.assertTrue(any(np.count_nonzero(c) >= 13 for c in counts))
        for c, x in zip(counts, P.matrix):
            np.testing.assert_array_equal(x, load_vector(inst, Schedule(c)))

    def test_single_machine(self):
        P = build_portfolio(MlijInstance([3.0], 7), 5)
        self.assertEqual(len(P), 1)
        np.testing.assert_array_equal(P.matrix[0], [21.0])

    def test_alpha_above_four(self):
        for alpha in (4, 3, 0):
            with self.assertRaises(ArgumentError):
                build_portfolio(intro_instance(4), alpha)

    def test_guarantee_on_random_instances(self):
        rng = np.random.default_rng(26)
        for seed in range(50):
            inst = random_instance(int(rng.integers(1, 7)), int(rng.integers(1, 11)), seed=seed)
            D = brute_force_schedules(inst)
            family = NormFamily.ordered_sampled(200, seed=seed)
            for alpha in (4.5, 5.0, 8.0):
                with self.subTest(seed=seed, alpha=alpha):
                    P = build_portfolio(inst, alpha)
                    self.assertEqual(P.claimed_alpha, alpha)
                    self.assertLessEqual(certify_topk_ratio(P, D), alpha + 1e-9)
                    self.assertLessEqual(estimate_ordered_ratio(P, D, family), alpha + 1e-9)
                    size = 1 + math.ceil(math.log(inst.d) / math.log(alpha / 4.0) - 1e-12) if inst.d > 1 else 1
                    self.assertLessEqual(len(P), size)

    def test_factor_split_is_recorded(self):
        P = build_portfolio(intro_instance(8), 6)
        self.assertEqual(P.claimed_alpha, 6.0)
        self.assertIn("factor 3 on the doubling instance, 2 for the lift", P.notes)

    def test_topk_pair(self):
        inst = MlijInstance([1, 2, 4, 8], 8)
        P = topk_two_portfolio(inst)
        self.assertLessEqual(len(P), 2)
        self.assertEqual(P.claimed_alpha, 8.0)
        self.assertLessEqual(certify_topk_ratio(P, brute_force_schedules(inst)), 8.0)
        L = max_good_index(inst)
        rounded = Portfolio([load_vector(inst, round_good_vertex(inst, l)) for l in range(1, L + 1)], 1.0)
        self.assertLessEqual(certify_topk_ratio(P, rounded.as_domain()), 4.0 + 1e-9)

    def test_topk_single(self):
        P = topk_two_portfolio(MlijInstance([1, 100], 1))
        self.assertEqual(len(P), 1)
        self.assertEqual(P.claimed_alpha, 16.0)


class LowerBoundTests(SimpleTestCase):
    def test_smallest_instance(self):
        inst, weights = lower_bound_instance(1, d_max=65)
        self.assertEqual(inst.d, 65)
        self.assertEqual(inst.n, 512)
        self.assertEqual(len(weights), 1)
        np.testing.assert_array_equal(weights[0].entries, np.ones(65))

    def test_weight_blocks(self):
        lb = lower_bound_instance(1, L=2, d_max=10**6)
        self.assertEqual(lb.S, 16)
        w1 = lb.weights[1].entries
        self.assertEqual(w1[0], 1.0)
        self.assertTrue(np.all(w1[1:] == 1.0 / 256))

    def test_claims(self):
        for alpha, L in ((1, 1), (1, 2), (2, 1)):
            lb = lower_bound_instance(alpha, L=L, d_max=10**6)
            report = check_lower_bound_claims(lb)
            self.assertEqual(report.violations, [])
            self.assertEqual(len(report.claim1), L)

    def test_cap(self):
        with self.assertRaises(SizeCapError):
            lower_bound_instance(1, d_max=10)
        with self.assertRaises(SizeCapError):
            lower_bound_instance(1, L=3, d_max=10**6)


class FormTests(SimpleTestCase):
    def test_parse(self):
        inst = instance_from_json({"type": "mlij", "p": [2, 1], "n": 3})
        self.assertEqual(inst.d, 2)
        self.assertEqual(inst.to_json(), {"type": "mlij", "p": [2.0, 1.0], "n": 3})

    def test_invalid(self):
        for bad in ({"p": [1], "n": 0}, {"p": [], "n": 1}, {"type": "covering", "p": [1], "n": 1},
                    {"p": [1, 0], "n": 1}, {"p": ["a"], "n": 1}):
            with self.assertRaises(ArgumentError):
                instance_from_json(bad)
