import math

import numpy as np
from django.test import SimpleTestCase

from equinorm.exceptions import ArgumentError
from norms.ordered import (
    check_ordered_cauchy_schwarz,
    dual_ordered_norm,
    majorizes,
    ordered_norm,
    sym_guarantee,
    top_k_norm,
)
from norms.vectors import WeightVector, sample_weight_vectors, sort_desc


def random_weight(rng, d):
    w = np.sort(rng.random(d))[::-1]
    w[0] = max(w[0], 1e-3)
    return WeightVector(w)


class TopKNormTests(SimpleTestCase):
    def test_direct_definition(self):
        self.assertEqual(top_k_norm([3, 1, 2], 2), 5.0)

    def test_example_vectors(self):
        d = 64
        x = np.zeros(d)
        x[0] = math.sqrt(d)
        for k in (1, 7, 64):
            self.assertAlmostEqual(top_k_norm(x, k), 8.0)
            self.assertAlmostEqual(top_k_norm(np.ones(d), k), float(k))

    def test_k_out_of_range(self):
        with self.assertRaises(ArgumentError):
            top_k_norm([1, 2], 3)
        with self.assertRaises(ArgumentError):
            top_k_norm([1, 2], 0)

    def test_equals_ordered_norm_with_indicator_weights(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            d = int(rng.integers(1, 20))
            x = rng.exponential(size=d)
            k = int(rng.integers(1, d + 1))
            self.assertEqual(top_k_norm(x, k), ordered_norm(x, WeightVector.top_k(d, k)))


class OrderedNormTests(SimpleTestCase):
    def test_l1_and_max(self):
        self.assertEqual(ordered_norm([1, 3, 2], [1, 1, 1]), 6.0)
        self.assertEqual(ordered_norm([1, 3, 2], [1, 0, 0]), 3.0)

    def test_harmonic_root_on_spike(self):
        d = 64
        x = np.zeros(d)
        x[0] = math.sqrt(d)
        self.assertAlmostEqual(ordered_norm(x, WeightVector.harmonic_root(d)), 8.0)

    def test_dimension_mismatch(self):
        with self.assertRaises(ArgumentError):
            ordered_norm([1, 2, 3], [1, 1])

    def test_rejects_negative_costs(self):
        with self.assertRaises(ArgumentError):
            ordered_norm([1, -2], [1, 1])

    def test_scale_and_permutation_invariance(self):
        rng = np.random.default_rng(1)
        for _ in range(300):
            d = int(rng.integers(1, 16))
            x = rng.exponential(size=d)
            w = random_weight(rng, d)
            c = float(rng.uniform(0, 5))
            base = ordered_norm(x, w)
            self.assertAlmostEqual(ordered_norm(c * x, w), c * base, places=9)
            self.assertAlmostEqual(ordered_norm(rng.permutation(x), w), base, places=12)

    def test_stable_sort_keeps_ties_in_index_order(self):
        x = np.array([2.0, 5.0, 2.0, 5.0])
        order = np.argsort(-x, kind="stable")
        self.assertEqual(order.tolist(), [1, 3, 0, 2])
        np.testing.assert_array_equal(sort_desc(x), [5.0, 5.0, 2.0, 2.0])


class WeightVectorTests(SimpleTestCase):
    def test_small_increase_flattened(self):
        w = WeightVector([1.0, 1.0 + 1e-12, 0.5])
        self.assertTrue(np.all(np.diff(w.entries) <= 0.0))

    def test_increasing_rejected(self):
        with self.assertRaises(ArgumentError):
            WeightVector([0.5, 1.0])

    def test_zero_rejected(self):
        with self.assertRaises(ArgumentError):
            WeightVector([0.0, 0.0])

    def test_samples_reproducible_and_valid(self):
        first = sample_weight_vectors(7, 20, seed=3)
        second = sample_weight_vectors(7, 20, seed=3)
        self.assertEqual(first, second)
        for w in first:
            self.assertEqual(len(w), 7)
            self.assertAlmostEqual(w.entries[0], 1.0)


class DualNormTests(SimpleTestCase):
    def test_examples(self):
        self.assertAlmostEqual(dual_ordered_norm([2, 2], [1, 1]), 2.0)
        self.assertAlmostEqual(dual_ordered_norm([3, 1], [2, 1]), 1.5)

    def test_fast_path_matches_full_max(self):
        rng = np.random.default_rng(2)
        for _ in range(10_000):
            d = int(rng.integers(1, 33))
            # integer entries force plenty of tie blocks
            y = rng.integers(0, 4, size=d).astype(float) * rng.choice([1.0, 0.37])
            w = random_weight(rng, d)
            fast = dual_ordered_norm(y, w, fast=True)
            full = dual_ordered_norm(y, w, fast=False)
            self.assertLessEqual(abs(fast - full), 1e-12 * max(1.0, full))


class MajorizationTests(SimpleTestCase):
    def test_examples(self):
        self.assertTrue(majorizes([1, 1], [2, 0]))
        self.assertFalse(majorizes([2, 0], [1, 1]))
        self.assertTrue(majorizes([3, 1, 4], [3, 1, 4]))

    def test_dimension_mismatch(self):
        with self.assertRaises(ArgumentError):
            majorizes([1, 1], [1, 1, 1])

    def test_majorization_orders_every_ordered_norm(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            d = int(rng.integers(2, 33))
            y = rng.exponential(size=d)
            t = rng.random()
            x = t * y + (1.0 - t) * rng.permutation(y)
            self.assertTrue(majorizes(x, y))
            for w in sample_weight_vectors(d, 100, seed=int(rng.integers(1 << 30))):
                self.assertLessEqual(
                    ordered_norm(x, w), ordered_norm(y, w) + 1e-9 * (1 + ordered_norm(y, w))
                )


class CauchySchwarzTests(SimpleTestCase):
    def test_tight_equal_vectors(self):
        report = check_ordered_cauchy_schwarz([1, 1], [1, 1], [1, 1])
        self.assertTrue(report.holds)
        self.assertTrue(report.tight)

    def test_no_shared_order(self):
        report = check_ordered_cauchy_schwarz([2, 0], [0, 2], [1, 0])
        self.assertTrue(report.holds)
        self.assertFalse(report.tight)
        self.assertFalse(report.witnesses["shared_order"])

    def test_tight_when_y_is_the_weight(self):
        # x.w = ||x||_(w) for sorted x, and ||w||*_(w) = 1
        rng = np.random.default_rng(4)
        for _ in range(100):
            d = int(rng.integers(1, 10))
            w = random_weight(rng, d)
            x = sort_desc(rng.exponential(size=d))
            report = check_ordered_cauchy_schwarz(x, w.entries, w)
            self.assertTrue(report.tight)

    def test_random_triples_hold(self):
        rng = np.random.default_rng(5)
        for _ in range(10_000):
            d = int(rng.integers(1, 33))
            x = rng.exponential(size=d)
            y = rng.exponential(size=d)
            w = random_weight(rng, d)
            self.assertTrue(check_ordered_cauchy_schwarz(x, y, w).holds)


class SymGuaranteeTests(SimpleTestCase):
    def test_symbolic(self):
        self.assertEqual(sym_guarantee(8, 16), "8*C*log(16) (C unspecified)")
