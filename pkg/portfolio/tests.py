import itertools
import math

import numpy as np
from django.test import SimpleTestCase

from equinorm.exceptions import ArgumentError, SizeCapError
from norms.ordered import ordered_norm
from norms.vectors import WeightVector, prefix_sums
from portfolio.bucket import bucket_portfolio, bucket_thresholds
from portfolio.domain import FiniteDomain, NormFamily, Portfolio
from portfolio.forms import domain_from_json, portfolio_from_json
from portfolio.hard_instances import (
    antichain_hard_instance,
    chain_partition_size,
    example1_domain,
    is_antichain,
    maximum_antichain,
    rank_level_antichain,
    step_sequences,
)
from portfolio.oracles import (
    brute_force_min_norm,
    certify_topk_ratio,
    compose_sequential,
    estimate_ordered_ratio,
    ratio_table,
    union_portfolios,
)


class BruteForceTests(SimpleTestCase):
    def test_max_norm_picks_flat(self):
        D = example1_domain(64)
        vector, value = brute_force_min_norm(D, WeightVector.top_k(64, 1))
        # y = 1_d has max 1 and wins for k = 1
        np.testing.assert_array_equal(vector, np.ones(64))
        self.assertEqual(value, 1.0)

    def test_l1_picks_spike(self):
        D = example1_domain(64)
        vector, value = brute_force_min_norm(D, WeightVector.ones(64))
        self.assertEqual(vector[0], 8.0)
        self.assertAlmostEqual(value, 8.0)

    def test_harmonic_root_values(self):
        D = example1_domain(64)
        w = WeightVector.harmonic_root(64)
        x, y, z = D.matrix
        self.assertAlmostEqual(ordered_norm(x, w), 8.0)
        self.assertAlmostEqual(ordered_norm(y, w), float(np.sum(1.0 / np.sqrt(np.arange(1, 65)))))
        self.assertAlmostEqual(ordered_norm(z, w), 4.0 * float(np.sum(1.0 / np.arange(1, 65))), places=9)
        vector, value = brute_force_min_norm(D, w)
        np.testing.assert_array_equal(vector, x)
        self.assertAlmostEqual(value, 8.0)

    def test_singleton(self):
        vector, value = brute_force_min_norm(FiniteDomain([[2.0, 1.0]]), [1.0, 0.5])
        np.testing.assert_array_equal(vector, [2.0, 1.0])
        self.assertEqual(value, 2.5)

    def test_ties_go_to_first(self):
        vector, _ = brute_force_min_norm(FiniteDomain([[1, 0], [0, 1]]), [1, 1])
        np.testing.assert_array_equal(vector, [1, 0])

    def test_dimension_mismatch(self):
        with self.assertRaises(ArgumentError):
            brute_force_min_norm(FiniteDomain([[1, 0]]), [1, 1, 1])


class CertificateTests(SimpleTestCase):
    def test_whole_domain_is_exact(self):
        D = example1_domain(16)
        self.assertEqual(certify_topk_ratio(Portfolio(D.matrix, 1.0), D), 1.0)

    def test_spike_and_flat_cover_top_k(self):
        for d, scale in ((64, "asymptotic"), (256, "tight")):
            D = example1_domain(d, z_scale=scale)
            X = Portfolio(D.matrix[:2], 1.0)
            self.assertAlmostEqual(certify_topk_ratio(X, D), 1.0, places=12)

    def test_ordered_gap_at_tight_scale(self):
        d = 4096
        D = example1_domain(d, z_scale="tight")
        X = Portfolio(D.matrix[:2], 1.0)
        self.assertAlmostEqual(certify_topk_ratio(X, D), 1.0, places=12)
        [(_, ratio)] = ratio_table(X, D, [WeightVector.harmonic_root(d)])
        self.assertGreater(ratio, 1.5)

    def test_estimate_includes_family(self):
        d = 256
        D = example1_domain(d, z_scale="tight")
        X = Portfolio(D.matrix[:2], 1.0)
        only_top_k = estimate_ordered_ratio(X, D, NormFamily.ordered_set([WeightVector.top_k(d, 1)]))
        with_root = estimate_ordered_ratio(X, D, NormFamily.ordered_set([WeightVector.harmonic_root(d)]))
        self.assertAlmostEqual(only_top_k, 1.0, places=12)
        self.assertGreater(with_root, 1.0)

    def test_estimate_is_one_on_whole_domain(self):
        rng = np.random.default_rng(11)
        D = FiniteDomain(rng.exponential(size=(6, 5)))
        X = Portfolio(D.matrix, 1.0)
        self.assertEqual(estimate_ordered_ratio(X, D, NormFamily.ordered_sampled(50, seed=1)), 1.0)

    def test_zero_optimum(self):
        D = FiniteDomain([[0, 0], [1, 0]])
        self.assertEqual(certify_topk_ratio(Portfolio([[1, 0]], 1.0), D), math.inf)
        self.assertEqual(certify_topk_ratio(Portfolio([[0, 0]], 1.0), D), 1.0)


class CompositionTests(SimpleTestCase):
    def test_sequential_multiplies(self):
        X1 = Portfolio([[1, 0], [0, 1], [1, 1]], 2.0)
        X2 = Portfolio([[1, 1]], 3.0)
        self.assertEqual(compose_sequential(X1, X2).claimed_alpha, 6.0)
        self.assertEqual(compose_sequential(X1, X1).claimed_alpha, 4.0)

    def test_sequential_identity(self):
        X1 = Portfolio([[1, 0]], 2.0)
        X2 = Portfolio([[1, 0]], 1.0)
        self.assertEqual(compose_sequential(X1, X2).claimed_alpha, 2.0)

    def test_sequential_needs_subset(self):
        with self.assertRaises(ArgumentError):
            compose_sequential(Portfolio([[1, 0]], 2.0), Portfolio([[0, 1]], 2.0))

    def test_symbolic_alpha(self):
        composed = compose_sequential(Portfolio([[1, 0]], "C*log(4)"), Portfolio([[1, 0]], 2.0))
        self.assertIsNone(composed.numeric_alpha)
        self.assertIn("C*log(4)", composed.claimed_alpha)

    def test_union(self):
        A = Portfolio([[1, 0], [0, 1]], 2.0, provenance=["a", "b"])
        B = Portfolio([[2, 2], [0, 1]], 2.0, provenance=["c", "d"])
        self.assertEqual(len(union_portfolios([A])), 2)
        merged = union_portfolios([(A, None), (B, None)])
        self.assertEqual(len(merged), 3)
        self.assertEqual(merged.provenance, ["a", "b", "c"])
        np.testing.assert_array_equal(merged.matrix[2], [2, 2])

    def test_union_alpha_mismatch(self):
        with self.assertRaises(ArgumentError):
            union_portfolios([Portfolio([[1, 0]], 2.0), Portfolio([[0, 1]], 3.0)])

    def test_claimed_alpha_below_one(self):
        with self.assertRaises(ArgumentError):
            Portfolio([[1.0]], 0.5)

    def test_json_round_trip_keeps_provenance(self):
        P = Portfolio([[1, 2]], 1.5, provenance=["vertex 0"], details=[{"order": [1, 0]}], notes=["n"])
        again = Portfolio.from_json(P.to_json())
        self.assertEqual(again.provenance, ["vertex 0"])
        self.assertEqual(again.details, [{"order": [1, 0]}])
        self.assertEqual(again.claimed_alpha, 1.5)


def mutually_close(x, r, factor):
    px, pr = prefix_sums(x), prefix_sums(r)
    slack = 1e-9 * (1.0 + px[-1] + pr[-1])
    return bool(np.all(px <= factor * pr + slack) and np.all(pr <= factor * px + slack))


class BucketTests(SimpleTestCase):
    def test_symmetric_pair_shares_a_bucket(self):
        P = bucket_portfolio(FiniteDomain([[1, 0], [0, 1]]), 0.5)
        self.assertEqual(len(P), 1)
        self.assertEqual(P.claimed_alpha, 1.5)

    def test_singleton(self):
        D = FiniteDomain([[3, 1, 2]])
        P = bucket_portfolio(D, 1.0)
        self.assertEqual(len(P), 1)
        self.assertEqual(certify_topk_ratio(P, D), 1.0)

    def test_nonzero_boolean_vectors(self):
        vectors = [v for v in itertools.product((0, 1), repeat=4) if any(v)]
        D = FiniteDomain(vectors)
        P = bucket_portfolio(D, 0.5)
        # one bucket per number of ones
        self.assertEqual(len(P), 4)
        self.assertEqual(certify_topk_ratio(P, D), 1.0)

    def test_zero_vector_is_kept_alone(self):
        D = FiniteDomain(list(itertools.product((0, 1), repeat=4)))
        P = bucket_portfolio(D, 0.5)
        self.assertEqual(len(P), 1)
        np.testing.assert_array_equal(P.matrix[0], np.zeros(4))
        self.assertEqual(certify_topk_ratio(P, D), 1.0)
        self.assertTrue(P.notes)

    def test_far_vectors_dropped(self):
        D = FiniteDomain([[1, 1], [100, 0]])
        P = bucket_portfolio(D, 1.0)
        self.assertEqual(len(P), 1)
        np.testing.assert_array_equal(P.matrix[0], [1, 1])
        self.assertTrue(P.notes)

    def test_epsilon_range(self):
        for eps in (0, -0.1, 1.5):
            with self.assertRaises(ArgumentError):
                bucket_portfolio(FiniteDomain([[1.0]]), eps)

    def test_threshold_gaps(self):
        for d in (1, 2, 7, 64, 1000):
            for eps in (0.1, 0.5, 1.0):
                t = bucket_thresholds(d, eps)
                self.assertEqual(t[0], 1)
                self.assertEqual(t[-1], d)
                for c, c_next in zip(t, t[1:]):
                    self.assertLessEqual(c_next - 1, (1.0 + eps / 3.0) * c + 1e-9)

    def test_random_domains(self):
        rng = np.random.default_rng(12)
        for trial in range(50):
            n = int(rng.integers(1, 21))
            d = int(rng.integers(1, 9))
            eps = float(rng.choice([0.1, 0.25, 0.5, 1.0]))
            D = FiniteDomain(rng.exponential(size=(n, d)) * rng.integers(0, 2, size=(n, d)) + 0.01)
            P = bucket_portfolio(D, eps)
            self.assertLessEqual(certify_topk_ratio(P, D), 1.0 + eps + 1e-9)
            v_star = D.matrix.max(axis=1).min()
            for x in D.matrix:
                if x.max() <= d * v_star:
                    self.assertTrue(any(mutually_close(x, r, 1.0 + eps) for r in P.matrix))


class AntichainTests(SimpleTestCase):
    def test_smallest_instance(self):
        instance = antichain_hard_instance(1, 2)
        D, weights, antichain = instance
        self.assertEqual(len(antichain), 1)
        self.assertEqual(D.dimension, 3)
        self.assertAlmostEqual(ordered_norm(D.matrix[0], weights[0]), 2.0)

    def test_self_and_cross_norms(self):
        L, S = 3, 4
        D, weights, antichain = antichain_hard_instance(L, S)
        self.assertGreaterEqual(len(antichain), 2)
        self.assertTrue(is_antichain(antichain))
        for i, w in enumerate(weights):
            for j, x in enumerate(D.matrix):
                value = ordered_norm(x, w)
                if i == j:
                    self.assertAlmostEqual(value, L + 1.0, places=9)
                else:
                    self.assertGreater(value, S)
                    self.assertGreater(value / (L + 1.0), S / (L + 1.0))

    def test_small_grid(self):
        for L in range(1, 7):
            for S in (2, 3, 4, 8):
                if sum(S ** i for i in range(L + 1)) > 50_000:
                    continue
                D, weights, antichain = antichain_hard_instance(L, S)
                self.assertTrue(is_antichain(antichain))
                for i, w in enumerate(weights):
                    self.assertAlmostEqual(ordered_norm(D.matrix[i], w), L + 1.0, places=7)
                for a, b in itertools.permutations(antichain, 2):
                    self.assertTrue(any(y < x for x, y in zip(a, b)))

    def test_maximum_matches_exhaustive_search(self):
        for L in (1, 2, 3):
            sequences = step_sequences(L)
            best = max(
                r for r in range(1, len(sequences) + 1)
                if any(is_antichain(c) for c in itertools.combinations(sequences, r))
            )
            self.assertEqual(len(maximum_antichain(sequences)), best)

    def test_rank_level_is_an_antichain(self):
        sequences = step_sequences(8)
        level = rank_level_antichain(sequences)
        self.assertTrue(is_antichain(level))
        self.assertLessEqual(len(level), len(maximum_antichain(sequences)))

    def test_chain_partition_certifies_the_rank_level(self):
        for L in range(1, 9):
            sequences = step_sequences(L)
            size = len(maximum_antichain(sequences))
            self.assertEqual(chain_partition_size(sequences), size)
            self.assertEqual(len(rank_level_antichain(sequences)), size)

    def test_chain_partition_never_below_maximum(self):
        rng = np.random.default_rng(5)
        sequences = step_sequences(6)
        for _ in range(20):
            chosen = [sequences[i] for i in sorted(rng.choice(len(sequences), size=20, replace=False))]
            self.assertGreaterEqual(chain_partition_size(chosen), len(maximum_antichain(chosen)))

    def test_exact_above_full_comparability(self):
        instance = antichain_hard_instance(12, 2)
        self.assertTrue(instance.exact)
        self.assertEqual(len(instance.antichain), len(rank_level_antichain(step_sequences(12))))
        self.assertTrue(is_antichain(instance.antichain))
        D, weights, _ = instance
        self.assertAlmostEqual(ordered_norm(D.matrix[0], weights[0]), 13.0, places=7)

    def test_dimension_cap(self):
        with self.assertRaises(SizeCapError):
            antichain_hard_instance(20, 2)
        with self.assertRaises(ArgumentError):
            antichain_hard_instance(0, 2)


class FormTests(SimpleTestCase):
    def test_domain(self):
        D = domain_from_json({"vectors": [[1, 2], [3, 4]], "labels": ["a", "b"]})
        self.assertEqual(D.labels, ["a", "b"])
        self.assertEqual(D.dimension, 2)

    def test_domain_errors(self):
        for bad in ({"vectors": []}, {"vectors": [[1, 2], [3]]}, {"vectors": [[1, -1]]}, {}, [1, 2]):
            with self.assertRaises(ArgumentError):
                domain_from_json(bad)

    def test_portfolio(self):
        P = portfolio_from_json({"vectors": [[1, 0]], "claimed_alpha": "8*C*log(2)"})
        self.assertEqual(P.claimed_alpha, "8*C*log(2)")
        with self.assertRaises(ArgumentError):
            portfolio_from_json({"vectors": [[1, 0]], "claimed_alpha": 0.5})
