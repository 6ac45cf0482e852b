import math

import numpy as np
from django.test import SimpleTestCase

from equinorm.exceptions import (
    ArgumentError,
    InfeasibleError,
    NonterminationError,
    PreconditionError,
    SizeCapError,
)
from norms.vectors import WeightVector
from portfolio.oracles import certify_topk_ratio
from satisfaction.certificates import (
    best_simultaneous_ratio,
    brute_force_orders,
    earliest_satisfaction_vector,
    pointwise_factor,
    satisfaction_domain,
)
from satisfaction.forms import problem_from_json
from satisfaction.gadgets import (
    CT_BEST_RATIO,
    CT_DELTA,
    CT_MU,
    ct_lower_bound_instance,
    hub_first_cover,
    odd_cover,
    vc_lower_bound_instance,
)
from satisfaction.ordering import (
    check_composability,
    check_downward_closure,
    compose,
    cost,
    iterative_ordering,
    satisfaction_times,
    satisfaction_vector,
    satisfied_clients,
    truncate,
)
from satisfaction.problems import (
    CompletionTimes,
    Satisfier,
    SetCover,
    Tsp,
    random_completion_times,
    random_set_cover,
    random_tsp,
    random_vertex_cover,
)
from satisfaction.satisfiers import (
    GREEDY,
    LP_ROUNDING,
    completion_times_satisfier,
    exhaustive_satisfier,
    greedy_set_cover_satisfier,
    order_problem,
)


def line_tsp(n):
    points = np.arange(n, dtype=float)
    return Tsp(np.abs(points[:, None] - points[None, :]), v0=0)


def random_satisfier(problem, rng, start=None):
    objects = list(problem.objects)
    picks = rng.permutation(len(objects))[:int(rng.integers(0, len(objects) + 1))]
    order = [objects[k] for k in picks]
    if start is not None:
        order = [start] + [x for x in order if x != start]
    return Satisfier(order)


def sample_problems():
    return [
        random_completion_times(4, 2, seed=1),
        random_set_cover(8, 5, seed=2),
        random_vertex_cover(6, 8, seed=3),
        random_tsp(6, seed=4),
    ]


class SatisfactionTimesTests(SimpleTestCase):
    def test_one_set_covers_all(self):
        problem = SetCover(3, [[0, 1, 2], [0]])
        self.assertEqual(satisfaction_times(problem, Satisfier([0])), {0: 1.0, 1: 1.0, 2: 1.0})

    def test_single_machine_prefix_sums(self):
        problem = CompletionTimes([[2.0], [3.0]])
        s = satisfaction_vector(problem, Satisfier([(0, 0), (1, 0)]))
        np.testing.assert_array_equal(s, [2.0, 5.0])

    def test_earliest_machine_wins(self):
        problem = CompletionTimes([[1.0, 5.0], [2.0, 1.0]])
        s = satisfaction_vector(problem, Satisfier([(1, 0), (0, 0), (0, 1)]))
        np.testing.assert_array_equal(s, [3.0, 2.0])

    def test_tsp_wrong_start(self):
        problem = line_tsp(3)
        times = satisfaction_times(problem, Satisfier([1, 0, 2]))
        self.assertTrue(all(math.isinf(t) for t in times.values()))

    def test_unsatisfied_clients(self):
        problem = SetCover(3, [[0], [1, 2]])
        self.assertEqual(satisfaction_times(problem, Satisfier([0]))[2], math.inf)
        self.assertEqual(satisfied_clients(problem, Satisfier([1])), {1, 2})

    def test_repeated_object(self):
        with self.assertRaises(ArgumentError):
            Satisfier([0, 0])

    def test_unknown_object(self):
        with self.assertRaises(ArgumentError):
            cost(SetCover(2, [[0, 1]]), Satisfier([3]))


class CostTests(SimpleTestCase):
    def test_empty(self):
        self.assertEqual(cost(SetCover(2, [[0, 1]]), Satisfier()), 0.0)

    def test_single_set(self):
        self.assertEqual(cost(SetCover(2, [[0, 1]]), Satisfier([0])), 1.0)

    def test_makespan(self):
        problem = CompletionTimes([[2.0, 1.0], [3.0, 1.0], [1.0, 4.0]])
        self.assertEqual(cost(problem, Satisfier([(0, 0), (1, 0), (2, 1)])), 5.0)

    def test_tsp_path_length(self):
        problem = line_tsp(4)
        self.assertEqual(cost(problem, Satisfier([0, 2, 1])), 3.0)
        self.assertTrue(math.isinf(cost(problem, Satisfier([1, 0]))))


class ComposeTests(SimpleTestCase):
    def test_single(self):
        self.assertEqual(compose([Satisfier([2, 0])]), Satisfier([2, 0]))

    def test_positions(self):
        problem = SetCover(5, [[0], [1], [2], [3], [4]])
        composed = compose([Satisfier([0, 1]), Satisfier([2, 3, 4])])
        self.assertEqual(problem.times(composed), {0: 1.0, 1: 2.0, 2: 3.0, 3: 4.0, 4: 5.0})

    def test_first_occurrence(self):
        self.assertEqual(compose([Satisfier([0, 1]), Satisfier([1, 2])]), Satisfier([0, 1, 2]))

    def test_truncate(self):
        problem = line_tsp(4)
        self.assertEqual(truncate(problem, Satisfier([0, 1, 3, 2]), 1.5), Satisfier([0, 1]))


class PropertyTests(SimpleTestCase):
    def test_downward_closure(self):
        rng = np.random.default_rng(11)
        for problem in sample_problems():
            for _ in range(30):
                sat = random_satisfier(problem, rng)
                finite = [t for t in problem.times(sat).values() if math.isfinite(t)]
                T = float(rng.choice(finite)) if finite else 1.0
                self.assertTrue(check_downward_closure(problem, sat, T))

    def test_restriction(self):
        rng = np.random.default_rng(12)
        for problem in sample_problems():
            for _ in range(30):
                sat = random_satisfier(problem, rng, start=getattr(problem, "v0", None))
                T = float(rng.uniform(0.0, 2.0 * problem.cost_upper_bound() / 3.0))
                restricted = truncate(problem, sat, T)
                self.assertLessEqual(cost(problem, restricted), T)
                within = sum(1 for t in satisfaction_times(problem, sat).values() if t <= T)
                self.assertGreaterEqual(len(satisfied_clients(problem, restricted)), within)

    def test_composability(self):
        rng = np.random.default_rng(13)
        for problem in sample_problems():
            start = getattr(problem, "v0", None)
            for _ in range(30):
                sats = [random_satisfier(problem, rng, start=start) for _ in range(3)]
                self.assertTrue(check_composability(problem, sats))

    def test_tsp_return_trip(self):
        # v0 in the middle: reaching 2 after 1 walks back past v0
        problem = Tsp([[0.0, 1.0, 1.0], [1.0, 0.0, 2.0], [1.0, 2.0, 0.0]], v0=0)
        sats = [Satisfier([0, 1]), Satisfier([0, 2])]
        self.assertTrue(check_composability(problem, sats))
        self.assertFalse(check_composability(problem, sats, gamma=1.0))


class IterativeOrderingTests(SimpleTestCase):
    def test_doubling_budgets(self):
        problem = random_set_cover(8, 6, seed=5)
        run = order_problem(problem)
        budgets = [r["budget"] for r in run.rounds]
        self.assertEqual(budgets, [2.0 ** j for j in range(len(budgets))])
        self.assertEqual(run.factor, 4.0)
        self.assertEqual(satisfied_clients(problem, run.satisfier), set(problem.clients))

    def test_tsp_factor(self):
        run = order_problem(line_tsp(4))
        self.assertAlmostEqual(run.theta, 1.0 + math.sqrt(2.0))
        self.assertAlmostEqual(run.factor, 3.0 + 2.0 * math.sqrt(2.0))
        self.assertEqual(run.satisfier.order[0], 0)

    def test_single_client(self):
        problem = CompletionTimes([[3.0, 2.0]])
        run = order_problem(problem)
        self.assertEqual(satisfaction_vector(problem, run.satisfier).tolist(), [2.0])

    def test_pointwise_set_cover(self):
        for seed in range(3):
            problem = random_set_cover(8, 6, seed=seed)
            run = order_problem(problem)
            self.assertLessEqual(pointwise_factor(problem, run.satisfier), 4.0 + 1e-9)

    def test_pointwise_vertex_cover(self):
        problem = random_vertex_cover(6, 7, seed=8)
        run = order_problem(problem)
        self.assertLessEqual(pointwise_factor(problem, run.satisfier), 4.0 + 1e-9)

    def test_pointwise_tsp(self):
        for seed in range(3):
            problem = random_tsp(6, seed=seed)
            run = order_problem(problem)
            self.assertLessEqual(pointwise_factor(problem, run.satisfier), run.factor + 1e-9)

    def test_pointwise_completion_times(self):
        for seed in range(3):
            problem = random_completion_times(3, 3, seed=seed)
            domain = satisfaction_domain(problem)
            exact = order_problem(problem)
            self.assertLessEqual(pointwise_factor(problem, exact.satisfier, domain), 4.0 + 1e-9)
            rounded = order_problem(problem, LP_ROUNDING)
            self.assertEqual(rounded.factor, 8.0)
            self.assertLessEqual(pointwise_factor(problem, rounded.satisfier, domain), 8.0 + 1e-9)

    def test_portfolio_certificate(self):
        problem = random_set_cover(7, 5, seed=9)
        portfolio = order_problem(problem).as_portfolio()
        self.assertEqual(portfolio.claimed_alpha, 4.0)
        self.assertLessEqual(certify_topk_ratio(portfolio, satisfaction_domain(problem)), 4.0 + 1e-9)

    def test_greedy_is_labelled(self):
        problem = random_set_cover(8, 6, seed=1)
        run = order_problem(problem, GREEDY)
        self.assertIsInstance(run.claimed_alpha, str)
        self.assertEqual(satisfied_clients(problem, run.satisfier), set(problem.clients))

    def test_stalled_oracle(self):
        with self.assertRaises(NonterminationError):
            iterative_ordering(SetCover(2, [[0], [1]]), lambda problem, B: Satisfier())

    def test_overspending_oracle(self):
        problem = SetCover(2, [[0], [1]])
        with self.assertRaises(PreconditionError):
            iterative_ordering(problem, lambda p, B: Satisfier([0, 1]))

    def test_bad_beta(self):
        with self.assertRaises(ArgumentError):
            iterative_ordering(SetCover(1, [[0]]), exhaustive_satisfier, beta=0.5)

    def test_unknown_method(self):
        with self.assertRaises(ArgumentError):
            order_problem(SetCover(1, [[0]]), "magic")


class SatisfierTests(SimpleTestCase):
    def test_budget_below_minimum(self):
        self.assertEqual(exhaustive_satisfier(SetCover(2, [[0], [1]]), 0.5), Satisfier())
        self.assertEqual(exhaustive_satisfier(CompletionTimes([[2.0]]), 1.0), Satisfier())

    def test_full_budget(self):
        problem = random_set_cover(8, 5, seed=3)
        sat = exhaustive_satisfier(problem, 5)
        self.assertEqual(satisfied_clients(problem, sat), set(problem.clients))

    def test_set_cover_prefers_coverage(self):
        problem = SetCover(4, [[0], [1, 2, 3], [0, 1]])
        self.assertEqual(exhaustive_satisfier(problem, 1), Satisfier([1]))

    def test_tsp_line(self):
        problem = line_tsp(4)
        self.assertEqual(exhaustive_satisfier(problem, 2.0), Satisfier([0, 1, 2]))
        self.assertEqual(exhaustive_satisfier(problem, 0.5), Satisfier([0]))

    def test_completion_times_exhaustive(self):
        problem = CompletionTimes([[1.0], [1.0], [1.0]])
        sat = exhaustive_satisfier(problem, 2.0)
        self.assertEqual(len(sat), 2)
        self.assertLessEqual(cost(problem, sat), 2.0)

    def test_lp_rounding_single_machine(self):
        problem = CompletionTimes([[1.0], [1.0], [1.0]])
        sat = completion_times_satisfier(problem, 2.0)
        self.assertGreaterEqual(len(sat), 2)
        self.assertLessEqual(cost(problem, sat), 4.0)

    def test_lp_rounding_everything_fits(self):
        problem = CompletionTimes([[1.0], [2.0], [3.0]])
        sat = completion_times_satisfier(problem, 6.0)
        self.assertEqual(satisfied_clients(problem, sat), {0, 1, 2})

    def test_lp_rounding_respects_budget_per_job(self):
        problem = CompletionTimes([[5.0, 1.0]])
        self.assertEqual(completion_times_satisfier(problem, 2.0), Satisfier([(0, 1)]))

    def test_lp_rounding_versus_exhaustive(self):
        for seed in range(5):
            problem = random_completion_times(4, 2, seed=seed)
            for B in (2.0, 5.0, 9.0, 14.0):
                rounded = completion_times_satisfier(problem, B)
                exact = exhaustive_satisfier(problem, B)
                self.assertLessEqual(cost(problem, rounded), 2.0 * B + 1e-9)
                self.assertGreaterEqual(
                    len(satisfied_clients(problem, rounded)), len(satisfied_clients(problem, exact))
                )

    def test_lp_rounding_wrong_problem(self):
        with self.assertRaises(ArgumentError):
            completion_times_satisfier(SetCover(1, [[0]]), 1.0)

    def test_greedy(self):
        problem = SetCover(4, [[0, 1], [1, 2, 3], [0]])
        self.assertEqual(greedy_set_cover_satisfier(problem, 1), Satisfier([1]))
        self.assertEqual(greedy_set_cover_satisfier(problem, 3), Satisfier([1, 0]))

    def test_cap(self):
        with self.assertRaises(SizeCapError):
            exhaustive_satisfier(random_completion_times(6, 3, seed=0), 5.0, cap=100)


class CertificateTests(SimpleTestCase):
    def test_order_counts(self):
        self.assertEqual(len(brute_force_orders(SetCover(2, [[0], [1], [0, 1]]))), 6)
        self.assertEqual(len(brute_force_orders(line_tsp(4))), 6)
        self.assertEqual(len(brute_force_orders(CompletionTimes([[1.0, 2.0], [2.0, 1.0]]))), 6)

    def test_cap(self):
        with self.assertRaises(SizeCapError):
            brute_force_orders(random_set_cover(5, 6, seed=0), cap=100)

    def test_domain(self):
        problem = line_tsp(3)
        domain = satisfaction_domain(problem)
        self.assertEqual(domain.dimension, 3)
        self.assertEqual(len(domain), 2)

    def test_earliest_vector_is_dominated(self):
        for problem in sample_problems():
            floor = earliest_satisfaction_vector(problem)
            self.assertTrue(np.all(np.isfinite(floor)))
            for sat in brute_force_orders(problem):
                self.assertTrue(np.all(floor <= satisfaction_vector(problem, sat) + 1e-9))

    def test_earliest_vector_of_line_tsp(self):
        np.testing.assert_allclose(earliest_satisfaction_vector(line_tsp(4)), [0.0, 1.0, 2.0, 3.0])


class GadgetTests(SimpleTestCase):
    def test_vertex_cover_shape(self):
        problem = vc_lower_bound_instance(8)
        self.assertEqual(problem.graph.number_of_nodes(), 17)
        self.assertEqual(problem.graph.number_of_edges(), 24)

    def test_vertex_cover_totals(self):
        problem = vc_lower_bound_instance(8)
        odd = satisfaction_vector(problem, Satisfier(odd_cover(8)))
        hub = satisfaction_vector(problem, Satisfier(hub_first_cover(8)))
        self.assertEqual(odd.sum(), 108.0)
        self.assertEqual(hub.sum(), 96.0)
        self.assertEqual(odd.max(), 8.0)
        self.assertEqual(hub.max(), 9.0)

    def test_vertex_cover_minimum(self):
        problem = vc_lower_bound_instance(8)
        self.assertEqual(satisfied_clients(problem, exhaustive_satisfier(problem, 8)), set(problem.clients))
        self.assertLess(len(satisfied_clients(problem, exhaustive_satisfier(problem, 7))), 24)

    def test_completion_times_optima(self):
        problem = ct_lower_bound_instance()
        domain = satisfaction_domain(problem)
        self.assertAlmostEqual(domain.matrix.max(axis=1).min(), 2.0)
        self.assertAlmostEqual(domain.matrix.sum(axis=1).min(), 4.0 + CT_MU + CT_DELTA)

    def test_completion_times_best_ratio(self):
        problem = ct_lower_bound_instance()
        ratio, _ = best_simultaneous_ratio(problem, [WeightVector.ones(3), WeightVector.top_k(3, 1)])
        self.assertAlmostEqual(ratio, CT_BEST_RATIO, delta=1e-9)
        self.assertGreater(ratio, 1.13)

    def test_bad_sizes(self):
        with self.assertRaises(ArgumentError):
            vc_lower_bound_instance(1)
        with self.assertRaises(ArgumentError):
            ct_lower_bound_instance(mu=1.5)


class FormTests(SimpleTestCase):
    def test_completion_times(self):
        problem = problem_from_json({"type": "completion_times", "p": [[1, 2], [3, 4]]})
        self.assertEqual(problem.p.shape, (2, 2))

    def test_set_cover(self):
        problem = problem_from_json({"type": "setcover", "n_elements": 3, "sets": [[0, 1], [2]]})
        self.assertEqual(problem.to_json()["sets"], [[0, 1], [2]])

    def test_uncovered_element(self):
        with self.assertRaises(InfeasibleError):
            problem_from_json({"type": "setcover", "n_elements": 3, "sets": [[0, 1]]})

    def test_vertex_cover(self):
        problem = problem_from_json({"type": "vertexcover", "n_vertices": 3, "edges": [[0, 1], [1, 2]]})
        self.assertEqual(problem.num_clients, 2)

    def test_tsp(self):
        problem = problem_from_json({"type": "tsp", "dist": [[0, 1], [1, 0]], "v0": 1})
        self.assertEqual(problem.v0, 1)

    def test_asymmetric_tsp(self):
        with self.assertRaises(ArgumentError):
            problem_from_json({"type": "tsp", "dist": [[0, 1], [2, 0]], "v0": 0})

    def test_unknown_type(self):
        with self.assertRaises(ArgumentError):
            problem_from_json({"type": "knapsack"})
