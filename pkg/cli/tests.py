import csv
import io
import json
import math
import os
import tempfile

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from cli.instances import GENERATORS, generate, load_instance
from cli.reports import EXIT_CERTIFICATE, EXIT_SIZE_CAP, EXIT_VALIDATION, RunReport, jsonable
from cli.runner import certify, solve_instance
from equinorm.exceptions import ArgumentError
from portfolio.domain import Portfolio


def run(*args, **kwargs):
    out, err = io.StringIO(), io.StringIO()
    call_command(*args, stdout=out, stderr=err, **kwargs)
    return out.getvalue(), err.getvalue()


class CommandTestCase(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def path(self, name):
        return os.path.join(self.tmp.name, name)

    def write(self, name, data):
        with open(self.path(name), 'w', encoding='utf-8') as file:
            json.dump(data, file)
        return self.path(name)

    def read(self, name):
        with open(self.path(name), encoding='utf-8') as file:
            return json.load(file)


class GenerateTests(CommandTestCase):
    def test_example1_domain(self):
        run('generate', 'example1', '--d', '64', '-o', self.path('x.json'))
        data = self.read('x.json')
        self.assertEqual(data['type'], 'domain')
        self.assertEqual(len(data['vectors']), 3)
        self.assertEqual(len(data['weights']), 1)
        self.assertEqual(data['generator']['kind'], 'example1')

    def test_vertex_cover_gadget(self):
        data = generate('vc-98')
        self.assertEqual(data['n_vertices'], 17)

    def test_completion_times_gadget(self):
        data = generate('ct-113')
        self.assertEqual(len(data['p']), 3)
        self.assertTrue(all(len(row) == 2 for row in data['p']))

    def test_lower_bound_family_carries_weights(self):
        data = generate('mlij-lb', alpha=5.0, L=1)
        self.assertEqual(data['type'], 'mlij')
        self.assertEqual(len(data['weights']), 1)
        self.assertEqual(len(data['p']), 1 + data['S'] ** 2)

    def test_unknown_kind(self):
        with self.assertRaises(CommandError):
            run('generate', 'no-such-kind')
        with self.assertRaises(ArgumentError):
            generate('no-such-kind')

    def test_explicit_zero_is_not_a_default(self):
        with self.assertRaises(ArgumentError):
            generate('random-metric', n=0)
        with self.assertRaises(CommandError) as ctx:
            run('generate', 'star-metric', '--n', '0')
        self.assertEqual(ctx.exception.returncode, EXIT_VALIDATION)

    def test_stdout_without_output_file(self):
        out, _ = run('generate', 'random-metric', '--n', '4', '--seed', '3')
        self.assertEqual(json.loads(out)['type'], 'metric')


class RoundTripTests(CommandTestCase):
    KINDS = sorted(set(GENERATORS) - {'mlij-lb'})

    def test_generate_solve_verify(self):
        for kind in self.KINDS:
            with self.subTest(kind=kind):
                instance = self.path(f'{kind}.json')
                report = self.path(f'{kind}-report.json')
                run('generate', kind, '-o', instance)
                run('solve', instance, '-o', report, '--samples', '20')
                self.assertEqual(self.read(f'{kind}-report.json')['command'], 'solve')
                run('verify', instance, report, '--samples', '20', '-o', self.path(f'{kind}-verify.json'))

    def test_report_shape(self):
        instance = self.path('mlij.json')
        run('generate', 'random-mlij', '--d', '3', '--n', '5', '-o', instance)
        run('solve', instance, '--alpha', '8', '-o', self.path('report.json'))
        report = self.read('report.json')
        self.assertEqual(
            set(report), {'instance', 'command', 'parameters', 'portfolio', 'certificates', 'timings', 'notes'}
        )
        self.assertEqual(report['parameters']['seed'], 0)
        tags = {(c['family'], c['tag']) for c in report['certificates']}
        self.assertEqual(tags, {('top-k', 'exact'), ('ordered', 'sampled')})
        self.assertLessEqual(report['certificates'][0]['ratio'], 8.0 + 1e-9)

    def test_no_timings(self):
        instance = self.path('ct.json')
        run('generate', 'ct-113', '-o', instance)
        first, _ = run('solve', instance, '--no-timings')
        second, _ = run('solve', instance, '--no-timings')
        self.assertEqual(first, second)
        self.assertNotIn('timings', json.loads(first))

    @override_settings(EQUINORM_SEED=7)
    def test_environment_seed_wins(self):
        instance = self.path('cover.json')
        run('generate', 'random-setcover', '-o', instance)
        out, _ = run('solve', instance, '--seed', '3', '--no-timings')
        self.assertEqual(json.loads(out)['parameters']['seed'], 7)


class VerifyTests(CommandTestCase):
    def test_domain_against_itself(self):
        vectors = [[3.0, 1.0], [2.0, 2.0]]
        instance = self.write('d.json', {"type": "domain", "vectors": vectors})
        portfolio = self.write('p.json', Portfolio(vectors, 1.0).to_json())
        out, _ = run('verify', instance, portfolio)
        report = json.loads(out)
        self.assertEqual(report['certificates'][0]['ratio'], 1.0)

    def test_two_vector_portfolio_fails_the_harmonic_norm(self):
        run('generate', 'example1', '--d', '4096', '--z-scale', 'tight', '-o', self.path('e1.json'))
        data = self.read('e1.json')
        portfolio = self.write('xy.json', Portfolio(data['vectors'][:2], 1.0, provenance=['x', 'y']).to_json())
        with self.assertRaises(CommandError) as ctx:
            run('verify', self.path('e1.json'), portfolio, '--samples', '5')
        self.assertEqual(ctx.exception.returncode, EXIT_CERTIFICATE)

    def test_family_filter(self):
        run('generate', 'example1', '--d', '4096', '--z-scale', 'tight', '-o', self.path('e1.json'))
        data = self.read('e1.json')
        portfolio = self.write('xy.json', Portfolio(data['vectors'][:2], 1.0).to_json())
        out, _ = run('verify', self.path('e1.json'), portfolio, '--family', 'top', '--samples', '5')
        report = json.loads(out)
        self.assertEqual({c['family'] for c in report['certificates']}, {'top-k'})
        self.assertAlmostEqual(report['certificates'][0]['ratio'], 1.0)
        with self.assertRaises(CommandError) as ctx:
            run('verify', self.path('e1.json'), portfolio, '--family', 'ord', '--samples', '5')
        self.assertEqual(ctx.exception.returncode, EXIT_CERTIFICATE)

    def test_capped_reference_falls_back_to_lower_bounds(self):
        instance = self.path('ct.json')
        run('generate', 'ct-113', '-o', instance)
        run('solve', instance, '--skip-certificates', '-o', self.path('report.json'))
        out, err = run('verify', instance, self.path('report.json'), '--max-brute', '1', '--samples', '10')
        report = json.loads(out)
        self.assertIn('exact certificates skipped', err)
        self.assertIn('may overstate the true ratios', err)
        self.assertEqual(len(report['certificates']), 1)
        found = report['certificates'][0]
        self.assertEqual((found['family'], found['tag'], found['reference']), ('ordered', 'sampled', 'lower bound'))
        self.assertEqual(found['samples'], 10)
        self.assertTrue(1.0 - 1e-9 <= found['ratio'] < math.inf)
        self.assertTrue(any(note.startswith('exact certificates skipped') for note in report['notes']))

    def test_dimension_mismatch(self):
        instance = self.write('d.json', {"type": "domain", "vectors": [[1.0, 2.0]]})
        portfolio = self.write('p.json', Portfolio([[1.0, 2.0, 3.0]], 1.0).to_json())
        with self.assertRaises(CommandError) as ctx:
            run('verify', instance, portfolio)
        self.assertEqual(ctx.exception.returncode, EXIT_VALIDATION)


class ErrorTests(CommandTestCase):
    def test_unknown_instance_type(self):
        instance = self.write('bad.json', {"type": "polytope"})
        with self.assertRaises(CommandError) as ctx:
            run('solve', instance)
        self.assertEqual(ctx.exception.returncode, EXIT_VALIDATION)

    def test_missing_file(self):
        with self.assertRaises(CommandError) as ctx:
            run('solve', self.path('missing.json'))
        self.assertEqual(ctx.exception.returncode, EXIT_VALIDATION)

    @override_settings(EQUINORM_MAX_CLUSTER_SUBSETS=5)
    def test_size_cap(self):
        instance = self.path('metric.json')
        run('generate', 'random-metric', '-o', instance)
        with self.assertRaises(CommandError) as ctx:
            run('solve', instance, '--mode', 'exact')
        self.assertEqual(ctx.exception.returncode, EXIT_SIZE_CAP)

    def test_brute_cap_only_limits_certificates(self):
        instance = self.path('metric.json')
        run('generate', 'random-metric', '-o', instance)
        out, _ = run('solve', instance, '--mode', 'exact', '--max-brute', '5', '--no-timings')
        report = json.loads(out)
        self.assertEqual(len(report['portfolio']['vectors']), 1)
        self.assertEqual([c['reference'] for c in report['certificates']], ['lower bound'])

    def test_explicit_zeros_are_kept(self):
        instance = self.path('ct.json')
        run('generate', 'ct-113', '-o', instance)
        out, _ = run('solve', instance, '--tol', '0', '--max-brute', '0', '--no-timings')
        report = json.loads(out)
        self.assertEqual(report['parameters']['tol'], 0.0)
        self.assertEqual(report['parameters']['max_brute'], 0)
        self.assertTrue(all(c.get('reference') == 'lower bound' for c in report['certificates']))

    def test_zero_samples(self):
        instance = self.path('ct.json')
        run('generate', 'ct-113', '-o', instance)
        with self.assertRaises(CommandError) as ctx:
            run('solve', instance, '--samples', '0')
        self.assertEqual(ctx.exception.returncode, EXIT_VALIDATION)
        with self.assertRaises(CommandError) as ctx:
            run('verify', instance, instance, '--tol', '-1')
        self.assertEqual(ctx.exception.returncode, EXIT_VALIDATION)

    def test_wrong_method(self):
        instance = self.path('ct.json')
        run('generate', 'ct-113', '-o', instance)
        with self.assertRaises(CommandError) as ctx:
            run('solve', instance, '--method', 'ufl')
        self.assertEqual(ctx.exception.returncode, EXIT_VALIDATION)


class TradeoffTests(CommandTestCase):
    def setUp(self):
        super().setUp()
        self.mlij = self.path('mlij.json')
        run('generate', 'random-mlij', '--d', '6', '--n', '10', '--seed', '2', '-o', self.mlij)

    def rows(self, text):
        return list(csv.DictReader(io.StringIO(text)))

    def test_alpha_sweep_sizes_do_not_grow(self):
        out, _ = run('tradeoff', self.mlij, '--alphas', '5', '8', '16', '--samples', '20')
        rows = self.rows(out)
        self.assertEqual([float(r['param']) for r in rows], [5.0, 8.0, 16.0])
        sizes = [int(r['portfolio_size']) for r in rows]
        self.assertEqual(sizes, sorted(sizes, reverse=True))
        self.assertTrue(out.startswith('param,portfolio_size,exact_topk_ratio,sampled_ord_ratio,seconds\n'))

    def test_single_value(self):
        out, _ = run('tradeoff', self.mlij, '--alphas', '8', '--samples', '10')
        self.assertEqual(len(self.rows(out)), 1)

    def test_deterministic_and_order_preserving(self):
        args = ('tradeoff', self.mlij, '--alphas', '16', '5', '8', '--samples', '10', '--no-timings')
        serial, _ = run(*args)
        again, _ = run(*args)
        parallel, _ = run(*args, '--jobs', '3')
        self.assertEqual(serial, again)
        self.assertEqual(serial, parallel)

    def test_zero_jobs(self):
        with self.assertRaises(CommandError) as ctx:
            run('tradeoff', self.mlij, '--alphas', '8', '--jobs', '0')
        self.assertEqual(ctx.exception.returncode, EXIT_VALIDATION)

    def test_covering_epsilon_sweep(self):
        instance = self.path('cov.json')
        run('generate', 'random-covering', '--r', '2', '--d', '4', '-o', instance)
        out, _ = run('tradeoff', instance, '--epsilons', '1', '0.5', '--samples', '10')
        rows = self.rows(out)
        self.assertEqual(len(rows), 2)
        for row in rows:
            self.assertLessEqual(float(row['exact_topk_ratio']), 1.0 + float(row['param']) + 1e-6)

    def test_satisfaction_has_nothing_to_sweep(self):
        instance = self.path('ct.json')
        run('generate', 'ct-113', '-o', instance)
        with self.assertRaises(CommandError) as ctx:
            run('tradeoff', instance, '--epsilons', '0.5')
        self.assertEqual(ctx.exception.returncode, EXIT_VALIDATION)


class RunnerTests(SimpleTestCase):
    def test_clustering_report_uses_k_subsets(self):
        instance = load_instance(generate('star-metric', n=4))
        portfolio = solve_instance(instance, 'clustering', k=1, eps=1.0)
        found, notes = certify(instance, portfolio, samples=10)
        self.assertEqual(notes, [])
        self.assertLessEqual(found[0]['ratio'], 2.0 + 1e-9)

    def test_ufl_ratios_are_measured(self):
        instance = load_instance(generate('star-metric', n=4))
        portfolio = solve_instance(instance, 'ufl')
        found, _ = certify(instance, portfolio, samples=10)
        self.assertEqual({c['tag'] for c in found}, {'measured'})

    def test_clustering_over_the_cap_is_sampled_against_lower_bounds(self):
        instance = load_instance(generate('star-metric', n=4))
        portfolio = solve_instance(instance, 'clustering', k=1, eps=1.0)
        with self.assertLogs('cli.runner', level='WARNING'):
            found, notes = certify(instance, portfolio, samples=10, cap=1)
        self.assertEqual([(c['family'], c['tag'], c['reference']) for c in found],
                         [('ordered', 'sampled', 'lower bound')])
        self.assertTrue(math.isfinite(found[0]['ratio']))
        self.assertEqual(len(notes), 2)

    def test_mlij_over_the_cap_keeps_the_relaxation(self):
        instance = load_instance(generate('random-mlij', d=3, n=5))
        portfolio = solve_instance(instance, alpha=8.0)
        found, notes = certify(instance, portfolio, samples=10, cap=1)
        self.assertEqual([c['tag'] for c in found], ['relaxation', 'sampled'])
        self.assertGreaterEqual(found[0]['ratio'], 1.0 - 1e-7)
        self.assertIn('top-k ratio bounded against the LP relaxation instead', notes)

    def test_violations_ignore_sampled_ratios(self):
        portfolio = Portfolio([[1.0]], 2.0)
        report = RunReport('verify', {}, {}, portfolio, [
            {"family": "ordered", "tag": "sampled", "ratio": 5.0},
            {"family": "top-k", "tag": "exact", "ratio": 2.0 * (1 + 1e-7)},
        ])
        self.assertEqual(report.violations(), [])

    def test_jsonable_infinity(self):
        self.assertEqual(jsonable({"r": float('inf'), "v": [1.5]}), {"r": "inf", "v": [1.5]})
