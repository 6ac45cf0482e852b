# cli/management/commands/solve.py
import time

from django.conf import settings

from cli.base import EquinormCommand
from cli.instances import read_instance
from cli.reports import RunReport
from cli.runner import certify, solve_instance
from clustering.partial import COVER_FACTOR


class Command(EquinormCommand):
    help = 'Build a portfolio for an instance file and report it with its certificates'

    def add_arguments(self, parser):
        parser.add_argument('instance', type=str, help='Instance JSON file')
        parser.add_argument('--method', type=str, default=None,
                            help='bucket | portfolio | topk | clustering | ufl | exhaustive | lp | greedy')
        parser.add_argument('--alpha', type=float, default=None, help='Target factor for MLIJ portfolios')
        parser.add_argument('--eps', type=float, default=None, help='Slack for covering, bucket and clustering')
        parser.add_argument('--k', type=int, default=None, help='Facilities for clustering')
        parser.add_argument('--mode', choices=sorted(COVER_FACTOR), default=None,
                            help='Partial clustering routine')
        parser.add_argument('--skip-certificates', action='store_true',
                            help='Do not compare against exhaustive optima')
        self.add_common_arguments(parser)

    def run(self, *args, **options):
        common = self.common_options(options)
        instance = read_instance(options['instance'])
        parameters = {
            "method": options.get('method'),
            "alpha": options.get('alpha'),
            "eps": options.get('eps'),
            "k": options.get('k'),
            "mode": options.get('mode'),
            "seed": common['seed'],
            "samples": common['samples'],
            "tol": common['tol'],
            "max_brute": common['cap'],
        }
        if options.get('output'):
            self.stdout.write(self.style.NOTICE(f'Solving {instance.kind} instance {instance.obj}'))

        started = time.perf_counter()
        portfolio = solve_instance(
            instance, options.get('method'), alpha=options.get('alpha'), eps=options.get('eps'),
            k=options.get('k'), mode=options.get('mode'), seed=common['seed'],
            arrangement_samples=settings.EQUINORM_ARRANGEMENT_SAMPLES,
            cluster_cap=settings.EQUINORM_MAX_CLUSTER_SUBSETS,
        )
        timings = {"solve": time.perf_counter() - started}

        certificates, notes = [], []
        if not options.get('skip_certificates'):
            started = time.perf_counter()
            certificates, notes = certify(instance, portfolio, samples=common['samples'],
                                          seed=common['seed'], cap=common['cap'])
            timings["certify"] = time.perf_counter() - started

        report = RunReport("solve", instance.describe(), parameters, portfolio,
                           certificates, timings, notes)
        for warning in notes:
            self.stderr.write(self.style.WARNING(warning))
        self.emit(report.dumps(timings=not options.get('no_timings')), options.get('output'), label="report")
        if options.get('output'):
            self.stdout.write(f'  portfolio of {len(portfolio)} vectors, claimed alpha {portfolio.claimed_alpha}')
