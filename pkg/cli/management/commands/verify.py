# cli/management/commands/verify.py
import time

from cli.base import EquinormCommand
from cli.instances import read_instance, read_json
from cli.reports import FAMILIES, VIOLATION_TOL, RunReport, select_family
from cli.runner import certify
from equinorm.exceptions import CertificateViolation
from portfolio.forms import portfolio_from_json


class Command(EquinormCommand):
    help = 'Certify a portfolio file against an instance; exits 4 if an exact ratio exceeds the claim'

    def add_arguments(self, parser):
        parser.add_argument('instance', type=str, help='Instance JSON file')
        parser.add_argument('portfolio', type=str, help='Portfolio JSON file or a solve report')
        parser.add_argument('--family', choices=sorted(FAMILIES), default='all',
                            help='Certificates to check: top-k, ordered norms, or all')
        self.add_common_arguments(parser)

    def run(self, *args, **options):
        common = self.common_options(options)
        instance = read_instance(options['instance'])
        data = read_json(options['portfolio'])
        if isinstance(data, dict) and isinstance(data.get('portfolio'), dict):
            data = data['portfolio']
        portfolio = portfolio_from_json(data)

        started = time.perf_counter()
        certificates, notes = certify(instance, portfolio, samples=common['samples'],
                                      seed=common['seed'], cap=common['cap'])
        certificates = select_family(certificates, options['family'])
        timings = {"certify": time.perf_counter() - started}
        parameters = {"portfolio": options['portfolio'], "family": options['family'], "seed": common['seed'],
                      "samples": common['samples'], "tol": common['tol'], "max_brute": common['cap']}
        report = RunReport("verify", instance.describe(), parameters, portfolio,
                           certificates, timings, notes)
        for warning in notes:
            self.stderr.write(self.style.WARNING(warning))
        self.emit(report.dumps(timings=not options.get('no_timings')), options.get('output'), label="report")

        violations = report.violations(tol=max(VIOLATION_TOL, common['tol']))
        if violations:
            worst = max(c["ratio"] for c in violations)
            self.stderr.write(self.style.ERROR(
                f'{len(violations)} exact certificate(s) exceed the claimed alpha '
                f'{portfolio.claimed_alpha}: worst ratio {worst:.6g}'
            ))
            raise CertificateViolation(
                f'certificate violation: {worst:.6g} > {portfolio.claimed_alpha}',
                measured=worst, claimed=portfolio.claimed_alpha,
            )
        if portfolio.numeric_alpha is None:
            self.stderr.write(self.style.WARNING(
                f'claimed alpha {portfolio.claimed_alpha!r} is symbolic; ratios are reported only'
            ))
        elif options.get('output'):
            self.stdout.write(self.style.SUCCESS('All exact certificates within the claimed alpha'))
