# cli/management/commands/tradeoff.py
import csv
import io
import math

from django.conf import settings

from cli.base import EquinormCommand
from cli.instances import read_instance
from cli.runner import sweep_parameter, tradeoff_rows
from clustering.partial import COVER_FACTOR
from equinorm.exceptions import ArgumentError

FIELDNAMES = ["param", "portfolio_size", "exact_topk_ratio", "sampled_ord_ratio", "seconds"]


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return "inf" if math.isinf(value) else repr(value)
    return str(value)


class Command(EquinormCommand):
    help = 'Sweep alpha or epsilon over an instance and write portfolio size against measured ratio as CSV'

    def add_arguments(self, parser):
        parser.add_argument('instance', type=str, help='Instance JSON file')
        sweep = parser.add_mutually_exclusive_group(required=True)
        sweep.add_argument('--alphas', type=float, nargs='+', help='Target factors (MLIJ instances)')
        sweep.add_argument('--epsilons', type=float, nargs='+', help='Slacks (all other instances)')
        parser.add_argument('--method', type=str, default=None, help='Portfolio method, as for solve')
        parser.add_argument('--k', type=int, default=None, help='Facilities for clustering')
        parser.add_argument('--mode', choices=sorted(COVER_FACTOR), default=None)
        parser.add_argument('--jobs', type=int, default=None, help='Sweep cells run in parallel')
        self.add_common_arguments(parser)

    def run(self, *args, **options):
        common = self.common_options(options)
        instance = read_instance(options['instance'])
        name = sweep_parameter(instance.kind)
        values = options.get('alphas') if name == "alpha" else options.get('epsilons')
        if not values:
            flag = '--alphas' if name == "alpha" else '--epsilons'
            raise ArgumentError(f"{instance.kind} instances sweep {name}: pass {flag}")
        jobs = options.get('jobs')
        jobs = settings.EQUINORM_JOBS if jobs is None else jobs
        if jobs < 1:
            raise ArgumentError(f"--jobs must be at least 1, got {jobs}")

        rows = tradeoff_rows(
            instance, values, method=options.get('method'), k=options.get('k'), mode=options.get('mode'),
            samples=common['samples'], seed=common['seed'], cap=common['cap'],
            arrangement_samples=settings.EQUINORM_ARRANGEMENT_SAMPLES, jobs=jobs,
        )
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=FIELDNAMES, lineterminator='\n')
        writer.writeheader()
        for row in rows:
            if options.get('no_timings'):
                row["seconds"] = None
            writer.writerow({key: _cell(row[key]) for key in FIELDNAMES})
        self.emit(buffer.getvalue(), options.get('output'), label=f"{len(rows)} trade-off rows")
