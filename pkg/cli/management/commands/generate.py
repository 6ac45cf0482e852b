# cli/management/commands/generate.py
from cli.base import EquinormCommand
from cli.instances import GENERATORS, generate


class Command(EquinormCommand):
    help = 'Write a generated instance file (hard families, lower-bound gadgets and random instances)'

    def add_arguments(self, parser):
        parser.add_argument('kind', choices=sorted(GENERATORS), help='Instance family')
        parser.add_argument('--d', type=int, help='Machines, coordinates or columns')
        parser.add_argument('--n', type=int, help='Jobs, points, elements or cycle half-length')
        parser.add_argument('--r', type=int, help='Covering rows')
        parser.add_argument('--m', type=int, help='Sets or edges')
        parser.add_argument('--L', type=int, help='Levels of the lower-bound and antichain families')
        parser.add_argument('--S', type=int, help='Scale of the antichain family')
        parser.add_argument('--alpha', type=float, help='Target factor of the lower-bound family')
        parser.add_argument('--z-scale', type=str, help="example1 z scale: 'asymptotic', 'tight' or a number")
        self.add_common_arguments(parser)

    def run(self, *args, **options):
        common = self.common_options(options)
        params = {
            key: options.get(key)
            for key in ('d', 'n', 'r', 'm', 'L', 'S', 'alpha', 'z_scale')
        }
        data = generate(options['kind'], seed=common['seed'], **params)
        output = options.get('output')
        self.emit_json(data, output, label=f"{options['kind']} instance")
        if output:
            self.stdout.write(f"  provenance: {data['generator']}")
