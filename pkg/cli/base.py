# cli/base.py
import json
import logging

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from equinorm.exceptions import ArgumentError
from equinorm.utils import resolve_seed

from cli.reports import error_message, jsonable, returncode_for

logger = logging.getLogger(__name__)


def _given(value, default):
    return default if value is None else value


class EquinormCommand(BaseCommand):
    """
    Shared flags and error mapping. Subclasses implement run(**options);
    library errors become CommandError with the matching exit status.
    """

    def add_common_arguments(self, parser):
        parser.add_argument('--seed', type=int, default=None,
                            help='Random seed (default 0; EQUINORM_SEED overrides it)')
        parser.add_argument('--samples', type=int, default=None,
                            help='Sampled ordered norms per certificate')
        parser.add_argument('--tol', type=float, default=None, help='Numeric tolerance')
        parser.add_argument('--max-brute', type=int, default=None,
                            help='Cap on exhaustive enumeration')
        parser.add_argument('-o', '--output', type=str, default=None,
                            help='Write the result here instead of stdout')
        parser.add_argument('--no-timings', action='store_true',
                            help='Leave timings out of the report')

    def common_options(self, options):
        """Flags with settings defaults filled in; an explicit 0 is kept."""
        common = {
            "seed": resolve_seed(options.get('seed')),
            "samples": _given(options.get('samples'), settings.EQUINORM_SAMPLES),
            "tol": _given(options.get('tol'), settings.EQUINORM_TOL),
            "cap": _given(options.get('max_brute'), settings.EQUINORM_MAX_BRUTE),
        }
        if common["samples"] < 1:
            raise ArgumentError(f"--samples must be at least 1, got {common['samples']}")
        if common["tol"] < 0 or common["cap"] < 0:
            raise ArgumentError("--tol and --max-brute must be nonnegative")
        return common

    def handle(self, *args, **options):
        try:
            return self.run(*args, **options)
        except CommandError:
            raise
        except Exception as e:
            code = returncode_for(e)
            if code is None:
                raise
            logger.error(f"{type(e).__name__}: {error_message(e)}")
            raise CommandError(error_message(e), returncode=code)

    def run(self, *args, **options):
        raise NotImplementedError

    def emit(self, text, output=None, label="result"):
        if output:
            with open(output, 'w', encoding='utf-8', newline='\n') as file:
                file.write(text)
            self.stdout.write(self.style.SUCCESS(f'Wrote {label} to {output}'))
        else:
            self.stdout.write(text, ending='')

    def emit_json(self, data, output=None, label="result"):
        self.emit(json.dumps(jsonable(data), indent=2, ensure_ascii=False) + "\n", output, label)
