import io

from django.conf import settings

from mixprep.utils.commands import PipelineCommand, parse_angle, parse_float_list
from mixprep.apps.designer.sweeps import (
    DEFAULT_ALPHA,
    DEFAULT_K1,
    DEFAULT_K2,
    RATIO_RANGE,
    SweepAxis,
    sweep,
)


class Command(PipelineCommand):
    help = 'Tabulate two-state success probabilities along eta1, the mixing ratio A, or beta'

    def add_command_arguments(self, parser):
        parser.add_argument(
            '--axis',
            choices=[axis.value for axis in SweepAxis],
            default=SweepAxis.A.value,
            help='Swept parameter (default: A)'
        )
        parser.add_argument(
            '--k1',
            type=float,
            default=DEFAULT_K1,
            help=f'Raise probability k1 (default: {DEFAULT_K1})'
        )
        parser.add_argument(
            '--k2',
            type=float,
            default=DEFAULT_K2,
            help=f'Lower probability k2 (default: {DEFAULT_K2})'
        )
        parser.add_argument(
            '--alpha',
            type=parse_angle,
            default=DEFAULT_ALPHA,
            help=f'Larger Schmidt angle for the beta axis (default: {DEFAULT_ALPHA})'
        )
        parser.add_argument(
            '--A-list',
            '--A',
            dest='A_list',
            type=parse_float_list,
            help='Comma-separated mixing ratios, one curve pair each (eta1 and beta axes)'
        )
        parser.add_argument(
            '--grid-n',
            type=int,
            help='Grid points (default: MIXPREP_SWEEP_POINTS)'
        )
        parser.add_argument(
            '--linear',
            action='store_true',
            help='Linear A grid instead of logarithmic'
        )
        parser.add_argument(
            '--A-min',
            dest='A_min',
            type=float,
            help=f'Lower end of the A grid (default: {RATIO_RANGE[0]:g}, or 0 with --linear)'
        )
        parser.add_argument(
            '--A-max',
            dest='A_max',
            type=float,
            help=f'Upper end of the A grid (default: {RATIO_RANGE[1]:g})'
        )

    def run(self, **options):
        linear = options.get('linear', False)
        low = options.get('A_min')
        if low is None:
            low = 0.0 if linear else RATIO_RANGE[0]
        high = options.get('A_max')
        if high is None:
            high = RATIO_RANGE[1]

        table = sweep(
            options['axis'],
            points=options.get('grid_n') or settings.MIXPREP_SWEEP_POINTS,
            k1=options['k1'],
            k2=options['k2'],
            alpha=options['alpha'],
            ratios=options.get('A_list'),
            log=not linear,
            ratio_range=(low, high),
        )
        stream = io.StringIO()
        table.write_csv(stream)
        self.emit(stream.getvalue(), options.get('out'))
