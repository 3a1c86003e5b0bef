from django.conf import settings

from mixprep.utils.commands import PipelineCommand
from mixprep.apps.states.entanglement import concurrence, eof_from_concurrence, wootters_decompose
from mixprep.apps.states.schemas import DecompositionPayload, DecompositionReportPayload, DensityMatrixPayload


class Command(PipelineCommand):
    help = 'Decompose a two-photon density matrix into pure states sharing its concurrence'

    def add_command_arguments(self, parser):
        parser.add_argument(
            'input',
            type=str,
            help='Density matrix JSON: {"re": 4x4, "im": 4x4}'
        )
        parser.add_argument(
            '--max-iter',
            type=int,
            help='Equalization iteration cap (default: MIXPREP_EQUALIZATION_MAX_ITER)'
        )

    def run(self, **options):
        rho = self.read_model(options['input'], DensityMatrixPayload).to_domain(tol=self.tol)
        max_iter = options.get('max_iter') or settings.MIXPREP_EQUALIZATION_MAX_ITER
        decomposition = wootters_decompose(rho, max_iter=max_iter)

        value = concurrence(rho)
        report = DecompositionReportPayload(
            concurrence=value,
            eof=eof_from_concurrence(value),
            rank=rho.rank(),
            residual=decomposition.residual(rho),
            branches=DecompositionPayload.from_domain(decomposition),
        )
        self.emit_model(report, options.get('out'))
        self.stderr.write(f'{len(decomposition)} branches, concurrence {value:.6f}, EOF {report.eof:.6f}')
