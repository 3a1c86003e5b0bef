from mixprep.utils.commands import PipelineCommand, parse_angle
from mixprep.utils.errors import InvalidInputError
from mixprep.apps.designer.optimizer import InitialState
from mixprep.apps.designer.schemas import DesignReportPayload
from mixprep.apps.designer.services import PreparationDesigner
from mixprep.apps.states.schemas import DecompositionPayload, DensityMatrixPayload


class Command(PipelineCommand):
    help = 'Design an optimal preparation circuit for a target state and check it by simulation'

    def add_command_arguments(self, parser):
        parser.add_argument(
            'input',
            nargs='?',
            type=str,
            help='Density matrix JSON (general scheme only)'
        )
        parser.add_argument(
            '--scheme',
            choices=['general', 'two-state'],
            default='general',
            help='Four-path scheme for any state, or the two-path scheme for p|psi><psi| + (1-p)|phi><phi|'
        )
        parser.add_argument(
            '--p',
            type=float,
            help='Weight of the |Phi(alpha)> component (two-state)'
        )
        parser.add_argument(
            '--alpha',
            type=parse_angle,
            help='Larger Schmidt angle, radians or e.g. 40deg (two-state)'
        )
        parser.add_argument(
            '--beta',
            type=parse_angle,
            help='Smaller Schmidt angle, radians or e.g. 20deg (two-state)'
        )
        parser.add_argument(
            '--initial',
            choices=['auto', 'phi_alpha', 'phi_beta'],
            default='auto',
            help='Initial source state (default: chosen by threshold)'
        )
        parser.add_argument(
            '--decomposition',
            type=str,
            help='Decomposition JSON to use instead of the equal-concurrence one (general)'
        )
        parser.add_argument(
            '--coupler-efficiency',
            type=float,
            default=1.0,
            help='Transmission of the passive couplers, scales every path probability (default: 1)'
        )

    def run(self, **options):
        designer = PreparationDesigner(coupler_efficiency=options.get('coupler_efficiency', 1.0))

        if options['scheme'] == 'general':
            if not options.get('input'):
                raise InvalidInputError('The general scheme needs a density matrix file')
            rho = self.read_model(options['input'], DensityMatrixPayload).to_domain(tol=self.tol)
            decomposition = None
            if options.get('decomposition'):
                decomposition = self.read_model(options['decomposition'], DecompositionPayload).to_domain()
            report = designer.general(rho, decomposition)
        else:
            missing = [flag for flag in ('p', 'alpha', 'beta') if options.get(flag) is None]
            if missing:
                raise InvalidInputError(f'The two-state scheme needs --{", --".join(missing)}')
            initial = None if options['initial'] == 'auto' else InitialState(options['initial'])
            report = designer.two_state(options['alpha'], options['beta'], options['p'], initial)

        self.emit_model(DesignReportPayload.from_domain(report), options.get('out'))
        self.stderr.write(
            f'{report.scheme} design: F = {report.simulated_success:.12f}, '
            f'fidelity residual {report.fidelity_residual:.3e}'
        )
