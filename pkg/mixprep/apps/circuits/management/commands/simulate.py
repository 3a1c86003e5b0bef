from django.conf import settings

from mixprep.utils.commands import PipelineCommand
from mixprep.utils.errors import InvalidInputError
from mixprep.apps.circuits.geometry import enforce_geometry, validate_geometry
from mixprep.apps.circuits.schemas import (
    CircuitSpecPayload,
    GeometryPayload,
    GeometryReportPayload,
    SimulationReportPayload,
)
from mixprep.apps.circuits.simulator import simulate
from mixprep.apps.states.schemas import DensityMatrixPayload


def load_geometry(command, path, kappa=None):
    payload = command.read_model(path, GeometryPayload)
    if kappa is not None:
        payload.distinguishability_kappa = kappa
    elif 'distinguishability_kappa' not in payload.model_fields_set:
        payload.distinguishability_kappa = settings.MIXPREP_DISTINGUISHABILITY_KAPPA
    return payload.to_domain()


class Command(PipelineCommand):
    help = 'Simulate a preparation circuit and post-select on coincidences'

    def add_command_arguments(self, parser):
        parser.add_argument(
            'circuit',
            type=str,
            help='CircuitSpec JSON'
        )
        parser.add_argument(
            '--geometry',
            type=str,
            help='Geometry JSON with path lengths, coherence lengths and window'
        )
        parser.add_argument(
            '--skip-geometry',
            action='store_true',
            help='Report geometry violations without failing, or skip the check when no geometry is given'
        )
        parser.add_argument(
            '--kappa',
            type=float,
            help='Distinguishability factor (default: from the geometry file, then MIXPREP_DISTINGUISHABILITY_KAPPA)'
        )

    def run(self, **options):
        circuit = self.read_model(options['circuit'], CircuitSpecPayload).to_domain()

        if options.get('geometry'):
            geometry = load_geometry(self, options['geometry'], options.get('kappa'))
            if not options.get('skip_geometry'):
                enforce_geometry(geometry)
            geometry_report = GeometryReportPayload.from_violations(validate_geometry(geometry))
        elif options.get('skip_geometry'):
            geometry_report = GeometryReportPayload(valid=True, checked=False)
        else:
            raise InvalidInputError('A geometry file is required unless --skip-geometry is given')

        result = simulate(circuit)
        report = SimulationReportPayload(
            rho=DensityMatrixPayload.from_domain(result.rho),
            F=result.success,
            survival=result.joint.survival,
            coincidence_weights=result.joint.coincidence_weights.tolist(),
            geometry=geometry_report,
        )
        self.emit_model(report, options.get('out'))
