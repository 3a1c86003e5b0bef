from mixprep.utils.commands import PipelineCommand
from mixprep.utils.errors import GeometryViolationError
from mixprep.apps.circuits.geometry import validate_geometry
from mixprep.apps.circuits.management.commands.simulate import load_geometry
from mixprep.apps.circuits.schemas import GeometryReportPayload


class Command(PipelineCommand):
    help = 'Check path lengths and the coincidence window against the decoherence conditions'

    def add_command_arguments(self, parser):
        parser.add_argument(
            'geometry',
            type=str,
            help='Geometry JSON'
        )
        parser.add_argument(
            '--kappa',
            type=float,
            help='Distinguishability factor (default: from the geometry file, then MIXPREP_DISTINGUISHABILITY_KAPPA)'
        )

    def run(self, **options):
        geometry = load_geometry(self, options['geometry'], options.get('kappa'))
        violations = validate_geometry(geometry)
        self.emit_model(GeometryReportPayload.from_violations(violations), options.get('out'))
        if violations:
            for violation in violations:
                self.stderr.write(f'{violation.code.value}: {violation.message}')
            codes = ', '.join(sorted({v.code.value for v in violations}))
            raise GeometryViolationError(f'Geometry violates the decoherence conditions: {codes}', violations)
