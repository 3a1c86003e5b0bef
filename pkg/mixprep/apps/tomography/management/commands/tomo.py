from pathlib import Path

from mixprep.utils.commands import PipelineCommand
from mixprep.utils.errors import InvalidInputError
from mixprep.apps.states.density import fidelity
from mixprep.apps.states.schemas import DensityMatrixPayload
from mixprep.apps.tomography.protocol import (
    exact_frequencies,
    reconstruct_frequencies,
    record_frequencies,
    simulate_counts,
)
from mixprep.apps.tomography.schemas import CountRecordPayload, TomographyReportPayload


def counts_path(out: str) -> Path:
    """<stem>.counts.jsonl next to the primary output"""
    return Path(out).with_suffix('.counts.jsonl')


class Command(PipelineCommand):
    help = 'Simulate nine-setting polarization tomography of a state and reconstruct it'

    def add_command_arguments(self, parser):
        parser.add_argument(
            'input',
            type=str,
            help='Density matrix JSON'
        )
        parser.add_argument(
            '--shots',
            type=int,
            default=100000,
            help='Coincidences per setting; 0 uses exact outcome probabilities (default: 100000)'
        )
        parser.add_argument(
            '--counts',
            type=str,
            help='Counts JSONL path (default: next to --out; not written without either)'
        )

    def run(self, **options):
        rho = self.read_model(options['input'], DensityMatrixPayload).to_domain(tol=self.tol)
        shots = options['shots']
        if shots < 0:
            raise InvalidInputError(f'--shots cannot be negative, got {shots}')

        if shots == 0:
            frequencies = exact_frequencies(rho)
        else:
            records = simulate_counts(rho, shots, self.seed)
            frequencies = record_frequencies(records)
            target = options.get('counts') or (counts_path(options['out']) if options.get('out') else None)
            if target is not None:
                lines = [CountRecordPayload.from_domain(record).model_dump_json() for record in records]
                self.write_auxiliary(Path(target), '\n'.join(lines) + '\n')

        reconstruction = reconstruct_frequencies(frequencies)
        report = TomographyReportPayload(
            rho=DensityMatrixPayload.from_domain(reconstruction.rho),
            fidelity=fidelity(rho, reconstruction.rho),
            clipped_mass=reconstruction.clipped_mass,
            shots_per_setting=shots,
            seed=self.seed if shots else None,
        )
        self.emit_model(report, options.get('out'))
