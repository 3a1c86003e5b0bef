"""
Shared plumbing for the management commands: global flags, input loading,
output and manifest writing, and the error to exit-code mapping.
"""
import argparse
import json
import logging
import re
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
from django.conf import settings
from django.core.management.base import BaseCommand, CommandError
from pydantic import BaseModel, ValidationError

from mixprep.utils.errors import InvalidInputError, MixprepError
from mixprep.utils.manifest import RunManifest, manifest_path

logger = logging.getLogger(__name__)

_DEGREES = re.compile(r"^\s*([-+0-9.eE]+)\s*deg\s*$")


def parse_angle(text: str) -> float:
    """Radians, or degrees with a 'deg' suffix ('40deg')"""
    match = _DEGREES.match(str(text))
    try:
        if match:
            return float(np.radians(float(match.group(1))))
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid angle {text!r}; use radians or a 'deg' suffix")


def parse_float_list(text: str):
    try:
        return [float(item) for item in str(text).split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid list of numbers {text!r}")


class PipelineCommand(BaseCommand):
    """Base for commands that read input files and write one primary output"""

    def add_arguments(self, parser):
        parser.add_argument(
            '--out',
            type=str,
            help='Write the primary output here (stdout otherwise) and a manifest next to it'
        )
        parser.add_argument(
            '--seed',
            type=int,
            help='Random seed (default: MIXPREP_DEFAULT_SEED)'
        )
        parser.add_argument(
            '--tol',
            type=float,
            help='Physicality tolerance for input states (default: MIXPREP_PHYSICAL_TOL)'
        )
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def handle(self, *args, **options):
        self.tol = options['tol'] if options.get('tol') is not None else settings.MIXPREP_PHYSICAL_TOL
        self.seed = options['seed'] if options.get('seed') is not None else settings.MIXPREP_DEFAULT_SEED
        self.manifest = RunManifest(
            command=self.command_name(),
            seed=self.seed,
            options=self.recorded_options(options),
        )
        try:
            self.run(**options)
        except MixprepError as exc:
            logger.info(f"{self.command_name()} failed with exit code {exc.exit_code}: {exc}")
            raise CommandError(str(exc), returncode=exc.exit_code) from exc
        except ValidationError as exc:
            raise CommandError(f'Invalid input: {exc}', returncode=InvalidInputError.exit_code) from exc

    def run(self, **options):
        raise NotImplementedError

    def command_name(self) -> str:
        return self.__class__.__module__.rsplit('.', 1)[-1].replace('_', '-')

    def recorded_options(self, options: Dict[str, Any]) -> Dict[str, Any]:
        skip = {
            'verbosity', 'settings', 'pythonpath', 'traceback', 'no_color', 'force_color', 'skip_checks', 'stdout', 'stderr'
        }
        return {key: value for key, value in sorted(options.items()) if key not in skip}

    def read_bytes(self, path: str) -> bytes:
        try:
            data = Path(path).read_bytes()
        except OSError as exc:
            raise InvalidInputError(f'Cannot read {path}: {exc}') from exc
        self.manifest.record_input(path, data)
        return data

    def read_json(self, path: str) -> Any:
        try:
            return json.loads(self.read_bytes(path))
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f'{path} is not valid JSON: {exc}') from exc

    def read_model(self, path: str, model: type):
        return model.model_validate(self.read_json(path))

    def emit(self, text: str, out: Optional[str]):
        """Write the primary output and, when it goes to a file, the manifest"""
        if not text.endswith('\n'):
            text += '\n'
        if out is None:
            self.stdout.write(text, ending='')
            return
        Path(out).write_text(text)
        self.manifest.record_output(out)
        manifest = manifest_path(out)
        self.manifest.record_output(str(manifest))
        self.manifest.write(manifest)
        self.stdout.write(self.style.SUCCESS(f'Wrote {out}'))

    def emit_model(self, payload: BaseModel, out: Optional[str]):
        self.emit(payload.model_dump_json(indent=2), out)

    def write_auxiliary(self, path: Path, text: str):
        path.write_text(text)
        self.manifest.record_output(str(path))
        self.stdout.write(f'Wrote {path}')
