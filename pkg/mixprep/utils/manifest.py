"""Run manifests: what a command read, with which options, and what it wrote."""
import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

import mixprep

logger = logging.getLogger(__name__)


def sha256_digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


class RunManifest(BaseModel):
    command: str
    tool_version: str = mixprep.__version__
    seed: Optional[int] = None
    inputs: Dict[str, str] = Field(default_factory=dict)
    options: Dict[str, Any] = Field(default_factory=dict)
    outputs: List[str] = Field(default_factory=list)

    def record_input(self, path: str, data: bytes):
        self.inputs[str(path)] = sha256_digest(data)

    def record_output(self, path: str):
        if str(path) not in self.outputs:
            self.outputs.append(str(path))

    def dumps(self) -> str:
        return json.dumps(self.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"

    def write(self, path: Path):
        path = Path(path)
        path.write_text(self.dumps())
        logger.info(f"Wrote manifest {path} listing {len(self.outputs)} outputs")


def manifest_path(out: str) -> Path:
    return Path(f"{out}.manifest.json")
