from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field

from mixprep.apps.states.schemas import DensityMatrixPayload

from .protocol import CountRecord


class CountRecordPayload(BaseModel):
    """One JSON line of a counts file"""

    model_config = ConfigDict(extra="forbid")

    setting: str
    counts: List[int] = Field(min_length=4, max_length=4)
    total: int
    seed: Optional[int] = None

    def to_domain(self) -> CountRecord:
        return CountRecord(setting=self.setting, counts=tuple(self.counts), total=self.total, seed=self.seed)

    @classmethod
    def from_domain(cls, record: CountRecord) -> "CountRecordPayload":
        return cls(setting=record.setting, counts=list(record.counts), total=record.total, seed=record.seed)


class TomographyReportPayload(BaseModel):
    rho: DensityMatrixPayload
    fidelity: float
    clipped_mass: float
    shots_per_setting: int
    seed: Optional[int] = None
