"""
Pydantic models for sweep configuration and per-trial output rows
"""

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.target_generators import TargetFamily


class Mode(str, Enum):
    EMBED = 'embed'
    RAINBOW = 'rainbow'


class Outcome(str, Enum):
    SUCCESS = 'success'
    HALL_FAIL = 'hall_fail'
    HOST_PREP_FAIL = 'host_prep_fail'
    PARTITION_FAIL = 'partition_fail'
    RAINBOW_PROCESS_FAIL = 'rainbow_process_fail'


class PartitionChoice(str, Enum):
    AUTO = 'auto'
    GENERAL = 'general'
    GIRTH7 = 'girth7'


class EpsPolicy(str, Enum):
    FIXED = 'fixed'
    FIT = 'fit'


def parse_p_grid(text: str) -> List[float]:
    """
    Parse "a:b:step" (inclusive) or a comma-separated list into probabilities.

    Values are rounded to 10 decimals so 0.1 + 0.2 prints as 0.3.
    """
    text = text.strip()
    if ':' in text:
        parts = text.split(':')
        if len(parts) != 3:
            raise ValueError(f"grid must look like a:b:step, got {text!r}")
        start, stop, step = (float(x) for x in parts)
        if step <= 0 or stop < start:
            raise ValueError(f"grid {text!r} is empty")
        count = int(round((stop - start) / step)) + 1
        return [round(start + i * step, 10) for i in range(count) if start + i * step <= stop + 1e-9]
    return [round(float(x), 10) for x in text.split(',') if x.strip()]


class ExperimentConfig(BaseModel):
    """One p-sweep: target family, parameters, grid, trials and output."""

    mode: Mode = Field(Mode.EMBED, description="embed or rainbow pipeline")
    target: TargetFamily = Field(TargetFamily.SPANNING_TREE, description="Target family")
    target_path: Optional[str] = Field(None, description="Edge-list file for the file family")
    fixed_target: bool = Field(False, description="Reuse one target for every trial")
    n: int = Field(..., ge=2, description="Vertex count of target and host")
    delta: int = Field(4, ge=2, description="Maximum degree bound")
    d: int = Field(2, ge=2, description="Density bound")
    eps: float = Field(0.1, gt=0, lt=1, description="Top-layer fraction")
    alpha: float = Field(0.5, gt=0, description="Color slack")
    p_grid: List[float] = Field(..., min_length=1, description="Edge probabilities")
    trials: int = Field(10, ge=1, description="Trials per grid point")
    seed: int = Field(0, ge=0, description="Base seed")
    out: str = Field(..., min_length=1, description="CSV output path")
    workers: int = Field(1, ge=1, description="Worker processes")
    partition: PartitionChoice = PartitionChoice.AUTO
    eps_policy: EpsPolicy = EpsPolicy.FIXED
    min_slice: int = Field(1, ge=0, description="Lower bound on host slice size")
    pool_size: Optional[int] = Field(None, ge=1, description="Phase I pool size override")
    tail_size: Optional[int] = Field(None, ge=1, description="Rainbow tail size override")
    out_degree: Optional[int] = Field(None, ge=1, description="Phase II out-degree override")
    timing: bool = Field(True, description="Record wall time; False writes 0")

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "mode": "embed",
                "target": "spanning_tree",
                "n": 400,
                "delta": 4,
                "d": 2,
                "eps": 0.1,
                "p_grid": [0.05, 0.1, 0.2, 0.3],
                "trials": 30,
                "seed": 7,
                "out": "data/sweeps/trees.csv",
            }
        }
    )

    @field_validator('p_grid', mode='before')
    @classmethod
    def parse_grid(cls, v):
        """Accept the a:b:step string form as well as a list"""
        if isinstance(v, str):
            return parse_p_grid(v)
        return v

    @field_validator('p_grid')
    @classmethod
    def check_grid(cls, v):
        for p in v:
            if not 0 < p <= 1:
                raise ValueError(f"grid value {p} outside (0, 1]")
        return [round(p, 10) for p in v]

    @model_validator(mode='after')
    def check_family(self):
        if self.target == TargetFamily.FILE and not self.target_path:
            raise ValueError("target 'file' needs target_path")
        if self.partition == PartitionChoice.GIRTH7 and self.target not in (
            TargetFamily.GIRTH7_SUBDIVIDED, TargetFamily.FILE
        ):
            raise ValueError("girth7 partition needs girth7_subdivided targets or a file")
        return self


class TrialRecord(BaseModel):
    """
    One CSV row. `step` is the failing step, or the last step for successes
    (0 for partition and host-preparation failures).
    """

    p: float
    seed: int
    outcome: Outcome
    step: int = Field(0, ge=0)
    ms: int = Field(0, ge=0)
    trial: int = Field(0, ge=0, exclude=True)
    eps_used: Optional[float] = Field(None, exclude=True)

    def row(self) -> dict:
        return {'p': self.p, 'seed': self.seed, 'outcome': self.outcome.value, 'step': self.step, 'ms': self.ms}
