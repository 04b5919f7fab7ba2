from enum import StrEnum
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.core.config import config as app_config
from src.services.gin.models import CheckpointKind, GinConfig
from src.services.graphs.models import FeatureMode
from src.services.graphs.service import validate_ratios
from src.services.neighbors.models import DistanceMetric
from src.services.nnk.models import KernelSpec


class CheckpointSelector(StrEnum):
    best = 'best'
    last = 'last'
    both = 'both'

    def kinds(self) -> list[CheckpointKind]:
        if self == CheckpointSelector.both:
            return [CheckpointKind.best, CheckpointKind.last]
        return [CheckpointKind(self.value)]


class RunConfig(BaseModel):
    """Everything one run depends on; the defaults are the published hyperparameters."""

    model_config = ConfigDict(frozen=True)

    dataset_path: Path
    output_dir: Path = app_config.DEFAULT_OUTPUT_DIR
    gin: GinConfig = GinConfig()
    kernel: KernelSpec = KernelSpec()
    k_neighbors: int = Field(50, ge=1)
    tau_edge: float = Field(1e-10, ge=0.0)
    solver_tolerance: float = Field(1e-9, gt=0.0)
    metric: DistanceMetric = DistanceMetric.euclidean
    feature_mode: FeatureMode = FeatureMode.one_hot
    split_ratios: tuple[float, float, float] = (0.8, 0.1, 0.1)
    split_seed: int = 0
    checkpoint: CheckpointSelector = CheckpointSelector.both
    workers: int = Field(app_config.NUM_WORKERS, ge=1)
    nnk_every: int | None = Field(None, ge=1)

    @field_validator('split_ratios')
    @classmethod
    def _check_ratios(cls, value: tuple[float, float, float]) -> tuple[float, float, float]:
        return validate_ratios(value)

    def echo(self) -> dict:
        return self.model_dump(mode='json')
