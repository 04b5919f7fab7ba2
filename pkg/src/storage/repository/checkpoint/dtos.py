from pydantic import BaseModel

from src.services.gin.models import CheckpointKind, GinConfig


class ParameterRecord(BaseModel):
    shape: list[int]
    data: list[str]


class CheckpointRecord(BaseModel):
    """On-disk checkpoint; parameter values are hex floats so doubles round-trip exactly."""

    format_version: int
    kind: CheckpointKind
    epoch: int
    val_metric: float | None
    seed: int
    input_dim: int
    num_classes: int
    config: GinConfig
    parameters: dict[str, ParameterRecord]
