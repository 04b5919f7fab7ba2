from enum import StrEnum
from typing import Any, Self

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.exceptions import InvalidInput, ShapeError
from src.services.graphs.models import ArrayModel, Split


class EpsilonMode(StrEnum):
    learnable = 'learnable'
    fixed = 'fixed'


class PoolingKind(StrEnum):
    sum = 'sum'
    mean = 'mean'


class ActivationKind(StrEnum):
    relu = 'relu'
    identity = 'identity'


class CheckpointKind(StrEnum):
    best = 'best'
    last = 'last'


class GinConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    num_layers: int = Field(5, ge=1)
    hidden_dim: int = Field(128, ge=1)
    mlp_depth: int = Field(2, ge=1)
    dropout: float = Field(0.5, ge=0.0, lt=1.0)
    epsilon_mode: EpsilonMode = EpsilonMode.learnable
    epsilon_value: float = 0.0
    pooling: PoolingKind = PoolingKind.sum
    activation: ActivationKind = ActivationKind.relu
    learning_rate: float = Field(1e-3, gt=0.0)
    batch_size: int = Field(128, ge=1)
    epochs: int = Field(100, ge=0)
    seed: int = 0


def weight_name(layer: int, linear: int) -> str:
    return f'layers.{layer}.linear.{linear}.weight'


def bias_name(layer: int, linear: int) -> str:
    return f'layers.{layer}.linear.{linear}.bias'


def epsilon_name(layer: int) -> str:
    return f'layers.{layer}.epsilon'


HEAD_WEIGHT = 'head.weight'
HEAD_BIAS = 'head.bias'


class GinModel(BaseModel):
    """All learnable tensors of the encoder and its softmax head, keyed by dotted name.

    Weights are stored as ``(out, in)`` and applied to row-major node matrices as ``H @ W.T + b``.
    Each ``epsilon`` is a length-1 array so every parameter can be updated in place.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    config: GinConfig
    input_dim: int
    num_classes: int
    parameters: dict[str, np.ndarray]

    @model_validator(mode='after')
    def _check_shapes(self) -> Self:
        for name, expected in self.expected_shapes().items():
            if name not in self.parameters:
                raise ShapeError(f'Missing parameter {name}')
            if self.parameters[name].shape != expected:
                raise ShapeError(f'Parameter {name} has shape {self.parameters[name].shape}, expected {expected}')
        return self

    def expected_shapes(self) -> dict[str, tuple[int, ...]]:
        shapes: dict[str, tuple[int, ...]] = {}
        width = self.config.hidden_dim
        for layer in range(self.config.num_layers):
            fan_in = self.input_dim if layer == 0 else width
            for linear in range(self.config.mlp_depth):
                shapes[weight_name(layer, linear)] = (width, fan_in if linear == 0 else width)
                shapes[bias_name(layer, linear)] = (width,)
            shapes[epsilon_name(layer)] = (1,)
        shapes[HEAD_WEIGHT] = (self.num_classes, width)
        shapes[HEAD_BIAS] = (self.num_classes,)
        return shapes

    @classmethod
    def initialize(cls, config: GinConfig, input_dim: int, num_classes: int, rng: np.random.Generator) -> 'GinModel':
        """Glorot-uniform weights, zero biases, epsilon at 0 (or the fixed value)."""
        if input_dim < 1:
            raise InvalidInput('Input feature dimension must be positive; assign node features first')
        if num_classes < 2:  # noqa: PLR2004
            raise InvalidInput(f'Need at least two classes, got {num_classes}')

        template = cls.model_construct(config=config, input_dim=input_dim, num_classes=num_classes, parameters={})
        epsilon = config.epsilon_value if config.epsilon_mode == EpsilonMode.fixed else 0.0
        parameters: dict[str, np.ndarray] = {}
        for name, shape in template.expected_shapes().items():
            if name.endswith('.weight'):
                fan_out, fan_in = shape
                limit = np.sqrt(6.0 / (fan_in + fan_out))
                parameters[name] = rng.uniform(-limit, limit, size=shape)
            elif name.endswith('.epsilon'):
                parameters[name] = np.full(shape, epsilon)
            else:
                parameters[name] = np.zeros(shape)
        return cls(config=config, input_dim=input_dim, num_classes=num_classes, parameters=parameters)

    def trainable_names(self) -> list[str]:
        if self.config.epsilon_mode == EpsilonMode.fixed:
            return [name for name in self.parameters if not name.endswith('.epsilon')]
        return list(self.parameters)

    def clone(self) -> 'GinModel':
        return self.model_copy(update={'parameters': {name: value.copy() for name, value in self.parameters.items()}})


class AdamState(ArrayModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=False)

    step: int = 0
    first_moments: dict[str, np.ndarray] = Field(default_factory=dict)
    second_moments: dict[str, np.ndarray] = Field(default_factory=dict)


class EpochRecord(BaseModel):
    epoch: int
    train_loss: float
    val_accuracy: float
    is_best: bool
    extra: dict[str, float] = Field(default_factory=dict)


class TrainState(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    model: GinModel
    optimizer: AdamState
    epoch: int = 0
    best_val_metric: float | None = None
    best_epoch: int | None = None
    best_checkpoint: GinModel | None = None
    rng_state: dict[str, Any] = Field(default_factory=dict)
    history: list[EpochRecord] = Field(default_factory=list)

    def checkpoint(self, which: CheckpointKind) -> GinModel | None:
        return self.best_checkpoint if which == CheckpointKind.best else self.model


class EmbeddingSet(ArrayModel):
    vectors: np.ndarray
    labels: np.ndarray
    graph_ids: np.ndarray
    splits: tuple[Split, ...]
    checkpoint: CheckpointKind | None = None

    @model_validator(mode='after')
    def _check_rows(self) -> Self:
        rows = self.vectors.shape[0]
        if self.vectors.ndim != 2:  # noqa: PLR2004
            raise ShapeError(f'Embedding matrix must be 2-D, got shape {self.vectors.shape}')
        if not (len(self.labels) == len(self.graph_ids) == len(self.splits) == rows):
            raise ShapeError('Embedding rows, labels, graph ids and split tags must align')
        if not np.all(np.isfinite(self.vectors)):
            raise ShapeError('Embedding matrix contains non-finite values')
        return self

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    def rows(self, split: Split) -> np.ndarray:
        return np.flatnonzero(np.fromiter((tag == split for tag in self.splits), dtype=bool, count=len(self.splits)))
