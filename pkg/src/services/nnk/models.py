from enum import StrEnum
from typing import Self

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.exceptions import ShapeError
from src.services.graphs.models import ArrayModel

SYMMETRY_TOLERANCE = 1e-12


class KernelKind(StrEnum):
    cosine_shifted = 'cosine_shifted'
    rbf = 'rbf'


class KernelSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: KernelKind = KernelKind.cosine_shifted
    bandwidth: float = Field(1.0, gt=0.0)
    jitter: float = Field(1e-8, gt=0.0)


class NnkProblem(ArrayModel):
    """Kernelized reconstruction of one query from its candidate neighbors."""

    gram: np.ndarray
    similarities: np.ndarray
    neighbor_rows: np.ndarray
    neighbor_graph_ids: np.ndarray
    neighbor_labels: np.ndarray

    @model_validator(mode='after')
    def _check_gram(self) -> Self:
        size = len(self.similarities)
        if self.gram.shape != (size, size):
            raise ShapeError(f'Gram matrix shape {self.gram.shape} does not match {size} neighbors')
        if not (len(self.neighbor_rows) == len(self.neighbor_graph_ids) == len(self.neighbor_labels) == size):
            raise ShapeError('Neighbor rows, graph ids and labels must align with the similarities')
        if not np.allclose(self.gram, self.gram.T, rtol=0.0, atol=SYMMETRY_TOLERANCE):
            raise ShapeError('Gram matrix must be symmetric')
        return self

    @property
    def size(self) -> int:
        return len(self.similarities)


class NnkSolution(ArrayModel):
    theta: np.ndarray
    active_set: np.ndarray
    weights: np.ndarray
    objective: float
    neighbor_labels: np.ndarray
    iterations: int = 0
    kkt_residual: float = 0.0

    @property
    def num_active(self) -> int:
        return len(self.active_set)


class NeighborAttribution(BaseModel):
    id: int
    label: int
    weight: float
    similarity: float


class Explanation(BaseModel):
    query_id: int
    predicted: int
    probs: list[float]
    neighbors: list[NeighborAttribution]
    fallback: bool = False


class NnkDecision(ArrayModel):
    query_id: int
    problem: NnkProblem
    solution: NnkSolution
    probabilities: np.ndarray
    predicted: int
    fallback: bool = False
    kri_pairs: int = 0
    kri_violations: int = 0
