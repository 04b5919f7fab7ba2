from enum import StrEnum
from typing import Self

import numpy as np
from pydantic import model_validator

from src.exceptions import IndexBuildError, ShapeError
from src.services.graphs.models import ArrayModel

NORM_TOLERANCE = 1e-12


class DistanceMetric(StrEnum):
    euclidean = 'euclidean'
    cosine = 'cosine'


class NeighborIndex(ArrayModel):
    """Training-split embeddings searched exhaustively; row order is the tie-break order."""

    vectors: np.ndarray
    labels: np.ndarray
    graph_ids: np.ndarray
    metric: DistanceMetric = DistanceMetric.euclidean
    norms: np.ndarray | None = None

    @model_validator(mode='after')
    def _check_rows(self) -> Self:
        if self.vectors.ndim != 2 or self.vectors.shape[0] < 1:  # noqa: PLR2004
            raise IndexBuildError(f'Index needs at least one row, got shape {self.vectors.shape}')
        if not len(self.labels) == len(self.graph_ids) == self.vectors.shape[0]:
            raise ShapeError('Index labels and graph ids must align with its rows')
        if self.norms is not None and not np.allclose(
            self.norms, np.linalg.norm(self.vectors, axis=1), rtol=0.0, atol=NORM_TOLERANCE
        ):
            raise IndexBuildError('Cached norms do not match the indexed vectors')
        return self

    @property
    def size(self) -> int:
        return int(self.vectors.shape[0])

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])


class NeighborList(ArrayModel):
    ids: np.ndarray
    distances: np.ndarray

    @model_validator(mode='after')
    def _check_order(self) -> Self:
        if len(self.ids) != len(self.distances):
            raise ShapeError('Neighbor ids and distances must align')
        if len(np.unique(self.ids)) != len(self.ids):
            raise ShapeError('Neighbor ids must be distinct')
        if np.any(np.diff(self.distances) < 0):
            raise ShapeError('Neighbor distances must be sorted non-decreasing')
        return self

    def __len__(self) -> int:
        return len(self.ids)
