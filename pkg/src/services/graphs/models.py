from enum import StrEnum
from typing import Self

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from src.exceptions import InvalidInput


class Split(StrEnum):
    train = 'train'
    val = 'val'
    test = 'test'


class FeatureMode(StrEnum):
    one_hot = 'one_hot'
    scalar = 'scalar'


class ArrayModel(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


def _readonly(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


class Graph(ArrayModel):
    """Undirected graph with 0-based local node ids; each edge stored once as (u, v) with u < v."""

    id: int
    num_nodes: int
    edges: np.ndarray
    node_features: np.ndarray
    label: int
    node_labels: np.ndarray | None = None

    @model_validator(mode='after')
    def _check_structure(self) -> Self:
        if self.edges.ndim != 2 or self.edges.shape[1] != 2:  # noqa: PLR2004
            raise InvalidInput(f'Graph {self.id}: edges must have shape (E, 2), got {self.edges.shape}')
        if self.edges.size:
            if self.edges.min() < 0 or self.edges.max() >= self.num_nodes:
                raise InvalidInput(f'Graph {self.id}: edge endpoint outside 0..{self.num_nodes - 1}')
            if np.any(self.edges[:, 0] >= self.edges[:, 1]):
                raise InvalidInput(f'Graph {self.id}: edges must be normalized as u < v without self-loops')
            if len(np.unique(self.edges, axis=0)) != len(self.edges):
                raise InvalidInput(f'Graph {self.id}: duplicate edges')
        if self.node_features.ndim != 2 or self.node_features.shape[0] != self.num_nodes:  # noqa: PLR2004
            raise InvalidInput(
                f'Graph {self.id}: node_features must have {self.num_nodes} rows, got {self.node_features.shape}'
            )
        return self

    @classmethod
    def from_pairs(  # noqa: PLR0913
        cls,
        graph_id: int,
        num_nodes: int,
        pairs: np.ndarray | list[tuple[int, int]],
        label: int,
        node_features: np.ndarray | None = None,
        node_labels: np.ndarray | None = None,
    ) -> 'Graph':
        """Drop self-loops and collapse both directions of an edge into one (min, max) pair."""
        pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        pairs = pairs[pairs[:, 0] != pairs[:, 1]]
        edges = np.unique(np.sort(pairs, axis=1), axis=0) if len(pairs) else np.empty((0, 2), dtype=np.int64)
        features = node_features if node_features is not None else np.zeros((num_nodes, 0))
        return cls(
            id=graph_id,
            num_nodes=num_nodes,
            edges=_readonly(edges.astype(np.int64)),
            node_features=_readonly(np.array(features, dtype=np.float64)),
            label=label,
            node_labels=node_labels,
        )

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])

    @property
    def feature_dim(self) -> int:
        return int(self.node_features.shape[1])

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.num_nodes)

    def with_features(self, features: np.ndarray) -> 'Graph':
        return self.model_copy(update={'node_features': _readonly(np.array(features, dtype=np.float64))})


class GraphDataset(ArrayModel):
    graphs: tuple[Graph, ...]
    num_classes: int
    feature_dim: int
    label_values: tuple[int, ...]
    name: str = ''
    has_node_labels: bool = False
    feature_mode: FeatureMode | None = None
    max_degree: int | None = None
    splits: tuple[Split, ...] | None = None
    split_ratios: tuple[float, float, float] | None = None
    split_seed: int | None = None

    @model_validator(mode='after')
    def _check_consistency(self) -> Self:
        for position, graph in enumerate(self.graphs):
            if graph.id != position:
                raise InvalidInput(f'Graph at position {position} carries id {graph.id}')
            if not 0 <= graph.label < self.num_classes:
                raise InvalidInput(f'Graph {graph.id}: label {graph.label} outside 0..{self.num_classes - 1}')
            if graph.feature_dim != self.feature_dim:
                raise InvalidInput(f'Graph {graph.id}: feature dim {graph.feature_dim} != {self.feature_dim}')
        if len(self.label_values) != self.num_classes:
            raise InvalidInput('label_values must list one original value per class')
        if self.splits is not None and len(self.splits) != len(self.graphs):
            raise InvalidInput('Split tags must cover every graph exactly once')
        return self

    def __len__(self) -> int:
        return len(self.graphs)

    def labels(self) -> np.ndarray:
        return np.fromiter((graph.label for graph in self.graphs), dtype=np.int64, count=len(self.graphs))

    def indices(self, split: Split) -> list[int]:
        if self.splits is None:
            raise InvalidInput('Dataset has not been split yet')
        return [graph_id for graph_id, tag in enumerate(self.splits) if tag == split]

    def subset(self, split: Split) -> list[Graph]:
        return [self.graphs[graph_id] for graph_id in self.indices(split)]


class DatasetSummary(BaseModel):
    name: str
    num_graphs: int
    num_nodes: int
    num_edges: int
    num_classes: int
    class_histogram: dict[str, int]
    label_values: list[int]
    max_degree: int
    feature_dim: int
    feature_mode: FeatureMode | None
    has_node_labels: bool
    split_counts: dict[Split, int] | None = None
    split_seed: int | None = None
