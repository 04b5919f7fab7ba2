from collections import Counter
from pathlib import Path

import numpy as np

from src.core.logger import get_logger
from src.exceptions import InvalidInput
from src.services.graphs.models import DatasetSummary, FeatureMode, Graph, GraphDataset, Split
from src.services.graphs.tu_format import parse_tu_dataset

logger = get_logger(__name__)

RATIO_TOLERANCE = 1e-9
MIN_CLASS_SIZE_FOR_SPLIT = 3


def assign_degree_features(dataset: GraphDataset, mode: FeatureMode = FeatureMode.one_hot) -> GraphDataset:
    """Give every node a feature built from its degree; ``D_max`` is taken over the whole dataset."""
    if not dataset.graphs:
        raise InvalidInput('Cannot assign degree features to an empty dataset')

    degrees = [graph.degrees() for graph in dataset.graphs]
    max_degree = max(int(degree.max(initial=0)) for degree in degrees)

    if mode == FeatureMode.one_hot:
        identity = np.eye(max_degree + 1)
        pairs = zip(dataset.graphs, degrees, strict=True)
        graphs = tuple(graph.with_features(identity[degree]) for graph, degree in pairs)
        feature_dim = max_degree + 1
    else:
        scale = 1.0 / max_degree if max_degree else 0.0
        graphs = tuple(
            graph.with_features(degree.reshape(-1, 1) * scale)
            for graph, degree in zip(dataset.graphs, degrees, strict=True)
        )
        feature_dim = 1

    return dataset.model_copy(
        update={'graphs': graphs, 'feature_dim': feature_dim, 'feature_mode': mode, 'max_degree': max_degree}
    )


def validate_ratios(ratios: tuple[float, float, float]) -> tuple[float, float, float]:
    if len(ratios) != 3:  # noqa: PLR2004
        raise InvalidInput(f'Split ratios need three parts (train, val, test), got {len(ratios)}')
    if any(ratio <= 0 for ratio in ratios):
        raise InvalidInput(f'Split ratios must be positive, got {ratios}')
    if abs(sum(ratios) - 1.0) > RATIO_TOLERANCE:
        raise InvalidInput(f'Split ratios must sum to 1, got {ratios} (sum {sum(ratios)})')
    return float(ratios[0]), float(ratios[1]), float(ratios[2])


def _round_half_up(value: float) -> int:
    return int(np.floor(value + 0.5))


def stratified_split(
    dataset: GraphDataset,
    ratios: tuple[float, float, float] = (0.8, 0.1, 0.1),
    seed: int = 0,
) -> GraphDataset:
    """Per-class shuffle, then proportional train/val/test assignment.

    Every class is spread evenly over a single ranking (position within its shuffled class,
    normalized by class size), so any prefix of the ranking keeps the class proportions to
    within one graph. The ranking is then cut at the rounded train and val sizes.
    """
    ratios = validate_ratios(ratios)
    rng = np.random.default_rng(seed)
    labels = dataset.labels()
    tags = [Split.train] * len(dataset)

    ranking: list[tuple[float, int, int]] = []
    for class_index in range(dataset.num_classes):
        members = np.flatnonzero(labels == class_index)
        if members.size == 0:
            continue
        if members.size < MIN_CLASS_SIZE_FOR_SPLIT:
            logger.warning(
                'Class is smaller than the number of split parts, assigning all graphs to train',
                class_index=class_index,
                count=int(members.size),
            )
            continue
        shuffled = rng.permutation(members)
        ranking.extend(
            ((position + 0.5) / members.size, class_index, int(graph_id)) for position, graph_id in enumerate(shuffled)
        )

    ranking.sort()
    total = len(ranking)
    num_train = min(_round_half_up(total * ratios[0]), total)
    num_val = min(_round_half_up(total * ratios[1]), total - num_train)
    for position, (_, _, graph_id) in enumerate(ranking):
        if position < num_train:
            tags[graph_id] = Split.train
        elif position < num_train + num_val:
            tags[graph_id] = Split.val
        else:
            tags[graph_id] = Split.test

    train_classes = {labels[graph_id] for _, _, graph_id in ranking if tags[graph_id] == Split.train}
    for _, class_index, graph_id in ranking:
        if class_index not in train_classes:
            tags[graph_id] = Split.train
            train_classes.add(class_index)

    result = dataset.model_copy(update={'splits': tuple(tags), 'split_ratios': ratios, 'split_seed': seed})
    counts = Counter(tags)
    logger.info(
        'Dataset split',
        seed=seed,
        train=counts[Split.train],
        val=counts[Split.val],
        test=counts[Split.test],
    )
    return result


def dataset_summary(dataset: GraphDataset) -> DatasetSummary:
    labels = dataset.labels()
    histogram = np.bincount(labels, minlength=dataset.num_classes) if len(labels) else np.zeros(dataset.num_classes)
    max_degree = dataset.max_degree
    if max_degree is None:
        max_degree = max((int(graph.degrees().max(initial=0)) for graph in dataset.graphs), default=0)

    split_counts = None
    if dataset.splits is not None:
        counts = Counter(dataset.splits)
        split_counts = {split: counts[split] for split in Split}

    return DatasetSummary(
        name=dataset.name,
        num_graphs=len(dataset),
        num_nodes=sum(graph.num_nodes for graph in dataset.graphs),
        num_edges=sum(graph.num_edges for graph in dataset.graphs),
        num_classes=dataset.num_classes,
        class_histogram={str(value): int(count) for value, count in zip(dataset.label_values, histogram, strict=True)},
        label_values=list(dataset.label_values),
        max_degree=max_degree,
        feature_dim=dataset.feature_dim,
        feature_mode=dataset.feature_mode,
        has_node_labels=dataset.has_node_labels,
        split_counts=split_counts,
        split_seed=dataset.split_seed,
    )


def disjoint_union(first: Graph, second: Graph, graph_id: int | None = None) -> Graph:
    if first.feature_dim != second.feature_dim:
        raise InvalidInput(f'Cannot join graphs with feature dims {first.feature_dim} and {second.feature_dim}')
    return Graph.from_pairs(
        graph_id=first.id if graph_id is None else graph_id,
        num_nodes=first.num_nodes + second.num_nodes,
        pairs=np.vstack([first.edges, second.edges + first.num_nodes]),
        label=first.label,
        node_features=np.vstack([first.node_features, second.node_features]),
    )


def permute_nodes(graph: Graph, permutation: np.ndarray) -> Graph:
    """Relabel node ``i`` as ``permutation[i]``, carrying its features along."""
    permutation = np.asarray(permutation, dtype=np.int64)
    if sorted(permutation.tolist()) != list(range(graph.num_nodes)):
        raise InvalidInput(f'Not a permutation of 0..{graph.num_nodes - 1}')
    features = np.empty_like(graph.node_features)
    features[permutation] = graph.node_features
    return Graph.from_pairs(
        graph_id=graph.id,
        num_nodes=graph.num_nodes,
        pairs=permutation[graph.edges],
        label=graph.label,
        node_features=features,
    )


class DatasetService:
    """Parse, featurize and split a TU dataset in one deterministic pass."""

    def __init__(
        self,
        feature_mode: FeatureMode = FeatureMode.one_hot,
        ratios: tuple[float, float, float] = (0.8, 0.1, 0.1),
        seed: int = 0,
    ):
        self._feature_mode = feature_mode
        self._ratios = ratios
        self._seed = seed

    def load(self, directory: Path | str) -> GraphDataset:
        dataset = parse_tu_dataset(directory)
        return self.prepare(dataset)

    def prepare(self, dataset: GraphDataset) -> GraphDataset:
        featurized = assign_degree_features(dataset, self._feature_mode)
        return stratified_split(featurized, self._ratios, self._seed)
