import numpy as np

from src.exceptions import InvalidInput
from src.services.graphs.models import Graph, GraphDataset

CYCLE_LABEL = 0
STAR_LABEL = 1
MIN_CYCLE_NODES = 3


def cycle_edges(num_nodes: int) -> np.ndarray:
    nodes = np.arange(num_nodes)
    return np.stack([nodes, (nodes + 1) % num_nodes], axis=1)


def star_edges(num_nodes: int) -> np.ndarray:
    leaves = np.arange(1, num_nodes)
    return np.stack([np.zeros_like(leaves), leaves], axis=1)


def make_cycles_vs_stars(
    per_class: int = 100,
    min_nodes: int = 5,
    max_nodes: int = 15,
    seed: int = 0,
) -> GraphDataset:
    """Class 0 = cycle graphs, class 1 = star graphs, sizes drawn uniformly, order shuffled."""
    if per_class < 1:
        raise InvalidInput('per_class must be positive')
    if not MIN_CYCLE_NODES <= min_nodes <= max_nodes:
        raise InvalidInput(f'Need {MIN_CYCLE_NODES} <= min_nodes <= max_nodes, got {min_nodes}, {max_nodes}')

    rng = np.random.default_rng(seed)
    sizes = rng.integers(min_nodes, max_nodes + 1, size=2 * per_class)
    kinds = np.repeat([CYCLE_LABEL, STAR_LABEL], per_class)
    order = rng.permutation(2 * per_class)

    graphs = []
    for graph_id, source in enumerate(order):
        size, kind = int(sizes[source]), int(kinds[source])
        edges = cycle_edges(size) if kind == CYCLE_LABEL else star_edges(size)
        graphs.append(Graph.from_pairs(graph_id=graph_id, num_nodes=size, pairs=edges, label=kind))

    return GraphDataset(
        graphs=tuple(graphs),
        num_classes=2,
        feature_dim=0,
        label_values=(CYCLE_LABEL, STAR_LABEL),
        name='CYCLES_VS_STARS',
    )
