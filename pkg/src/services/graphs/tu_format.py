"""Reader and writer for the TU graph-collection text format.

A dataset ``DS`` lives in a directory holding ``DS_A.txt`` (global 1-based edge list),
``DS_graph_indicator.txt`` (graph id of every node, one per line) and
``DS_graph_labels.txt`` (one class value per graph). ``DS_node_labels.txt`` is optional.
"""

import re
from pathlib import Path

import numpy as np

from src.core.logger import get_logger
from src.exceptions import DatasetFormatError, DatasetLoadError
from src.services.graphs.models import Graph, GraphDataset

logger = get_logger(__name__)

_SEPARATORS = re.compile(r'[,\s]+')

EDGES_SUFFIX = '_A.txt'
INDICATOR_SUFFIX = '_graph_indicator.txt'
GRAPH_LABELS_SUFFIX = '_graph_labels.txt'
NODE_LABELS_SUFFIX = '_node_labels.txt'


def _resolve_prefix(directory: Path) -> str:
    if (directory / f'{directory.name}{INDICATOR_SUFFIX}').exists():
        return directory.name
    candidates = sorted(directory.glob(f'*{INDICATOR_SUFFIX}'))
    if len(candidates) == 1:
        return candidates[0].name.removesuffix(INDICATOR_SUFFIX)
    return directory.name


def _read_int_rows(path: Path, width: int) -> tuple[np.ndarray, np.ndarray]:
    """Return the integer rows of ``path`` together with their 1-based source line numbers."""
    if not path.is_file():
        raise DatasetLoadError(f'Missing dataset file {path.name} in {path.parent}')

    rows: list[list[int]] = []
    line_numbers: list[int] = []
    with path.open(encoding='utf-8') as handle:
        for line_number, line in enumerate(handle, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            tokens = [token for token in _SEPARATORS.split(stripped) if token]
            if len(tokens) != width:
                raise DatasetFormatError(
                    f'expected {width} integer(s), found {len(tokens)}', path=path.name, line=line_number
                )
            try:
                rows.append([int(token) for token in tokens])
            except ValueError:
                raise DatasetFormatError(
                    f'non-integer token in {stripped!r}', path=path.name, line=line_number
                ) from None
            line_numbers.append(line_number)

    return np.asarray(rows, dtype=np.int64).reshape(-1, width), np.asarray(line_numbers, dtype=np.int64)


def parse_tu_dataset(directory_path: Path | str) -> GraphDataset:
    directory = Path(directory_path)
    if not directory.is_dir():
        raise DatasetLoadError(f'Dataset directory {directory} does not exist')

    prefix = _resolve_prefix(directory)
    indicator_path = directory / f'{prefix}{INDICATOR_SUFFIX}'
    edges_path = directory / f'{prefix}{EDGES_SUFFIX}'
    labels_path = directory / f'{prefix}{GRAPH_LABELS_SUFFIX}'

    indicator, indicator_lines = _read_int_rows(indicator_path, 1)
    graph_labels, _ = _read_int_rows(labels_path, 1)
    raw_edges, edge_lines = _read_int_rows(edges_path, 2)

    num_graphs = len(graph_labels)
    num_nodes = len(indicator)
    graph_of_node = indicator[:, 0] - 1

    invalid_nodes = np.flatnonzero((graph_of_node < 0) | (graph_of_node >= num_graphs))
    if invalid_nodes.size:
        position = int(invalid_nodes[0])
        raise DatasetFormatError(
            f'node {position + 1} references graph {indicator[position, 0]}, dataset has {num_graphs} graphs',
            path=indicator_path.name,
            line=int(indicator_lines[position]),
        )

    invalid_edges = np.flatnonzero(np.any((raw_edges < 1) | (raw_edges > num_nodes), axis=1))
    if invalid_edges.size:
        position = int(invalid_edges[0])
        raise DatasetFormatError(
            f'edge {raw_edges[position].tolist()} references a node outside 1..{num_nodes}',
            path=edges_path.name,
            line=int(edge_lines[position]),
        )

    sources = raw_edges[:, 0] - 1
    targets = raw_edges[:, 1] - 1
    edge_graph = graph_of_node[sources]
    crossing = np.flatnonzero(edge_graph != graph_of_node[targets])
    if crossing.size:
        position = int(crossing[0])
        raise DatasetFormatError(
            f'edge {raw_edges[position].tolist()} joins nodes of different graphs',
            path=edges_path.name,
            line=int(edge_lines[position]),
        )

    nodes_per_graph = np.bincount(graph_of_node, minlength=num_graphs)
    first_node = np.concatenate([[0], np.cumsum(nodes_per_graph)[:-1]])
    node_order = np.argsort(graph_of_node, kind='stable')
    local_index = np.empty(num_nodes, dtype=np.int64)
    local_index[node_order] = np.arange(num_nodes) - first_node[graph_of_node[node_order]]

    node_labels_path = directory / f'{prefix}{NODE_LABELS_SUFFIX}'
    node_labels = None
    if node_labels_path.is_file():
        node_labels, _ = _read_int_rows(node_labels_path, 1)
        if len(node_labels) != num_nodes:
            raise DatasetFormatError(
                f'{len(node_labels)} node labels for {num_nodes} nodes', path=node_labels_path.name, line=1
            )
        node_labels = node_labels[node_order, 0]

    label_values, remapped = np.unique(graph_labels[:, 0], return_inverse=True)

    edge_order = np.argsort(edge_graph, kind='stable')
    edges_per_graph = np.bincount(edge_graph, minlength=num_graphs)
    local_pairs = np.stack([local_index[sources], local_index[targets]], axis=1)[edge_order]
    pairs_by_graph = np.split(local_pairs, np.cumsum(edges_per_graph)[:-1])

    graphs = []
    for graph_id in range(num_graphs):
        start, stop = first_node[graph_id], first_node[graph_id] + nodes_per_graph[graph_id]
        graphs.append(
            Graph.from_pairs(
                graph_id=graph_id,
                num_nodes=int(nodes_per_graph[graph_id]),
                pairs=pairs_by_graph[graph_id],
                label=int(remapped[graph_id]),
                node_labels=None if node_labels is None else node_labels[start:stop],
            )
        )

    dataset = GraphDataset(
        graphs=tuple(graphs),
        num_classes=len(label_values),
        feature_dim=0,
        label_values=tuple(int(value) for value in label_values),
        name=prefix,
        has_node_labels=node_labels is not None,
    )
    logger.info(
        'Dataset parsed',
        name=prefix,
        graphs=num_graphs,
        nodes=num_nodes,
        edges=sum(graph.num_edges for graph in graphs),
        classes=dataset.num_classes,
    )
    return dataset


def write_tu_dataset(dataset: GraphDataset, directory_path: Path | str, name: str | None = None) -> Path:
    """Write ``dataset`` in TU format; edges are emitted in both directions as TU files do."""
    name = name or dataset.name or 'DATASET'
    directory = Path(directory_path)
    directory.mkdir(parents=True, exist_ok=True)

    edge_lines: list[str] = []
    indicator_lines: list[str] = []
    node_label_lines: list[str] = []
    offset = 1
    for graph in dataset.graphs:
        indicator_lines.extend([str(graph.id + 1)] * graph.num_nodes)
        for u, v in graph.edges.tolist():
            edge_lines.append(f'{u + offset}, {v + offset}')
            edge_lines.append(f'{v + offset}, {u + offset}')
        if graph.node_labels is not None:
            node_label_lines.extend(str(value) for value in graph.node_labels.tolist())
        offset += graph.num_nodes

    label_lines = [str(dataset.label_values[graph.label]) for graph in dataset.graphs]

    (directory / f'{name}{EDGES_SUFFIX}').write_text(''.join(f'{line}\n' for line in edge_lines), encoding='utf-8')
    (directory / f'{name}{INDICATOR_SUFFIX}').write_text(
        ''.join(f'{line}\n' for line in indicator_lines), encoding='utf-8'
    )
    (directory / f'{name}{GRAPH_LABELS_SUFFIX}').write_text(
        ''.join(f'{line}\n' for line in label_lines), encoding='utf-8'
    )
    if dataset.has_node_labels:
        (directory / f'{name}{NODE_LABELS_SUFFIX}').write_text(
            ''.join(f'{line}\n' for line in node_label_lines), encoding='utf-8'
        )

    logger.info('Dataset written', name=name, directory=str(directory), graphs=len(dataset))
    return directory
