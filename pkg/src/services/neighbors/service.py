import numpy as np
from scipy.spatial.distance import cdist

from src.exceptions import IndexBuildError, InvalidInput, NumericError, ShapeError
from src.services.gin.models import EmbeddingSet
from src.services.graphs.models import Split
from src.services.neighbors.models import DistanceMetric, NeighborIndex, NeighborList


def build_index(embeddings: EmbeddingSet, metric: DistanceMetric = DistanceMetric.euclidean) -> NeighborIndex:
    rows = embeddings.rows(Split.train)
    if rows.size == 0:
        raise IndexBuildError('Embedding set has no training rows to index')

    vectors = np.ascontiguousarray(embeddings.vectors[rows])
    norms = None
    if metric == DistanceMetric.cosine:
        norms = np.linalg.norm(vectors, axis=1)
        zero_rows = np.flatnonzero(norms == 0)
        if zero_rows.size:
            graph_id = int(embeddings.graph_ids[rows[zero_rows[0]]])
            raise IndexBuildError(f'Graph {graph_id} has a zero embedding, undefined under cosine distance')

    return NeighborIndex(
        vectors=vectors,
        labels=embeddings.labels[rows].copy(),
        graph_ids=embeddings.graph_ids[rows].copy(),
        metric=metric,
        norms=norms,
    )


def distances(index: NeighborIndex, queries: np.ndarray) -> np.ndarray:
    """Distance from every query row to every indexed row, shape ``(queries, index.size)``."""
    queries = np.atleast_2d(np.asarray(queries, dtype=np.float64))
    if queries.shape[1] != index.dim:
        raise ShapeError(f'Query dimension {queries.shape[1]} does not match index dimension {index.dim}')
    if not np.all(np.isfinite(queries)):
        raise NumericError('Query vector contains non-finite values')

    if index.metric == DistanceMetric.euclidean:
        return cdist(queries, index.vectors, metric='euclidean')

    query_norms = np.linalg.norm(queries, axis=1)
    if np.any(query_norms == 0):
        raise NumericError('Zero query vector is undefined under cosine distance')
    similarity = (queries @ index.vectors.T) / np.outer(query_norms, index.norms)
    return 1.0 - np.clip(similarity, -1.0, 1.0)


def _top_k(row: np.ndarray, k: int) -> NeighborList:
    # stable sort keeps the smaller row index first among equal distances
    order = np.argsort(row, kind='stable')[:k]
    return NeighborList(ids=order, distances=row[order])


def query(index: NeighborIndex, x: np.ndarray, k: int) -> NeighborList:
    if k < 1:
        raise InvalidInput(f'k must be at least 1, got {k}')
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ShapeError(f'Query must be a vector, got shape {x.shape}')
    return _top_k(distances(index, x)[0], min(k, index.size))


def query_batch(index: NeighborIndex, queries: np.ndarray, k: int) -> list[NeighborList]:
    if k < 1:
        raise InvalidInput(f'k must be at least 1, got {k}')
    matrix = distances(index, queries)
    k = min(k, index.size)
    return [_top_k(row, k) for row in matrix]
