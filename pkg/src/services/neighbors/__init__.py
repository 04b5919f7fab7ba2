from src.services.neighbors.models import DistanceMetric, NeighborIndex, NeighborList
from src.services.neighbors.service import build_index, distances, query, query_batch

__all__ = [
    'DistanceMetric',
    'NeighborIndex',
    'NeighborList',
    'build_index',
    'distances',
    'query',
    'query_batch',
]
