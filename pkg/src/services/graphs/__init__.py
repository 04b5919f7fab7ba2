from src.services.graphs.models import DatasetSummary, FeatureMode, Graph, GraphDataset, Split
from src.services.graphs.service import (
    DatasetService,
    assign_degree_features,
    dataset_summary,
    disjoint_union,
    permute_nodes,
    stratified_split,
)
from src.services.graphs.synthetic import make_cycles_vs_stars
from src.services.graphs.tu_format import parse_tu_dataset, write_tu_dataset

__all__ = [
    'DatasetService',
    'DatasetSummary',
    'FeatureMode',
    'Graph',
    'GraphDataset',
    'Split',
    'assign_degree_features',
    'dataset_summary',
    'disjoint_union',
    'make_cycles_vs_stars',
    'parse_tu_dataset',
    'permute_nodes',
    'stratified_split',
    'write_tu_dataset',
]
