import shutil
from collections import Counter
from pathlib import Path

import numpy as np
import pytest

from src.exceptions import DatasetFormatError, DatasetLoadError, InvalidInput
from src.services.graphs import (
    DatasetService,
    FeatureMode,
    Graph,
    GraphDataset,
    Split,
    assign_degree_features,
    dataset_summary,
    disjoint_union,
    make_cycles_vs_stars,
    parse_tu_dataset,
    permute_nodes,
    stratified_split,
    write_tu_dataset,
)


def _dataset(graphs: list[Graph], num_classes: int = 2) -> GraphDataset:
    return GraphDataset(
        graphs=tuple(graphs),
        num_classes=num_classes,
        feature_dim=0,
        label_values=tuple(range(num_classes)),
        name='HAND',
    )


def _balanced(count_per_class: int) -> GraphDataset:
    graphs = [
        Graph.from_pairs(graph_id, 3, [(0, 1), (1, 2)], graph_id % 2) for graph_id in range(2 * count_per_class)
    ]
    return _dataset(graphs)


class TestGraph:
    def test_from_pairs_normalizes_edges(self):
        graph = Graph.from_pairs(0, 3, [(1, 0), (0, 1), (2, 2), (2, 1)], 0)
        assert graph.edges.tolist() == [[0, 1], [1, 2]]

    def test_degree_sum_is_twice_edge_count(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            size = int(rng.integers(1, 12))
            pairs = rng.integers(0, size, size=(15, 2))
            graph = Graph.from_pairs(0, size, pairs, 0)
            assert graph.degrees().sum() == 2 * graph.num_edges

    def test_rejects_out_of_range_edge(self):
        with pytest.raises(InvalidInput):
            Graph(id=0, num_nodes=2, edges=np.array([[0, 2]]), node_features=np.zeros((2, 0)), label=0)

    def test_rejects_unnormalized_edge(self):
        with pytest.raises(InvalidInput):
            Graph(id=0, num_nodes=2, edges=np.array([[1, 0]]), node_features=np.zeros((2, 0)), label=0)


class TestParseTuDataset:
    def test_toy_dataset(self, toy_dir: Path):
        dataset = parse_tu_dataset(toy_dir)

        assert len(dataset) == 2
        assert dataset.num_classes == 2
        assert dataset.label_values == (1, 2)
        assert [graph.label for graph in dataset.graphs] == [0, 1]
        assert [graph.num_edges for graph in dataset.graphs] == [3, 1]
        assert [graph.num_nodes for graph in dataset.graphs] == [3, 2]
        assert dataset.feature_dim == 0
        assert dataset.name == 'TOY'

    def test_missing_labels_file_names_it(self, toy_dir: Path, tmp_path: Path):
        target = tmp_path / 'TOY'
        shutil.copytree(toy_dir, target)
        (target / 'TOY_graph_labels.txt').unlink()

        with pytest.raises(DatasetLoadError, match='TOY_graph_labels.txt'):
            parse_tu_dataset(target)

    def test_missing_directory(self, tmp_path: Path):
        with pytest.raises(DatasetLoadError, match='does not exist'):
            parse_tu_dataset(tmp_path / 'nowhere')

    def test_node_referencing_missing_graph_reports_line(self, toy_dir: Path, tmp_path: Path):
        target = tmp_path / 'TOY'
        shutil.copytree(toy_dir, target)
        (target / 'TOY_graph_indicator.txt').write_text('1\n1\n1\n2\n3\n', encoding='utf-8')

        with pytest.raises(DatasetFormatError) as error:
            parse_tu_dataset(target)
        assert error.value.line == 5
        assert 'TOY_graph_indicator.txt:5' in error.value.message

    def test_non_integer_token(self, toy_dir: Path, tmp_path: Path):
        target = tmp_path / 'TOY'
        shutil.copytree(toy_dir, target)
        (target / 'TOY_A.txt').write_text('1, 2\n2, x\n', encoding='utf-8')

        with pytest.raises(DatasetFormatError, match='non-integer'):
            parse_tu_dataset(target)

    def test_self_loops_and_duplicates_collapse(self, tmp_path: Path):
        target = tmp_path / 'LOOPY'
        target.mkdir()
        (target / 'LOOPY_A.txt').write_text('1, 1\n1, 2\n2, 1\n1, 2\n', encoding='utf-8')
        (target / 'LOOPY_graph_indicator.txt').write_text('1\n1\n', encoding='utf-8')
        (target / 'LOOPY_graph_labels.txt').write_text('0\n', encoding='utf-8')

        graph = parse_tu_dataset(target).graphs[0]
        assert graph.edges.tolist() == [[0, 1]]

    def test_parse_write_parse_is_idempotent(self, tmp_path: Path):
        original = make_cycles_vs_stars(per_class=6, seed=4)
        first = parse_tu_dataset(write_tu_dataset(original, tmp_path / 'ONE', 'SYN'))
        second = parse_tu_dataset(write_tu_dataset(first, tmp_path / 'TWO', 'SYN'))

        assert first.label_values == second.label_values
        for left, right in zip(first.graphs, second.graphs, strict=True):
            assert left.num_nodes == right.num_nodes
            assert left.label == right.label
            assert np.array_equal(left.edges, right.edges)

    def test_node_labels_are_read_when_present(self, toy_dir: Path, tmp_path: Path):
        target = tmp_path / 'TOY'
        shutil.copytree(toy_dir, target)
        (target / 'TOY_node_labels.txt').write_text('7\n8\n9\n1\n2\n', encoding='utf-8')

        dataset = parse_tu_dataset(target)
        assert dataset.has_node_labels
        assert dataset.graphs[0].node_labels.tolist() == [7, 8, 9]
        assert dataset.graphs[1].node_labels.tolist() == [1, 2]


class TestDegreeFeatures:
    def test_triangle_one_hot(self):
        dataset = assign_degree_features(_dataset([Graph.from_pairs(0, 3, [(0, 1), (1, 2), (0, 2)], 0)], 1))
        assert dataset.feature_dim == 3
        assert dataset.graphs[0].node_features.tolist() == [[0, 0, 1]] * 3

    def test_path_scalar(self):
        dataset = assign_degree_features(_dataset([Graph.from_pairs(0, 3, [(0, 1), (1, 2)], 0)], 1), FeatureMode.scalar)
        assert dataset.feature_dim == 1
        assert dataset.graphs[0].node_features[:, 0].tolist() == [0.5, 1.0, 0.5]

    def test_isolated_node_uses_dataset_wide_max_degree(self):
        graphs = [
            Graph.from_pairs(0, 3, [(0, 1), (1, 2), (0, 2)], 0),
            Graph.from_pairs(1, 1, [], 1),
        ]
        dataset = assign_degree_features(_dataset(graphs))
        assert dataset.max_degree == 2
        assert dataset.graphs[1].node_features.tolist() == [[1, 0, 0]]

    def test_one_hot_rows_sum_to_one(self):
        dataset = assign_degree_features(make_cycles_vs_stars(per_class=10, seed=1))
        for graph in dataset.graphs:
            assert np.all(graph.node_features.sum(axis=1) == 1.0)

    def test_scalar_without_edges_is_zero(self):
        dataset = assign_degree_features(_dataset([Graph.from_pairs(0, 2, [], 0)], 1), FeatureMode.scalar)
        assert dataset.graphs[0].node_features.tolist() == [[0.0], [0.0]]

    def test_empty_dataset(self):
        with pytest.raises(InvalidInput):
            assign_degree_features(_dataset([]))


class TestStratifiedSplit:
    def test_ten_graphs(self):
        dataset = stratified_split(_balanced(5), (0.8, 0.1, 0.1), seed=0)
        counts = Counter(dataset.splits)

        assert counts == {Split.train: 8, Split.val: 1, Split.test: 1}
        labels = dataset.labels()
        for split in Split:
            members = labels[dataset.indices(split)]
            assert abs(int(np.sum(members == 0)) - len(members) / 2) <= 1

    def test_deterministic(self):
        dataset = _balanced(17)
        assert stratified_split(dataset, seed=5).splits == stratified_split(dataset, seed=5).splits

    def test_seed_changes_assignment(self):
        dataset = _balanced(30)
        assert stratified_split(dataset, seed=1).splits != stratified_split(dataset, seed=2).splits

    def test_rejects_ratios_not_summing_to_one(self):
        with pytest.raises(InvalidInput):
            stratified_split(_balanced(5), (0.5, 0.5, 0.5))

    def test_every_class_in_train(self):
        graphs = [Graph.from_pairs(i, 2, [(0, 1)], 0 if i < 20 else 1) for i in range(23)]
        dataset = stratified_split(_dataset(graphs), (0.2, 0.4, 0.4), seed=0)
        train_labels = set(dataset.labels()[dataset.indices(Split.train)].tolist())
        assert train_labels == {0, 1}

    def test_tiny_class_goes_to_train(self):
        graphs = [Graph.from_pairs(i, 2, [(0, 1)], 0 if i < 10 else 1) for i in range(12)]
        dataset = stratified_split(_dataset(graphs), seed=0)
        assert dataset.splits[10] == Split.train
        assert dataset.splits[11] == Split.train


class TestDatasetHelpers:
    def test_summary(self, toy_dir: Path):
        dataset = DatasetService().load(toy_dir)
        summary = dataset_summary(dataset)

        assert summary.num_graphs == 2
        assert summary.num_nodes == 5
        assert summary.num_edges == 4
        assert summary.class_histogram == {'1': 1, '2': 1}
        assert summary.max_degree == 2
        assert summary.feature_dim == 3
        assert summary.split_counts is not None
        assert sum(summary.split_counts.values()) == 2

    def test_disjoint_union_offsets_edges(self):
        first = Graph.from_pairs(0, 3, [(0, 1), (1, 2)], 0, node_features=np.ones((3, 1)))
        second = Graph.from_pairs(1, 2, [(0, 1)], 1, node_features=np.zeros((2, 1)))
        union = disjoint_union(first, second)

        assert union.num_nodes == 5
        assert union.edges.tolist() == [[0, 1], [1, 2], [3, 4]]
        assert union.node_features[:, 0].tolist() == [1, 1, 1, 0, 0]

    def test_permute_nodes_carries_features(self):
        graph = Graph.from_pairs(0, 3, [(0, 1)], 0, node_features=np.array([[1.0], [2.0], [3.0]]))
        permuted = permute_nodes(graph, np.array([2, 0, 1]))

        assert permuted.edges.tolist() == [[0, 2]]
        assert permuted.node_features[:, 0].tolist() == [2.0, 3.0, 1.0]

    def test_permute_rejects_non_permutation(self):
        graph = Graph.from_pairs(0, 3, [], 0)
        with pytest.raises(InvalidInput):
            permute_nodes(graph, np.array([0, 0, 1]))

    def test_cycles_vs_stars(self):
        dataset = make_cycles_vs_stars(per_class=15, min_nodes=5, max_nodes=9, seed=2)
        labels = dataset.labels()

        assert len(dataset) == 30
        assert int(np.sum(labels == 0)) == 15
        for graph in dataset.graphs:
            assert 5 <= graph.num_nodes <= 9
            expected_edges = graph.num_nodes if graph.label == 0 else graph.num_nodes - 1
            assert graph.num_edges == expected_edges
