import hashlib
import json
import os
from pathlib import Path

import numpy as np
import pytest

from src.app_factory import CliFactory
from src.exceptions import DatasetLoadError, InvalidInput, LookupFailure, StateError
from src.handlers import COMMANDS
from src.middlewares import MIDDLEWARES
from src.services.gin import CheckpointKind, GinConfig
from src.services.graphs import Split, make_cycles_vs_stars, write_tu_dataset
from src.services.neighbors import build_index
from src.services.nnk import KernelSpec, NnkClassifier
from src.services.pipeline import CheckpointSelector, PipelineService, RunConfig, render_metrics
from src.storage.repository import EmbeddingRepository, ReportRepository

TRAIN_FLAGS = ['--seed', '0', '--layers', '2', '--hidden-dim', '8', '--epochs', '3', '--batch-size', '16', '--k', '10']


def _config(dataset: Path, output: Path, **overrides: object) -> RunConfig:
    settings: dict[str, object] = {
        'dataset_path': dataset,
        'output_dir': output,
        'gin': GinConfig(num_layers=2, hidden_dim=8, epochs=3, batch_size=16, seed=0),
        'k_neighbors': 10,
    }
    settings.update(overrides)
    return RunConfig.model_validate(settings)


@pytest.fixture
def cli() -> CliFactory:
    return CliFactory(title='graph-nnk', version='test', commands=COMMANDS, middlewares=MIDDLEWARES)


class TestRunConfig:
    def test_defaults(self, tmp_path: Path):
        config = RunConfig(dataset_path=tmp_path)

        assert config.k_neighbors == 50
        assert config.tau_edge == 1e-10
        assert config.split_ratios == (0.8, 0.1, 0.1)
        assert config.gin == GinConfig()
        assert config.checkpoint == CheckpointSelector.both

    def test_rejects_bad_ratios(self, tmp_path: Path):
        with pytest.raises(InvalidInput):
            RunConfig(dataset_path=tmp_path, split_ratios=(0.5, 0.5, 0.5))

    def test_selector_kinds(self):
        assert CheckpointSelector.both.kinds() == [CheckpointKind.best, CheckpointKind.last]
        assert CheckpointSelector.last.kinds() == [CheckpointKind.last]


class TestPipelineService:
    def test_train_writes_artifacts(self, synthetic_dir: Path, tmp_path: Path):
        service = PipelineService(_config(synthetic_dir, tmp_path / 'run'))
        service.cmd_train()
        layout = service.layout

        assert layout.checkpoint_file(CheckpointKind.best).is_file()
        assert layout.checkpoint_file(CheckpointKind.last).is_file()
        assert len(layout.curve_file.read_text(encoding='utf-8').splitlines()) == 3
        assert json.loads(layout.config_file.read_text(encoding='utf-8'))['k_neighbors'] == 10
        assert json.loads(layout.summary_file.read_text(encoding='utf-8'))['num_graphs'] == 60

    def test_rerun_gives_identical_curve(self, synthetic_dir: Path, tmp_path: Path):
        service = PipelineService(_config(synthetic_dir, tmp_path / 'run'))
        service.cmd_train()
        first = service.layout.curve_file.read_bytes()
        service.cmd_train()
        assert service.layout.curve_file.read_bytes() == first

    def test_missing_dataset_names_path(self, tmp_path: Path):
        missing = tmp_path / 'nowhere'
        with pytest.raises(DatasetLoadError, match='nowhere'):
            PipelineService(_config(missing, tmp_path / 'run')).cmd_train()

    def test_eval_needs_checkpoints(self, synthetic_dir: Path, tmp_path: Path):
        with pytest.raises(StateError):
            PipelineService(_config(synthetic_dir, tmp_path / 'run')).cmd_eval()

    def test_eval_report(self, synthetic_dir: Path, tmp_path: Path):
        service = PipelineService(_config(synthetic_dir, tmp_path / 'run'))
        service.cmd_train()
        report = service.cmd_eval()

        assert set(report.checkpoints) == {'best', 'last'}
        for kind, comparison in report.checkpoints.items():
            for metrics in (comparison.supervised, comparison.nnk):
                assert 0.0 <= metrics.accuracy <= 1.0
                assert sum(map(sum, metrics.confusion)) == comparison.test_size
            assert 0.0 < comparison.mean_active_neighbors <= 10.0
            assert comparison.accuracy_gap == pytest.approx(comparison.nnk.accuracy - comparison.supervised.accuracy)
            embeddings = service.layout.embeddings_file(CheckpointKind(kind)).read_bytes()
            assert comparison.embedding_checksum == hashlib.sha256(embeddings).hexdigest()

        on_disk = ReportRepository(service.layout).load_metrics()
        assert on_disk == report
        assert report.config['k_neighbors'] == 10
        timings = json.loads(service.layout.timings_file.read_text(encoding='utf-8'))['seconds']
        assert 'best.nnk' in timings
        assert service.layout.explanations_file(CheckpointKind.best).is_file()
        assert 'nnk' in render_metrics(report)

    def test_identical_config_gives_identical_report(self, synthetic_dir: Path, tmp_path: Path):
        service = PipelineService(_config(synthetic_dir, tmp_path / 'run'))
        service.cmd_train()
        service.cmd_eval()
        first = service.layout.metrics_file.read_bytes()

        service.cmd_train()
        service.cmd_eval()
        assert service.layout.metrics_file.read_bytes() == first

    def test_parallel_eval_matches_sequential(self, synthetic_dir: Path, tmp_path: Path):
        sequential = PipelineService(_config(synthetic_dir, tmp_path / 'run'))
        sequential.cmd_train()
        expected = sequential.cmd_eval(CheckpointSelector.last)

        parallel = PipelineService(_config(synthetic_dir, tmp_path / 'run', workers=4))
        report = parallel.cmd_eval(CheckpointSelector.last)
        assert report.checkpoints == expected.checkpoints

    def test_explain(self, synthetic_dir: Path, tmp_path: Path):
        service = PipelineService(_config(synthetic_dir, tmp_path / 'run'))
        service.cmd_train()
        service.cmd_eval()
        dataset = service.load_dataset()
        graph_id = dataset.indices(Split.test)[0]

        explanation, path = service.cmd_explain(graph_id, CheckpointKind.best)
        assert path.is_file()
        assert explanation.query_id == graph_id
        assert abs(sum(neighbor.weight for neighbor in explanation.neighbors) - 1.0) <= 1e-9
        weights = [neighbor.weight for neighbor in explanation.neighbors]
        assert weights == sorted(weights, reverse=True)

        first = path.read_bytes()
        service.cmd_explain(graph_id, CheckpointKind.best)
        assert path.read_bytes() == first

    def test_explain_rejects_train_graph(self, synthetic_dir: Path, tmp_path: Path):
        service = PipelineService(_config(synthetic_dir, tmp_path / 'run'))
        service.cmd_train()
        service.cmd_eval()
        train_id = service.load_dataset().indices(Split.train)[0]

        with pytest.raises(LookupFailure):
            service.cmd_explain(train_id, CheckpointKind.best)

    def test_explain_before_eval(self, synthetic_dir: Path, tmp_path: Path):
        service = PipelineService(_config(synthetic_dir, tmp_path / 'run'))
        service.cmd_train()
        with pytest.raises(StateError):
            service.cmd_explain(0, CheckpointKind.best)

    def test_nnk_every_extends_curve(self, synthetic_dir: Path, tmp_path: Path):
        service = PipelineService(_config(synthetic_dir, tmp_path / 'run', nnk_every=2))
        state = service.cmd_train()

        assert state.history[0].extra == {}
        assert set(state.history[1].extra) == {'test_supervised_accuracy', 'test_nnk_accuracy'}

    def test_info(self, synthetic_dir: Path, tmp_path: Path):
        summary = PipelineService(_config(synthetic_dir, tmp_path / 'run')).cmd_info()
        assert summary.num_graphs == 60
        assert summary.class_histogram == {'0': 30, '1': 30}


class TestCli:
    def test_info(self, cli: CliFactory, synthetic_dir: Path, capsys: pytest.CaptureFixture[str]):
        assert cli.run(['info', '--dataset', str(synthetic_dir)]) == 0
        assert 'CYCLES_VS_STARS' in capsys.readouterr().out

    def test_info_json(self, cli: CliFactory, synthetic_dir: Path, capsys: pytest.CaptureFixture[str]):
        assert cli.run(['info', '--dataset', str(synthetic_dir), '--json']) == 0
        assert json.loads(capsys.readouterr().out)['num_graphs'] == 60

    def test_missing_dataset_exit_code(self, cli: CliFactory, tmp_path: Path, capsys: pytest.CaptureFixture[str]):
        missing = tmp_path / 'absent'
        code = cli.run(['train', '--dataset', str(missing), '--output-dir', str(tmp_path / 'run'), '--seed', '0'])

        assert code == 2
        assert str(missing) in capsys.readouterr().err

    def test_train_requires_seed(self, cli: CliFactory, synthetic_dir: Path):
        assert cli.run(['train', '--dataset', str(synthetic_dir)]) == 2

    def test_invalid_value_exit_code(self, cli: CliFactory, synthetic_dir: Path, tmp_path: Path):
        args = ['train', '--dataset', str(synthetic_dir), '--output-dir', str(tmp_path), '--seed', '0']
        args += ['--dropout', '1.5']
        assert cli.run(args) == 2

    def test_eval_without_training_exit_code(self, cli: CliFactory, synthetic_dir: Path, tmp_path: Path):
        assert cli.run(['eval', '--dataset', str(synthetic_dir), '--output-dir', str(tmp_path / 'run')]) == 3

    def test_new_seed_replaces_echoed_split_seed(self, cli: CliFactory, synthetic_dir: Path, tmp_path: Path):
        output = tmp_path / 'run'
        first = ['train', '--dataset', str(synthetic_dir), '--output-dir', str(output), '--seed', '1']
        assert cli.run([*first, '--layers', '1', '--hidden-dim', '4', '--epochs', '1']) == 0
        assert cli.run(['train', '--output-dir', str(output), '--seed', '7']) == 0

        echoed = json.loads((output / 'config.json').read_text(encoding='utf-8'))
        assert echoed['gin']['seed'] == 7
        assert echoed['split_seed'] == 7
        assert echoed['gin']['hidden_dim'] == 4

    def test_explicit_split_seed_is_kept(self, cli: CliFactory, synthetic_dir: Path, tmp_path: Path):
        config_file = tmp_path / 'config.json'
        document = {
            'dataset_path': str(synthetic_dir),
            'split_seed': 5,
            'gin': {'num_layers': 1, 'hidden_dim': 4, 'epochs': 1},
        }
        config_file.write_text(json.dumps(document), encoding='utf-8')
        output = tmp_path / 'run'
        assert cli.run(['train', '--config', str(config_file), '--output-dir', str(output), '--seed', '3']) == 0
        assert json.loads((output / 'config.json').read_text(encoding='utf-8'))['split_seed'] == 5

        args = ['train', '--output-dir', str(output), '--seed', '4', '--split-seed', '9']
        assert cli.run(args) == 0
        assert json.loads((output / 'config.json').read_text(encoding='utf-8'))['split_seed'] == 9

    def test_config_file_with_overrides(self, cli: CliFactory, synthetic_dir: Path, tmp_path: Path):
        config_file = tmp_path / 'config.json'
        config_file.write_text(
            json.dumps({'dataset_path': str(synthetic_dir), 'gin': {'num_layers': 1, 'hidden_dim': 4, 'epochs': 1}}),
            encoding='utf-8',
        )
        output = tmp_path / 'run'
        assert cli.run(['train', '--config', str(config_file), '--output-dir', str(output), '--seed', '3']) == 0

        echoed = json.loads((output / 'config.json').read_text(encoding='utf-8'))
        assert echoed['gin']['num_layers'] == 1
        assert echoed['gin']['seed'] == 3
        assert echoed['output_dir'] == str(output)

    def test_train_eval_explain(
        self,
        cli: CliFactory,
        synthetic_dir: Path,
        tmp_path: Path,
        capsys: pytest.CaptureFixture[str],
    ):
        output = tmp_path / 'run'
        assert cli.run(['train', '--dataset', str(synthetic_dir), '--output-dir', str(output), *TRAIN_FLAGS]) == 0
        assert cli.run(['eval', '--output-dir', str(output), '--checkpoint', 'best']) == 0
        assert 'supervised' in capsys.readouterr().out

        report = json.loads((output / 'reports' / 'metrics.json').read_text(encoding='utf-8'))
        assert set(report['checkpoints']) == {'best'}

        embeddings = (output / 'embeddings' / 'best.jsonl').read_text(encoding='utf-8').splitlines()
        records = [json.loads(line) for line in embeddings]
        test_id = next(record['graph_id'] for record in records if record['split'] == 'test')
        train_id = next(record['graph_id'] for record in records if record['split'] == 'train')

        assert cli.run(['explain', '--output-dir', str(output), '--id', str(test_id), '--checkpoint', 'best']) == 0
        explanation = json.loads((output / 'explanations' / f'graph_{test_id}_best.json').read_text(encoding='utf-8'))
        assert np.isclose(sum(neighbor['weight'] for neighbor in explanation['neighbors']), 1.0, rtol=0, atol=1e-9)

        assert cli.run(['explain', '--output-dir', str(output), '--id', str(train_id), '--checkpoint', 'best']) == 2


@pytest.mark.nci1
def test_nci1_counts_match_raw_files():
    raw = os.environ.get('GRAPH_NNK_NCI1_DIR')
    if not raw:
        pytest.skip('GRAPH_NNK_NCI1_DIR is not set')
    directory = Path(raw)
    config = RunConfig(dataset_path=directory)

    summary = PipelineService(config).cmd_info()
    labels = (directory / 'NCI1_graph_labels.txt').read_text(encoding='utf-8').split()
    indicator = (directory / 'NCI1_graph_indicator.txt').read_text(encoding='utf-8').split()

    assert summary.num_graphs == len(labels)
    assert summary.num_nodes == len(indicator)
    assert summary.num_classes == 2
    assert sum(summary.class_histogram.values()) == len(labels)


SEPARABLE_SEEDS = (0, 1, 2)


@pytest.fixture(scope='module')
def separable_runs(tmp_path_factory: pytest.TempPathFactory) -> dict:
    """Train and evaluate the cycles-vs-stars set once per seed at full size."""
    runs = {}
    for seed in SEPARABLE_SEEDS:
        root = tmp_path_factory.mktemp(f'separable_{seed}')
        dataset_path = write_tu_dataset(make_cycles_vs_stars(per_class=100, seed=seed), root / 'CYCLES_VS_STARS')
        config = RunConfig(
            dataset_path=dataset_path,
            output_dir=root / 'out',
            gin=GinConfig(hidden_dim=32, epochs=30, seed=seed),
            split_seed=seed,
            checkpoint=CheckpointSelector.best,
        )
        service = PipelineService(config)
        service.cmd_train()
        runs[seed] = (config, service, service.cmd_eval())
    return runs


@pytest.mark.slow
def test_separable_set_is_solved_by_both_classifiers(separable_runs: dict):
    comparisons = [report.checkpoints['best'] for _, _, report in separable_runs.values()]

    assert np.mean([comparison.supervised.accuracy for comparison in comparisons]) >= 0.95
    assert np.mean([comparison.nnk.accuracy for comparison in comparisons]) >= 0.95
    for (config, _, _), comparison in zip(separable_runs.values(), comparisons, strict=True):
        assert comparison.mean_active_neighbors < config.k_neighbors


@pytest.mark.slow
def test_training_graphs_reconstruct_from_their_own_embedding(separable_runs: dict):
    config, service, _ = separable_runs[0]
    stored = EmbeddingRepository(service.layout).load(CheckpointKind.best)
    classifier = NnkClassifier(build_index(stored), KernelSpec(), num_classes=2, k=config.k_neighbors)
    rows = np.random.default_rng(0).choice(stored.rows(Split.train), size=100, replace=False)

    for row in rows:
        graph_id = int(stored.graph_ids[row])
        decision = classifier.classify(graph_id, stored.vectors[row])
        problem, solution = decision.problem, decision.solution
        # neighbors the kernel cannot tell apart from the query share its weight
        duplicates = problem.similarities >= 1 - 1e-6
        assert graph_id in problem.neighbor_graph_ids[duplicates]

        in_group = duplicates[solution.active_set]
        assert solution.weights[in_group].sum() >= 0.999
        if duplicates.sum() == 1:
            own = problem.neighbor_graph_ids[solution.active_set] == graph_id
            assert solution.weights[own].sum() >= 0.999
        assert decision.predicted == stored.labels[row]


@pytest.mark.nci1
def test_nci1_accuracy_and_gap_are_reported(tmp_path: Path):
    raw = os.environ.get('GRAPH_NNK_NCI1_DIR')
    if not raw:
        pytest.skip('GRAPH_NNK_NCI1_DIR is not set')
    config = RunConfig(dataset_path=Path(raw), output_dir=tmp_path / 'out', checkpoint=CheckpointSelector.best)
    service = PipelineService(config)
    service.cmd_train()

    report = service.cmd_eval()
    comparison = report.checkpoints['best']
    assert 0.68 <= comparison.supervised.accuracy <= 0.88
    assert 0.68 <= comparison.nnk.accuracy <= 0.88
    assert f'best: accuracy gap (nnk - supervised) {comparison.accuracy_gap:+.4f}' in render_metrics(report)

    on_disk = json.loads(service.layout.metrics_file.read_text(encoding='utf-8'))
    assert on_disk['checkpoints']['best']['accuracy_gap'] == pytest.approx(
        comparison.nnk.accuracy - comparison.supervised.accuracy
    )
