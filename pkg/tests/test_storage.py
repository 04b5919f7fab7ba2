from pathlib import Path

import numpy as np
import pytest

from src.exceptions import StateError
from src.services.gin import CheckpointKind, EpochRecord, GinConfig, GinTrainer, embedding_set
from src.services.graphs import GraphDataset
from src.services.nnk import Explanation, NeighborAttribution
from src.storage import RunLayout
from src.storage.repository import (
    CheckpointRepository,
    EmbeddingRepository,
    ExplanationRepository,
    ReportRepository,
)


@pytest.fixture
def layout(tmp_path: Path) -> RunLayout:
    return RunLayout(tmp_path / 'run').ensure()


def test_layout_directories(layout: RunLayout):
    for directory in ('checkpoints', 'embeddings', 'reports', 'explanations'):
        assert (layout.root / directory).is_dir()
    assert layout.checkpoint_file(CheckpointKind.best).name == 'best.json'
    assert layout.embeddings_file(CheckpointKind.last).name == 'last.jsonl'


class TestCheckpointRepository:
    def test_round_trip_is_exact(self, layout: RunLayout, cycles_vs_stars: GraphDataset):
        state = GinTrainer(GinConfig(num_layers=2, hidden_dim=6, epochs=2, seed=4)).train(cycles_vs_stars)
        repository = CheckpointRepository(layout)
        repository.save_state(state)

        for kind in CheckpointKind:
            expected = state.checkpoint(kind)
            loaded = repository.load_model(kind)
            assert loaded.config == expected.config
            for name, value in expected.parameters.items():
                assert np.array_equal(loaded.parameters[name], value)

        record = repository.load(CheckpointKind.best)
        assert record.epoch == state.best_epoch
        assert record.val_metric == state.best_val_metric
        assert record.seed == 4

    def test_missing_checkpoint(self, layout: RunLayout):
        with pytest.raises(StateError):
            CheckpointRepository(layout).load(CheckpointKind.last)

    def test_zero_epochs_writes_only_last(self, layout: RunLayout, cycles_vs_stars: GraphDataset):
        state = GinTrainer(GinConfig(num_layers=1, hidden_dim=4, epochs=0)).train(cycles_vs_stars)
        repository = CheckpointRepository(layout)
        written = repository.save_state(state)

        assert [path.name for path in written] == ['last.json']
        assert repository.exists(CheckpointKind.last)
        assert not repository.exists(CheckpointKind.best)

    def test_rejects_other_format_version(self, layout: RunLayout, cycles_vs_stars: GraphDataset):
        state = GinTrainer(GinConfig(num_layers=1, hidden_dim=4, epochs=0)).train(cycles_vs_stars)
        repository = CheckpointRepository(layout)
        record = repository.to_record(state.model, CheckpointKind.last, state)
        repository.save(CheckpointKind.last, record.model_copy(update={'format_version': 99}))

        with pytest.raises(StateError, match='format version'):
            repository.load(CheckpointKind.last)


class TestEmbeddingRepository:
    def test_round_trip_and_checksum(self, layout: RunLayout, cycles_vs_stars: GraphDataset):
        state = GinTrainer(GinConfig(num_layers=2, hidden_dim=5, epochs=0)).train(cycles_vs_stars)
        embeddings = embedding_set(state.model, cycles_vs_stars, CheckpointKind.last)
        repository = EmbeddingRepository(layout)
        repository.save(CheckpointKind.last, embeddings)

        loaded = repository.load(CheckpointKind.last)
        assert np.array_equal(loaded.vectors, embeddings.vectors)
        assert np.array_equal(loaded.labels, embeddings.labels)
        assert loaded.splits == embeddings.splits

        first = repository.checksum(CheckpointKind.last)
        repository.save(CheckpointKind.last, loaded)
        assert repository.checksum(CheckpointKind.last) == first
        assert len(first) == 64

    def test_missing_file(self, layout: RunLayout):
        with pytest.raises(StateError, match='run eval first'):
            EmbeddingRepository(layout).load(CheckpointKind.best)


class TestReportRepository:
    def test_curve_round_trip(self, layout: RunLayout):
        history = [
            EpochRecord(epoch=1, train_loss=0.7, val_accuracy=0.5, is_best=True),
            EpochRecord(epoch=2, train_loss=0.4, val_accuracy=0.75, is_best=True, extra={'test_nnk_accuracy': 0.8}),
        ]
        repository = ReportRepository(layout)
        repository.save_curve(history)

        assert repository.load_curve() == history
        assert len(layout.curve_file.read_text(encoding='utf-8').splitlines()) == 2


class TestExplanationRepository:
    def test_single_and_bulk(self, layout: RunLayout):
        explanation = Explanation(
            query_id=3,
            predicted=1,
            probs=[0.25, 0.75],
            neighbors=[
                NeighborAttribution(id=7, label=1, weight=0.75, similarity=0.9),
                NeighborAttribution(id=2, label=0, weight=0.25, similarity=0.8),
            ],
        )
        repository = ExplanationRepository(layout)
        path = repository.save((3, CheckpointKind.best), explanation)

        assert path.name == 'graph_3_best.json'
        assert repository.load((3, CheckpointKind.best)) == explanation

        bulk = repository.save_all(CheckpointKind.best, [explanation, explanation])
        assert len(bulk.read_text(encoding='utf-8').splitlines()) == 2
