import time
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from src.core.logger import get_logger
from src.exceptions import DatasetLoadError, InvalidInput, LookupFailure
from src.services.gin.models import CheckpointKind, EmbeddingSet, GinModel, TrainState
from src.services.gin.network import softmax_head
from src.services.gin.service import EpochHook, GinTrainer, embedding_set
from src.services.graphs.models import DatasetSummary, GraphDataset, Split
from src.services.graphs.service import DatasetService, dataset_summary
from src.services.metrics.models import CheckpointComparison, MetricsReport, TimingReport
from src.services.metrics.service import compute_metrics
from src.services.neighbors.service import build_index
from src.services.nnk.models import Explanation, NnkDecision
from src.services.nnk.service import NnkClassifier, explain
from src.services.pipeline.models import CheckpointSelector, RunConfig
from src.storage.layout import RunLayout
from src.storage.repository import CheckpointRepository, EmbeddingRepository, ExplanationRepository, ReportRepository

logger = get_logger(__name__)


class PipelineService:
    """Train, export, evaluate and explain one run rooted at ``config.output_dir``."""

    def __init__(self, config: RunConfig):
        self._config = config
        self._layout = RunLayout(config.output_dir)
        self._checkpoints = CheckpointRepository(self._layout)
        self._embeddings = EmbeddingRepository(self._layout)
        self._explanations = ExplanationRepository(self._layout)
        self._reports = ReportRepository(self._layout)

    @property
    def layout(self) -> RunLayout:
        return self._layout

    def load_dataset(self) -> GraphDataset:
        path = self._config.dataset_path
        if not path.is_dir():
            raise DatasetLoadError(f'Dataset directory {path} does not exist')
        service = DatasetService(self._config.feature_mode, self._config.split_ratios, self._config.split_seed)
        return service.load(path)

    def cmd_info(self) -> DatasetSummary:
        return dataset_summary(self.load_dataset())

    def cmd_train(self) -> TrainState:
        dataset = self.load_dataset()
        self._layout.ensure()
        self._layout.config_file.write_text(self._config.model_dump_json(indent=2) + '\n', encoding='utf-8')
        self._reports.save_summary(dataset_summary(dataset))

        hook = self._curve_hook(dataset, self._config.nnk_every) if self._config.nnk_every is not None else None
        state = GinTrainer(self._config.gin).train(dataset, on_epoch_end=hook)
        self._checkpoints.save_state(state)
        self._reports.save_curve(state.history)
        logger.info('Training finished', best_epoch=state.best_epoch, best_val_accuracy=state.best_val_metric)
        return state

    def cmd_eval(self, selector: CheckpointSelector | None = None) -> MetricsReport:
        selector = selector or self._config.checkpoint
        dataset = self.load_dataset()
        self._layout.ensure()
        report = MetricsReport(
            dataset=dataset.name,
            seed=self._config.gin.seed,
            k_neighbors=self._config.k_neighbors,
            config=self._config.echo(),
        )
        timings = TimingReport()
        for kind in selector.kinds():
            model = self._checkpoints.load_model(kind)
            report.checkpoints[kind.value] = self.evaluate_checkpoint(model, dataset, kind, timings)

        self._reports.save_metrics(report)
        self._reports.save_timings(timings)
        return report

    def evaluate_checkpoint(
        self,
        model: GinModel,
        dataset: GraphDataset,
        kind: CheckpointKind,
        timings: TimingReport | None = None,
    ) -> CheckpointComparison:
        timings = timings if timings is not None else TimingReport()

        with _timed(timings, f'{kind}.embedding_export'):
            self._embeddings.save(kind, embedding_set(model, dataset, kind))
        # both classifiers read the exported file, never the in-memory matrix
        stored = self._embeddings.load(kind)
        test_rows = stored.rows(Split.test)
        if test_rows.size == 0:
            raise InvalidInput('Evaluation needs a non-empty test split')
        labels = stored.labels[test_rows]

        with _timed(timings, f'{kind}.supervised'):
            supervised_predictions = np.argmax(softmax_head(model, stored.vectors[test_rows]), axis=1)
        with _timed(timings, f'{kind}.nnk'):
            decisions = self._classify(stored, test_rows, model.num_classes)

        explanations = [
            explain(decision.query_id, decision.solution, decision.problem, model.num_classes, decision.fallback)
            for decision in decisions
        ]
        self._explanations.save_all(kind, explanations)

        supervised = compute_metrics(supervised_predictions, labels, model.num_classes)
        nnk = compute_metrics([decision.predicted for decision in decisions], labels, model.num_classes)
        kri_pairs = sum(decision.kri_pairs for decision in decisions)
        comparison = CheckpointComparison(
            checkpoint=kind.value,
            test_size=int(test_rows.size),
            supervised=supervised,
            nnk=nnk,
            accuracy_gap=nnk.accuracy - supervised.accuracy,
            macro_f1_gap=nnk.macro_f1 - supervised.macro_f1,
            mean_active_neighbors=float(np.mean([decision.solution.num_active for decision in decisions])),
            fallback_count=sum(decision.fallback for decision in decisions),
            kri_violation_rate=(
                sum(decision.kri_violations for decision in decisions) / kri_pairs if kri_pairs else None
            ),
            embedding_checksum=self._embeddings.checksum(kind),
        )
        logger.info(
            'Checkpoint evaluated',
            checkpoint=kind.value,
            supervised_accuracy=supervised.accuracy,
            nnk_accuracy=nnk.accuracy,
            accuracy_gap=comparison.accuracy_gap,
            mean_active_neighbors=comparison.mean_active_neighbors,
            fallbacks=comparison.fallback_count,
        )
        if comparison.accuracy_gap < 0:
            logger.warning(
                'NNK accuracy is below the supervised head', checkpoint=kind.value, gap=comparison.accuracy_gap
            )
        return comparison

    def cmd_explain(self, graph_id: int, which: CheckpointKind | None = None) -> tuple[Explanation, Path]:
        if which is None:
            which = self._config.checkpoint.kinds()[0]
        stored = self._embeddings.load(which)
        matches = np.flatnonzero(stored.graph_ids == graph_id)
        if matches.size == 0 or stored.splits[int(matches[0])] != Split.test:
            raise LookupFailure(f'Graph {graph_id} is not in the test split')
        row = int(matches[0])
        model = self._checkpoints.load_model(which)

        classifier = self._classifier(stored, model.num_classes)
        decision = classifier.classify(graph_id, stored.vectors[row])
        explanation = classifier.explain(decision)
        path = self._explanations.save((graph_id, which), explanation)
        logger.info('Explanation written', graph_id=graph_id, checkpoint=which.value, path=str(path))
        return explanation, path

    def _classifier(self, stored: EmbeddingSet, num_classes: int) -> NnkClassifier:
        return NnkClassifier(
            build_index(stored, self._config.metric),
            self._config.kernel,
            num_classes,
            k=self._config.k_neighbors,
            tolerance=self._config.solver_tolerance,
            tau_edge=self._config.tau_edge,
        )

    def _classify(self, stored: EmbeddingSet, rows: np.ndarray, num_classes: int) -> list[NnkDecision]:
        classifier = self._classifier(stored, num_classes)
        return classifier.classify_many(
            [int(graph_id) for graph_id in stored.graph_ids[rows]],
            stored.vectors[rows],
            workers=self._config.workers,
        )

    def _curve_hook(self, dataset: GraphDataset, every: int) -> EpochHook:
        def hook(state: TrainState) -> dict[str, float]:
            if state.epoch % every != 0:
                return {}
            return self._test_accuracies(state.model, dataset)

        return hook

    def _test_accuracies(self, model: GinModel, dataset: GraphDataset) -> dict[str, float]:
        embeddings = embedding_set(model, dataset)
        test_rows = embeddings.rows(Split.test)
        if test_rows.size == 0:
            return {}
        labels = embeddings.labels[test_rows]
        supervised = np.argmax(softmax_head(model, embeddings.vectors[test_rows]), axis=1)
        decisions = self._classify(embeddings, test_rows, model.num_classes)
        nnk = np.array([decision.predicted for decision in decisions])
        return {
            'test_supervised_accuracy': float(np.mean(supervised == labels)),
            'test_nnk_accuracy': float(np.mean(nnk == labels)),
        }


@contextmanager
def _timed(timings: TimingReport, key: str) -> Iterator[None]:
    started = time.perf_counter()
    yield
    timings.seconds[key] = time.perf_counter() - started
