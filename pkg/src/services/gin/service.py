from collections.abc import Callable, Sequence

import numpy as np

from src.core.config import config as app_config
from src.core.logger import get_logger
from src.exceptions import DivergenceError, InvalidInput, StateError
from src.services.gin.models import (
    CheckpointKind,
    EmbeddingSet,
    EpochRecord,
    GinConfig,
    GinModel,
    TrainState,
)
from src.services.gin.network import GinNetwork, GraphBatch
from src.services.gin.optimizer import AdamOptimizer
from src.services.graphs.models import Graph, GraphDataset, Split

logger = get_logger(__name__)

EpochHook = Callable[[TrainState], dict[str, float]]


def _batches(graphs: Sequence[Graph], size: int) -> list[Sequence[Graph]]:
    return [graphs[start : start + size] for start in range(0, len(graphs), size)]


def embed_graphs(model: GinModel, graphs: Sequence[Graph], batch_size: int | None = None) -> np.ndarray:
    """Deterministic (dropout off) graph embeddings, one row per graph in input order."""
    batch_size = batch_size or app_config.EVAL_BATCH_SIZE
    network = GinNetwork(model)
    rows = [
        network.forward(GraphBatch.from_graphs(chunk, model.config.pooling)).graph_embeddings
        for chunk in _batches(graphs, batch_size)
    ]
    return np.vstack(rows) if rows else np.zeros((0, model.config.hidden_dim))


def predict_classes(model: GinModel, graphs: Sequence[Graph], batch_size: int | None = None) -> np.ndarray:
    batch_size = batch_size or app_config.EVAL_BATCH_SIZE
    network = GinNetwork(model)
    logits = [
        network.forward(GraphBatch.from_graphs(chunk, model.config.pooling)).logits
        for chunk in _batches(graphs, batch_size)
    ]
    return np.argmax(np.vstack(logits), axis=1) if logits else np.zeros(0, dtype=np.int64)


def accuracy(model: GinModel, graphs: Sequence[Graph]) -> float:
    if not graphs:
        return 0.0
    labels = np.array([graph.label for graph in graphs])
    return float(np.mean(predict_classes(model, graphs) == labels))


class GinTrainer:
    """Mini-batch Adam on mean cross-entropy, keeping the best-validation and the last model."""

    def __init__(self, config: GinConfig):
        self._config = config

    def initialize(self, dataset: GraphDataset) -> TrainState:
        rng = np.random.default_rng(self._config.seed)
        model = GinModel.initialize(self._config, dataset.feature_dim, dataset.num_classes, rng)
        optimizer = AdamOptimizer(model, self._config.learning_rate)
        return TrainState(model=model, optimizer=optimizer.state, rng_state=rng.bit_generator.state)

    def train(self, dataset: GraphDataset, on_epoch_end: EpochHook | None = None) -> TrainState:
        train_graphs = dataset.subset(Split.train)
        val_graphs = dataset.subset(Split.val)
        if not train_graphs or not val_graphs:
            raise InvalidInput('Training needs non-empty train and val splits')

        state = self.initialize(dataset)
        rng = np.random.default_rng()
        rng.bit_generator.state = state.rng_state
        network = GinNetwork(state.model)
        optimizer = AdamOptimizer(state.model, self._config.learning_rate, state=state.optimizer)

        logger.info(
            'Training started',
            train=len(train_graphs),
            val=len(val_graphs),
            epochs=self._config.epochs,
            seed=self._config.seed,
        )
        for epoch in range(1, self._config.epochs + 1):
            order = rng.permutation(len(train_graphs))
            shuffled = [train_graphs[index] for index in order]
            total_loss = 0.0
            for batch_index, chunk in enumerate(_batches(shuffled, self._config.batch_size)):
                batch = GraphBatch.from_graphs(chunk, self._config.pooling)
                loss, grads, _ = network.loss_and_gradients(batch, training=True, rng=rng)
                if not np.isfinite(loss) or not all(np.all(np.isfinite(grad)) for grad in grads.values()):
                    raise DivergenceError(epoch=epoch, batch=batch_index)
                optimizer.step(grads)
                total_loss += loss * batch.num_graphs

            val_accuracy = accuracy(state.model, val_graphs)
            is_best = state.best_val_metric is None or val_accuracy > state.best_val_metric
            if is_best:
                state.best_val_metric = val_accuracy
                state.best_epoch = epoch
                state.best_checkpoint = state.model.clone()

            state.epoch = epoch
            state.rng_state = rng.bit_generator.state
            record = EpochRecord(
                epoch=epoch,
                train_loss=total_loss / len(train_graphs),
                val_accuracy=val_accuracy,
                is_best=is_best,
            )
            state.history.append(record)
            if on_epoch_end is not None:
                record.extra = on_epoch_end(state)

            logger.info(
                'Epoch finished',
                epoch=epoch,
                train_loss=record.train_loss,
                val_accuracy=val_accuracy,
                best=is_best,
                **record.extra,
            )

        return state


def export_embeddings(state: TrainState, dataset: GraphDataset, which: CheckpointKind) -> EmbeddingSet:
    model = state.checkpoint(which)
    if model is None:
        raise StateError(f'No {which} checkpoint was recorded')
    return embedding_set(model, dataset, which)


def embedding_set(model: GinModel, dataset: GraphDataset, which: CheckpointKind | None = None) -> EmbeddingSet:
    splits = dataset.splits if dataset.splits is not None else tuple(Split.train for _ in dataset.graphs)
    return EmbeddingSet(
        vectors=embed_graphs(model, dataset.graphs),
        labels=dataset.labels(),
        graph_ids=np.arange(len(dataset), dtype=np.int64),
        splits=splits,
        checkpoint=which,
    )
