"""Forward and reverse-mode passes of the GIN encoder over block-diagonal graph batches."""

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.special import log_softmax, softmax

from src.exceptions import InvalidInput, NumericError, ShapeError
from src.services.gin.models import (
    HEAD_BIAS,
    HEAD_WEIGHT,
    ActivationKind,
    GinModel,
    PoolingKind,
    bias_name,
    epsilon_name,
    weight_name,
)
from src.services.graphs.models import ArrayModel, Graph


class GraphBatch(ArrayModel):
    """Disjoint union of graphs: stacked node features, block-diagonal adjacency, pooling operator."""

    features: np.ndarray
    adjacency: sparse.csr_matrix
    pooling: sparse.csr_matrix
    labels: np.ndarray
    graph_ids: np.ndarray

    @classmethod
    def from_graphs(
        cls,
        graphs: Sequence[Graph],
        pooling: PoolingKind = PoolingKind.sum,
        labels: Sequence[int] | None = None,
    ) -> 'GraphBatch':
        sizes = np.array([graph.num_nodes for graph in graphs], dtype=np.int64)
        offsets = np.concatenate([[0], np.cumsum(sizes)[:-1]]) if len(graphs) else np.zeros(0, dtype=np.int64)
        total = int(sizes.sum())
        feature_dim = graphs[0].feature_dim if graphs else 0

        features = np.vstack([graph.node_features for graph in graphs]) if total else np.zeros((0, feature_dim))
        edges = [graph.edges + offset for graph, offset in zip(graphs, offsets, strict=True)]
        stacked = np.vstack(edges) if edges else np.empty((0, 2), dtype=np.int64)
        rows = np.concatenate([stacked[:, 0], stacked[:, 1]])
        cols = np.concatenate([stacked[:, 1], stacked[:, 0]])
        adjacency = sparse.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(total, total))

        membership = np.repeat(np.arange(len(graphs)), sizes)
        if pooling == PoolingKind.mean:
            weights = 1.0 / np.repeat(np.maximum(sizes, 1), sizes)
        else:
            weights = np.ones(total)
        pool = sparse.csr_matrix((weights, (membership, np.arange(total))), shape=(len(graphs), total))

        return cls(
            features=features,
            adjacency=adjacency,
            pooling=pool,
            labels=np.array(labels if labels is not None else [graph.label for graph in graphs], dtype=np.int64),
            graph_ids=np.array([graph.id for graph in graphs], dtype=np.int64),
        )

    @property
    def num_graphs(self) -> int:
        return int(self.pooling.shape[0])


@dataclass
class LayerCache:
    inputs: np.ndarray
    # activations[i] is the input of linear i; activations[0] is (1 + eps) h + A h
    activations: list[np.ndarray] = field(default_factory=list)
    pre_activations: list[np.ndarray] = field(default_factory=list)
    dropout_masks: list[np.ndarray | None] = field(default_factory=list)


@dataclass
class ForwardPass:
    layers: list[LayerCache]
    node_embeddings: np.ndarray
    graph_embeddings: np.ndarray
    logits: np.ndarray

    def activation_pattern(self) -> list[np.ndarray]:
        return [z > 0 for cache in self.layers for z in cache.pre_activations[:-1]]


class GinNetwork:
    def __init__(self, model: GinModel):
        self._model = model
        self._config = model.config

    @property
    def model(self) -> GinModel:
        return self._model

    def _activate(self, z: np.ndarray) -> np.ndarray:
        if self._config.activation == ActivationKind.relu:
            return np.maximum(z, 0.0)
        return z

    def _activation_grad(self, z: np.ndarray) -> np.ndarray:
        if self._config.activation == ActivationKind.relu:
            return (z > 0).astype(np.float64)
        return np.ones_like(z)

    def forward(
        self,
        batch: GraphBatch,
        *,
        training: bool = False,
        rng: np.random.Generator | None = None,
    ) -> ForwardPass:
        params = self._model.parameters
        dropout = self._config.dropout if training else 0.0
        if dropout > 0 and rng is None:
            raise InvalidInput('Training-mode dropout needs a random generator')

        hidden = batch.features
        caches = []
        for layer in range(self._config.num_layers):
            first_weight = params[weight_name(layer, 0)]
            if hidden.shape[1] != first_weight.shape[1]:
                raise ShapeError(
                    f'GIN layer {layer} expects node dimension {first_weight.shape[1]}, got {hidden.shape[1]}'
                )
            epsilon = params[epsilon_name(layer)][0]
            cache = LayerCache(inputs=hidden)
            activation = (1.0 + epsilon) * hidden + batch.adjacency @ hidden
            for linear in range(self._config.mlp_depth):
                cache.activations.append(activation)
                z = activation @ params[weight_name(layer, linear)].T + params[bias_name(layer, linear)]
                cache.pre_activations.append(z)
                if linear == self._config.mlp_depth - 1:
                    activation = z
                    continue
                activation = self._activate(z)
                mask = None
                if dropout > 0:
                    mask = (rng.random(z.shape) >= dropout) / (1.0 - dropout)
                    activation = activation * mask
                cache.dropout_masks.append(mask)
            caches.append(cache)
            hidden = activation

        graph_embeddings = np.asarray(batch.pooling @ hidden)
        logits = graph_embeddings @ params[HEAD_WEIGHT].T + params[HEAD_BIAS]
        return ForwardPass(layers=caches, node_embeddings=hidden, graph_embeddings=graph_embeddings, logits=logits)

    def backward(self, batch: GraphBatch, forward: ForwardPass, grad_logits: np.ndarray) -> dict[str, np.ndarray]:
        params = self._model.parameters
        grads: dict[str, np.ndarray] = {
            HEAD_WEIGHT: grad_logits.T @ forward.graph_embeddings,
            HEAD_BIAS: grad_logits.sum(axis=0),
        }
        grad_hidden = np.asarray(batch.pooling.T @ (grad_logits @ params[HEAD_WEIGHT]))

        for layer in reversed(range(self._config.num_layers)):
            cache = forward.layers[layer]
            grad_z = grad_hidden
            for linear in reversed(range(self._config.mlp_depth)):
                weight = params[weight_name(layer, linear)]
                grads[weight_name(layer, linear)] = grad_z.T @ cache.activations[linear]
                grads[bias_name(layer, linear)] = grad_z.sum(axis=0)
                grad_input = grad_z @ weight
                if linear == 0:
                    grad_z = grad_input
                    break
                mask = cache.dropout_masks[linear - 1]
                if mask is not None:
                    grad_input = grad_input * mask
                grad_z = grad_input * self._activation_grad(cache.pre_activations[linear - 1])

            epsilon = params[epsilon_name(layer)][0]
            grads[epsilon_name(layer)] = np.array([np.sum(grad_z * cache.inputs)])
            grad_hidden = (1.0 + epsilon) * grad_z + batch.adjacency.T @ grad_z

        return grads

    def loss(self, batch: GraphBatch, forward: ForwardPass) -> float:
        log_probs = log_softmax(forward.logits, axis=1)
        return float(-np.mean(log_probs[np.arange(batch.num_graphs), batch.labels]))

    def loss_and_gradients(
        self,
        batch: GraphBatch,
        *,
        training: bool = False,
        rng: np.random.Generator | None = None,
    ) -> tuple[float, dict[str, np.ndarray], ForwardPass]:
        """Mean cross-entropy of the softmax head over the batch, with its parameter gradients."""
        forward = self.forward(batch, training=training, rng=rng)
        loss = self.loss(batch, forward)
        grad_logits = softmax(forward.logits, axis=1)
        grad_logits[np.arange(batch.num_graphs), batch.labels] -= 1.0
        grad_logits /= batch.num_graphs
        return loss, self.backward(batch, forward, grad_logits), forward


def gin_forward(
    model: GinModel,
    graph: Graph,
    training: bool = False,
    rng: np.random.Generator | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Node embeddings of the final layer and the pooled graph embedding for one graph."""
    batch = GraphBatch.from_graphs([graph], model.config.pooling)
    forward = GinNetwork(model).forward(batch, training=training, rng=rng)
    return forward.node_embeddings, forward.graph_embeddings[0]


def softmax_head(model: GinModel, graph_embedding: np.ndarray) -> np.ndarray:
    """Class probabilities of the linear softmax head; accepts one embedding or a row matrix."""
    embedding = np.asarray(graph_embedding, dtype=np.float64)
    weight = model.parameters[HEAD_WEIGHT]
    if embedding.shape[-1] != weight.shape[1]:
        raise ShapeError(f'Softmax head expects dimension {weight.shape[1]}, got {embedding.shape[-1]}')
    if not np.all(np.isfinite(embedding)):
        raise NumericError('Graph embedding contains non-finite values')
    logits = embedding @ weight.T + model.parameters[HEAD_BIAS]
    return softmax(logits, axis=-1)
