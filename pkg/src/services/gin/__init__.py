from src.services.gin.gradients import GradientCheckReport, gradient_check
from src.services.gin.models import (
    ActivationKind,
    CheckpointKind,
    EmbeddingSet,
    EpochRecord,
    EpsilonMode,
    GinConfig,
    GinModel,
    PoolingKind,
    TrainState,
)
from src.services.gin.network import GinNetwork, GraphBatch, gin_forward, softmax_head
from src.services.gin.service import GinTrainer, embed_graphs, embedding_set, export_embeddings, predict_classes

__all__ = [
    'ActivationKind',
    'CheckpointKind',
    'EmbeddingSet',
    'EpochRecord',
    'EpsilonMode',
    'GinConfig',
    'GinModel',
    'GinNetwork',
    'GinTrainer',
    'GradientCheckReport',
    'GraphBatch',
    'PoolingKind',
    'TrainState',
    'embed_graphs',
    'embedding_set',
    'export_embeddings',
    'gin_forward',
    'gradient_check',
    'predict_classes',
    'softmax_head',
]
