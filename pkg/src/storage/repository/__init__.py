from src.storage.repository.checkpoint import CheckpointRecord, CheckpointRepository
from src.storage.repository.embedding import EmbeddingRecord, EmbeddingRepository
from src.storage.repository.explanation import ExplanationRepository
from src.storage.repository.report import ReportRepository

__all__ = [
    'CheckpointRecord',
    'CheckpointRepository',
    'EmbeddingRecord',
    'EmbeddingRepository',
    'ExplanationRepository',
    'ReportRepository',
]
