from src.storage.repository.embedding.repository import EmbeddingRecord, EmbeddingRepository

__all__ = [
    'EmbeddingRecord',
    'EmbeddingRepository',
]
