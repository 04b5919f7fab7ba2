from src.storage.repository.explanation.repository import ExplanationRepository

__all__ = [
    'ExplanationRepository',
]
