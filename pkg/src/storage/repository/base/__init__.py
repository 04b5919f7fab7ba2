from src.storage.repository.base.repository import BaseArtifactRepository

__all__ = [
    'BaseArtifactRepository',
]
