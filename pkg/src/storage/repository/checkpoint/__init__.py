from src.storage.repository.checkpoint.dtos import CheckpointRecord, ParameterRecord
from src.storage.repository.checkpoint.repository import CheckpointRepository

__all__ = [
    'CheckpointRecord',
    'CheckpointRepository',
    'ParameterRecord',
]
