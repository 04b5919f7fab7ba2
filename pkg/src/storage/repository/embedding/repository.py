import hashlib
from pathlib import Path

import numpy as np
from pydantic import BaseModel

from src.core.logger import get_logger
from src.exceptions import StateError
from src.services.gin.models import CheckpointKind, EmbeddingSet
from src.services.graphs.models import Split
from src.storage.repository.base import BaseArtifactRepository

logger = get_logger(__name__)


class EmbeddingRecord(BaseModel):
    graph_id: int
    split: Split
    label: int
    vector: list[float]


class EmbeddingRepository(BaseArtifactRepository[CheckpointKind, EmbeddingSet]):
    """One JSON record per graph; floats use shortest round-trip repr, so reloads are exact."""

    def path_for(self, key: CheckpointKind) -> Path:
        return self._layout.embeddings_file(key)

    def save(self, key: CheckpointKind, entity: EmbeddingSet) -> Path:
        lines = [
            EmbeddingRecord(
                graph_id=int(graph_id),
                split=split,
                label=int(label),
                vector=[float(value) for value in vector],
            ).model_dump_json()
            for graph_id, split, label, vector in zip(
                entity.graph_ids, entity.splits, entity.labels, entity.vectors, strict=True
            )
        ]
        path = self._write_text(self.path_for(key), ''.join(f'{line}\n' for line in lines))
        logger.info('Embeddings written', kind=key, rows=len(lines), path=str(path))
        return path

    def load(self, key: CheckpointKind) -> EmbeddingSet:
        path = self.path_for(key)
        if not path.is_file():
            raise StateError(f'Embeddings for {key} not found at {path}; run eval first')
        records = [
            EmbeddingRecord.model_validate_json(line)
            for line in path.read_text(encoding='utf-8').splitlines()
            if line.strip()
        ]
        return EmbeddingSet(
            vectors=np.array([record.vector for record in records], dtype=np.float64),
            labels=np.array([record.label for record in records], dtype=np.int64),
            graph_ids=np.array([record.graph_id for record in records], dtype=np.int64),
            splits=tuple(record.split for record in records),
            checkpoint=key,
        )

    def checksum(self, key: CheckpointKind) -> str:
        return hashlib.sha256(self.path_for(key).read_bytes()).hexdigest()
