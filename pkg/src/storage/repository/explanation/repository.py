from pathlib import Path

from src.services.gin.models import CheckpointKind
from src.services.nnk.models import Explanation
from src.storage.repository.base import BaseArtifactRepository


class ExplanationRepository(BaseArtifactRepository[tuple[int, CheckpointKind], Explanation]):
    def path_for(self, key: tuple[int, CheckpointKind]) -> Path:
        graph_id, which = key
        return self._layout.explanation_file(graph_id, which)

    def save(self, key: tuple[int, CheckpointKind], entity: Explanation) -> Path:
        return self._write_text(self.path_for(key), entity.model_dump_json(indent=2) + '\n')

    def load(self, key: tuple[int, CheckpointKind]) -> Explanation:
        return Explanation.model_validate_json(self.path_for(key).read_text(encoding='utf-8'))

    def save_all(self, which: CheckpointKind, explanations: list[Explanation]) -> Path:
        """JSON-lines dump of every test-graph explanation for one checkpoint."""
        return self._write_text(
            self._layout.explanations_file(which),
            ''.join(f'{explanation.model_dump_json()}\n' for explanation in explanations),
        )
