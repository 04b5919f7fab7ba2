from pathlib import Path

from src.services.gin.models import CheckpointKind


class RunLayout:
    """Fixed artifact layout under one output directory."""

    def __init__(self, root: Path | str):
        self._root = Path(root)

    @property
    def root(self) -> Path:
        return self._root

    @property
    def config_file(self) -> Path:
        return self._root / 'config.json'

    @property
    def checkpoints_dir(self) -> Path:
        return self._root / 'checkpoints'

    @property
    def embeddings_dir(self) -> Path:
        return self._root / 'embeddings'

    @property
    def reports_dir(self) -> Path:
        return self._root / 'reports'

    @property
    def explanations_dir(self) -> Path:
        return self._root / 'explanations'

    def checkpoint_file(self, which: CheckpointKind) -> Path:
        return self.checkpoints_dir / f'{which}.json'

    def embeddings_file(self, which: CheckpointKind) -> Path:
        return self.embeddings_dir / f'{which}.jsonl'

    def explanations_file(self, which: CheckpointKind) -> Path:
        return self.explanations_dir / f'{which}.jsonl'

    def explanation_file(self, graph_id: int, which: CheckpointKind) -> Path:
        return self.explanations_dir / f'graph_{graph_id}_{which}.json'

    @property
    def metrics_file(self) -> Path:
        return self.reports_dir / 'metrics.json'

    @property
    def timings_file(self) -> Path:
        return self.reports_dir / 'timings.json'

    @property
    def curve_file(self) -> Path:
        return self.reports_dir / 'training_curve.jsonl'

    @property
    def summary_file(self) -> Path:
        return self.reports_dir / 'dataset_summary.json'

    def ensure(self) -> 'RunLayout':
        for directory in (self.checkpoints_dir, self.embeddings_dir, self.reports_dir, self.explanations_dir):
            directory.mkdir(parents=True, exist_ok=True)
        return self
