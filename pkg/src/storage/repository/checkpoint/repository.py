from pathlib import Path

import numpy as np

from src.core.config import config as app_config
from src.core.logger import get_logger
from src.exceptions import StateError
from src.services.gin.models import CheckpointKind, GinModel, TrainState
from src.storage.repository.base import BaseArtifactRepository
from src.storage.repository.checkpoint.dtos import CheckpointRecord, ParameterRecord

logger = get_logger(__name__)


class CheckpointRepository(BaseArtifactRepository[CheckpointKind, CheckpointRecord]):
    def path_for(self, key: CheckpointKind) -> Path:
        return self._layout.checkpoint_file(key)

    def save(self, key: CheckpointKind, entity: CheckpointRecord) -> Path:
        path = self._write_text(self.path_for(key), entity.model_dump_json(indent=2))
        logger.info('Checkpoint written', kind=key, epoch=entity.epoch, path=str(path))
        return path

    def load(self, key: CheckpointKind) -> CheckpointRecord:
        path = self.path_for(key)
        if not path.is_file():
            raise StateError(f'Checkpoint {key} not found at {path}')
        record = CheckpointRecord.model_validate_json(path.read_text(encoding='utf-8'))
        if record.format_version != app_config.CHECKPOINT_FORMAT_VERSION:
            raise StateError(f'Checkpoint {path} has unsupported format version {record.format_version}')
        return record

    def save_state(self, state: TrainState) -> list[Path]:
        written = [self.save(CheckpointKind.last, self.to_record(state.model, CheckpointKind.last, state))]
        if state.best_checkpoint is not None:
            record = self.to_record(state.best_checkpoint, CheckpointKind.best, state)
            written.append(self.save(CheckpointKind.best, record))
        return written

    def load_model(self, key: CheckpointKind) -> GinModel:
        return self.to_model(self.load(key))

    @staticmethod
    def to_record(model: GinModel, kind: CheckpointKind, state: TrainState) -> CheckpointRecord:
        if kind == CheckpointKind.best:
            epoch, metric = state.best_epoch or 0, state.best_val_metric
        else:
            epoch = state.epoch
            metric = state.history[-1].val_accuracy if state.history else None
        return CheckpointRecord(
            format_version=app_config.CHECKPOINT_FORMAT_VERSION,
            kind=kind,
            epoch=epoch,
            val_metric=metric,
            seed=model.config.seed,
            input_dim=model.input_dim,
            num_classes=model.num_classes,
            config=model.config,
            parameters={
                name: ParameterRecord(shape=list(value.shape), data=[float(item).hex() for item in value.ravel()])
                for name, value in model.parameters.items()
            },
        )

    @staticmethod
    def to_model(record: CheckpointRecord) -> GinModel:
        parameters = {
            name: np.array([float.fromhex(item) for item in entry.data], dtype=np.float64).reshape(entry.shape)
            for name, entry in record.parameters.items()
        }
        return GinModel(
            config=record.config,
            input_dim=record.input_dim,
            num_classes=record.num_classes,
            parameters=parameters,
        )
