from abc import ABC, abstractmethod
from pathlib import Path

from src.storage.layout import RunLayout


class BaseArtifactRepository[KeyType, ModelType](ABC):
    def __init__(self, layout: RunLayout):
        self._layout = layout

    @abstractmethod
    def path_for(self, key: KeyType) -> Path:
        raise NotImplementedError

    @abstractmethod
    def save(self, key: KeyType, entity: ModelType) -> Path:
        raise NotImplementedError

    @abstractmethod
    def load(self, key: KeyType) -> ModelType:
        raise NotImplementedError

    def exists(self, key: KeyType) -> bool:
        return self.path_for(key).is_file()

    @staticmethod
    def _write_text(path: Path, text: str) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding='utf-8')
        return path
