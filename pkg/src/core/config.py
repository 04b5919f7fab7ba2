from pathlib import Path

from pydantic_settings import BaseSettings, SettingsConfigDict


class Config(BaseSettings):
    model_config = SettingsConfigDict(env_file='.env', env_file_encoding='utf-8', extra='ignore')

    APP_NAME: str = 'graph-nnk'
    APP_VERSION: str = '0.1.0'
    DEBUG: bool = False

    BASE_DIR: Path = Path(__file__).resolve().parent.parent.parent

    DEFAULT_OUTPUT_DIR: Path = Path('runs')
    NUM_WORKERS: int = 1
    EVAL_BATCH_SIZE: int = 256
    CHECKPOINT_FORMAT_VERSION: int = 1

    LOG_TO_FILE: bool = False
    LOG_LEVEL: str = 'INFO'
    LOG_DATE_FORMAT: str = '%Y-%m-%d %H:%M:%S.%f'
    LOG_ARRAY_PREVIEW: int = 0

    _LOGS_DIR: Path = BASE_DIR / 'logs'

    @property
    def LOGS_DIR(self) -> Path:
        Path.mkdir(self._LOGS_DIR, parents=True, exist_ok=True)
        return self._LOGS_DIR


config = Config()
