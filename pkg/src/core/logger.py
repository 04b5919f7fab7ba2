import logging
from logging.handlers import RotatingFileHandler
from typing import Any

import numpy as np
import structlog

from src.core.config import config


def setup_logging(level: int | str) -> None:
    handlers: list[logging.Handler] = []

    console_handler = logging.StreamHandler()
    console_handler.setLevel(level)
    handlers.append(console_handler)

    if config.LOG_TO_FILE:
        file_handler = RotatingFileHandler(
            config.LOGS_DIR / f'{config.APP_NAME}_{config.APP_VERSION}.log',
            maxBytes=10 * 1024 * 1024,
            backupCount=5,
            encoding='utf-8',
        )

        file_handler.setLevel(level)
        handlers.append(file_handler)

    logging.basicConfig(
        format='%(message)s',
        handlers=handlers,
        level=level,
    )


def get_logger(name: str, level: int | str = config.LOG_LEVEL) -> structlog.stdlib.BoundLogger:
    setup_logging(level)
    render_method = (
        structlog.dev.ConsoleRenderer()
        if config.DEBUG
        else structlog.processors.JSONRenderer()
    )
    structlog.configure(
        processors=[
            structlog.stdlib.add_log_level,
            structlog.stdlib.add_logger_name,
            structlog.processors.TimeStamper(fmt=config.LOG_DATE_FORMAT, utc=True),
            structlog.processors.CallsiteParameterAdder(
                parameters=[
                    structlog.processors.CallsiteParameter.MODULE,
                    structlog.processors.CallsiteParameter.FUNC_NAME,
                    structlog.processors.CallsiteParameter.LINENO,
                ]
            ),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            summarize_arrays,
            render_method,
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )

    return structlog.get_logger(name)


def summarize_arrays(logger: Any, method_name: str, event_dict: dict[str, Any]) -> dict[str, Any]:
    """Replace numpy payloads with their shape so matrices never land in the log stream."""

    def _summarize(obj: Any) -> Any:
        if isinstance(obj, np.ndarray):
            if obj.size <= config.LOG_ARRAY_PREVIEW:
                return obj.tolist()
            return {'shape': list(obj.shape), 'dtype': str(obj.dtype)}
        if isinstance(obj, np.generic):
            return obj.item()
        if isinstance(obj, dict):
            return {key: _summarize(value) for key, value in obj.items()}
        if isinstance(obj, list | tuple):
            return [_summarize(item) for item in obj]
        return obj

    return _summarize(event_dict)
