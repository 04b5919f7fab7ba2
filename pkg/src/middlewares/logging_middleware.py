import sys
import time
import uuid
from argparse import Namespace
from collections.abc import Callable
from pathlib import Path
from typing import Any, Literal

from pydantic import ValidationError

from src.core.config import config
from src.core.logger import get_logger
from src.exceptions import BaseGraphNnkError, ClientError, ServerError

logger = get_logger(__name__)

CommandCall = Callable[[Namespace], int]


class CommandLoggingMiddleware:
    """
    Wraps a CLI command: logs its start, elapsed time and outcome,
    and turns raised errors into process exit codes.
    """

    def __init__(self, call_next: CommandCall):
        self._call_next = call_next

    def __call__(self, args: Namespace) -> int:
        return self.dispatch(args)

    def dispatch(self, args: Namespace) -> int:
        context = self.get_context(args)
        logger.info(f'Command started {context["command"]}', context=context)  # noqa: G004
        start_time = time.perf_counter()

        try:
            exit_code = self._call_next(args)

        except BaseGraphNnkError as e:
            self.create_final_log('failed', context, start_time, e.exit_code, e)
            self.report(e.code, e.message)
            return e.exit_code

        except ValidationError as e:
            self.create_final_log('failed', context, start_time, ClientError.exit_code, e)
            self.report('invalid_config', str(e))
            return ClientError.exit_code

        except Exception as e:
            self.create_final_log('failed', context, start_time, ServerError.exit_code, e)
            if config.DEBUG:
                raise
            self.report('internal_error', str(e))
            return ServerError.exit_code

        else:
            self.create_final_log('successful', context, start_time, exit_code)
            return exit_code

    @staticmethod
    def report(code: str | None, message: str | None) -> None:
        sys.stderr.write(f'error[{code}]: {message}\n')

    @staticmethod
    def create_final_log(
        msg: Literal['successful', 'failed'],
        context: dict,
        start_time: float,
        exit_code: int,
        e: Exception | None = None,
    ) -> None:
        context['process_time'] = f'{time.perf_counter() - start_time:.4f}'
        context['exit_code'] = exit_code

        if msg == 'successful':
            logger.info(f'Command completed {context["command"]}', context=context)  # noqa: G004
        elif isinstance(e, BaseGraphNnkError):
            logger.log(e.level, f'Command failed {context["command"]}', context=context, error=e.message)  # noqa: G004
        else:
            logger.error(f'Command failed {context["command"]}', context=context, exc_info=e)  # noqa: G004

    @staticmethod
    def get_context(args: Namespace) -> dict[str, Any]:
        arguments = {
            key: str(value) if isinstance(value, Path) else value
            for key, value in vars(args).items()
            if not key.startswith('_')
        }
        return {
            'trace_id': str(uuid.uuid4()),
            'command': arguments.pop('command', None),
            'arguments': arguments,
        }
