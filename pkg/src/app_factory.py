from argparse import ArgumentParser, Namespace
from collections.abc import Callable, Sequence

from src.core.config import config
from src.core.logger import get_logger
from src.handlers.cli.base import BaseCommand
from src.middlewares.logging_middleware import CommandCall

logger = get_logger('app_factory')

Middleware = Callable[[CommandCall], CommandCall]


class CliFactory:
    def __init__(
            self,
            *,
            title: str,
            version: str,
            commands: list[BaseCommand] | None = None,
            middlewares: list[Middleware] | None = None,
    ):
        self._parser = ArgumentParser(
            prog=title,
            description='GIN embeddings classified with non-negative kernel regression',
        )
        self._parser.add_argument('--version', action='version', version=f'{title} {version}')
        self._commands = {command.name: command for command in commands or []}
        self._middlewares = middlewares or []

        self.setup_app()

    @property
    def parser(self) -> ArgumentParser:
        return self._parser

    @property
    def commands(self) -> dict[str, BaseCommand]:
        return self._commands

    def setup_app(self) -> None:
        subparsers = self._parser.add_subparsers(dest='command', required=True, metavar='COMMAND')
        for command in self._commands.values():
            command.add_arguments(subparsers.add_parser(command.name, help=command.help, description=command.help))

    def build_call(self, command: BaseCommand) -> CommandCall:
        call: CommandCall = command.handle
        # first middleware in the list is the outermost
        for middleware in reversed(self._middlewares):
            call = middleware(call)
        return call

    def run(self, argv: Sequence[str] | None = None) -> int:
        try:
            args: Namespace = self._parser.parse_args(argv)
        except SystemExit as e:
            # argparse exits 2 on usage errors, matching the input-error code
            return int(e.code or 0)
        logger.debug('Arguments parsed', command=args.command, debug=config.DEBUG)
        return self.build_call(self._commands[args.command])(args)
