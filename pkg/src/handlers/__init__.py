from src.handlers.cli import BaseCommand, EvalCommand, ExplainCommand, InfoCommand, TrainCommand

COMMANDS: list[BaseCommand] = [
    InfoCommand(),
    TrainCommand(),
    EvalCommand(),
    ExplainCommand(),
]

__all__ = [
    'COMMANDS',
]
