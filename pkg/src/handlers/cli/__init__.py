from src.handlers.cli.base import BaseCommand
from src.handlers.cli.eval import EvalCommand
from src.handlers.cli.explain import ExplainCommand
from src.handlers.cli.info import InfoCommand
from src.handlers.cli.train import TrainCommand

__all__ = [
    'BaseCommand',
    'EvalCommand',
    'ExplainCommand',
    'InfoCommand',
    'TrainCommand',
]
