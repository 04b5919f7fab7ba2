from src.handlers.cli.eval.command import EvalCommand

__all__ = [
    'EvalCommand',
]
