from src.handlers.cli.explain.command import ExplainCommand

__all__ = [
    'ExplainCommand',
]
