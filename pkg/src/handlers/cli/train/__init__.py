from src.handlers.cli.train.command import TrainCommand

__all__ = [
    'TrainCommand',
]
