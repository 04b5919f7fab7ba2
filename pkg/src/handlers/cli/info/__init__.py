from src.handlers.cli.info.command import InfoCommand

__all__ = [
    'InfoCommand',
]
