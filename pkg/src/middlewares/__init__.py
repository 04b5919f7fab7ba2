from src.middlewares.logging_middleware import CommandCall, CommandLoggingMiddleware

MIDDLEWARES: list[type[CommandLoggingMiddleware]] = [
    CommandLoggingMiddleware,
]

__all__ = [
    'MIDDLEWARES',
    'CommandCall',
    'CommandLoggingMiddleware',
]
