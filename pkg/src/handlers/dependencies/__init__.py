from src.handlers.dependencies.run_config import add_run_config_arguments, resolve_run_config

__all__ = [
    'add_run_config_arguments',
    'resolve_run_config',
]
