from src.storage.layout import RunLayout

__all__ = [
    'RunLayout',
]
