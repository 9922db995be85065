"""Shared utility modules for mspp_enhance."""

__all__ = [
    'config',
    'constants',
    'exceptions',
    'logger',
    'models',
]
