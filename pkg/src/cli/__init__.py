"""
Командная строка
"""
from .config_file import load_train_config, parse_train_config
from .commands import build_parser, center_crop, run

__all__ = ['load_train_config', 'parse_train_config', 'build_parser', 'center_crop', 'run']
