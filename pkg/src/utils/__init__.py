"""
Утилиты для логов и детерминированных зёрен
"""
from .utils import derive_seed, format_number_with_noun, pluralize

__all__ = ['derive_seed', 'format_number_with_noun', 'pluralize']
