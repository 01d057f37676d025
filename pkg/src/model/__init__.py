"""
Модель: Residual Dense Network с двухканальным входом
"""
from .rdn import (
    ArchConfig,
    ModelParams,
    RdbParams,
    count_params,
    deblur_luminance,
    init_params,
    param_shapes,
    rdb_forward,
    rdn_forward,
)

__all__ = [
    'ArchConfig', 'ModelParams', 'RdbParams', 'count_params', 'deblur_luminance',
    'init_params', 'param_shapes', 'rdb_forward', 'rdn_forward',
]
