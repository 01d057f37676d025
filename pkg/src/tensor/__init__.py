"""
Тензоры с обратным автоматическим дифференцированием
"""
from .tensor import Graph, Node, Tensor, backward, record_op
from .ops import (
    absolute,
    add,
    concat_channels,
    conv2d,
    mean_all,
    mul_const,
    relu,
    scalar_mul,
    square,
    sub,
)

__all__ = [
    'Graph', 'Node', 'Tensor', 'backward', 'record_op',
    'absolute', 'add', 'concat_channels', 'conv2d', 'mean_all', 'mul_const',
    'relu', 'scalar_mul', 'square', 'sub',
]
