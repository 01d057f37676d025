"""
Дифференцируемые операции над тензорами

Бинарные операции не поддерживают broadcasting: формы операндов должны
совпадать точно. Свёртка реализована как взаимная корреляция (ядро не
переворачивается) с нулевым дополнением.
"""
from typing import Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from src.errors import ShapeError
from src.tensor.tensor import Tensor, record_op


def _require_same_shape(op: str, a: Tensor, b: Tensor):
    if a.shape != b.shape:
        raise ShapeError(f"{op}: формы не совпадают {a.shape} и {b.shape}")


def _correlate(padded: np.ndarray, weight: np.ndarray) -> np.ndarray:
    """(B,Cin,Hp,Wp) x (Cout,Cin,kh,kw) -> (B,Cout,H',W'), без дополнения"""
    kh, kw = weight.shape[2:]
    windows = sliding_window_view(padded, (kh, kw), axis=(2, 3))
    out = np.tensordot(windows, weight, axes=([1, 4, 5], [1, 2, 3]))
    return np.ascontiguousarray(out.transpose(0, 3, 1, 2))


def conv2d(x: Tensor, weight: Tensor, bias: Tensor, padding: int) -> Tensor:
    """
    Двумерная свёртка (взаимная корреляция) с нулевым дополнением

    Args:
        x: вход (B, Cin, H, W)
        weight: веса (Cout, Cin, kh, kw), kh и kw нечётные
        bias: вектор смещений (Cout,)
        padding: нулевое дополнение с каждой стороны

    Returns:
        Тензор (B, Cout, H + 2p - kh + 1, W + 2p - kw + 1)
    """
    if x.data.ndim != 4 or weight.data.ndim != 4:
        raise ShapeError(f"conv2d: ожидаются 4-мерные вход и веса, получено {x.shape} и {weight.shape}")
    cout, cin, kh, kw = weight.shape
    if x.shape[1] != cin:
        raise ShapeError(f"conv2d: вход имеет {x.shape[1]} каналов, веса ожидают {cin}")
    if kh % 2 == 0 or kw % 2 == 0:
        raise ShapeError(f"conv2d: размер ядра должен быть нечётным, получено {kh}x{kw}")
    if bias.shape != (cout,):
        raise ShapeError(f"conv2d: смещение должно иметь форму ({cout},), получено {bias.shape}")
    if padding < 0:
        raise ShapeError(f"conv2d: отрицательное дополнение {padding}")
    _, _, height, width = x.shape
    out_h = height + 2 * padding - kh + 1
    out_w = width + 2 * padding - kw + 1
    if out_h < 1 or out_w < 1:
        raise ShapeError(f"conv2d: пустой выход {out_h}x{out_w}")

    pad = ((0, 0), (0, 0), (padding, padding), (padding, padding))
    padded = np.pad(x.data, pad)
    out = _correlate(padded, weight.data) + bias.data[None, :, None, None]

    def backward_fn(grad):
        windows = sliding_window_view(padded, (kh, kw), axis=(2, 3))
        grad_weight = np.tensordot(grad, windows, axes=([0, 2, 3], [0, 2, 3]))
        grad_bias = grad.sum(axis=(0, 2, 3))
        # градиент по входу: полная корреляция с перевёрнутым ядром
        grad_padded = np.pad(grad, ((0, 0), (0, 0), (kh - 1, kh - 1), (kw - 1, kw - 1)))
        flipped = weight.data[:, :, ::-1, ::-1].transpose(1, 0, 2, 3)
        grad_input = _correlate(grad_padded, flipped)
        grad_input = grad_input[:, :, padding:padding + height, padding:padding + width]
        return grad_input, grad_weight, grad_bias

    return record_op("conv2d", out, (x, weight, bias), backward_fn)


def relu(x: Tensor) -> Tensor:
    """max(0, x); градиент в точке 0 равен 0"""
    mask = x.data > 0
    return record_op("relu", np.where(mask, x.data, 0.0), (x,), lambda grad: (grad * mask,))


def concat_channels(inputs: Sequence[Tensor]) -> Tensor:
    """Конкатенация по оси каналов; batch и пространственные размеры должны совпадать"""
    inputs = tuple(inputs)
    if not inputs:
        raise ShapeError("concat_channels: пустой список входов")
    if len(inputs) == 1:
        return inputs[0]
    first = inputs[0].shape
    for tensor in inputs[1:]:
        if tensor.data.ndim != 4 or (tensor.shape[0], *tensor.shape[2:]) != (first[0], *first[2:]):
            raise ShapeError(f"concat_channels: формы {first} и {tensor.shape} несовместимы")
    bounds = np.cumsum([0] + [t.shape[1] for t in inputs])
    out = np.concatenate([t.data for t in inputs], axis=1)

    def backward_fn(grad):
        return tuple(grad[:, start:stop] for start, stop in zip(bounds[:-1], bounds[1:]))

    return record_op("concat_channels", out, inputs, backward_fn)


def add(a: Tensor, b: Tensor) -> Tensor:
    _require_same_shape("add", a, b)
    return record_op("add", a.data + b.data, (a, b), lambda grad: (grad, grad))


def sub(a: Tensor, b: Tensor) -> Tensor:
    _require_same_shape("sub", a, b)
    return record_op("sub", a.data - b.data, (a, b), lambda grad: (grad, -grad))


def square(x: Tensor) -> Tensor:
    return record_op("square", x.data * x.data, (x,), lambda grad: (2.0 * x.data * grad,))


def absolute(x: Tensor) -> Tensor:
    """|x|; градиент использует sign с sign(0) = 0"""
    return record_op("abs", np.abs(x.data), (x,), lambda grad: (np.sign(x.data) * grad,))


def scalar_mul(x: Tensor, scalar: float) -> Tensor:
    scalar = float(scalar)
    return record_op("scalar_mul", x.data * scalar, (x,), lambda grad: (grad * scalar,))


def mul_const(x: Tensor, constant: np.ndarray) -> Tensor:
    """Поэлементное умножение на постоянный (не обучаемый) массив той же формы"""
    constant = np.asarray(constant, dtype=np.float64)
    if constant.shape != x.shape:
        raise ShapeError(f"mul_const: формы не совпадают {x.shape} и {constant.shape}")
    return record_op("mul_const", x.data * constant, (x,), lambda grad: (grad * constant,))


def mean_all(x: Tensor) -> Tensor:
    """Среднее по всем элементам; результат формы (1, 1, 1, 1)"""
    count = x.size
    if count == 0:
        raise ShapeError("mean_all: пустой тензор")
    value = np.full((1, 1, 1, 1), x.data.sum() / count)
    return record_op("mean_all", value, (x,), lambda grad: (np.full(x.shape, grad.item() / count),))
