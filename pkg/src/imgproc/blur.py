"""
Синтез размытия: y = (x ⊗ k) + n
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import ndimage

from src.config import MAX_MOTION_LENGTH
from src.errors import KernelError, ParameterError
from src.imgproc.image import ColorSpace, Image, require_single_channel

logger = logging.getLogger(__name__)

# Координаты точек отрезка округляются, чтобы cos(90°) ~ 6e-17 не давал лишних отсчётов
_COORD_DECIMALS = 9


@dataclass(frozen=True)
class BlurKernel:
    taps: np.ndarray  # (kh, kw), нечётные стороны, неотрицательные, сумма 1
    length: Optional[int] = None
    angle: Optional[float] = None

    def __post_init__(self):
        taps = np.array(self.taps, dtype=np.float64, copy=True)
        if taps.ndim != 2 or taps.shape[0] % 2 == 0 or taps.shape[1] % 2 == 0:
            raise KernelError(f"Ядро должно быть 2-D с нечётными сторонами, получено {taps.shape}")
        if (taps < 0).any():
            raise KernelError("Отсчёты ядра должны быть неотрицательными")
        total = taps.sum()
        if total <= 0:
            raise KernelError("Сумма отсчётов ядра должна быть положительной")
        taps = taps / total
        taps.setflags(write=False)
        object.__setattr__(self, "taps", taps)

    @classmethod
    def identity(cls) -> "BlurKernel":
        return cls(np.ones((1, 1)), length=1, angle=0.0)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.taps.shape


def motion_kernel(length: int, angle: float) -> BlurKernel:
    """
    Сглаженный отрезок заданной длины и угла в наименьшей сетке нечётного размера

    Отрезок центрирован в начале координат; length точек с шагом 1
    вдоль направления (cos a, -sin a) раскладываются билинейно по
    соседним пикселям, затем ядро нормируется к сумме 1.

    Args:
        length: длина в пикселях, 1..31
        angle: угол в градусах (0 - горизонталь, 90 - вертикаль)

    Returns:
        BlurKernel с метаданными (length, angle)
    """
    if not isinstance(length, (int, np.integer)) or length < 1 or length > MAX_MOTION_LENGTH:
        raise KernelError(f"Длина ядра должна быть от 1 до {MAX_MOTION_LENGTH}, получено {length}")
    theta = math.radians(angle)
    offsets = np.arange(length) - (length - 1) / 2.0
    xs = np.round(offsets * math.cos(theta), _COORD_DECIMALS)
    ys = np.round(-offsets * math.sin(theta), _COORD_DECIMALS)

    weights = {}
    for x, y in zip(xs, ys):
        x0, y0 = math.floor(x), math.floor(y)
        fx, fy = x - x0, y - y0
        for dx, wx in ((0, 1.0 - fx), (1, fx)):
            for dy, wy in ((0, 1.0 - fy), (1, fy)):
                w = wx * wy
                if w > 0:
                    key = (y0 + dy, x0 + dx)
                    weights[key] = weights.get(key, 0.0) + w

    half_h = max(abs(r) for r, _ in weights)
    half_w = max(abs(c) for _, c in weights)
    taps = np.zeros((2 * half_h + 1, 2 * half_w + 1))
    for (r, c), w in weights.items():
        taps[r + half_h, c + half_w] += w
    return BlurKernel(taps, length=int(length), angle=float(angle))


def synthesize_blur(sharp: Image, kernel: BlurKernel, noise_sigma: float, seed: int) -> Image:
    """
    Свёртка (с переворотом ядра) с отражающим дополнением, гауссов шум и ограничение [0, 1]

    Args:
        sharp: одноканальное чёткое изображение
        kernel: ядро размытия
        noise_sigma: СКО шума, >= 0
        seed: зерно генератора шума

    Returns:
        Размытое изображение в том же цветовом пространстве
    """
    plane = require_single_channel(sharp, "synthesize_blur")
    if noise_sigma < 0:
        raise ParameterError(f"noise_sigma должно быть >= 0, получено {noise_sigma}")
    # mirror: отражение без повтора крайнего пикселя
    blurred = ndimage.convolve(plane, kernel.taps, mode="mirror")
    if noise_sigma > 0:
        rng = np.random.default_rng(seed)
        blurred = blurred + rng.normal(0.0, noise_sigma, size=blurred.shape)
    color_space = sharp.color_space if sharp.color_space != ColorSpace.LAB else ColorSpace.LUMINANCE
    return Image(np.clip(blurred, 0.0, 1.0)[None], color_space)
