"""
Метрики качества с эталоном: PSNR, SSIM, MS-SSIM на светлоте в [0, 1]
"""
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np
from scipy import signal

from src.config import (
    MS_SSIM_WEIGHTS,
    PSNR_CAP,
    SSIM_DYNAMIC_RANGE,
    SSIM_K1,
    SSIM_K2,
    SSIM_WINDOW_SIGMA,
    SSIM_WINDOW_SIZE,
)
from src.errors import ParameterError, ShapeError
from src.imgproc import Image

ImageLike = Union[Image, np.ndarray]


def gaussian_window(size: int = SSIM_WINDOW_SIZE, sigma: float = SSIM_WINDOW_SIGMA) -> np.ndarray:
    coords = np.arange(size) - (size - 1) / 2.0
    g = np.exp(-(coords ** 2) / (2 * sigma ** 2))
    window = np.outer(g, g)
    return window / window.sum()


@dataclass(frozen=True)
class SsimParams:
    window: np.ndarray = field(default_factory=gaussian_window)
    k1: float = SSIM_K1
    k2: float = SSIM_K2
    dynamic_range: float = SSIM_DYNAMIC_RANGE
    weights: Tuple[float, ...] = tuple(w / sum(MS_SSIM_WEIGHTS) for w in MS_SSIM_WEIGHTS)

    @property
    def c1(self) -> float:
        return (self.k1 * self.dynamic_range) ** 2

    @property
    def c2(self) -> float:
        return (self.k2 * self.dynamic_range) ** 2


def _plane(img: ImageLike) -> np.ndarray:
    if isinstance(img, Image):
        return img.array
    array = np.asarray(img, dtype=np.float64)
    if array.ndim != 2:
        raise ShapeError(f"Ожидается 2-D плоскость, получено {array.shape}")
    return array


def _pair(a: ImageLike, b: ImageLike) -> Tuple[np.ndarray, np.ndarray]:
    a, b = _plane(a), _plane(b)
    if a.shape != b.shape:
        raise ShapeError(f"Размеры изображений не совпадают: {a.shape} и {b.shape}")
    return a, b


def psnr(a: ImageLike, b: ImageLike, peak: float = 1.0) -> float:
    """
    10 * log10(peak^2 / MSE) в дБ; для идентичных изображений возвращает PSNR_CAP
    """
    if peak <= 0:
        raise ParameterError(f"peak должен быть положительным, получено {peak}")
    a, b = _pair(a, b)
    mse = float(np.mean((a - b) ** 2))
    if mse == 0.0:
        return PSNR_CAP
    return 10.0 * math.log10(peak * peak / mse)


def _filter_valid(plane: np.ndarray, window: np.ndarray) -> np.ndarray:
    return signal.correlate2d(plane, window, mode="valid")


def ssim_maps(a: np.ndarray, b: np.ndarray, p: SsimParams) -> Tuple[np.ndarray, np.ndarray]:
    """
    Карты SSIM и контраст-структуры по окнам (только внутренняя область, без дополнения)

    Returns:
        (ssim_map, cs_map)
    """
    size = p.window.shape[0]
    if min(a.shape) < size:
        raise ShapeError(f"Изображение {a.shape} меньше окна {size}x{size}")
    mu_a = _filter_valid(a, p.window)
    mu_b = _filter_valid(b, p.window)
    var_a = _filter_valid(a * a, p.window) - mu_a * mu_a
    var_b = _filter_valid(b * b, p.window) - mu_b * mu_b
    cov = _filter_valid(a * b, p.window) - mu_a * mu_b
    cs_map = (2 * cov + p.c2) / (var_a + var_b + p.c2)
    luminance = (2 * mu_a * mu_b + p.c1) / (mu_a * mu_a + mu_b * mu_b + p.c1)
    return luminance * cs_map, cs_map


def ssim(a: ImageLike, b: ImageLike, p: Optional[SsimParams] = None) -> float:
    """Средний SSIM по гауссовым окнам 11x11"""
    a, b = _pair(a, b)
    ssim_map, _ = ssim_maps(a, b, p or SsimParams())
    return float(ssim_map.mean())


def _downsample(plane: np.ndarray) -> np.ndarray:
    """Среднее 2x2 и прореживание; нечётная последняя строка/столбец отбрасывается"""
    h, w = plane.shape[0] // 2, plane.shape[1] // 2
    return plane[:2 * h, :2 * w].reshape(h, 2, w, 2).mean(axis=(1, 3))


def available_scales(shape: Tuple[int, int], p: SsimParams) -> int:
    """Наибольшее число масштабов (<= числа весов), при котором грубейший масштаб не меньше окна"""
    size = p.window.shape[0]
    scales, side = 0, min(shape)
    while scales < len(p.weights) and side >= size:
        scales += 1
        side //= 2
    return scales


def ms_ssim(a: ImageLike, b: ImageLike, p: Optional[SsimParams] = None, scales: Optional[int] = None) -> float:
    """
    Многомасштабный SSIM

    На масштабах 1..M-1 берётся средняя контраст-структура, на грубейшем -
    полный SSIM; результат - взвешенное геометрическое произведение. Если
    изображение мало для 5 масштабов, число масштабов уменьшается, а веса
    первых M масштабов перенормируются. Отрицательные средние обнуляются
    перед возведением в дробную степень.

    Args:
        a, b: изображения одинакового размера
        p: параметры SSIM
        scales: принудительное число масштабов
    """
    p = p or SsimParams()
    a, b = _pair(a, b)
    usable = available_scales(a.shape, p)
    if usable == 0:
        raise ShapeError(f"Изображение {a.shape} меньше окна SSIM")
    if scales is None:
        scales = usable
    elif scales < 1 or scales > usable:
        raise ShapeError(f"Для изображения {a.shape} доступно масштабов: {usable}, запрошено {scales}")

    if scales == 1:
        return ssim(a, b, p)

    weights = np.array(p.weights[:scales])
    weights = weights / weights.sum()
    factors = []
    for level in range(scales):
        ssim_map, cs_map = ssim_maps(a, b, p)
        if level == scales - 1:
            factors.append(ssim_map.mean())
        else:
            factors.append(cs_map.mean())
            a, b = _downsample(a), _downsample(b)
    factors = np.maximum(np.array(factors), 0.0)
    return float(np.prod(factors ** weights))
