"""
Преобразования sRGB <-> CIE L*a*b* (белая точка D65)
"""
import numpy as np

from src.errors import ShapeError
from src.imgproc.image import ColorSpace, Image

# Линейный sRGB -> XYZ (D65)
_RGB_TO_XYZ = np.array([
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
])
_XYZ_TO_RGB = np.linalg.inv(_RGB_TO_XYZ)
# Белая точка - образ линейного (1, 1, 1), чтобы белый давал ровно L* = 100
_WHITE = _RGB_TO_XYZ.sum(axis=1)

_DELTA = 6.0 / 29.0


def _srgb_to_linear(c: np.ndarray) -> np.ndarray:
    return np.where(c <= 0.04045, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)


def _linear_to_srgb(c: np.ndarray) -> np.ndarray:
    c = np.clip(c, 0.0, None)
    return np.where(c <= 0.0031308, c * 12.92, 1.055 * c ** (1.0 / 2.4) - 0.055)


def _f(t: np.ndarray) -> np.ndarray:
    return np.where(t > _DELTA ** 3, np.cbrt(t), t / (3 * _DELTA ** 2) + 4.0 / 29.0)


def _f_inv(t: np.ndarray) -> np.ndarray:
    return np.where(t > _DELTA, t ** 3, 3 * _DELTA ** 2 * (t - 4.0 / 29.0))


def rgb_to_lab(img: Image) -> Image:
    """
    sRGB -> линейный RGB -> XYZ (D65) -> L*a*b*

    Args:
        img: трёхканальное изображение SRGB_8BIT_SCALED

    Returns:
        Изображение LAB с плоскостями (L* в [0, 100], a*, b*)
    """
    if img.color_space != ColorSpace.SRGB_8BIT_SCALED or img.channels != 3:
        raise ShapeError(f"rgb_to_lab: ожидается 3-канальный sRGB, получено {img.channels} ({img.color_space.name})")
    linear = _srgb_to_linear(img.planes)
    xyz = np.tensordot(_RGB_TO_XYZ, linear, axes=1)
    fx, fy, fz = (_f(xyz[i] / _WHITE[i]) for i in range(3))
    lightness = np.clip(116.0 * fy - 16.0, 0.0, 100.0)
    return Image(np.stack([lightness, 500.0 * (fx - fy), 200.0 * (fy - fz)]), ColorSpace.LAB)


def rgb_to_luminance(img: Image) -> Image:
    """Канал L (светлота) в нормировке L*/100"""
    lab = rgb_to_lab(img)
    return Image.luminance(lab.planes[0] / 100.0)


def lab_recompose(lum: Image, lab: Image) -> Image:
    """
    Собирает цветное sRGB-изображение из новой светлоты и исходных a*, b*

    Args:
        lum: изображение LUMINANCE (L*/100)
        lab: исходное изображение LAB, из которого берутся a* и b*

    Returns:
        Изображение SRGB_8BIT_SCALED
    """
    if lum.color_space != ColorSpace.LUMINANCE or lum.channels != 1:
        raise ShapeError("lab_recompose: ожидается одноканальная светлота")
    if lab.color_space != ColorSpace.LAB or lab.channels != 3:
        raise ShapeError("lab_recompose: ожидается изображение LAB")
    if (lum.height, lum.width) != (lab.height, lab.width):
        raise ShapeError("lab_recompose: размеры светлоты и LAB не совпадают")

    fy = (lum.planes[0] * 100.0 + 16.0) / 116.0
    fx = fy + lab.planes[1] / 500.0
    fz = fy - lab.planes[2] / 200.0
    xyz = np.stack([_f_inv(f) * w for f, w in zip((fx, fy, fz), _WHITE)])
    linear = np.tensordot(_XYZ_TO_RGB, xyz, axes=1)
    return Image(np.clip(_linear_to_srgb(linear), 0.0, 1.0), ColorSpace.SRGB_8BIT_SCALED)
