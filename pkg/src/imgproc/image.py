"""
Тип изображения: набор 2-D плоскостей float64 с тегом цветового пространства
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from src.errors import ParameterError, ShapeError

_RANGE_TOLERANCE = 1e-9


class ColorSpace(Enum):
    SRGB_8BIT_SCALED = "srgb"  # коды 8 бит, делённые на 255, значения в [0, 1]
    LAB = "lab"                # L* в [0, 100], a*, b* без ограничений
    LUMINANCE = "luminance"    # L* / 100, значения в [0, 1]
    SIGNED = "signed"          # отклики фильтров (Лапласиан, градиенты)


@dataclass(frozen=True)
class Image:
    planes: np.ndarray  # (C, H, W)
    color_space: ColorSpace

    def __post_init__(self):
        planes = np.array(self.planes, dtype=np.float64, copy=True)
        if planes.ndim == 2:
            planes = planes[None]
        if planes.ndim != 3 or planes.shape[1] == 0 or planes.shape[2] == 0:
            raise ShapeError(f"Изображение должно иметь форму (C, H, W), получено {planes.shape}")
        if self.color_space in (ColorSpace.SRGB_8BIT_SCALED, ColorSpace.LUMINANCE):
            if planes.min() < -_RANGE_TOLERANCE or planes.max() > 1.0 + _RANGE_TOLERANCE:
                raise ParameterError(f"Значения {self.color_space.name} должны лежать в [0, 1]")
            planes = np.clip(planes, 0.0, 1.0)
        planes.setflags(write=False)
        object.__setattr__(self, "planes", planes)

    @classmethod
    def luminance(cls, array: np.ndarray) -> "Image":
        return cls(np.asarray(array)[None], ColorSpace.LUMINANCE)

    @property
    def channels(self) -> int:
        return self.planes.shape[0]

    @property
    def height(self) -> int:
        return self.planes.shape[1]

    @property
    def width(self) -> int:
        return self.planes.shape[2]

    @property
    def array(self) -> np.ndarray:
        """Единственная плоскость одноканального изображения"""
        if self.channels != 1:
            raise ShapeError(f"Ожидается одноканальное изображение, каналов: {self.channels}")
        return self.planes[0]


def require_single_channel(img: Image, op: str) -> np.ndarray:
    if img.channels != 1:
        raise ShapeError(f"{op}: ожидается одноканальное изображение, каналов: {img.channels}")
    return img.planes[0]
