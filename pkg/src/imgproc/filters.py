"""
Лапласиан и пространственные градиенты

Для каждой операции есть две реализации: numpy для предобработки
и дифференцируемая (фиксированная свёртка) для функции потерь.
Обе используют нулевое дополнение и совпадают до ошибок округления.
"""
import numpy as np

from src.config import LAPLACIAN_KERNEL
from src.errors import ShapeError
from src.imgproc.image import ColorSpace, Image, require_single_channel
from src.tensor import Tensor, conv2d, mul_const

_LAPLACIAN_WEIGHT = np.array(LAPLACIAN_KERNEL, dtype=np.float64)[None, None]

# Прямые разности как ядра 3x3: канал 0 - gx, канал 1 - gy
_GRADIENT_WEIGHT = np.zeros((2, 1, 3, 3))
_GRADIENT_WEIGHT[0, 0, 1, 1:] = (-1.0, 1.0)
_GRADIENT_WEIGHT[1, 0, 1:, 1] = (-1.0, 1.0)


def laplacian(img: Image) -> Image:
    """
    Корреляция с ядром [[0,-1,0],[-1,4,-1],[0,-1,0]], нулевое дополнение, тот же размер

    Выход не масштабируется; для входа в [0, 1] значения лежат в [-4, 4].
    Сумма попарных разностей с соседями даёт на постоянной области точный ноль.
    """
    plane = require_single_channel(img, "laplacian")
    padded = np.pad(plane, 1)
    out = ((plane - padded[:-2, 1:-1]) + (plane - padded[2:, 1:-1])
           + (plane - padded[1:-1, :-2]) + (plane - padded[1:-1, 2:]))
    return Image(out[None], ColorSpace.SIGNED)


def spatial_gradient(img: Image):
    """
    Прямые разности: gx(i,j) = I(i,j+1) - I(i,j), gy(i,j) = I(i+1,j) - I(i,j)

    Последний столбец gx и последняя строка gy равны нулю.

    Returns:
        Кортеж (gx, gy) изображений SIGNED
    """
    plane = require_single_channel(img, "spatial_gradient")
    gx = np.zeros_like(plane)
    gy = np.zeros_like(plane)
    gx[:, :-1] = plane[:, 1:] - plane[:, :-1]
    gy[:-1, :] = plane[1:, :] - plane[:-1, :]
    return Image(gx[None], ColorSpace.SIGNED), Image(gy[None], ColorSpace.SIGNED)


def laplacian_tensor(x: Tensor) -> Tensor:
    """Лапласиан батча (B, 1, H, W) через conv2d с фиксированным ядром"""
    if x.data.ndim != 4 or x.shape[1] != 1:
        raise ShapeError(f"laplacian_tensor: ожидается (B, 1, H, W), получено {x.shape}")
    return conv2d(x, Tensor(_LAPLACIAN_WEIGHT), Tensor(np.zeros(1)), padding=1)


def spatial_gradient_tensor(x: Tensor) -> Tensor:
    """
    Дифференцируемые прямые разности батча (B, 1, H, W) -> (B, 2, H, W)

    Канал 0 - gx, канал 1 - gy. Свёртка с нулевым дополнением даёт на
    последнем столбце/строке -I, поэтому они обнуляются маской.
    """
    if x.data.ndim != 4 or x.shape[1] != 1:
        raise ShapeError(f"spatial_gradient_tensor: ожидается (B, 1, H, W), получено {x.shape}")
    batch, _, height, width = x.shape
    raw = conv2d(x, Tensor(_GRADIENT_WEIGHT), Tensor(np.zeros(2)), padding=1)
    mask = np.ones((batch, 2, height, width))
    mask[:, 0, :, -1] = 0.0
    mask[:, 1, -1, :] = 0.0
    return mul_const(raw, mask)
