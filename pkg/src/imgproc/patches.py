"""
Нарезка выровненных патчей и 4-кратная аугментация
"""
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from src.errors import ShapeError


@dataclass(frozen=True)
class PatchPair:
    sharp: np.ndarray    # (P, P)
    blurred: np.ndarray  # (P, P)
    top: int = 0
    left: int = 0


def extract_patches(sharp: np.ndarray, blurred: np.ndarray, patch: int,
                    stride: Optional[int] = None, count: Optional[int] = None,
                    seed: int = 0) -> List[PatchPair]:
    """
    Вырезает патчи в одинаковых координатах из чёткого и размытого изображений

    Режим сетки задаётся stride, случайный режим - count (координаты
    определяются зерном seed). Если не задано ни то ни другое, используется
    сетка с шагом patch.

    Args:
        sharp: чёткая плоскость (H, W)
        blurred: размытая плоскость (H, W)
        patch: сторона патча
        stride: шаг сетки
        count: число случайных патчей
        seed: зерно для случайного режима

    Returns:
        Список PatchPair
    """
    if sharp.shape != blurred.shape:
        raise ShapeError(f"Размеры чёткого {sharp.shape} и размытого {blurred.shape} не совпадают")
    height, width = sharp.shape
    if patch < 1 or height < patch or width < patch:
        raise ShapeError(f"Изображение {height}x{width} меньше патча {patch}")

    if count is not None:
        rng = np.random.default_rng(seed)
        tops = rng.integers(0, height - patch + 1, size=count)
        lefts = rng.integers(0, width - patch + 1, size=count)
        coords = list(zip(tops.tolist(), lefts.tolist()))
    else:
        step = stride or patch
        if step < 1:
            raise ShapeError(f"Шаг сетки должен быть положительным, получено {step}")
        coords = [(top, left)
                  for top in range(0, height - patch + 1, step)
                  for left in range(0, width - patch + 1, step)]

    return [PatchPair(sharp[top:top + patch, left:left + patch].copy(),
                      blurred[top:top + patch, left:left + patch].copy(),
                      top, left)
            for top, left in coords]


def flip_x(a: np.ndarray) -> np.ndarray:
    return a[:, ::-1].copy()


def flip_y(a: np.ndarray) -> np.ndarray:
    return a[::-1, :].copy()


def rot90(a: np.ndarray) -> np.ndarray:
    return np.rot90(a, 1).copy()


def rot270(a: np.ndarray) -> np.ndarray:
    return np.rot90(a, 3).copy()


def augment4(pair: PatchPair) -> List[PatchPair]:
    """
    Отражения по горизонтали и вертикали, повороты на 90 и 270 градусов

    Одинаковое преобразование применяется к обоим членам пары; сам
    оригинал в результат не входит.
    """
    if pair.sharp.shape[0] != pair.sharp.shape[1]:
        raise ShapeError(f"Повороты требуют квадратного патча, получено {pair.sharp.shape}")
    return [PatchPair(op(pair.sharp), op(pair.blurred), pair.top, pair.left)
            for op in (flip_x, flip_y, rot90, rot270)]
