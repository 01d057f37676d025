"""
Генерация синтетического датасета пар (чёткое, размытое)
"""
import logging
from pathlib import Path
from typing import Optional, Sequence, Tuple

import numpy as np

from src.config import (
    DEFAULT_ANGLE_MAX,
    DEFAULT_ANGLE_MIN,
    DEFAULT_KERNEL_MAX,
    DEFAULT_KERNEL_MIN,
    DEFAULT_NOISE_SIGMA,
    DEFAULT_SYNTH_SIZE,
    PSNR_CAP,
)
from src.data.dataset import (
    BlurProvenance,
    DatasetManifest,
    ManifestEntry,
    entry_paths,
    to_luminance,
    write_manifest,
)
from src.data.images import load_png, quantize, save_png
from src.errors import DatasetError, ParameterError
from src.imgproc import Image, motion_kernel, synthesize_blur
from src.metrics import psnr
from src.utils import derive_seed, format_number_with_noun

logger = logging.getLogger(__name__)

_SUPERSAMPLE = 4


def procedural_scene(height: int, width: int, rng: np.random.Generator) -> np.ndarray:
    """
    Сцена с сильными краями: градиентный фон, круги, повёрнутые прямоугольники, штрихи

    Рисуется с 4-кратной сверхдискретизацией и усредняется блоками,
    поэтому края сглажены.

    Returns:
        Массив (height, width) со значениями в [0, 1]
    """
    ss = _SUPERSAMPLE
    ys, xs = np.mgrid[0:height * ss, 0:width * ss]
    ys = (ys + 0.5) / ss
    xs = (xs + 0.5) / ss
    scale = max(height, width)

    phi = rng.uniform(0.0, 2 * np.pi)
    low, high = np.sort(rng.uniform(0.0, 1.0, size=2))
    ramp = (np.cos(phi) * xs + np.sin(phi) * ys) / scale
    canvas = low + (high - low) * (ramp - ramp.min()) / max(np.ptp(ramp), 1e-12)

    for _ in range(int(rng.integers(3, 8))):
        kind = int(rng.integers(0, 3))
        cy, cx = rng.uniform(0, height), rng.uniform(0, width)
        value = rng.uniform(0.0, 1.0)
        if kind == 0:
            radius = rng.uniform(0.08, 0.25) * min(height, width)
            mask = (ys - cy) ** 2 + (xs - cx) ** 2 <= radius ** 2
        elif kind == 1:
            half_h, half_w = rng.uniform(0.05, 0.25, size=2) * min(height, width)
            theta = rng.uniform(0.0, np.pi)
            u = (xs - cx) * np.cos(theta) + (ys - cy) * np.sin(theta)
            v = -(xs - cx) * np.sin(theta) + (ys - cy) * np.cos(theta)
            mask = (np.abs(u) <= half_w) & (np.abs(v) <= half_h)
        else:
            # штрих: отрезок заданной толщины
            ey, ex = rng.uniform(0, height), rng.uniform(0, width)
            thickness = rng.uniform(1.0, 3.0)
            dy, dx = ey - cy, ex - cx
            length2 = max(dy * dy + dx * dx, 1e-12)
            t = np.clip(((ys - cy) * dy + (xs - cx) * dx) / length2, 0.0, 1.0)
            dist2 = (ys - cy - t * dy) ** 2 + (xs - cx - t * dx) ** 2
            mask = dist2 <= (thickness / 2) ** 2
        canvas = np.where(mask, value, canvas)

    scene = canvas.reshape(height, ss, width, ss).mean(axis=(1, 3))
    return np.clip(scene, 0.0, 1.0)


def generate_synthetic_dataset(out_dir, count: int, seed: int,
                               kernel_range: Tuple[int, int] = (DEFAULT_KERNEL_MIN, DEFAULT_KERNEL_MAX),
                               angle_range: Tuple[float, float] = (DEFAULT_ANGLE_MIN, DEFAULT_ANGLE_MAX),
                               noise_sigma: float = DEFAULT_NOISE_SIGMA,
                               size: Tuple[int, int] = (DEFAULT_SYNTH_SIZE, DEFAULT_SYNTH_SIZE),
                               base_images: Optional[Sequence[Path]] = None) -> DatasetManifest:
    """
    Создаёт пары y = (x ⊗ k) + n и манифест с полным провенансом

    Каждому id соответствует своё зерно derive_seed(seed, index), поэтому
    результат не зависит от порядка генерации. Размытие считается от уже
    квантованного чёткого изображения: повторный synthesize_blur по полям
    манифеста воспроизводит размытый файл.

    Args:
        out_dir: корень датасета
        count: число пар, >= 1
        seed: мастер-зерно
        kernel_range: диапазон длин ядра движения (включительно)
        angle_range: диапазон углов в градусах
        noise_sigma: СКО гауссова шума
        size: (высота, ширина) процедурных сцен
        base_images: пути к собственным чётким изображениям (используются по кругу)

    Returns:
        DatasetManifest
    """
    if count < 1:
        raise ParameterError(f"count должен быть >= 1, получено {count}")
    kernel_min, kernel_max = kernel_range
    angle_min, angle_max = angle_range
    if kernel_min > kernel_max or angle_min > angle_max:
        raise ParameterError(f"Пустой диапазон параметров ядра: {kernel_range}, {angle_range}")

    root = Path(out_dir)
    base_images = list(base_images or [])
    entries = []
    logger.info(f"Генерация {format_number_with_noun(count, 'пары', 'пар', 'пар')} в {root}")

    for index in range(count):
        image_id = f"{index:05d}"
        item_seed = derive_seed(seed, index)
        rng = np.random.default_rng(item_seed)

        if base_images:
            scene = to_luminance(load_png(base_images[index % len(base_images)])).array
        else:
            scene = procedural_scene(size[0], size[1], rng)
        sharp = Image.luminance(quantize(scene) / 255.0)

        kernel_len = int(rng.integers(kernel_min, kernel_max + 1))
        kernel_angle = float(rng.uniform(angle_min, angle_max)) if angle_max > angle_min else float(angle_min)
        blur_seed = derive_seed(item_seed, 1)
        blurred = synthesize_blur(sharp, motion_kernel(kernel_len, kernel_angle), noise_sigma, blur_seed)
        blurred = Image.luminance(quantize(blurred.array) / 255.0)

        if psnr(blurred.array, sharp.array) >= PSNR_CAP:
            logger.warning(f"Пара {image_id} не деградирована размытием (длина ядра {kernel_len})")

        sharp_path, blurred_path = entry_paths(root, image_id)
        try:
            save_png(sharp, sharp_path)
            save_png(blurred, blurred_path)
        except OSError as e:
            raise DatasetError(f"Не удалось записать пару {image_id} в {root}: {e}") from e

        provenance = BlurProvenance(kernel_len, kernel_angle, float(noise_sigma), blur_seed)
        entries.append(ManifestEntry(image_id, sharp_path, blurred_path, provenance))
        logger.debug(f"Пара {image_id}: ядро {kernel_len}px, угол {kernel_angle:.1f}°")

    manifest = DatasetManifest(root, entries)
    try:
        write_manifest(manifest)
    except OSError as e:
        raise DatasetError(f"Не удалось записать манифест в {root}: {e}") from e
    return manifest
