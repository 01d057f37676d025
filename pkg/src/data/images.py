"""
Чтение и запись PNG (8 бит, оттенки серого или RGB)
"""
import logging
from pathlib import Path

import numpy as np
from PIL import Image as PILImage, UnidentifiedImageError

from src.errors import ImageFormatError
from src.imgproc import ColorSpace, Image

logger = logging.getLogger(__name__)

# Режимы Pillow, которые приводятся к 8-битным L/RGB без потери глубины
_GRAY_MODES = {"L", "1", "LA"}
_COLOR_MODES = {"RGB", "RGBA", "P"}

_PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"
# Серый (0) и палитра (3) допускают глубину 1, 2 и 4 бита
_LOW_DEPTH_COLOR_TYPES = {0, 3}


def _check_png_header(path: Path, header: bytes):
    """Проверяет сигнатуру PNG и глубину канала из IHDR"""
    if len(header) < 26 or header[:8] != _PNG_SIGNATURE or header[12:16] != b"IHDR":
        raise ImageFormatError(f"{path} не является PNG")
    depth, color_type = header[24], header[25]
    if depth == 8 or (depth < 8 and color_type in _LOW_DEPTH_COLOR_TYPES):
        return
    raise ImageFormatError(f"Неподдерживаемая глубина {depth} бит (тип цвета {color_type}) в {path}: "
                           f"нужен 8-битный PNG")


def load_png(path) -> Image:
    """
    Загружает 8-битный PNG и масштабирует коды в [0, 1]

    Оттенки серого читаются как LUMINANCE, цветные - как SRGB_8BIT_SCALED.
    Глубина берётся из заголовка IHDR: Pillow открывает 16-битный RGB
    как обычный RGB.

    Raises:
        ImageFormatError: файла нет, это не PNG, не декодируется или глубина не 8 бит
    """
    path = Path(path)
    if not path.exists():
        raise ImageFormatError(f"Файл не найден: {path}")
    try:
        with open(path, "rb") as f:
            header = f.read(26)
    except OSError as e:
        raise ImageFormatError(f"Не удалось прочитать {path}: {e}") from e
    _check_png_header(path, header)
    try:
        with PILImage.open(path) as pil:
            mode = pil.mode
            if mode in _GRAY_MODES:
                codes = np.asarray(pil.convert("L"), dtype=np.float64)
                return Image(codes[None] / 255.0, ColorSpace.LUMINANCE)
            if mode in _COLOR_MODES:
                codes = np.asarray(pil.convert("RGB"), dtype=np.float64)
                return Image(codes.transpose(2, 0, 1) / 255.0, ColorSpace.SRGB_8BIT_SCALED)
    except (UnidentifiedImageError, OSError) as e:
        raise ImageFormatError(f"Не удалось декодировать {path}: {e}") from e
    raise ImageFormatError(f"Неподдерживаемая глубина/режим {mode} в {path}: нужен 8-битный PNG")


def quantize(values: np.ndarray) -> np.ndarray:
    """[0, 1] -> коды 0..255 с округлением половины вверх"""
    return np.floor(np.clip(values, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)


def save_png(img: Image, path):
    """
    Сохраняет изображение как 8-битный PNG (одна плоскость - серый, три - RGB)
    """
    path = Path(path)
    if img.color_space not in (ColorSpace.LUMINANCE, ColorSpace.SRGB_8BIT_SCALED):
        raise ImageFormatError(f"Сохранять можно только LUMINANCE или sRGB, получено {img.color_space.name}")
    codes = quantize(img.planes)
    if img.channels == 1:
        pil = PILImage.fromarray(codes[0])
    elif img.channels == 3:
        pil = PILImage.fromarray(np.ascontiguousarray(codes.transpose(1, 2, 0)))
    else:
        raise ImageFormatError(f"Нельзя сохранить изображение с {img.channels} каналами")
    path.parent.mkdir(parents=True, exist_ok=True)
    pil.save(path, format="PNG")
    logger.debug(f"Сохранено изображение {path}")
