"""
Раскладка датасета: root/sharp/<id>.png, root/blur/<id>.png, root/manifest.csv
"""
import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

import numpy as np

from src.config import BLUR_DIR, MANIFEST_FILENAME, MANIFEST_HEADER, SHARP_DIR
from src.data.images import load_png
from src.errors import DatasetError
from src.imgproc import ColorSpace, Image, rgb_to_lab, rgb_to_luminance
from src.utils import format_number_with_noun

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BlurProvenance:
    kernel_len: int
    kernel_angle: float
    noise_sigma: float
    seed: int


@dataclass(frozen=True)
class ManifestEntry:
    id: str
    sharp_path: Path
    blurred_path: Path
    provenance: Optional[BlurProvenance] = None


@dataclass(frozen=True)
class DatasetManifest:
    root: Path
    entries: List[ManifestEntry]

    def __len__(self):
        return len(self.entries)

    def select(self, offset: int = 0, limit: Optional[int] = None) -> "DatasetManifest":
        """Поднабор по порядку id: entries[offset:offset + limit]"""
        stop = None if limit is None else offset + limit
        return DatasetManifest(self.root, self.entries[offset:stop])


@dataclass(frozen=True)
class ImagePair:
    """Пара чёткой и размытой светлоты; lab - цветные плоскости размытого входа, если были"""
    id: str
    sharp: np.ndarray    # (H, W), L*/100
    blurred: np.ndarray  # (H, W), L*/100
    provenance: Optional[BlurProvenance] = None
    blurred_lab: Optional[Image] = None


def entry_paths(root: Path, image_id: str):
    return root / SHARP_DIR / f"{image_id}.png", root / BLUR_DIR / f"{image_id}.png"


def write_manifest(manifest: DatasetManifest):
    path = manifest.root / MANIFEST_FILENAME
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(MANIFEST_HEADER)
        for entry in manifest.entries:
            p = entry.provenance
            if p is None:
                writer.writerow([entry.id, "", "", "", ""])
            else:
                writer.writerow([entry.id, p.kernel_len, repr(p.kernel_angle), repr(p.noise_sigma), p.seed])
    logger.info(f"Манифест записан: {path}")
    return path


def load_manifest(root) -> DatasetManifest:
    """
    Читает manifest.csv или, если его нет, сканирует sharp/ и blur/ (данные без провенанса)

    Записи упорядочены лексикографически по id, файлы каждой записи должны существовать.
    """
    root = Path(root)
    manifest_path = root / MANIFEST_FILENAME
    entries: List[ManifestEntry] = []

    if manifest_path.exists():
        with open(manifest_path, newline="", encoding="utf-8") as f:
            reader = csv.DictReader(f)
            if reader.fieldnames != MANIFEST_HEADER:
                raise DatasetError(f"Неожиданный заголовок манифеста {manifest_path}: {reader.fieldnames}")
            for row in reader:
                provenance = None
                if row["kernel_len"]:
                    try:
                        provenance = BlurProvenance(int(row["kernel_len"]), float(row["kernel_angle"]),
                                                    float(row["noise_sigma"]), int(row["seed"]))
                    except ValueError as e:
                        raise DatasetError(f"Повреждённая строка манифеста для id {row['id']}: {e}") from e
                entries.append(ManifestEntry(row["id"], *entry_paths(root, row["id"]), provenance))
    else:
        sharp_dir = root / SHARP_DIR
        if not sharp_dir.is_dir():
            raise DatasetError(f"В {root} нет ни {MANIFEST_FILENAME}, ни каталога {SHARP_DIR}/")
        for sharp_path in sharp_dir.glob("*.png"):
            entries.append(ManifestEntry(sharp_path.stem, *entry_paths(root, sharp_path.stem)))

    entries.sort(key=lambda entry: entry.id)
    for entry in entries:
        for path in (entry.sharp_path, entry.blurred_path):
            if not path.exists():
                raise DatasetError(f"Файл датасета не найден: {path}")
    if not entries:
        raise DatasetError(f"Датасет {root} пуст")

    logger.info(f"Датасет {root}: {format_number_with_noun(len(entries), 'пара', 'пары', 'пар')}")
    return DatasetManifest(root, entries)


def to_luminance(img: Image) -> Image:
    if img.color_space == ColorSpace.SRGB_8BIT_SCALED:
        return rgb_to_luminance(img)
    return img


def load_pairs(manifest: DatasetManifest) -> List[ImagePair]:
    """Загружает пары и приводит их к светлоте; размеры внутри пары должны совпадать"""
    pairs = []
    for entry in manifest.entries:
        sharp = load_png(entry.sharp_path)
        blurred = load_png(entry.blurred_path)
        blurred_lab = rgb_to_lab(blurred) if blurred.color_space == ColorSpace.SRGB_8BIT_SCALED else None
        sharp_l, blurred_l = to_luminance(sharp).array, to_luminance(blurred).array
        if sharp_l.shape != blurred_l.shape:
            raise DatasetError(f"Пара {entry.id}: размеры {sharp_l.shape} и {blurred_l.shape} не совпадают")
        pairs.append(ImagePair(entry.id, sharp_l, blurred_l, entry.provenance, blurred_lab))
    return pairs
