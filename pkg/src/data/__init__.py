"""
Файлы: PNG, датасеты пар и чекпоинты
"""
from .images import load_png, quantize, save_png
from .checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from .dataset import (
    BlurProvenance,
    DatasetManifest,
    ImagePair,
    ManifestEntry,
    load_manifest,
    load_pairs,
    to_luminance,
    write_manifest,
)
from .synthetic import generate_synthetic_dataset, procedural_scene

__all__ = [
    'load_png', 'quantize', 'save_png',
    'Checkpoint', 'load_checkpoint', 'save_checkpoint',
    'BlurProvenance', 'DatasetManifest', 'ImagePair', 'ManifestEntry',
    'load_manifest', 'load_pairs', 'to_luminance', 'write_manifest',
    'generate_synthetic_dataset', 'procedural_scene',
]
