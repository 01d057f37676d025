"""
Бинарный формат чекпоинта

Раскладка (little-endian):
    b"LDBN" | версия u32 | ArchConfig 5 x u32 | число тензоров u32
    для каждого тензора: длина имени u32, имя utf-8, ранг u32, размеры u32 x ранг, значения f32
    флаг состояния Adam u32; если 1: t u32, lr/beta1/beta2/epsilon/decay f64,
        затем m и v каждого тензора (f32, в том же порядке)
    контрольная сумма u64 (blake2b, 8 байт) всего предыдущего содержимого
"""
import hashlib
import logging
import os
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Dict, Optional, Tuple

import numpy as np

from src.config import CHECKPOINT_MAGIC, CHECKPOINT_VERSION
from src.errors import CheckpointError
from src.model import ArchConfig, ModelParams, param_shapes

if TYPE_CHECKING:
    from src.training.optimizer import AdamState

logger = logging.getLogger(__name__)

_CHECKSUM_SIZE = 8


@dataclass
class Checkpoint:
    params: ModelParams
    state: Optional["AdamState"] = None


def _checksum(body: bytes) -> bytes:
    return hashlib.blake2b(body, digest_size=_CHECKSUM_SIZE).digest()


def _pack_array(value: np.ndarray) -> bytes:
    return np.ascontiguousarray(value, dtype="<f4").tobytes()


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, count: int) -> bytes:
        if count < 0 or self.offset + count > len(self.data):
            raise CheckpointError("Чекпоинт обрезан или повреждён: не хватает данных")
        chunk = self.data[self.offset:self.offset + count]
        self.offset += count
        return chunk

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def f64(self) -> float:
        return struct.unpack("<d", self.take(8))[0]

    def array(self, shape: Tuple[int, ...]) -> np.ndarray:
        count = int(np.prod(shape, dtype=np.int64))
        raw = self.take(4 * count)
        return np.frombuffer(raw, dtype="<f4").astype(np.float64).reshape(shape)


def save_checkpoint(params: ModelParams, path, state: Optional["AdamState"] = None):
    """
    Атомарно сохраняет веса (и, при наличии, состояние Adam) в 32-битном виде

    Args:
        params: веса сети
        path: путь к файлу
        state: состояние оптимизатора для возобновления обучения
    """
    path = Path(path)
    cfg = params.cfg
    parts = [CHECKPOINT_MAGIC,
             struct.pack("<I", CHECKPOINT_VERSION),
             struct.pack("<5I", cfg.num_rdbs, cfg.convs_per_rdb, cfg.growth, cfg.base_channels, cfg.kernel),
             struct.pack("<I", len(params.tensors))]
    for name, tensor in params.tensors.items():
        encoded = name.encode("utf-8")
        parts.append(struct.pack("<I", len(encoded)) + encoded)
        parts.append(struct.pack(f"<{1 + tensor.data.ndim}I", tensor.data.ndim, *tensor.shape))
        parts.append(_pack_array(tensor.data))

    if state is None:
        parts.append(struct.pack("<I", 0))
    else:
        parts.append(struct.pack("<II", 1, state.t))
        parts.append(struct.pack("<5d", state.lr, state.beta1, state.beta2, state.epsilon, state.decay))
        for name, tensor in params.tensors.items():
            parts.append(_pack_array(state.m.get(name, np.zeros(tensor.shape))))
            parts.append(_pack_array(state.v.get(name, np.zeros(tensor.shape))))

    body = b"".join(parts)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp_path = path.with_name(path.name + ".tmp")
    with open(tmp_path, "wb") as f:
        f.write(body + _checksum(body))
    os.replace(tmp_path, path)
    logger.debug(f"Чекпоинт сохранён: {path}")


def load_checkpoint(path, arch: Optional[ArchConfig] = None) -> Checkpoint:
    """
    Загружает чекпоинт и проверяет его целостность

    Args:
        path: путь к файлу
        arch: ожидаемая архитектура; при расхождении ошибка называет тензор

    Returns:
        Checkpoint с весами и (если сохранено) состоянием Adam

    Raises:
        CheckpointError: неверная сигнатура или версия, обрезанный файл,
            несовпадение контрольной суммы или форм тензоров
    """
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise CheckpointError(f"Не удалось прочитать чекпоинт {path}: {e}") from e
    if len(data) < len(CHECKPOINT_MAGIC) + 4 + _CHECKSUM_SIZE:
        raise CheckpointError(f"Чекпоинт {path} обрезан: {len(data)} байт")

    body, stored_checksum = data[:-_CHECKSUM_SIZE], data[-_CHECKSUM_SIZE:]
    if _checksum(body) != stored_checksum:
        if data[:len(CHECKPOINT_MAGIC)] != CHECKPOINT_MAGIC:
            raise CheckpointError(f"{path} не является чекпоинтом (неверная сигнатура, "
                                  f"контрольная сумма не совпадает)")
        raise CheckpointError(f"Контрольная сумма чекпоинта {path} не совпадает: файл обрезан или повреждён")
    if data[:len(CHECKPOINT_MAGIC)] != CHECKPOINT_MAGIC:
        raise CheckpointError(f"{path} не является чекпоинтом (неверная сигнатура)")

    reader = _Reader(body)
    reader.take(len(CHECKPOINT_MAGIC))
    version = reader.u32()
    if version != CHECKPOINT_VERSION:
        raise CheckpointError(f"Версия чекпоинта {version} не поддерживается (ожидается {CHECKPOINT_VERSION})")

    params_arrays, stored_arch, state_fields = _parse_body(reader)
    if reader.offset != len(body):
        raise CheckpointError("Чекпоинт повреждён: лишние данные после содержимого")

    if arch is not None:
        _check_shapes(params_arrays, param_shapes(arch))
    try:
        stored_cfg = ArchConfig(*stored_arch)
    except ValueError as e:
        raise CheckpointError(f"Чекпоинт содержит недопустимую архитектуру: {e}") from e
    _check_shapes(params_arrays, param_shapes(stored_cfg))
    params = ModelParams.from_arrays(stored_cfg, params_arrays)

    state = None
    if state_fields is not None:
        from src.training.optimizer import AdamState
        t, hyper, m, v = state_fields
        state = AdamState(*hyper, t=t, m=m, v=v)
    logger.info(f"Загружен чекпоинт {path}" + (f" (шаг {state.t})" if state else ""))
    return Checkpoint(params, state)


def _parse_body(reader: _Reader):
    stored_arch = struct.unpack("<5I", reader.take(20))
    count = reader.u32()
    arrays: Dict[str, np.ndarray] = {}
    for _ in range(count):
        name_length = reader.u32()
        try:
            name = reader.take(name_length).decode("utf-8")
        except UnicodeDecodeError as e:
            raise CheckpointError(f"Чекпоинт повреждён: имя тензора не декодируется ({e})") from e
        rank = reader.u32()
        shape = tuple(reader.u32() for _ in range(rank))
        arrays[name] = reader.array(shape)

    state_fields = None
    has_state = reader.u32()
    if has_state == 1:
        t = reader.u32()
        hyper = tuple(reader.f64() for _ in range(5))
        m, v = {}, {}
        for name, value in arrays.items():
            m[name] = reader.array(value.shape)
            v[name] = reader.array(value.shape)
        state_fields = (t, hyper, m, v)
    elif has_state != 0:
        raise CheckpointError(f"Чекпоинт повреждён: неверный флаг состояния {has_state}")
    return arrays, stored_arch, state_fields


def _check_shapes(arrays: Dict[str, np.ndarray], expected: Dict[str, Tuple[int, ...]]):
    for name, shape in expected.items():
        if name not in arrays:
            raise CheckpointError(f"В чекпоинте нет тензора {name}")
        if arrays[name].shape != shape:
            raise CheckpointError(f"Тензор {name}: форма в чекпоинте {arrays[name].shape}, ожидается {shape}")
    extra = sorted(set(arrays) - set(expected))
    if extra:
        raise CheckpointError(f"Лишние тензоры в чекпоинте: {extra}")
