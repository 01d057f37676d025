"""
Residual Dense Network для деблюра по каналам (L, Лапласиан(L))
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from src.config import (
    DEFAULT_BASE_CHANNELS,
    DEFAULT_CONVS_PER_RDB,
    DEFAULT_GROWTH,
    DEFAULT_NUM_RDBS,
    INPUT_CHANNELS,
    KERNEL_SIZE,
)
from src.errors import ParameterError, ShapeError
from src.imgproc import Image, laplacian
from src.tensor import Tensor, add, concat_channels, conv2d, relu

logger = logging.getLogger(__name__)

Layer = Tuple[Tensor, Tensor]  # (weight, bias)


@dataclass(frozen=True)
class ArchConfig:
    num_rdbs: int = DEFAULT_NUM_RDBS
    convs_per_rdb: int = DEFAULT_CONVS_PER_RDB
    growth: int = DEFAULT_GROWTH
    base_channels: int = DEFAULT_BASE_CHANNELS
    kernel: int = KERNEL_SIZE

    def __post_init__(self):
        for name in ("num_rdbs", "convs_per_rdb", "growth", "base_channels"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value < 1:
                raise ParameterError(f"{name} должно быть положительным целым, получено {value!r}")
        if self.kernel != KERNEL_SIZE:
            raise ParameterError(f"Размер ядра фиксирован и равен {KERNEL_SIZE}")


def param_shapes(cfg: ArchConfig) -> Dict[str, Tuple[int, ...]]:
    """
    Имена и формы всех тензоров сети в каноническом порядке

    Returns:
        Словарь имя -> форма; веса (Cout, Cin, k, k), смещения (Cout,)
    """
    k, g0, g = cfg.kernel, cfg.base_channels, cfg.growth
    layers: List[Tuple[str, int, int, int]] = [
        ("sfe1", INPUT_CHANNELS, g0, k),
        ("sfe2", g0, g0, k),
    ]
    for m in range(cfg.num_rdbs):
        for c in range(cfg.convs_per_rdb):
            layers.append((f"rdb{m}.conv{c}", g0 + c * g, g, k))
        layers.append((f"rdb{m}.lff", g0 + cfg.convs_per_rdb * g, g0, 1))
    layers += [
        ("gff1", cfg.num_rdbs * g0, g0, 1),
        ("gff2", g0, g0, k),
        ("head", g0, 1, k),
    ]
    shapes: Dict[str, Tuple[int, ...]] = {}
    for name, cin, cout, size in layers:
        shapes[f"{name}.weight"] = (cout, cin, size, size)
        shapes[f"{name}.bias"] = (cout,)
    return shapes


@dataclass(frozen=True)
class ModelParams:
    """Именованные веса сети и её конфигурация; после создания не изменяются"""
    cfg: ArchConfig
    tensors: Dict[str, Tensor] = field(default_factory=dict)

    def __post_init__(self):
        expected = param_shapes(self.cfg)
        if set(expected) != set(self.tensors):
            missing = sorted(set(expected) - set(self.tensors))
            extra = sorted(set(self.tensors) - set(expected))
            raise ShapeError(f"Набор тензоров не соответствует архитектуре: нет {missing}, лишние {extra}")
        for name, shape in expected.items():
            if self.tensors[name].shape != shape:
                raise ShapeError(f"Тензор {name}: форма {self.tensors[name].shape}, ожидается {shape}")
        # канонический порядок
        object.__setattr__(self, "tensors", {name: self.tensors[name] for name in expected})

    def layer(self, name: str) -> Layer:
        return self.tensors[f"{name}.weight"], self.tensors[f"{name}.bias"]

    def block(self, m: int) -> "RdbParams":
        convs = [self.layer(f"rdb{m}.conv{c}") for c in range(self.cfg.convs_per_rdb)]
        return RdbParams(convs=convs, lff=self.layer(f"rdb{m}.lff"))

    def arrays(self) -> Dict[str, np.ndarray]:
        return {name: tensor.data for name, tensor in self.tensors.items()}

    @classmethod
    def from_arrays(cls, cfg: ArchConfig, arrays: Dict[str, np.ndarray], requires_grad: bool = True) -> "ModelParams":
        return cls(cfg, {name: Tensor(value, requires_grad=requires_grad, name=name)
                         for name, value in arrays.items()})

    def detached(self) -> "ModelParams":
        """Копия без requires_grad: проход не записывается в граф"""
        return ModelParams.from_arrays(self.cfg, self.arrays(), requires_grad=False)

    def rounded_to_float32(self) -> "ModelParams":
        return ModelParams.from_arrays(
            self.cfg, {name: value.astype(np.float32).astype(np.float64) for name, value in self.arrays().items()})


@dataclass(frozen=True)
class RdbParams:
    convs: List[Layer]
    lff: Layer


def init_params(cfg: ArchConfig, seed: int, passthrough: bool = False) -> ModelParams:
    """
    Нормальная инициализация со СКО sqrt(2 / fan_in), смещения нулевые

    Тензоры заполняются в каноническом порядке одним генератором,
    поэтому результат полностью определяется зерном.

    Args:
        cfg: архитектура
        seed: зерно генератора
        passthrough: после случайного заполнения сеть настраивается так, чтобы
            выход точно равнялся входной светлоте: канал 0 sfe1 копирует L,
            gff2 обнуляется, head читает канал 0. Блоки остаются случайными.
    """
    rng = np.random.default_rng(seed)
    arrays = {}
    for name, shape in param_shapes(cfg).items():
        if name.endswith(".bias"):
            arrays[name] = np.zeros(shape)
        else:
            fan_in = shape[1] * shape[2] * shape[3]
            arrays[name] = rng.normal(0.0, np.sqrt(2.0 / fan_in), size=shape)
    if passthrough:
        center = cfg.kernel // 2
        arrays["sfe1.weight"][0] = 0.0
        arrays["sfe1.weight"][0, 0, center, center] = 1.0
        arrays["gff2.weight"][:] = 0.0
        arrays["head.weight"][:] = 0.0
        arrays["head.weight"][0, 0, center, center] = 1.0
    logger.debug(f"Инициализировано {len(arrays)} тензоров, параметров: {count_params(cfg)}"
                 + (" (сквозная)" if passthrough else ""))
    return ModelParams.from_arrays(cfg, arrays)


def count_params(cfg: ArchConfig) -> int:
    """Число параметров в замкнутой форме"""
    k2, g0, g, c = cfg.kernel ** 2, cfg.base_channels, cfg.growth, cfg.convs_per_rdb
    sfe = (INPUT_CHANNELS * g0 * k2 + g0) + (g0 * g0 * k2 + g0)
    block = sum((g0 + i * g) * g * k2 + g for i in range(c)) + (g0 + c * g) * g0 + g0
    gff = (cfg.num_rdbs * g0 * g0 + g0) + (g0 * g0 * k2 + g0)
    head = k2 * g0 + 1
    return sfe + cfg.num_rdbs * block + gff + head


def rdb_forward(f_prev: Tensor, block: RdbParams) -> Tensor:
    """
    Residual dense block: плотные свёртки с ReLU, 1x1 слияние и локальный остаток

    F_c = relu(W_c [F_prev, F_1, ..., F_{c-1}]), F_LF = LFF([F_prev, F_1, ..., F_C]),
    результат F_LF + F_prev.
    """
    g0 = block.lff[0].shape[0]
    if f_prev.data.ndim != 4 or f_prev.shape[1] != g0:
        raise ShapeError(f"rdb_forward: ожидается {g0} каналов, получено {f_prev.shape}")
    features = [f_prev]
    for weight, bias in block.convs:
        features.append(relu(conv2d(concat_channels(features), weight, bias, padding=1)))
    local = conv2d(concat_channels(features), *block.lff, padding=0)
    return add(local, f_prev)


def rdn_forward(l_chan: Tensor, lap_chan: Tensor, params: ModelParams) -> Tensor:
    """
    Полный проход сети

    Args:
        l_chan: светлота (B, 1, H, W)
        lap_chan: Лапласиан светлоты (B, 1, H, W)
        params: веса сети

    Returns:
        Восстановленная светлота (B, 1, H, W), без ограничения диапазона
    """
    if l_chan.shape != lap_chan.shape or l_chan.data.ndim != 4 or l_chan.shape[1] != 1:
        raise ShapeError(f"rdn_forward: формы каналов {l_chan.shape} и {lap_chan.shape} несовместимы")
    x = concat_channels([l_chan, lap_chan])
    shallow = conv2d(x, *params.layer("sfe1"), padding=1)
    f = conv2d(shallow, *params.layer("sfe2"), padding=1)

    block_outputs = []
    for m in range(params.cfg.num_rdbs):
        f = rdb_forward(f, params.block(m))
        block_outputs.append(f)

    fused = conv2d(concat_channels(block_outputs), *params.layer("gff1"), padding=0)
    fused = conv2d(fused, *params.layer("gff2"), padding=1)
    # глобальное остаточное обучение
    features = add(fused, shallow)
    return conv2d(features, *params.layer("head"), padding=1)


def deblur_luminance(params: ModelParams, lum: Image) -> Image:
    """
    Инференс на одном изображении: L + Лапласиан(L) -> сеть -> ограничение [0, 1]
    """
    plane = lum.array
    lap = laplacian(lum).array
    l_chan = Tensor(plane[None, None])
    lap_chan = Tensor(lap[None, None])
    out = rdn_forward(l_chan, lap_chan, params.detached())
    return Image.luminance(np.clip(out.data[0, 0], 0.0, 1.0))
