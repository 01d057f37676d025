"""
Конфигурация обучения: архитектура, веса потерь, Adam, патчи и шаги
"""
from dataclasses import dataclass, fields

from src.config import (
    DEFAULT_AUGMENT,
    DEFAULT_BASE_CHANNELS,
    DEFAULT_BATCH_SIZE,
    DEFAULT_BETA1,
    DEFAULT_BETA2,
    DEFAULT_CHECKPOINT_EVERY,
    DEFAULT_CONVS_PER_RDB,
    DEFAULT_DECAY,
    DEFAULT_EPSILON,
    DEFAULT_GROWTH,
    DEFAULT_LOG_EVERY,
    DEFAULT_LR,
    DEFAULT_NUM_RDBS,
    DEFAULT_PASSTHROUGH_INIT,
    DEFAULT_PATCH_SIZE,
    DEFAULT_SEED,
    DEFAULT_STEPS,
    DEFAULT_W_EL,
    DEFAULT_W_L2,
)
from src.errors import ParameterError
from src.model import ArchConfig
from src.training.loss import LossWeights
from src.training.optimizer import AdamState


@dataclass(frozen=True)
class TrainConfig:
    num_rdbs: int = DEFAULT_NUM_RDBS
    convs_per_rdb: int = DEFAULT_CONVS_PER_RDB
    growth: int = DEFAULT_GROWTH
    base_channels: int = DEFAULT_BASE_CHANNELS
    w_l2: float = DEFAULT_W_L2
    w_el: float = DEFAULT_W_EL
    lr: float = DEFAULT_LR
    beta1: float = DEFAULT_BETA1
    beta2: float = DEFAULT_BETA2
    epsilon: float = DEFAULT_EPSILON
    decay: float = DEFAULT_DECAY
    patch_size: int = DEFAULT_PATCH_SIZE
    batch_size: int = DEFAULT_BATCH_SIZE
    steps: int = DEFAULT_STEPS
    seed: int = DEFAULT_SEED
    augment: bool = DEFAULT_AUGMENT
    checkpoint_every: int = DEFAULT_CHECKPOINT_EVERY
    log_every: int = DEFAULT_LOG_EVERY
    passthrough_init: bool = DEFAULT_PASSTHROUGH_INIT

    def __post_init__(self):
        # проверки архитектуры и весов потерь выполняют их собственные типы
        self.arch()
        self.loss_weights()
        for name in ("patch_size", "batch_size", "checkpoint_every", "log_every"):
            if getattr(self, name) < 1:
                raise ParameterError(f"{name} должно быть >= 1, получено {getattr(self, name)}")
        if self.steps < 0:
            raise ParameterError(f"steps должно быть >= 0, получено {self.steps}")
        if self.lr <= 0 or self.epsilon <= 0 or self.decay < 0:
            raise ParameterError("lr и epsilon должны быть положительными, decay неотрицательным")
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1):
            raise ParameterError(f"beta1 и beta2 должны лежать в [0, 1): {self.beta1}, {self.beta2}")

    @classmethod
    def field_types(cls):
        return {f.name: f.type for f in fields(cls)}

    def arch(self) -> ArchConfig:
        return ArchConfig(self.num_rdbs, self.convs_per_rdb, self.growth, self.base_channels)

    def loss_weights(self) -> LossWeights:
        return LossWeights(self.w_l2, self.w_el)

    def new_adam_state(self) -> AdamState:
        return AdamState(self.lr, self.beta1, self.beta2, self.epsilon, self.decay)
