"""
Adam с поправкой смещения и обратно-временным затуханием шага
"""
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from src.config import DEFAULT_BETA1, DEFAULT_BETA2, DEFAULT_DECAY, DEFAULT_EPSILON, DEFAULT_LR
from src.errors import NonFiniteError, ShapeError
from src.model import ModelParams


@dataclass
class AdamState:
    lr: float = DEFAULT_LR
    beta1: float = DEFAULT_BETA1
    beta2: float = DEFAULT_BETA2
    epsilon: float = DEFAULT_EPSILON
    decay: float = DEFAULT_DECAY
    t: int = 0
    m: Dict[str, np.ndarray] = field(default_factory=dict)
    v: Dict[str, np.ndarray] = field(default_factory=dict)

    def effective_lr(self, t: int) -> float:
        """Шаг обучения на шаге t: lr / (1 + decay * t)"""
        return self.lr / (1.0 + self.decay * t)

    def rounded_to_float32(self) -> "AdamState":
        def cast(moments):
            return {name: value.astype(np.float32).astype(np.float64) for name, value in moments.items()}
        return AdamState(self.lr, self.beta1, self.beta2, self.epsilon, self.decay,
                         self.t, cast(self.m), cast(self.v))


def adam_step(params: ModelParams, grads: Dict[str, np.ndarray], state: AdamState) -> ModelParams:
    """
    Один шаг Adam

    Args:
        params: текущие веса
        grads: градиенты по имени тензора (для каждого тензора params)
        state: состояние оптимизатора, обновляется на месте (t, m, v)

    Returns:
        Новые веса (ModelParams неизменяемы)

    Raises:
        NonFiniteError: градиент содержит NaN/Inf; состояние не изменяется
    """
    arrays = params.arrays()
    for name, value in arrays.items():
        if name not in grads:
            raise ShapeError(f"Нет градиента для тензора {name}")
        if grads[name].shape != value.shape:
            raise ShapeError(f"Градиент {name}: форма {grads[name].shape}, ожидается {value.shape}")
        if not np.isfinite(grads[name]).all():
            raise NonFiniteError(f"Градиент тензора {name} содержит NaN/Inf, шаг Adam прерван")

    t = state.t + 1
    lr_t = state.effective_lr(t)
    correction1 = 1.0 - state.beta1 ** t
    correction2 = 1.0 - state.beta2 ** t

    updated = {}
    for name, value in arrays.items():
        grad = grads[name]
        m = state.m.get(name, np.zeros_like(value))
        v = state.v.get(name, np.zeros_like(value))
        m = state.beta1 * m + (1.0 - state.beta1) * grad
        v = state.beta2 * v + (1.0 - state.beta2) * grad * grad
        m_hat = m / correction1
        v_hat = v / correction2
        updated[name] = value - lr_t * m_hat / (np.sqrt(v_hat) + state.epsilon)
        state.m[name] = m
        state.v[name] = v

    state.t = t
    return ModelParams.from_arrays(params.cfg, updated)
