"""
Взвешенная функция потерь по краям (WEL)
"""
from dataclasses import dataclass
from typing import NamedTuple

from src.config import DEFAULT_W_EL, DEFAULT_W_L2
from src.errors import ParameterError, ShapeError
from src.imgproc import spatial_gradient_tensor
from src.tensor import Tensor, absolute, add, mean_all, scalar_mul, square, sub


@dataclass(frozen=True)
class LossWeights:
    w_l2: float = DEFAULT_W_L2
    w_el: float = DEFAULT_W_EL

    def __post_init__(self):
        if self.w_l2 < 0 or self.w_el < 0:
            raise ParameterError(f"Веса потерь должны быть неотрицательными: {self}")
        if self.w_l2 == 0 and self.w_el == 0:
            raise ParameterError("Оба веса потерь не могут быть нулевыми")


class LossParts(NamedTuple):
    wel: Tensor
    l2: Tensor
    el: Tensor


def _check_shapes(op: str, pred: Tensor, gt: Tensor):
    if pred.shape != gt.shape:
        raise ShapeError(f"{op}: формы предсказания {pred.shape} и эталона {gt.shape} не совпадают")


def edge_loss(pred: Tensor, gt: Tensor) -> Tensor:
    """
    EL: среднее |∇pred - ∇gt| по всем пикселям и обоим каналам градиента

    Норма разности градиентов понимается как L1 по компонентам.
    """
    _check_shapes("edge_loss", pred, gt)
    diff = sub(spatial_gradient_tensor(pred), spatial_gradient_tensor(gt))
    return mean_all(absolute(diff))


def l2_loss(pred: Tensor, gt: Tensor) -> Tensor:
    """Среднеквадратичная разность пикселей"""
    _check_shapes("l2_loss", pred, gt)
    return mean_all(square(sub(pred, gt)))


def wel_loss_parts(pred: Tensor, gt: Tensor, weights: LossWeights) -> LossParts:
    """WEL = w_l2 * L2 + w_el * EL вместе с обеими составляющими для лога"""
    l2 = l2_loss(pred, gt)
    el = edge_loss(pred, gt)
    wel = add(scalar_mul(l2, weights.w_l2), scalar_mul(el, weights.w_el))
    return LossParts(wel, l2, el)


def wel_loss(pred: Tensor, gt: Tensor, weights: LossWeights) -> Tensor:
    return wel_loss_parts(pred, gt, weights).wel
