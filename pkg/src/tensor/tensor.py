"""
Тензор и граф вычислений для обратного автоматического дифференцирования
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import GraphError, NonFiniteError, ShapeError

logger = logging.getLogger(__name__)

BackwardFn = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]


class Tensor:
    """
    Плотный массив float64 (обычно формы (batch, channels, height, width))

    Данные после создания не изменяются (массив помечен только для чтения),
    изменяемым остаётся только буфер градиента grad.
    """

    def __init__(self, data, requires_grad: bool = False, name: Optional[str] = None):
        array = np.array(data, dtype=np.float64, copy=True)
        self._init(array, requires_grad, name)

    def _init(self, array: np.ndarray, requires_grad: bool, name: Optional[str]):
        if not np.isfinite(array).all():
            raise NonFiniteError(f"Тензор {name or ''} содержит NaN/Inf")
        array.setflags(write=False)
        self.data = array
        self.requires_grad = requires_grad
        self.name = name
        self.grad: Optional[np.ndarray] = None
        self._graph: Optional["Graph"] = None

    @classmethod
    def _wrap(cls, array: np.ndarray, name: Optional[str] = None) -> "Tensor":
        """Оборачивает свежий массив без копирования (для результатов операций)"""
        tensor = cls.__new__(cls)
        tensor._init(np.ascontiguousarray(array, dtype=np.float64), False, name)
        return tensor

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def size(self) -> int:
        return self.data.size

    @property
    def graph(self) -> Optional["Graph"]:
        return self._graph.resolve() if self._graph is not None else None

    def item(self) -> float:
        if self.data.size != 1:
            raise ShapeError(f"item() требует одноэлементный тензор, форма {self.shape}")
        return float(self.data.reshape(-1)[0])

    def backward(self):
        backward(self)

    def __repr__(self):
        flag = ", requires_grad=True" if self.requires_grad else ""
        return f"Tensor(shape={self.shape}{flag})"


@dataclass
class Node:
    """Записанная операция: входы, выход и правило обратного прохода"""
    op: str
    inputs: Tuple[Tensor, ...]
    output: Tensor
    backward_fn: BackwardFn


class Graph:
    """
    Упорядоченная запись операций

    Операции добавляются в порядке выполнения, поэтому входы каждой
    операции предшествуют ей (топологический порядок). Граф принадлежит
    одному потоку; независимые графы можно строить параллельно.
    """

    def __init__(self):
        self.nodes: List[Node] = []
        self.consumed = False
        self._merged_into: Optional["Graph"] = None

    def resolve(self) -> "Graph":
        graph = self
        while graph._merged_into is not None:
            graph = graph._merged_into
        return graph

    def merge(self, other: "Graph") -> "Graph":
        """
        Поглощает другой граф (узлы дописываются в конец)

        Графы до слияния независимы, поэтому конкатенация сохраняет
        топологический порядок.
        """
        target, source = self.resolve(), other.resolve()
        if target is source:
            return target
        if target.consumed or source.consumed:
            raise GraphError("Нельзя объединять уже использованные графы")
        target.nodes.extend(source.nodes)
        source.nodes = []
        source._merged_into = target
        return target

    def record(self, node: Node):
        if self.consumed:
            raise GraphError("Граф уже использован обратным проходом")
        self.nodes.append(node)

    def __len__(self):
        return len(self.nodes)


def record_op(op: str, data: np.ndarray, inputs: Sequence[Tensor], backward_fn: BackwardFn) -> Tensor:
    """
    Создаёт выход операции и записывает её в граф, если хоть один вход требует градиент

    Args:
        op: имя операции (для диагностики)
        data: значение выхода
        inputs: входные тензоры
        backward_fn: функция grad_out -> градиенты по каждому входу

    Returns:
        Выходной тензор
    """
    if not np.isfinite(data).all():
        raise NonFiniteError(f"Операция {op} вернула NaN/Inf")
    out = Tensor._wrap(data)

    tracked = [t for t in inputs if t.requires_grad]
    if not tracked:
        return out

    graph: Optional[Graph] = None
    for tensor in tracked:
        if tensor._graph is None:
            continue
        other = tensor._graph.resolve()
        graph = other if graph is None else graph.merge(other)
    if graph is None:
        graph = Graph()

    out.requires_grad = True
    out._graph = graph
    graph.record(Node(op, tuple(inputs), out, backward_fn))
    return out


def backward(loss: Tensor):
    """
    Обратный проход от скалярной функции потерь

    Градиенты накапливаются в grad всех тензоров с requires_grad
    (листьев и промежуточных), начальный градиент равен 1.

    Args:
        loss: одноэлементный тензор, записанный в граф

    Raises:
        ShapeError: loss не скаляр
        GraphError: loss не записан в граф или граф уже использован
    """
    if loss.size != 1:
        raise ShapeError(f"backward требует скалярную функцию потерь, форма {loss.shape}")
    graph = loss.graph
    if graph is None:
        raise GraphError("Функция потерь не связана с тензорами, требующими градиент")
    if graph.consumed:
        raise GraphError("Граф уже использован обратным проходом")

    grads: Dict[int, np.ndarray] = {id(loss): np.ones_like(loss.data)}
    holders: Dict[int, Tensor] = {id(loss): loss}

    for node in reversed(graph.nodes):
        grad_out = grads.get(id(node.output))
        if grad_out is None:
            continue
        input_grads = node.backward_fn(grad_out)
        for tensor, grad in zip(node.inputs, input_grads):
            if grad is None or not tensor.requires_grad:
                continue
            key = id(tensor)
            if key in grads:
                grads[key] = grads[key] + grad
            else:
                grads[key] = grad
                holders[key] = tensor

    graph.consumed = True

    for key, tensor in holders.items():
        grad = grads[key]
        if not np.isfinite(grad).all():
            raise NonFiniteError(f"Градиент тензора {tensor.name or tensor.shape} содержит NaN/Inf")
        tensor.grad = grad if tensor.grad is None else tensor.grad + grad

    logger.debug(f"Обратный проход: {len(graph.nodes)} операций")
