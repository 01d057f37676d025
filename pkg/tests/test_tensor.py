"""
Тесты автодифференцирования и операций над тензорами
"""
import numpy as np
import pytest

from src.errors import GraphError, NonFiniteError, ShapeError
from src.tensor import (
    Tensor,
    absolute,
    add,
    backward,
    concat_channels,
    conv2d,
    mean_all,
    mul_const,
    relu,
    scalar_mul,
    square,
    sub,
)
from tests.gradcheck import max_relative_error

OP_TOLERANCE = 1e-5


def conv2d_oracle(x, weight, bias, padding):
    """Прямая взаимная корреляция четырьмя вложенными циклами"""
    b, cin, h, w = x.shape
    cout, _, kh, kw = weight.shape
    padded = np.pad(x, ((0, 0), (0, 0), (padding, padding), (padding, padding)))
    out_h, out_w = h + 2 * padding - kh + 1, w + 2 * padding - kw + 1
    out = np.zeros((b, cout, out_h, out_w))
    for n in range(b):
        for o in range(cout):
            for i in range(out_h):
                for j in range(out_w):
                    out[n, o, i, j] = np.sum(padded[n, :, i:i + kh, j:j + kw] * weight[o]) + bias[o]
    return out


def away_from_zero(rng, shape):
    """Значения с |x| >= 0.1, чтобы конечные разности не пересекали изломы relu и abs"""
    return rng.uniform(0.1, 1.0, size=shape) * rng.choice([-1.0, 1.0], size=shape)


class TestTensor:
    def test_data_is_copied_and_read_only(self):
        source = np.ones((1, 1, 2, 2))
        t = Tensor(source)
        source[0, 0, 0, 0] = 5.0
        assert t.data[0, 0, 0, 0] == 1.0
        with pytest.raises(ValueError):
            t.data[0, 0, 0, 0] = 2.0

    def test_non_finite_input_rejected(self):
        with pytest.raises(NonFiniteError):
            Tensor(np.array([1.0, np.nan]))

    def test_item_requires_single_element(self):
        assert Tensor(np.full((1, 1, 1, 1), 3.5)).item() == 3.5
        with pytest.raises(ShapeError):
            Tensor(np.zeros((2,))).item()

    def test_no_graph_without_requires_grad(self):
        out = add(Tensor(np.ones((1, 1, 2, 2))), Tensor(np.ones((1, 1, 2, 2))))
        assert out.graph is None
        assert not out.requires_grad


class TestBackward:
    def test_non_scalar_loss(self):
        x = Tensor(np.ones((1, 1, 2, 2)), requires_grad=True)
        with pytest.raises(ShapeError):
            backward(square(x))

    def test_loss_without_graph(self):
        with pytest.raises(GraphError):
            backward(mean_all(Tensor(np.ones((1, 1, 2, 2)))))

    def test_graph_consumed_after_backward(self):
        x = Tensor(np.ones((1, 1, 2, 2)), requires_grad=True)
        loss = mean_all(square(x))
        backward(loss)
        with pytest.raises(GraphError):
            backward(loss)

    def test_gradients_accumulate_over_fan_out(self):
        x = Tensor(np.arange(4.0).reshape(1, 1, 2, 2), requires_grad=True)
        loss = mean_all(add(x, x))
        loss.backward()
        np.testing.assert_array_equal(x.grad, np.full((1, 1, 2, 2), 0.5))

    def test_graphs_merge_across_independent_inputs(self):
        a = Tensor(np.ones((1, 1, 2, 2)), requires_grad=True)
        b = Tensor(np.ones((1, 1, 2, 2)), requires_grad=True)
        left, right = square(a), scalar_mul(b, 3.0)
        loss = mean_all(add(left, right))
        backward(loss)
        np.testing.assert_allclose(a.grad, np.full((1, 1, 2, 2), 0.5))
        np.testing.assert_allclose(b.grad, np.full((1, 1, 2, 2), 0.75))


class TestConv2d:
    @pytest.mark.parametrize("padding,kernel", [(0, 1), (1, 3), (2, 3), (2, 5)])
    def test_matches_loop_oracle(self, rng, padding, kernel):
        x = rng.normal(size=(2, 3, 6, 5))
        weight = rng.normal(size=(4, 3, kernel, kernel))
        bias = rng.normal(size=(4,))
        out = conv2d(Tensor(x), Tensor(weight), Tensor(bias), padding)
        np.testing.assert_allclose(out.data, conv2d_oracle(x, weight, bias, padding), rtol=1e-12, atol=1e-12)

    def test_output_shape(self, rng):
        out = conv2d(Tensor(rng.normal(size=(1, 2, 8, 8))), Tensor(rng.normal(size=(5, 2, 3, 3))),
                     Tensor(np.zeros(5)), padding=1)
        assert out.shape == (1, 5, 8, 8)

    def test_linear_in_input(self, rng):
        x, y = rng.normal(size=(1, 2, 5, 5)), rng.normal(size=(1, 2, 5, 5))
        weight, bias = Tensor(rng.normal(size=(3, 2, 3, 3))), Tensor(np.zeros(3))
        combined = conv2d(Tensor(2.0 * x - 0.5 * y), weight, bias, 1).data
        separate = 2.0 * conv2d(Tensor(x), weight, bias, 1).data - 0.5 * conv2d(Tensor(y), weight, bias, 1).data
        np.testing.assert_allclose(combined, separate, atol=1e-12)

    def test_deterministic(self, rng):
        x, weight, bias = rng.normal(size=(2, 2, 7, 7)), rng.normal(size=(2, 2, 3, 3)), rng.normal(size=(2,))
        first = conv2d(Tensor(x), Tensor(weight), Tensor(bias), 1).data
        second = conv2d(Tensor(x), Tensor(weight), Tensor(bias), 1).data
        assert np.array_equal(first, second)

    @pytest.mark.parametrize("x_shape,w_shape,b_shape,padding", [
        ((1, 2, 4, 4), (1, 3, 3, 3), (1,), 1),    # каналы
        ((1, 2, 4, 4), (1, 2, 2, 2), (1,), 1),    # чётное ядро
        ((1, 2, 4, 4), (1, 2, 3, 3), (2,), 1),    # смещение
        ((1, 2, 2, 2), (1, 2, 5, 5), (1,), 0),    # пустой выход
        ((2, 4, 4), (1, 2, 3, 3), (1,), 1),       # ранг
    ])
    def test_shape_errors(self, x_shape, w_shape, b_shape, padding):
        with pytest.raises(ShapeError):
            conv2d(Tensor(np.zeros(x_shape)), Tensor(np.zeros(w_shape)), Tensor(np.zeros(b_shape)), padding)

    @pytest.mark.parametrize("case", range(20))
    def test_gradients(self, case):
        rng = np.random.default_rng(case)
        padding = int(rng.integers(0, 3))
        kernel = int(rng.choice([1, 3]))
        x = rng.normal(size=(2, 2, 5, 4))
        weight = rng.normal(size=(3, 2, kernel, kernel))
        bias = rng.normal(size=(3,))
        out_shape = (2, 3, 5 + 2 * padding - kernel + 1, 4 + 2 * padding - kernel + 1)
        direction = rng.normal(size=out_shape)

        def loss_fn(ts):
            return mean_all(mul_const(conv2d(ts[0], ts[1], ts[2], padding), direction))

        assert max_relative_error(loss_fn, [x, weight, bias]) < OP_TOLERANCE


class TestElementwiseOps:
    SHAPE = (2, 2, 3, 3)

    def _check(self, rng, build, arrays):
        direction = rng.normal(size=build([Tensor(a) for a in arrays]).shape)

        def loss_fn(ts):
            return mean_all(mul_const(build(ts), direction))

        assert max_relative_error(loss_fn, arrays) < OP_TOLERANCE

    @pytest.mark.parametrize("case", range(10))
    def test_relu(self, case):
        rng = np.random.default_rng(100 + case)
        self._check(rng, lambda ts: relu(ts[0]), [away_from_zero(rng, self.SHAPE)])

    @pytest.mark.parametrize("case", range(10))
    def test_absolute(self, case):
        rng = np.random.default_rng(200 + case)
        self._check(rng, lambda ts: absolute(ts[0]), [away_from_zero(rng, self.SHAPE)])

    @pytest.mark.parametrize("case", range(10))
    def test_binary_and_scalar_ops(self, case):
        rng = np.random.default_rng(300 + case)
        a, b = rng.normal(size=self.SHAPE), rng.normal(size=self.SHAPE)
        mask = rng.normal(size=self.SHAPE)
        self._check(rng, lambda ts: add(ts[0], ts[1]), [a, b])
        self._check(rng, lambda ts: sub(ts[0], ts[1]), [a, b])
        self._check(rng, lambda ts: square(ts[0]), [a])
        self._check(rng, lambda ts: scalar_mul(ts[0], -1.7), [a])
        self._check(rng, lambda ts: mul_const(ts[0], mask), [a])

    @pytest.mark.parametrize("case", range(10))
    def test_concat_channels(self, case):
        rng = np.random.default_rng(400 + case)
        arrays = [rng.normal(size=(2, c, 3, 4)) for c in (1, 3, 2)]
        self._check(rng, lambda ts: concat_channels(ts), arrays)

    def test_mean_all_gradient(self, rng):
        x = rng.normal(size=(2, 3, 4, 5))
        assert max_relative_error(lambda ts: mean_all(square(ts[0])), [x]) < OP_TOLERANCE

    def test_relu_gradient_zero_at_zero(self):
        x = Tensor(np.zeros((1, 1, 2, 2)), requires_grad=True)
        mean_all(relu(x)).backward()
        np.testing.assert_array_equal(x.grad, np.zeros((1, 1, 2, 2)))

    def test_concat_single_input_is_identity(self):
        x = Tensor(np.ones((1, 2, 3, 3)))
        assert concat_channels([x]) is x

    def test_binary_ops_do_not_broadcast(self):
        with pytest.raises(ShapeError):
            add(Tensor(np.ones((1, 1, 2, 2))), Tensor(np.ones((1, 1, 2, 1))))

    def test_concat_mismatched_spatial(self):
        with pytest.raises(ShapeError):
            concat_channels([Tensor(np.ones((1, 1, 2, 2))), Tensor(np.ones((1, 1, 3, 2)))])

    def test_overflow_raises(self):
        with pytest.raises(NonFiniteError):
            square(Tensor(np.full((1, 1, 1, 1), 1e200)))
