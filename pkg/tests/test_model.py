"""
Тесты RDN: формы, инициализация, тождественные случаи и градиенты
"""
import numpy as np
import pytest

from src.config import TEST_PRESET
from src.errors import ShapeError
from src.imgproc import Image, laplacian
from src.model import (
    ArchConfig,
    ModelParams,
    RdbParams,
    count_params,
    deblur_luminance,
    init_params,
    param_shapes,
    rdb_forward,
    rdn_forward,
)
from src.tensor import Tensor, conv2d, mean_all, mul_const, relu
from tests.gradcheck import params_relative_error


def zero_block(g0, growth, convs):
    layers = [(Tensor(np.zeros((growth, g0 + c * growth, 3, 3))), Tensor(np.zeros(growth))) for c in range(convs)]
    lff = (Tensor(np.zeros((g0, g0 + convs * growth, 1, 1))), Tensor(np.zeros(g0)))
    return RdbParams(convs=layers, lff=lff)


def inputs(rng, batch=1, size=8):
    l_chan = rng.uniform(0, 1, size=(batch, 1, size, size))
    lap = np.stack([laplacian(Image.luminance(p[0])).array for p in l_chan])[:, None]
    return l_chan, lap


class TestArchConfig:
    @pytest.mark.parametrize("field", ["num_rdbs", "convs_per_rdb", "growth", "base_channels"])
    def test_positive(self, field):
        with pytest.raises(ValueError):
            ArchConfig(**{**TEST_PRESET, field: 0})

    def test_kernel_fixed(self):
        with pytest.raises(ValueError):
            ArchConfig(kernel=5)


class TestParams:
    def test_shapes_of_test_preset(self, tiny_arch):
        shapes = param_shapes(tiny_arch)
        assert shapes["sfe1.weight"] == (16, 2, 3, 3)
        assert shapes["rdb0.conv3.weight"] == (16, 16 + 3 * 16, 3, 3)
        assert shapes["rdb2.lff.weight"] == (16, 16 + 4 * 16, 1, 1)
        assert shapes["gff1.weight"] == (16, 3 * 16, 1, 1)
        assert shapes["head.weight"] == (1, 16, 3, 3)
        assert shapes["head.bias"] == (1,)

    @pytest.mark.parametrize("cfg", [
        ArchConfig(**TEST_PRESET),
        ArchConfig(1, 1, 1, 1),
        ArchConfig(2, 3, 4, 5),
        ArchConfig(),
    ])
    def test_count_matches_shapes(self, cfg):
        assert count_params(cfg) == sum(int(np.prod(s)) for s in param_shapes(cfg).values())

    def test_count_composition(self, tiny_arch):
        shapes = param_shapes(tiny_arch)
        g0 = tiny_arch.base_channels
        assert int(np.prod(shapes["head.weight"])) + int(np.prod(shapes["head.bias"])) == 9 * g0 + 1
        block = sum(int(np.prod(s)) for name, s in shapes.items() if name.startswith("rdb0."))
        doubled = ArchConfig(**{**TEST_PRESET, "num_rdbs": 2 * tiny_arch.num_rdbs})
        # каждый новый блок плюс вход gff1, выросший на g0 каналов
        extra = tiny_arch.num_rdbs * (block + g0 * g0)
        assert count_params(doubled) == count_params(tiny_arch) + extra

    def test_init_deterministic(self, tiny_arch):
        first, second = init_params(tiny_arch, 5), init_params(tiny_arch, 5)
        for name in param_shapes(tiny_arch):
            assert np.array_equal(first.tensors[name].data, second.tensors[name].data)
        assert not np.array_equal(first.tensors["sfe2.weight"].data, init_params(tiny_arch, 6).tensors["sfe2.weight"].data)

    def test_init_statistics(self, tiny_arch):
        params = init_params(tiny_arch, 0)
        weight = params.tensors["sfe2.weight"].data  # 16x16x3x3, fan_in = 144
        assert weight.std() == pytest.approx(np.sqrt(2.0 / 144), rel=0.1)
        assert abs(weight.mean()) < 0.02
        for name, tensor in params.tensors.items():
            if name.endswith(".bias"):
                assert not tensor.data.any()

    def test_wrong_shape_rejected(self, tiny_arch):
        arrays = dict(init_params(tiny_arch, 0).arrays())
        arrays["gff2.weight"] = np.zeros((16, 16, 1, 1))
        with pytest.raises(ShapeError):
            ModelParams.from_arrays(tiny_arch, arrays)

    def test_missing_tensor_rejected(self, tiny_arch):
        arrays = dict(init_params(tiny_arch, 0).arrays())
        del arrays["head.bias"]
        with pytest.raises(ShapeError):
            ModelParams.from_arrays(tiny_arch, arrays)

    def test_rounded_to_float32(self, tiny_arch):
        rounded = init_params(tiny_arch, 0).rounded_to_float32()
        for tensor in rounded.tensors.values():
            assert np.array_equal(tensor.data, tensor.data.astype(np.float32).astype(np.float64))


class TestRdb:
    def test_zero_weights_are_identity(self, rng):
        f = Tensor(rng.normal(size=(2, 6, 5, 5)))
        out = rdb_forward(f, zero_block(6, 3, 4))
        assert np.array_equal(out.data, f.data)

    def test_hand_trace_single_conv(self, rng):
        # один слой: F1 = relu(W1 * F0 + b1), LFF складывает [F0, F1] с весами 1x1
        f0 = rng.normal(size=(1, 1, 4, 4))
        w1 = rng.normal(size=(1, 1, 3, 3))
        b1 = np.array([0.1])
        lff_w = np.array([0.5, 2.0]).reshape(1, 2, 1, 1)
        lff_b = np.array([-0.3])
        block = RdbParams(convs=[(Tensor(w1), Tensor(b1))], lff=(Tensor(lff_w), Tensor(lff_b)))
        out = rdb_forward(Tensor(f0), block)

        f1 = relu(conv2d(Tensor(f0), Tensor(w1), Tensor(b1), 1)).data
        expected = 0.5 * f0 + 2.0 * f1 - 0.3 + f0
        np.testing.assert_allclose(out.data, expected, atol=1e-12)

    def test_wrong_channels(self, rng):
        with pytest.raises(ShapeError):
            rdb_forward(Tensor(rng.normal(size=(1, 5, 4, 4))), zero_block(6, 3, 2))


class TestRdn:
    def test_output_shape(self, rng, tiny_arch):
        l_chan, lap = inputs(rng, batch=2, size=10)
        out = rdn_forward(Tensor(l_chan), Tensor(lap), init_params(tiny_arch, 0))
        assert out.shape == (2, 1, 10, 10)

    def test_batch_items_independent(self, rng, tiny_arch):
        params = init_params(tiny_arch, 1).detached()
        l_chan, lap = inputs(rng, batch=3)
        out = rdn_forward(Tensor(l_chan), Tensor(lap), params).data
        order = [2, 0, 1]
        permuted = rdn_forward(Tensor(l_chan[order]), Tensor(lap[order]), params).data
        np.testing.assert_allclose(permuted, out[order], atol=1e-12)
        single = rdn_forward(Tensor(l_chan[1:2]), Tensor(lap[1:2]), params).data
        np.testing.assert_allclose(single[0], out[1], atol=1e-12)

    def test_composition_without_blocks(self, rng, tiny_arch):
        # при нулевых блоках и GFF выход равен head(sfe1(x)) через глобальный остаток
        arrays = {name: np.zeros(shape) for name, shape in param_shapes(tiny_arch).items()}
        for name in ("sfe1.weight", "sfe1.bias", "sfe2.weight", "head.weight", "head.bias"):
            arrays[name] = rng.normal(size=arrays[name].shape)
        params = ModelParams.from_arrays(tiny_arch, arrays, requires_grad=False)
        l_chan, lap = inputs(rng, batch=2)
        x = Tensor(np.concatenate([l_chan, lap], axis=1))
        shallow = conv2d(x, Tensor(arrays["sfe1.weight"]), Tensor(arrays["sfe1.bias"]), 1)
        expected = conv2d(shallow, Tensor(arrays["head.weight"]), Tensor(arrays["head.bias"]), 1).data
        out = rdn_forward(Tensor(l_chan), Tensor(lap), params).data
        np.testing.assert_allclose(out, expected, atol=1e-12)

    def test_passthrough_init_returns_input(self, rng, tiny_arch):
        params = init_params(tiny_arch, 4, passthrough=True)
        l_chan, lap = inputs(rng, batch=2)
        out = rdn_forward(Tensor(l_chan), Tensor(lap), params.detached()).data
        assert np.array_equal(out, l_chan)
        lum = Image.luminance(l_chan[0, 0])
        assert np.array_equal(deblur_luminance(params, lum).array, lum.array)

    def test_passthrough_keeps_random_blocks(self, tiny_arch):
        plain, passthrough = init_params(tiny_arch, 4), init_params(tiny_arch, 4, passthrough=True)
        assert np.array_equal(plain.tensors["rdb1.conv2.weight"].data, passthrough.tensors["rdb1.conv2.weight"].data)
        assert np.array_equal(plain.tensors["sfe1.weight"].data[1:], passthrough.tensors["sfe1.weight"].data[1:])
        assert not passthrough.tensors["gff2.weight"].data.any()

    def test_mismatched_channels(self, rng, tiny_arch):
        with pytest.raises(ShapeError):
            rdn_forward(Tensor(np.zeros((1, 1, 8, 8))), Tensor(np.zeros((1, 1, 8, 7))), init_params(tiny_arch, 0))

    def test_zero_head_outputs_bias(self, rng, tiny_arch):
        arrays = dict(init_params(tiny_arch, 0).arrays())
        arrays["head.weight"] = np.zeros_like(arrays["head.weight"])
        arrays["head.bias"] = np.array([0.25])
        params = ModelParams.from_arrays(tiny_arch, arrays)
        l_chan, lap = inputs(rng)
        np.testing.assert_array_equal(rdn_forward(Tensor(l_chan), Tensor(lap), params).data, 0.25)

    @pytest.mark.parametrize("seed", range(5))
    def test_gradients_full_network(self, tiny_arch, seed):
        rng = np.random.default_rng(seed)
        params = init_params(tiny_arch, seed)
        l_chan, lap = inputs(rng)
        direction = rng.normal(size=(1, 1, 8, 8))

        def loss_fn(tensors):
            model = ModelParams(tiny_arch, tensors)
            return mean_all(mul_const(rdn_forward(Tensor(l_chan), Tensor(lap), model), direction))

        # по 2 случайных элемента каждого тензора
        error = params_relative_error(loss_fn, params.arrays(), samples=2, seed=seed, floor=1e-6)
        assert error < 1e-4


class TestDeblurLuminance:
    def test_same_size_and_clamped(self, rng, tiny_arch):
        lum = Image.luminance(rng.uniform(0, 1, size=(9, 7)))
        out = deblur_luminance(init_params(tiny_arch, 0), lum)
        assert out.array.shape == (9, 7)
        assert 0.0 <= out.array.min() and out.array.max() <= 1.0

    def test_deterministic(self, rng, tiny_arch):
        params = init_params(tiny_arch, 3)
        lum = Image.luminance(rng.uniform(0, 1, size=(8, 8)))
        assert np.array_equal(deblur_luminance(params, lum).array, deblur_luminance(params, lum).array)

    def test_does_not_record_graph(self, rng, tiny_arch):
        params = init_params(tiny_arch, 0)
        deblur_luminance(params, Image.luminance(rng.uniform(0, 1, size=(8, 8))))
        assert all(t.graph is None and t.grad is None for t in params.tensors.values())
