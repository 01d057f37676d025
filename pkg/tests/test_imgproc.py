"""
Тесты предобработки: цвет, Лапласиан, градиенты, размытие, патчи
"""
import numpy as np
import pytest

from src.config import LAPLACIAN_KERNEL, MAX_MOTION_LENGTH
from src.errors import KernelError, ShapeError
from src.imgproc import (
    BlurKernel,
    ColorSpace,
    Image,
    PatchPair,
    augment4,
    extract_patches,
    lab_recompose,
    laplacian,
    laplacian_tensor,
    motion_kernel,
    rgb_to_lab,
    rgb_to_luminance,
    spatial_gradient,
    spatial_gradient_tensor,
    synthesize_blur,
)
from src.tensor import Tensor, mean_all, mul_const
from tests.gradcheck import max_relative_error


def rgb(planes):
    return Image(np.asarray(planes, dtype=np.float64), ColorSpace.SRGB_8BIT_SCALED)


class TestImage:
    def test_out_of_range_luminance_rejected(self):
        with pytest.raises(ValueError):
            Image.luminance(np.full((2, 2), 1.5))

    def test_signed_allows_any_range(self):
        assert Image(np.full((1, 2, 2), -3.0), ColorSpace.SIGNED).array.min() == -3.0

    def test_planes_read_only(self):
        img = Image.luminance(np.zeros((2, 2)))
        with pytest.raises(ValueError):
            img.planes[0, 0, 0] = 1.0


class TestColor:
    def test_white_and_black(self):
        white = rgb_to_lab(rgb(np.ones((3, 2, 2))))
        np.testing.assert_allclose(white.planes[0], 100.0, atol=1e-9)
        np.testing.assert_allclose(white.planes[1:], 0.0, atol=1e-9)
        black = rgb_to_luminance(rgb(np.zeros((3, 2, 2))))
        np.testing.assert_allclose(black.array, 0.0, atol=1e-12)

    def test_gray_has_no_chroma(self, rng):
        level = rng.uniform(0, 1, size=(4, 4))
        lab = rgb_to_lab(rgb(np.stack([level] * 3)))
        np.testing.assert_allclose(lab.planes[1:], 0.0, atol=1e-9)

    def test_known_primary(self):
        # sRGB красный: L* ~ 53.24, a* ~ 80.09, b* ~ 67.20
        lab = rgb_to_lab(rgb(np.array([1.0, 0.0, 0.0]).reshape(3, 1, 1)))
        np.testing.assert_allclose(lab.planes[:, 0, 0], [53.24, 80.09, 67.20], atol=0.05)

    def test_mid_gray_luminance(self):
        # код 128: линейная яркость ~0.2159, L* ~53.59
        lum = rgb_to_luminance(rgb(np.full((3, 1, 1), 128 / 255)))
        assert lum.array[0, 0] == pytest.approx(0.5359, abs=1e-4)

    def test_luminance_in_unit_range(self, rng):
        lum = rgb_to_luminance(rgb(rng.uniform(0, 1, size=(3, 8, 8))))
        assert lum.color_space == ColorSpace.LUMINANCE
        assert 0.0 <= lum.array.min() and lum.array.max() <= 1.0

    def test_recompose_round_trip(self, rng):
        image = rgb(rng.uniform(0.05, 0.95, size=(3, 6, 6)))
        lab = rgb_to_lab(image)
        restored = lab_recompose(rgb_to_luminance(image), lab)
        np.testing.assert_allclose(restored.planes, image.planes, atol=1e-9)

    def test_recompose_size_mismatch(self, rng):
        lab = rgb_to_lab(rgb(rng.uniform(0, 1, size=(3, 4, 4))))
        with pytest.raises(ShapeError):
            lab_recompose(Image.luminance(np.zeros((3, 4))), lab)


class TestLaplacian:
    def test_impulse_response_is_kernel(self):
        plane = np.zeros((5, 5))
        plane[2, 2] = 1.0
        out = laplacian(Image.luminance(plane)).array
        expected = np.zeros((5, 5))
        expected[1:4, 1:4] = np.array(LAPLACIAN_KERNEL)
        assert np.array_equal(out, expected)

    def test_constant_interior_is_zero(self):
        out = laplacian(Image.luminance(np.full((6, 6), 0.4))).array
        np.testing.assert_array_equal(out[1:-1, 1:-1], 0.0)
        # нулевое дополнение: угол видит двух соседей-нулей
        assert out[0, 0] == pytest.approx(0.8)

    @pytest.mark.parametrize("level", [0.1, 0.3, 1 / 3, 0.7, 0.9999])
    def test_constant_interior_exact_for_any_level(self, level):
        out = laplacian(Image.luminance(np.full((9, 11), level))).array
        assert not out[1:-1, 1:-1].any()

    def test_result_is_signed(self, rng):
        out = laplacian(Image.luminance(rng.uniform(0, 1, size=(4, 4))))
        assert out.color_space == ColorSpace.SIGNED
        assert out.array.shape == (4, 4)

    def test_tensor_version_matches(self, rng):
        plane = rng.uniform(0, 1, size=(7, 9))
        out = laplacian_tensor(Tensor(plane[None, None])).data[0, 0]
        np.testing.assert_allclose(out, laplacian(Image.luminance(plane)).array, atol=1e-14)

    def test_rejects_color(self):
        with pytest.raises(ShapeError):
            laplacian(rgb(np.zeros((3, 2, 2))))


class TestSpatialGradient:
    def test_forward_differences(self):
        plane = np.array([[0.0, 0.25, 1.0],
                          [0.5, 0.5, 0.0]])
        gx, gy = spatial_gradient(Image.luminance(plane))
        np.testing.assert_array_equal(gx.array, [[0.25, 0.75, 0.0], [0.0, -0.5, 0.0]])
        np.testing.assert_array_equal(gy.array, [[0.5, 0.25, -1.0], [0.0, 0.0, 0.0]])

    def test_tensor_version_matches(self, rng):
        planes = rng.uniform(0, 1, size=(2, 1, 5, 6))
        out = spatial_gradient_tensor(Tensor(planes)).data
        for n in range(2):
            gx, gy = spatial_gradient(Image.luminance(planes[n, 0]))
            np.testing.assert_allclose(out[n, 0], gx.array, atol=1e-14)
            np.testing.assert_allclose(out[n, 1], gy.array, atol=1e-14)

    def test_tensor_gradients(self, rng):
        x = rng.normal(size=(2, 1, 4, 5))
        direction = rng.normal(size=(2, 2, 4, 5))
        error = max_relative_error(lambda ts: mean_all(mul_const(spatial_gradient_tensor(ts[0]), direction)), [x])
        assert error < 1e-5


class TestMotionKernel:
    def test_horizontal(self):
        k = motion_kernel(5, 0.0)
        assert k.shape == (1, 5)
        np.testing.assert_allclose(k.taps, np.full((1, 5), 0.2))

    def test_vertical(self):
        k = motion_kernel(3, 90.0)
        assert k.shape == (3, 1)
        np.testing.assert_allclose(k.taps[:, 0], np.full(3, 1 / 3))

    def test_even_length_spreads_half_pixels(self):
        k = motion_kernel(2, 0.0)
        np.testing.assert_allclose(k.taps, [[0.25, 0.5, 0.25]])

    @pytest.mark.parametrize("length,angle", [(7, 0.0), (9, 33.0), (5, 145.0), (31, 71.5), (1, 10.0)])
    def test_normalized_odd_non_negative(self, length, angle):
        k = motion_kernel(length, angle)
        assert k.taps.sum() == pytest.approx(1.0, abs=1e-12)
        assert (k.taps >= 0).all()
        assert k.shape[0] % 2 == 1 and k.shape[1] % 2 == 1
        assert (k.length, k.angle) == (length, angle)

    def test_diagonal_symmetry(self):
        k = motion_kernel(7, 45.0).taps
        np.testing.assert_allclose(k, k[::-1, ::-1], atol=1e-12)

    @pytest.mark.parametrize("length", [0, -3, MAX_MOTION_LENGTH + 1])
    def test_length_out_of_range(self, length):
        with pytest.raises(KernelError):
            motion_kernel(length, 0.0)

    def test_kernel_validation(self):
        with pytest.raises(KernelError):
            BlurKernel(np.ones((2, 3)))
        with pytest.raises(KernelError):
            BlurKernel(np.array([[1.0, -0.5, 1.0]]))


class TestSynthesizeBlur:
    def test_identity_kernel_without_noise(self, rng):
        sharp = Image.luminance(rng.uniform(0, 1, size=(8, 8)))
        out = synthesize_blur(sharp, BlurKernel.identity(), 0.0, seed=3)
        assert np.array_equal(out.array, sharp.array)

    def test_constant_image_stays_constant(self):
        sharp = Image.luminance(np.full((10, 10), 0.3))
        out = synthesize_blur(sharp, motion_kernel(7, 30.0), 0.0, seed=0)
        np.testing.assert_allclose(out.array, 0.3, atol=1e-12)

    def test_same_seed_same_noise(self, rng):
        sharp = Image.luminance(rng.uniform(0.2, 0.8, size=(12, 12)))
        k = motion_kernel(5, 20.0)
        first = synthesize_blur(sharp, k, 0.05, seed=42).array
        assert np.array_equal(first, synthesize_blur(sharp, k, 0.05, seed=42).array)
        assert not np.array_equal(first, synthesize_blur(sharp, k, 0.05, seed=43).array)

    def test_kernel_is_flipped(self):
        # ядро [0, 0, 1] как свёртка сдвигает изображение вправо
        plane = np.zeros((1, 5))
        plane[0, 2] = 1.0
        out = synthesize_blur(Image.luminance(plane), BlurKernel(np.array([[0.0, 0.0, 1.0]])), 0.0, seed=0)
        np.testing.assert_array_equal(out.array, [[0.0, 0.0, 0.0, 1.0, 0.0]])

    def test_box_kernel_on_step_edge(self):
        plane = np.tile([0.0, 0.0, 1.0, 1.0], (3, 1))
        out = synthesize_blur(Image.luminance(plane), BlurKernel(np.ones((1, 3))), 0.0, seed=0)
        np.testing.assert_allclose(out.array, np.tile([0.0, 1 / 3, 2 / 3, 1.0], (3, 1)), atol=1e-12)

    def test_output_clamped(self):
        out = synthesize_blur(Image.luminance(np.full((6, 6), 0.99)), BlurKernel.identity(), 0.5, seed=1)
        assert out.array.min() >= 0.0 and out.array.max() <= 1.0

    def test_negative_sigma(self):
        with pytest.raises(ValueError):
            synthesize_blur(Image.luminance(np.zeros((3, 3))), BlurKernel.identity(), -0.1, seed=0)


class TestPatches:
    def test_grid_coordinates_aligned(self, rng):
        sharp = rng.uniform(0, 1, size=(8, 12))
        blurred = rng.uniform(0, 1, size=(8, 12))
        patches = extract_patches(sharp, blurred, 4, stride=4)
        assert len(patches) == 6
        for p in patches:
            np.testing.assert_array_equal(p.sharp, sharp[p.top:p.top + 4, p.left:p.left + 4])
            np.testing.assert_array_equal(p.blurred, blurred[p.top:p.top + 4, p.left:p.left + 4])

    def test_random_mode_deterministic(self, rng):
        sharp = rng.uniform(0, 1, size=(16, 16))
        first = extract_patches(sharp, sharp, 5, count=7, seed=3)
        second = extract_patches(sharp, sharp, 5, count=7, seed=3)
        assert [(p.top, p.left) for p in first] == [(p.top, p.left) for p in second]
        assert all(0 <= p.top <= 11 and 0 <= p.left <= 11 for p in first)

    def test_patch_larger_than_image(self):
        with pytest.raises(ShapeError):
            extract_patches(np.zeros((4, 4)), np.zeros((4, 4)), 5)

    def test_mismatched_pair(self):
        with pytest.raises(ShapeError):
            extract_patches(np.zeros((4, 4)), np.zeros((4, 5)), 2)

    def test_augment_applies_same_transform(self, rng):
        sharp = rng.uniform(0, 1, size=(3, 3))
        pair = PatchPair(sharp, 1.0 - sharp)
        augmented = augment4(pair)
        assert len(augmented) == 4
        np.testing.assert_array_equal(augmented[0].sharp, sharp[:, ::-1])
        np.testing.assert_array_equal(augmented[1].sharp, sharp[::-1, :])
        np.testing.assert_array_equal(augmented[2].sharp, np.rot90(sharp))
        np.testing.assert_array_equal(augmented[3].sharp, np.rot90(sharp, 3))
        for a in augmented:
            np.testing.assert_allclose(a.blurred, 1.0 - a.sharp)

    def test_augment_requires_square(self):
        with pytest.raises(ShapeError):
            augment4(PatchPair(np.zeros((2, 3)), np.zeros((2, 3))))
