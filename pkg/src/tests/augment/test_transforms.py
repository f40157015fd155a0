import numpy as np
import pytest

from lesionbench.augment import (
    AugmentationSpec,
    apply,
    blur_samples,
    flip,
    gaussian_blur,
    gaussian_kernel,
    rotate90,
    scale_luminosity,
)
from lesionbench.errors import DimensionMismatchError
from lesionbench.masks import BinaryMask, RasterImage, active_count, jaccard

GEOMETRIC_SPECS = [
    AugmentationSpec(flip_h=h, flip_v=v, quarter_turns=k)
    for h in (False, True)
    for v in (False, True)
    for k in range(4)
]


class TestFlip:
    def test_single_pixel(self):
        mask = BinaryMask.from_coords(5, 3, [(0, 0)])
        assert flip(mask, "horizontal").coords() == {(4, 0)}
        assert flip(mask, "vertical").coords() == {(0, 2)}

    def test_symmetric_mask_unchanged(self):
        mask = BinaryMask.from_coords(5, 3, [(0, 1), (4, 1), (2, 0)])
        assert flip(mask, "horizontal") == mask

    def test_invalid_axis(self):
        with pytest.raises(ValueError, match="Invalid axis"):
            flip(BinaryMask.full(2, 2), "diagonal")

    def test_involutions(self, random_image, random_mask):
        for _ in range(100):
            img = random_image(7, 5)
            mask = random_mask(7, 5)
            for axis in ("horizontal", "vertical"):
                assert flip(flip(img, axis), axis) == img
                assert flip(flip(mask, axis), axis) == mask


class TestRotate90:
    def test_k_zero_is_identity(self, random_mask):
        mask = random_mask(6, 4)
        assert rotate90(mask, 0) == mask

    def test_coordinate_map(self, random_mask):
        mask = random_mask(6, 4)
        width = mask.width
        expected = {(y, width - 1 - x) for x, y in mask.coords()}
        rotated = rotate90(mask, 1)
        assert rotated.shape == (4, 6)
        assert rotated.coords() == expected

    def test_four_turns_identity(self, random_image):
        for _ in range(100):
            img = random_image(5, 3)
            out = img
            for _ in range(4):
                out = rotate90(out, 1)
            assert out == img

    def test_h_then_half_turn_is_v(self, random_image):
        for _ in range(100):
            img = random_image(6, 4, channels=1)
            assert rotate90(flip(img, "horizontal"), 2) == flip(img, "vertical")

    @pytest.mark.parametrize("k", [-1, 4])
    def test_invalid_k(self, k):
        with pytest.raises(ValueError):
            rotate90(BinaryMask.full(2, 2), k)


class TestLuminosity:
    def test_factor_one(self, random_image):
        img = random_image(4, 4)
        assert scale_luminosity(img, 1.0) == img

    @pytest.mark.parametrize("value,factor,expected", [(128, 1.5, 192), (200, 1.5, 255), (101, 0.8, 81)])
    def test_scaling(self, value, factor, expected):
        out = scale_luminosity(RasterImage.filled(3, 2, value), factor)
        assert (out.samples == expected).all()

    @pytest.mark.parametrize("factor", [0.79, 1.51])
    def test_out_of_range(self, factor):
        with pytest.raises(ValueError, match="factor"):
            scale_luminosity(RasterImage.filled(1, 1, 1), factor)

    def test_masks_rejected(self):
        with pytest.raises(TypeError):
            scale_luminosity(BinaryMask.full(2, 2), 1.2)


class TestBlur:
    def test_kernel(self):
        kernel = gaussian_kernel(2.5)
        assert len(kernel) == 17
        assert kernel.sum() == pytest.approx(1.0, abs=1e-6)

    def test_constant_image(self):
        img = RasterImage.filled(20, 12, 137, channels=3)
        assert gaussian_blur(img, 2.5) == img

    def test_impulse_matches_analytic_peak(self):
        samples = np.zeros((41, 41))
        samples[20, 20] = 255
        peak = blur_samples(samples, 2.5)[20, 20]
        analytic = 255 / (2 * np.pi * 2.5**2)
        assert peak == pytest.approx(analytic, rel=0.02)

    def test_non_positive_sigma(self):
        with pytest.raises(ValueError, match="sigma"):
            gaussian_kernel(0)

    def test_masks_rejected(self):
        with pytest.raises(TypeError):
            gaussian_blur(BinaryMask.full(2, 2), 2.5)


class TestApply:
    def test_identity_spec(self, random_image, random_mask):
        img, mask = random_image(8, 6), random_mask(8, 6)
        out, masks = apply(AugmentationSpec(), img, [mask])
        assert out == img and masks == [mask]

    @pytest.mark.parametrize("spec", GEOMETRIC_SPECS)
    def test_geometric_specs_preserve_jaccard_and_counts(self, spec, random_mask, random_image):
        for _ in range(10):
            truth, predicted = random_mask(9, 5), random_mask(9, 5)
            _, (t, p) = apply(spec, random_image(9, 5), [truth, predicted])
            assert jaccard(t, p) == jaccard(truth, predicted)
            assert active_count(t) == active_count(truth)

    def test_flip_h_half_turn_equals_flip_v(self, random_image):
        for _ in range(100):
            img = random_image(5, 4)
            a, _ = apply(AugmentationSpec(flip_h=True, quarter_turns=2), img)
            b, _ = apply(AugmentationSpec(flip_v=True), img)
            assert a == b

    def test_photometric_never_touches_masks(self, random_image, random_mask):
        mask = random_mask(10, 10)
        spec = AugmentationSpec(luminosity=1.4, blur_sigma=2.5)
        out, masks = apply(spec, random_image(10, 10), [mask])
        assert masks == [mask]

    def test_order_is_geometric_then_photometric(self, random_image):
        img = random_image(6, 4)
        spec = AugmentationSpec(flip_h=True, quarter_turns=1, luminosity=1.2)
        out, _ = apply(spec, img)
        expected = scale_luminosity(rotate90(flip(img, "horizontal"), 1), 1.2)
        assert out == expected

    def test_dimension_mismatch(self, random_image):
        with pytest.raises(DimensionMismatchError):
            apply(AugmentationSpec(), random_image(4, 4), [BinaryMask.full(4, 3)])
