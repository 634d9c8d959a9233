"""
Tests for the image primitives: cross convolution, histograms, entropy, PGM codec.
"""
import numpy as np
import pytest

from core.errors import PgmFormatError
from core.image import (
    convolve_cross,
    entropy,
    histogram,
    histogram_positive,
    image_entropy,
    quantize,
)
from core.pgm import load_pgm, save_mask_pgm, save_pgm, save_pgm16


# ----- convolve_cross -----


def test_convolve_all_ones_center_and_corner():
    out = convolve_cross(np.ones((3, 3)))
    assert out[1, 1] == 4
    assert out[0, 0] == 2
    assert out[0, 1] == 3


def test_convolve_impulse_response_is_the_cross():
    field = np.zeros((3, 3))
    field[1, 1] = 1.0
    expected = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=float)
    np.testing.assert_array_equal(convolve_cross(field), expected)


def test_convolve_counts_in_bounds_neighbours():
    out = convolve_cross(np.ones((5, 7)))
    assert out[2, 3] == 4
    assert out[0, 3] == 3 and out[4, 3] == 3 and out[2, 0] == 3 and out[2, 6] == 3
    assert out[0, 0] == 2 and out[4, 6] == 2


def test_convolve_is_linear():
    rng = np.random.default_rng(0)
    for _ in range(20):
        f, g = rng.normal(size=(2, 17, 23)) * 100
        a, b = rng.normal(size=2)
        lhs = convolve_cross(a * f + b * g)
        rhs = a * convolve_cross(f) + b * convolve_cross(g)
        np.testing.assert_allclose(lhs, rhs, rtol=1e-9, atol=1e-9)


# ----- histograms and entropy -----


def test_histogram_positive_all_zero():
    counts = histogram_positive(np.zeros((4, 4), dtype=np.uint8))
    assert counts.sum() == 0


def test_histogram_positive_skips_zero():
    counts = histogram_positive(np.array([[0, 7], [7, 255]], dtype=np.uint8))
    assert counts[7] == 2
    assert counts[255] == 1
    assert counts[0] == 0
    assert counts.sum() == 3


def test_histogram_positive_total_matches_nonzero_pixels(natural_image):
    img = natural_image.copy()
    img[::3, ::2] = 0
    assert histogram_positive(img).sum() == img.size - np.count_nonzero(img == 0)
    assert histogram(img).sum() == img.size


def test_entropy_constant_is_zero():
    assert entropy(histogram_positive(np.full((5, 5), 42, dtype=np.uint8))) == 0.0


def test_entropy_uniform_is_eight_bits():
    assert entropy(np.ones(256, dtype=np.int64)) == pytest.approx(8.0)


def test_entropy_two_symbols():
    counts = np.zeros(256, dtype=np.int64)
    counts[10], counts[20] = 1, 3
    assert entropy(counts) == pytest.approx(0.8113, abs=1e-4)


def test_entropy_empty_histogram():
    assert entropy(np.zeros(256, dtype=np.int64)) == 0.0


def test_entropy_permutation_invariant_and_bounded():
    rng = np.random.default_rng(1)
    counts = rng.integers(0, 50, size=256)
    assert entropy(counts) == pytest.approx(entropy(rng.permutation(counts)))
    occupied = np.count_nonzero(counts)
    assert entropy(counts) <= np.log2(occupied) + 1e-12


def test_image_entropy_of_natural_image(natural_image):
    assert 6.5 < image_entropy(natural_image) <= 8.0


def test_quantize_rounds_half_up_and_clamps():
    field = np.array([[0.5, 1.49, 254.5, 300.0, -3.0]])
    np.testing.assert_array_equal(quantize(field), [[1, 1, 255, 255, 0]])


# ----- PGM codec -----


def test_load_minimal_p5():
    img = load_pgm(b"P5\n2 2\n255\n" + bytes([1, 2, 3, 4]))
    np.testing.assert_array_equal(img, [[1, 2], [3, 4]])
    assert img.dtype == np.uint8


def test_p2_matches_p5():
    p2 = load_pgm(b"P2\n# a comment\n2 2\n255\n1 2\n3\n4\n")
    p5 = load_pgm(b"P5\n2 2\n255\n" + bytes([1, 2, 3, 4]))
    np.testing.assert_array_equal(p2, p5)


def test_header_comments_are_skipped():
    img = load_pgm(b"P5 # magic\n# size next\n3 1\n# maxval\n255\n" + bytes([9, 8, 7]))
    np.testing.assert_array_equal(img, [[9, 8, 7]])


def test_save_single_black_pixel():
    assert save_pgm(np.zeros((1, 1), dtype=np.uint8)) == b"P5\n1 1\n255\n\x00"


def test_save_is_row_major():
    data = save_pgm(np.array([[1, 2], [3, 4]], dtype=np.uint8))
    assert data.endswith(bytes([1, 2, 3, 4]))
    assert len(data) == len(b"P5\n2 2\n255\n") + 4


def test_round_trip_random_images():
    rng = np.random.default_rng(5)
    for _ in range(100):
        h, w = rng.integers(1, 20, size=2)
        img = rng.integers(0, 256, size=(h, w), dtype=np.uint8)
        data = save_pgm(img)
        np.testing.assert_array_equal(load_pgm(data), img)
        assert save_pgm(load_pgm(data)) == data


def test_bad_magic_reports_offset_zero():
    with pytest.raises(PgmFormatError) as info:
        load_pgm(b"P6\n1 1\n255\n\x00\x00\x00")
    assert info.value.offset == 0


def test_truncated_payload_reports_offset():
    header = b"P5\n2 2\n255\n"
    with pytest.raises(PgmFormatError) as info:
        load_pgm(header + bytes([1, 2, 3]))
    assert info.value.offset == len(header) + 3


def test_sixteen_bit_maxval_rejected():
    with pytest.raises(PgmFormatError) as info:
        load_pgm(b"P5\n1 1\n65535\n\x00\x00")
    assert info.value.offset == len(b"P5\n1 1\n")


def test_malformed_dimensions_rejected():
    with pytest.raises(PgmFormatError):
        load_pgm(b"P5\nx 2\n255\n")


def test_p2_sample_above_maxval_rejected():
    with pytest.raises(PgmFormatError):
        load_pgm(b"P2\n1 2\n10\n3 11\n")


def test_mask_and_sixteen_bit_exports():
    mask = np.array([[True, False]])
    assert save_mask_pgm(mask).endswith(bytes([255, 0]))
    data = save_pgm16(np.array([[1, 300]]))
    assert data.startswith(b"P5\n2 1\n65535\n")
    assert data.endswith(bytes([0, 1, 1, 44]))
