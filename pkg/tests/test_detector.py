"""
Tests for the entropy-driven impulse value detector.
"""
import json

import numpy as np
import pytest

from core.errors import FullyCorruptedError
from core.schemas import DetectorConfig
from filters.detector import detail_image, detect
from filters.noise import corrupt, gfn_type1


# ----- detail_image -----


def test_detail_of_constant_image_is_zero():
    np.testing.assert_array_equal(detail_image(np.full((4, 5), 90, dtype=np.uint8)), np.zeros((4, 5)))


def test_detail_of_bright_center():
    img = np.full((3, 3), 100, dtype=np.uint8)
    img[1, 1] = 200
    detail = detail_image(img)
    assert detail[1, 1] == pytest.approx(100.0)
    assert detail[0, 1] == pytest.approx(100.0 / 3)
    assert detail[0, 0] == pytest.approx(0.0)


def test_detail_of_isolated_pixel_is_zero():
    img = np.zeros((3, 3), dtype=np.uint8)
    img[1, 1] = 180
    assert detail_image(img)[1, 1] == 0.0


def test_detail_ignores_removed_neighbours():
    img = np.array([[0, 60, 0], [80, 70, 0], [0, 0, 0]], dtype=np.uint8)
    # positive neighbours of (1, 1) are 60 and 80
    assert detail_image(img)[1, 1] == pytest.approx(0.0)


# ----- guard and stopping -----


def test_clean_natural_image_is_left_alone(natural_image):
    result = detect(natural_image)
    assert result.entropy_trace[0] > 6.0
    assert result.iterations == 0
    assert result.impulse_values == []
    assert not result.noise_mask.any()


def test_guard_is_idempotent(natural_image):
    first = detect(natural_image)
    second = detect(natural_image)
    assert first.model_dump() == second.model_dump()


def test_black_pixels_are_always_flagged(natural_image):
    img = natural_image.copy()
    img[5, 5] = 0
    img[60, 90] = 0
    result = detect(img)
    assert result.iterations == 0
    assert result.impulse_values == [0]
    np.testing.assert_array_equal(result.noise_mask, img == 0)


def test_constant_image_stalls_without_detection():
    result = detect(np.full((16, 16), 100, dtype=np.uint8))
    assert result.stalled
    assert result.iterations == 0
    assert result.impulse_values == []
    assert not result.noise_mask.any()


def test_mode_tie_goes_to_smallest_value():
    img = np.where(np.indices((8, 8)).sum(axis=0) % 2 == 0, 200, 50).astype(np.uint8)
    result = detect(img)
    assert result.impulse_values == [50]
    assert result.iterations == 1
    assert result.stalled


def test_all_black_image_is_fully_corrupted():
    with pytest.raises(FullyCorruptedError):
        detect(np.zeros((8, 8), dtype=np.uint8))


def test_iteration_cap(natural_image):
    corrupted, _ = corrupt(natural_image, gfn_type1(0.6, seed=4, count=2), seed=4)
    result = detect(corrupted, DetectorConfig(max_iterations=1))
    assert result.iterations == 1
    assert len(result.entropy_trace) == 2


# ----- salt-and-pepper -----


def test_salt_and_pepper_detection(natural_image):
    corrupted, truth = corrupt(natural_image, {"kind": "spn", "p": 0.7}, seed=21)
    result = detect(corrupted)
    assert {0, 255} <= set(result.impulse_values)
    assert result.entropy_trace[0] < 6.0
    assert result.entropy_trace[-1] > 6.0
    assert 3.0 < result.received_entropy < 4.6
    # every truly corrupted pixel holds 0 or 255 and is flagged
    assert result.noise_mask[truth].all()


# ----- planted GFN recovery -----


def test_single_planted_value_found_early(natural_image):
    corrupted, _ = corrupt(natural_image, {"kind": "gfn", "values": [37], "probs": [0.5]}, seed=8)
    result = detect(corrupted)
    assert 37 in result.impulse_values
    assert result.iterations <= 2


@pytest.mark.parametrize("count,density", [(1, 0.5), (2, 0.6)])
def test_planted_sets_are_recovered(natural_image, count, density):
    recovered = 0
    for seed in range(20):
        spec = gfn_type1(density, seed=seed, count=count)
        corrupted, _ = corrupt(natural_image, spec, seed=1000 + seed)
        result = detect(corrupted)
        assert set(result.impulse_values) <= set(spec.values)
        recovered += set(result.impulse_values) == set(spec.values)
    assert recovered >= 18


def test_large_planted_set_has_no_spurious_values(natural_image):
    for seed in range(5):
        spec = gfn_type1(0.8, seed=seed, count=20)
        corrupted, _ = corrupt(natural_image, spec, seed=seed)
        result = detect(corrupted)
        assert result.iterations >= 1
        assert set(result.impulse_values) <= set(spec.values)


# ----- invariants -----


def test_removal_is_monotone_and_sound(natural_image):
    corrupted, _ = corrupt(natural_image, {"kind": "frin", "m": 3, "p_low": 0.3, "p_high": 0.3}, seed=13)
    result = detect(corrupted)
    values = result.impulse_values

    assert values == sorted(set(values))
    assert result.iterations == len(values) - (1 if (corrupted == 0).any() else 0)
    assert len(result.entropy_trace) == result.iterations + 1
    np.testing.assert_array_equal(result.noise_mask, np.isin(corrupted, values))
    assert not np.isin(corrupted[~result.noise_mask], values).any()


def test_result_json_omits_mask(natural_image):
    corrupted, _ = corrupt(natural_image, {"kind": "spn", "p": 0.7}, seed=3)
    payload = json.loads(detect(corrupted).to_json())
    assert payload["impulse_values"] == [0, 255]
    assert "noise_mask" not in payload
    assert {"entropy_trace", "iterations", "stalled", "received_entropy"} <= payload.keys()


@pytest.mark.parametrize(
    "spec",
    [
        {"kind": "spn", "p": 0.7},
        {"kind": "frin", "m": 3, "p_low": 0.3, "p_high": 0.3},
        {"kind": "gfn", "values": [60, 150], "probs": [0.3, 0.3]},
    ],
)
def test_entropy_rises_with_every_removal_before_the_last(natural_image, spec):
    corrupted, _ = corrupt(natural_image, spec, seed=13)
    trace = detect(corrupted).entropy_trace
    assert len(trace) >= 2
    assert all(a < b for a, b in zip(trace[:-2], trace[1:-1]))
    assert trace[-1] > 6.0
