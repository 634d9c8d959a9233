"""
Tests for the denoising graph: stage nodes, routing and run tracking.
"""
from unittest.mock import patch

import numpy as np
from langgraph.graph import END

from core.graph import denoise, next_step_router
from core.schemas import DetectionResult, DetectorConfig, RestorationConfig
from filters.config import _run_context, add_event, end_run, generate_run_id, log_stage_metrics, start_run
from filters.noise import corrupt
from filters.orchestrator import detector_node, restorer_node


def _detection(mask: np.ndarray, values=None) -> DetectionResult:
    return DetectionResult(
        impulse_values=values or [],
        noise_mask=mask,
        entropy_trace=[7.0],
        iterations=0,
        received_entropy=7.0,
    )


def _make_state(img: np.ndarray, run_id: str = "") -> dict:
    return {
        "received": img,
        "detector_config": DetectorConfig(),
        "restoration_config": RestorationConfig(),
        "run_id": run_id,
    }


# ----- Routing tests -----


def test_router_ends_when_nothing_flagged():
    state = {"detection": _detection(np.zeros((3, 3), dtype=bool))}
    assert next_step_router(state) == END


def test_router_restores_when_pixels_flagged():
    mask = np.zeros((3, 3), dtype=bool)
    mask[1, 1] = True
    assert next_step_router({"detection": _detection(mask, [0])}) == "AIM_Restorer"


def test_router_without_detection_ends():
    assert next_step_router({}) == END


# ----- Node tests -----


@patch("filters.orchestrator.log_stage_metrics")
@patch("filters.orchestrator.add_event")
def test_detector_node_records_stage(mock_add_event, mock_log_metrics, small_image):
    corrupted, _ = corrupt(small_image, {"kind": "spn", "p": 0.7}, seed=2)
    out = detector_node(_make_state(corrupted, run_id="run_test"))

    assert set(out) == {"detection"}
    assert out["detection"].impulse_values == [0, 255]
    mock_log_metrics.assert_called_once()
    assert mock_log_metrics.call_args.args[0] == "detector"
    kwargs = mock_add_event.call_args.kwargs
    assert kwargs["stage"] == "detector"
    assert kwargs["stage_metrics"]["flagged_pixels"] == int(out["detection"].noise_mask.sum())


@patch("filters.orchestrator.log_stage_metrics")
@patch("filters.orchestrator.add_event")
def test_nodes_skip_events_without_run_id(mock_add_event, _mock_log_metrics, small_image):
    detector_node(_make_state(small_image))
    mock_add_event.assert_not_called()


@patch("filters.orchestrator.log_stage_metrics")
@patch("filters.orchestrator.add_event")
def test_restorer_node_returns_restored_image(_mock_add_event, _mock_log_metrics):
    img = np.array([[10, 200, 30]], dtype=np.uint8)
    mask = np.array([[False, True, False]])
    state = {**_make_state(img, run_id="run_test"), "detection": _detection(mask, [200])}
    out = restorer_node(state)
    np.testing.assert_array_equal(out["restored"], [[10, 20, 30]])


# ----- Graph tests -----


@patch("filters.orchestrator.aim_restore")
def test_clean_image_skips_restorer(mock_restore, natural_image):
    restored, detection = denoise(natural_image)
    mock_restore.assert_not_called()
    assert detection.iterations == 0
    np.testing.assert_array_equal(restored, natural_image)


def test_denoise_records_both_stages(small_image):
    corrupted, _ = corrupt(small_image, {"kind": "spn", "p": 0.7}, seed=6)
    run_id = generate_run_id()
    start_run(run_id, "denoise")
    denoise(corrupted, run_id=run_id)

    ctx = _run_context[run_id]
    assert ctx["stage_flow"] == ["detector", "restorer"]
    assert ctx["stages"]["detector"]["iterations"] >= 1
    end_run(run_id)
    assert run_id not in _run_context


# ----- Run context tests -----


def test_events_for_unknown_run_are_ignored():
    add_event("run_missing", stage="detector", stage_metrics={"latency_sec": 0.1})
    assert "run_missing" not in _run_context


@patch("filters.config.boto3")
def test_metrics_are_not_published_by_default(mock_boto3):
    log_stage_metrics("detector", 0.5, Iterations=2)
    mock_boto3.client.assert_not_called()
