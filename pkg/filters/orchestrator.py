"""
Stage nodes for the denoising graph.
Each node runs one stage, times it and records it in the run context.
"""

import time

from core.state import PipelineState
from filters.aim import aim_restore
from filters.config import add_event, get_logger, log_stage_metrics
from filters.detector import detect

logger = get_logger("orchestrator")


# ---------------------------
# Debug Helper
# ---------------------------
def debug_state(node_name: str, state: PipelineState) -> None:
    """Log the state for debugging."""
    received = state.get("received")
    detection = state.get("detection")
    logger.debug(
        f"{node_name} | shape={None if received is None else received.shape} "
        f"| impulse_values={None if detection is None else detection.impulse_values} "
        f"| restored={'restored' in state}"
    )


# ---------------------------
# Stage Nodes
# ---------------------------
def detector_node(state: PipelineState) -> dict:
    """Node that runs the impulse value detector."""
    debug_state("Impulse_Detector", state)
    start_time = time.perf_counter()

    detection = detect(state["received"], state["detector_config"])

    latency_sec = round(time.perf_counter() - start_time, 4)
    flagged = int(detection.noise_mask.sum())
    log_stage_metrics("detector", latency_sec, Iterations=detection.iterations, FlaggedPixels=flagged)

    run_id = state.get("run_id")
    if run_id:
        add_event(
            run_id,
            stage="detector",
            impulse_values=detection.impulse_values,
            stage_metrics={
                "latency_sec": latency_sec,
                "iterations": detection.iterations,
                "flagged_pixels": flagged,
                "stalled": detection.stalled,
            },
        )

    return {"detection": detection}


def restorer_node(state: PipelineState) -> dict:
    """Node that runs the AIM restorer on the detector's mask."""
    debug_state("AIM_Restorer", state)
    start_time = time.perf_counter()

    restored = aim_restore(state["received"], state["detection"].noise_mask, state["restoration_config"])

    latency_sec = round(time.perf_counter() - start_time, 4)
    log_stage_metrics("restorer", latency_sec)

    run_id = state.get("run_id")
    if run_id:
        add_event(run_id, stage="restorer", stage_metrics={"latency_sec": latency_sec})

    return {"restored": restored}
