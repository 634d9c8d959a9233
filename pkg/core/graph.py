"""
Graph building module for the denoising pipeline.
Defines the LangGraph workflow: detector, then the restorer when anything was flagged.
"""

import numpy as np
from langgraph.graph import StateGraph, START, END
from langsmith import traceable

from core.image import as_gray_image
from core.schemas import DetectionResult, DetectorConfig, RestorationConfig
from core.state import PipelineState
from filters.config import CORRELATION_THRESHOLD, ENTROPY_THRESHOLD, MAX_ITERATIONS
from filters.orchestrator import detector_node, restorer_node


def next_step_router(state: PipelineState) -> str:
    """
    Route to the restorer only when the detector flagged at least one pixel.

    Args:
        state: Current graph state

    Returns:
        Next node name or END
    """
    detection = state.get("detection")
    if detection is not None and detection.noise_mask.any():
        return "AIM_Restorer"
    return END


def build_graph():
    """
    Builds and compiles the denoising workflow graph.

    Returns:
        Compiled LangGraph application
    """
    builder = StateGraph(PipelineState)

    builder.add_node("Impulse_Detector", detector_node)
    builder.add_node("AIM_Restorer", restorer_node)

    builder.add_edge(START, "Impulse_Detector")
    builder.add_conditional_edges(
        "Impulse_Detector",
        next_step_router,
        {
            "AIM_Restorer": "AIM_Restorer",
            END: END,
        },
    )
    builder.add_edge("AIM_Restorer", END)

    return builder.compile()


# Create the compiled pipeline
pipeline = build_graph()


def default_detector_config() -> DetectorConfig:
    return DetectorConfig(
        entropy_threshold=ENTROPY_THRESHOLD,
        correlation_threshold=CORRELATION_THRESHOLD,
        max_iterations=MAX_ITERATIONS,
    )


def default_restoration_config() -> RestorationConfig:
    return RestorationConfig(correlation_threshold=CORRELATION_THRESHOLD)


@traceable(name="Denoise")
def denoise(
    img: np.ndarray,
    det_cfg: DetectorConfig | None = None,
    res_cfg: RestorationConfig | None = None,
    run_id: str | None = None,
) -> tuple[np.ndarray, DetectionResult]:
    """
    Detect impulse values, then restore the flagged pixels.

    Args:
        img: uint8 received image
        det_cfg: detector settings (environment defaults when omitted)
        res_cfg: restorer settings (environment defaults when omitted)
        run_id: run context to record stage events into

    Returns:
        (restored image, detection result)
    """
    received = as_gray_image(img)
    init_state: PipelineState = {
        "received": received,
        "detector_config": det_cfg or default_detector_config(),
        "restoration_config": res_cfg or default_restoration_config(),
        "run_id": run_id or "",
    }
    result = pipeline.invoke(init_state)
    restored = result.get("restored")
    if restored is None:
        restored = received.copy()
    return restored, result["detection"]
