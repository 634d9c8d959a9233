"""
State definitions for the denoising graph and the AIM iteration.
"""

import numpy as np
from typing_extensions import TypedDict

from core.schemas import DetectionResult, DetectorConfig, RestorationConfig


class PipelineState(TypedDict, total=False):
    """
    The shared state for the denoising workflow.

    Attributes:
        received: The received (possibly corrupted) uint8 image
        detector_config: Settings for the impulse value detector
        restoration_config: Settings for the AIM restorer
        detection: Detector output, set by the detector stage
        restored: Restored uint8 image, set by the restorer stage
        run_id: Unique ID for logging/tracing this run
    """
    received: np.ndarray
    detector_config: DetectorConfig
    restoration_config: RestorationConfig
    detection: DetectionResult
    restored: np.ndarray
    run_id: str


class RestorationState(TypedDict):
    """
    Paired fields evolved by the AIM iteration.

    Attributes:
        image_field: I^k, float64
        mask_field: Mask^k, float64, positive everywhere
        estimate: I/Mask recorded when each pixel freezes; I^0 until then
        k: Iteration index
    """
    image_field: np.ndarray
    mask_field: np.ndarray
    estimate: np.ndarray
    k: int
