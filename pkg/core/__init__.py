"""
Core module - image primitives, PGM codec, state and schemas.
"""

from core.state import PipelineState, RestorationState
from core.schemas import (
    NoiseSpec,
    SaltPepperNoise,
    FixedRangeNoise,
    GeneralFixedNoise,
    DetectorConfig,
    RestorationConfig,
    DetectionResult,
    DistanceField,
    BenchResult,
)

__all__ = [
    "PipelineState",
    "RestorationState",
    "NoiseSpec",
    "SaltPepperNoise",
    "FixedRangeNoise",
    "GeneralFixedNoise",
    "DetectorConfig",
    "RestorationConfig",
    "DetectionResult",
    "DistanceField",
    "BenchResult",
]
