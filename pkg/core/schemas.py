"""
Pydantic schemas for noise descriptions, stage configuration and stage results.
"""

from typing import Annotated, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, model_validator

_DENSITY_SLACK = 1e-9


# ---------------------------
# Noise Schemas
# ---------------------------
class SaltPepperNoise(BaseModel):
    """Impulses at 0 (pepper) and 255 (salt)."""
    kind: Literal["spn"] = "spn"
    p: float = Field(ge=0.0, le=1.0, description="Total noise density")
    p_salt: float | None = Field(default=None, ge=0.0, le=1.0, description="Density of 255-valued impulses")
    p_pepper: float | None = Field(default=None, ge=0.0, le=1.0, description="Density of 0-valued impulses")

    @model_validator(mode="after")
    def _split(self):
        if self.p_salt is None and self.p_pepper is None:
            self.p_salt = self.p_pepper = self.p / 2
        elif self.p_salt is None or self.p_pepper is None:
            raise ValueError("p_salt and p_pepper must be given together")
        elif abs(self.p_salt + self.p_pepper - self.p) > _DENSITY_SLACK:
            raise ValueError(f"p_salt + p_pepper = {self.p_salt + self.p_pepper} does not match p = {self.p}")
        return self


class FixedRangeNoise(BaseModel):
    """Impulses drawn uniformly from [0, m) or (255 - m, 255]."""
    kind: Literal["frin"] = "frin"
    m: int = Field(ge=1, le=127, description="Length of each impulse range")
    p_low: float = Field(ge=0.0, le=1.0, description="Density of the low-intensity range")
    p_high: float = Field(ge=0.0, le=1.0, description="Density of the high-intensity range")

    @property
    def p(self) -> float:
        return self.p_low + self.p_high

    @model_validator(mode="after")
    def _total(self):
        if self.p > 1.0 + _DENSITY_SLACK:
            raise ValueError(f"p_low + p_high = {self.p} exceeds 1")
        return self


class GeneralFixedNoise(BaseModel):
    """Impulses drawn from an arbitrary set of grey-values."""
    kind: Literal["gfn"] = "gfn"
    values: list[Annotated[int, Field(ge=0, le=255)]] = Field(min_length=1, description="Impulse grey-values")
    probs: list[Annotated[float, Field(ge=0.0, le=1.0)]] = Field(description="Density of each impulse value")

    @property
    def p(self) -> float:
        return float(sum(self.probs))

    @model_validator(mode="after")
    def _consistent(self):
        if len(set(self.values)) != len(self.values):
            raise ValueError("GFN values must be distinct")
        if len(self.probs) != len(self.values):
            raise ValueError(f"Got {len(self.probs)} probabilities for {len(self.values)} values")
        if self.p > 1.0 + _DENSITY_SLACK:
            raise ValueError(f"Total GFN density {self.p} exceeds 1")
        return self


NoiseSpec = Annotated[
    Union[SaltPepperNoise, FixedRangeNoise, GeneralFixedNoise],
    Field(discriminator="kind"),
]
NOISE_SPEC_ADAPTER = TypeAdapter(NoiseSpec)


# ---------------------------
# Stage Configuration
# ---------------------------
class DetectorConfig(BaseModel):
    """Impulse value detector settings; defaults are the published thresholds."""
    entropy_threshold: float = Field(default=6.0, ge=0.0, description="Stop once the surviving-pixel entropy (bits) exceeds this")
    correlation_threshold: float = Field(default=8.0, ge=0.0, description="Detail level (grey-levels) at or below which a pixel counts as correlated")
    max_iterations: int = Field(default=256, ge=1)


class RestorationConfig(BaseModel):
    """AIM restoration settings."""
    correlation_threshold: float = Field(default=8.0, ge=0.0, description="Snap-back distance in grey-levels")


# ---------------------------
# Stage Results
# ---------------------------
class DetectionResult(BaseModel):
    """
    Output of the impulse value detector.

    noise_mask is excluded from JSON dumps; it is exported separately as a PGM.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    impulse_values: list[int] = Field(description="Detected impulse grey-values, ascending")
    noise_mask: np.ndarray = Field(exclude=True, description="True where the received pixel holds an impulse value")
    entropy_trace: list[float] = Field(description="Surviving-pixel entropy before the loop and after every removal")
    iterations: int = Field(ge=0)
    stalled: bool = Field(default=False, description="The high-detail image had no positive pixel left")
    received_entropy: float = Field(description="Full-histogram entropy of the received image")

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)


class DistanceField(BaseModel):
    """
    Exact squared distance of every pixel to its nearest clean pixel, plus that pixel.

    Ties between equidistant clean pixels go to the smallest row, then the smallest column.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    sq_dist: np.ndarray = Field(description="int64 squared Euclidean distances")
    site_rows: np.ndarray
    site_cols: np.ndarray

    @property
    def dist(self) -> np.ndarray:
        return np.sqrt(self.sq_dist.astype(np.float64))

    @property
    def shape(self) -> tuple[int, int]:
        return self.sq_dist.shape


class BenchResult(BaseModel):
    """One aggregated benchmark cell."""
    image: str
    spec: NoiseSpec
    method: Literal["median", "aim"]
    runs: int = Field(ge=1)
    psnr_mean: float | None = None
    psnr_stddev: float | None = Field(default=None, ge=0.0)
    wall_time_mean: float | None = None
    status: str = "ok"
