"""
Impulse noise synthesis: salt-and-pepper, fixed-range and general fixed-valued noise.

Randomness comes from numpy's PCG64 bit generator seeded through SeedSequence, so a
(image, spec, seed) triple always yields the same corrupted image and mask.
"""

import json

import numpy as np
from pydantic import ValidationError

from core.errors import NoiseSpecError
from core.image import as_gray_image
from core.schemas import (
    NOISE_SPEC_ADAPTER,
    FixedRangeNoise,
    GeneralFixedNoise,
    NoiseSpec,
    SaltPepperNoise,
)
from filters.config import get_logger

logger = get_logger("noise")

EVEN_GREY_VALUES = tuple(range(0, 256, 2))


# ---------------------------
# Seeds
# ---------------------------
def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator for a non-negative 64-bit seed."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def derive_seed(seed: int, *keys: int) -> int:
    """Child seed for (seed, *keys); stable across numpy releases."""
    state = np.random.SeedSequence([int(seed), *(int(k) for k in keys)]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def random_seed() -> int:
    """Fresh seed from OS entropy, small enough to print and pass back on the CLI."""
    return int(np.random.SeedSequence().entropy % (2**63))


# ---------------------------
# Spec Parsing
# ---------------------------
def parse_noise_spec(obj) -> NoiseSpec:
    """Validate a dict (or an existing spec) into a NoiseSpec."""
    if isinstance(obj, (SaltPepperNoise, FixedRangeNoise, GeneralFixedNoise)):
        return obj
    try:
        return NOISE_SPEC_ADAPTER.validate_python(obj)
    except ValidationError as e:
        raise NoiseSpecError(f"Invalid noise spec: {e}") from e


def load_noise_spec(text: str | bytes) -> NoiseSpec:
    try:
        return parse_noise_spec(json.loads(text))
    except json.JSONDecodeError as e:
        raise NoiseSpecError(f"Noise spec is not valid JSON: {e}") from e


def dump_noise_spec(spec: NoiseSpec) -> str:
    """Compact JSON with a stable key order, used in files and CSV cells."""
    return json.dumps(spec.model_dump(), separators=(",", ":"))


# ---------------------------
# Spec Constructors
# ---------------------------
def gfn_type2(density: float) -> GeneralFixedNoise:
    """Impulses on every even grey-value, all equally likely."""
    share = density / len(EVEN_GREY_VALUES)
    return parse_noise_spec({"kind": "gfn", "values": list(EVEN_GREY_VALUES), "probs": [share] * len(EVEN_GREY_VALUES)})


def gfn_type1(density: float, seed: int, count: int = 20) -> GeneralFixedNoise:
    """Impulses on `count` distinct random grey-values, all equally likely."""
    if not 1 <= count <= 256:
        raise NoiseSpecError(f"count must lie in [1, 256], got {count}")
    values = sorted(int(v) for v in make_rng(seed).choice(256, size=count, replace=False))
    return parse_noise_spec({"kind": "gfn", "values": values, "probs": [density / count] * count})


# ---------------------------
# Impulse Distribution
# ---------------------------
def impulse_distribution(spec: NoiseSpec) -> tuple[np.ndarray, np.ndarray]:
    """Grey-values a corrupted pixel can take and the unconditional density of each."""
    if isinstance(spec, SaltPepperNoise):
        return np.array([0, 255]), np.array([spec.p_pepper, spec.p_salt])
    if isinstance(spec, FixedRangeNoise):
        low = np.arange(0, spec.m)
        high = np.arange(256 - spec.m, 256)
        probs = np.concatenate([np.full(spec.m, spec.p_low / spec.m), np.full(spec.m, spec.p_high / spec.m)])
        return np.concatenate([low, high]), probs
    return np.array(spec.values), np.array(spec.probs, dtype=np.float64)


def impulse_set(spec: NoiseSpec) -> frozenset[int]:
    """All grey-values the spec may write into a corrupted pixel."""
    values, _ = impulse_distribution(parse_noise_spec(spec))
    return frozenset(int(v) for v in values)


def corrupt(img: np.ndarray, spec: NoiseSpec, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Corrupt an image with impulse noise.

    One uniform draw per pixel decides both whether the pixel is hit and which impulse
    value it receives.

    Args:
        img: uint8 grey image
        spec: noise description (or a dict that validates into one)
        seed: non-negative 64-bit seed

    Returns:
        (corrupted image, boolean ground-truth mask)
    """
    img = as_gray_image(img)
    spec = parse_noise_spec(spec)
    values, probs = impulse_distribution(spec)

    edges = np.cumsum(probs)
    if abs(edges[-1] - 1.0) < 1e-9:
        edges[-1] = 1.0

    draws = make_rng(seed).random(img.shape)
    mask = draws < edges[-1]
    index = np.minimum(np.searchsorted(edges, draws[mask], side="right"), len(values) - 1)

    corrupted = img.copy()
    corrupted[mask] = values[index].astype(np.uint8)

    logger.debug(f"corrupt kind={spec.kind} p={spec.p:.4f} seed={seed} hit={int(mask.sum())}/{mask.size}")
    return corrupted, mask
