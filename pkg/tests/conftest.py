"""
Shared fixtures: synthetic natural-looking grey images.
"""
import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root so we can import app, core, filters, eval
_root = Path(__file__).resolve().parent.parent
if str(_root) not in sys.path:
    sys.path.insert(0, str(_root))


def make_natural_image(size: int = 128, seed: int = 7) -> np.ndarray:
    """Smooth gradient plus texture and mild sensor noise, kept inside [10, 245]."""
    rng = np.random.default_rng(seed)
    y, x = np.mgrid[0:size, 0:size].astype(np.float64)
    base = 40.0 + 150.0 * (x + y) / (2.0 * (size - 1))
    texture = 25.0 * np.sin(x / 7.0) * np.cos(y / 11.0) + 12.0 * np.sin((x + 2.0 * y) / 17.0)
    img = base + texture + rng.normal(0.0, 2.0, (size, size))
    return np.clip(np.rint(img), 10, 245).astype(np.uint8)


@pytest.fixture
def natural_image() -> np.ndarray:
    return make_natural_image(128)


@pytest.fixture
def small_image() -> np.ndarray:
    return make_natural_image(48, seed=3)
