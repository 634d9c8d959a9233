"""
Grid helpers, the fixed cross kernel, histograms and the image entropy.

Images are 2-D numpy arrays: ``uint8`` for grey images, ``float64`` for the
real-valued intermediate fields. Every function here is pure.
"""

import numpy as np
from scipy import ndimage

# 4-neighbour window h; the center weight is zero.
CROSS_KERNEL = np.array(
    [[0.0, 1.0, 0.0],
     [1.0, 0.0, 1.0],
     [0.0, 1.0, 0.0]]
)

GREY_LEVELS = 256


def as_gray_image(values) -> np.ndarray:
    """Validate and return a 2-D uint8 grey image (copying only when needed)."""
    arr = np.asarray(values)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"Expected a non-empty 2-D image, got shape {arr.shape}")
    if arr.dtype != np.uint8:
        if arr.size and (arr.min() < 0 or arr.max() > 255):
            raise ValueError("Grey-values must lie in [0, 255]")
        if np.issubdtype(arr.dtype, np.floating) and not np.array_equal(arr, np.round(arr)):
            raise ValueError("Grey-values must be integers")
        arr = arr.astype(np.uint8)
    return arr


def quantize(field: np.ndarray) -> np.ndarray:
    """Round half up, then clamp to [0, 255]."""
    return np.clip(np.floor(field + 0.5), 0, 255).astype(np.uint8)


def convolve_cross(field: np.ndarray) -> np.ndarray:
    """Sum of the in-bounds 4-neighbours of every pixel (zero padding)."""
    return ndimage.convolve(np.asarray(field, dtype=np.float64), CROSS_KERNEL, mode="constant", cval=0.0)


def histogram(img: np.ndarray) -> np.ndarray:
    """Full 256-bin histogram of an 8-bit image."""
    return np.bincount(np.asarray(img, dtype=np.uint8).ravel(), minlength=GREY_LEVELS).astype(np.int64)


def histogram_positive(img: np.ndarray) -> np.ndarray:
    """Histogram of the positive pixels; bin 0 is always empty."""
    counts = histogram(img)
    counts[0] = 0
    return counts


def entropy(counts: np.ndarray) -> float:
    """Shannon entropy in bits of a histogram."""
    counts = np.asarray(counts, dtype=np.float64)
    total = counts.sum()
    if total <= 0:
        return 0.0
    p = counts[counts > 0] / total
    return float(max(0.0, -np.sum(p * np.log2(p))))


def image_entropy(img: np.ndarray) -> float:
    """Entropy of the full histogram, grey-value 0 included."""
    return entropy(histogram(img))
