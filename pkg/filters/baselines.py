"""
Quality metric and the median-filter baseline.
"""

import math

import numpy as np

from core.image import as_gray_image

PEAK = 255.0

# Larger than any grey-value, so padding sorts after every real sample.
_PAD = np.uint16(1024)


def psnr(a: np.ndarray, b: np.ndarray) -> float:
    """
    Peak signal-to-noise ratio in dB for 8-bit images.

    Returns math.inf for identical images.
    """
    a = as_gray_image(a)
    b = as_gray_image(b)
    if a.shape != b.shape:
        raise ValueError(f"Dimension mismatch: {a.shape} vs {b.shape}")
    mse = np.mean((a.astype(np.float64) - b.astype(np.float64)) ** 2)
    if mse == 0:
        return math.inf
    return float(10.0 * np.log10(PEAK**2 / mse))


def median3x3(img: np.ndarray) -> np.ndarray:
    """
    3x3 median filter.

    Border windows are clipped to the image; with an even number of samples the lower of
    the two middle values is taken.
    """
    img = as_gray_image(img)
    height, width = img.shape
    padded = np.pad(img.astype(np.uint16), 1, mode="constant", constant_values=_PAD)

    windows = np.stack([padded[dy:dy + height, dx:dx + width] for dy in range(3) for dx in range(3)])
    windows.sort(axis=0)

    inside = np.pad(np.ones(img.shape, dtype=np.uint8), 1)
    samples = sum(inside[dy:dy + height, dx:dx + width] for dy in range(3) for dx in range(3)).astype(np.intp)

    lower_middle = (samples - 1) // 2
    return np.take_along_axis(windows, lower_middle[np.newaxis], axis=0)[0].astype(np.uint8)
