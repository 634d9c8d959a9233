"""
Adaptive Iterative Mean restoration.

Noisy pixels start from their nearest clean pixel's value and are re-estimated by
masked 4-neighbour means; a pixel at distance d from the clean set is updated in every
iteration k <= 2d. The division by the co-evolving mask is deferred until the pixel
stops changing, so far pixels never see an underflowed mask.
"""

from math import isqrt

import numpy as np
from langsmith import traceable

from core.errors import UnrestorableImageError
from core.image import as_gray_image, convolve_cross, quantize
from core.schemas import DistanceField, RestorationConfig
from core.state import RestorationState
from filters.config import get_logger
from filters.distance import edt

logger = get_logger("aim")


def iteration_count(max_sq_dist: int) -> int:
    """ceil(2 * sqrt(max_sq_dist)), computed without floating point."""
    target = 4 * int(max_sq_dist)
    count = isqrt(target)
    return count if count * count == target else count + 1


def init_nearest(img: np.ndarray, noise_mask: np.ndarray, dt: DistanceField | None = None) -> np.ndarray:
    """
    I^0: every noisy pixel takes the value of its nearest clean pixel.

    Raises:
        UnrestorableImageError: no clean pixel exists
    """
    img = as_gray_image(img)
    noise_mask = np.asarray(noise_mask, dtype=bool)
    if noise_mask.all():
        raise UnrestorableImageError("Every pixel is flagged noisy; nothing to restore from")
    dt = dt if dt is not None else edt(~noise_mask)
    filled = img[dt.site_rows, dt.site_cols].astype(np.float64)
    filled[~noise_mask] = img[~noise_mask]
    return filled


def aim_step(state: RestorationState, sq_dist: np.ndarray) -> RestorationState:
    """
    One AIM iteration.

    Pixels with 4*sq_dist < k^2 are frozen; the rest take the cross-convolution of the full
    previous fields. A pixel updated now and frozen from the next iteration on has its
    final ratio I/Mask, which is written to the estimate before both fields are divided
    by the largest mask value.
    """
    k = state["k"] + 1
    active = 4 * sq_dist >= k * k
    image_field = np.where(active, convolve_cross(state["image_field"]), state["image_field"])
    mask_field = np.where(active, convolve_cross(state["mask_field"]), state["mask_field"])

    settled = active & (4 * sq_dist < (k + 1) * (k + 1)) & (mask_field > 0)
    estimate = np.divide(image_field, mask_field, out=state["estimate"].copy(), where=settled)

    scale = mask_field.max()
    return {"image_field": image_field / scale, "mask_field": mask_field / scale, "estimate": estimate, "k": k}


@traceable(name="AIM Restorer")
def aim_restore(img: np.ndarray, noise_mask: np.ndarray, cfg: RestorationConfig | None = None) -> np.ndarray:
    """
    Restore the flagged pixels of an image.

    Args:
        img: uint8 received image
        noise_mask: True where the pixel is considered corrupted
        cfg: snap-back threshold

    Returns:
        uint8 restored image; unflagged pixels are returned unchanged

    Raises:
        UnrestorableImageError: every pixel is flagged
    """
    cfg = cfg or RestorationConfig()
    received = as_gray_image(img)
    noise_mask = np.asarray(noise_mask, dtype=bool)
    if noise_mask.shape != received.shape:
        raise ValueError(f"Mask shape {noise_mask.shape} does not match image shape {received.shape}")
    if not noise_mask.any():
        return received.copy()

    dt = edt(~noise_mask)
    total = iteration_count(int(dt.sq_dist.max()))

    initial = init_nearest(received, noise_mask, dt)
    state: RestorationState = {
        "image_field": initial.copy(),
        "mask_field": np.ones(received.shape, dtype=np.float64),
        "estimate": initial,
        "k": 0,
    }
    while state["k"] < total:
        state = aim_step(state, dt.sq_dist)

    estimate = state["estimate"]

    snap = noise_mask & (np.abs(estimate - received) < cfg.correlation_threshold)
    restored = quantize(estimate)
    restored[~noise_mask] = received[~noise_mask]
    restored[snap] = received[snap]

    logger.info(
        f"AIM restored {int(noise_mask.sum())} pixel(s) in {total} iteration(s); "
        f"{int(snap.sum())} snapped back to the received value"
    )
    return restored
