"""
Impulse Value Detector.

Repeatedly takes the most frequent grey-value among poorly correlated pixels, declares it
an impulse and zeroes it out, until the entropy of the surviving positive pixels exceeds
the entropy threshold. Grey-value 0 is the removal sentinel throughout.
"""

import numpy as np
from langsmith import traceable

from core.errors import FullyCorruptedError
from core.image import as_gray_image, convolve_cross, entropy, histogram_positive, image_entropy
from core.schemas import DetectionResult, DetectorConfig
from filters.config import get_logger

logger = get_logger("detector")


def detail_image(img: np.ndarray) -> np.ndarray:
    """
    |(I*h)/(Mask*h) - I| with Mask = (I > 0).

    Where no neighbour is positive the local mean is taken to be the pixel itself, so the
    detail there is 0.
    """
    current = np.asarray(img, dtype=np.float64)
    local_sum = convolve_cross(current)
    support = convolve_cross((current > 0).astype(np.float64))
    local_mean = np.divide(local_sum, support, out=current.copy(), where=support > 0)
    return np.abs(local_mean - current)


@traceable(name="Impulse Detector")
def detect(img: np.ndarray, cfg: DetectorConfig | None = None) -> DetectionResult:
    """
    Find the impulse grey-values of a received image.

    Args:
        img: uint8 received image
        cfg: thresholds and iteration cap

    Returns:
        DetectionResult; noise_mask flags every received pixel holding a detected value

    Raises:
        FullyCorruptedError: every pixel was removed before the threshold was exceeded
    """
    cfg = cfg or DetectorConfig()
    received = as_gray_image(img)
    current = received.copy()

    impulse_values = set()
    if (received == 0).any():
        impulse_values.add(0)

    trace = [entropy(histogram_positive(current))]
    iterations = 0
    stalled = False

    while trace[-1] <= cfg.entropy_threshold and iterations < cfg.max_iterations:
        if not (current > 0).any():
            raise FullyCorruptedError(
                f"Every pixel was classified as noise after {iterations} iteration(s); "
                f"detected values {sorted(impulse_values)}"
            )

        detail = detail_image(current)
        uncorrelated = np.where(detail > cfg.correlation_threshold, current, 0)
        counts = histogram_positive(uncorrelated)
        if counts.sum() == 0:
            stalled = True
            logger.info(f"No uncorrelated positive pixel left after {iterations} iteration(s); stopping")
            break

        # argmax returns the first maximum, i.e. the smallest tied grey-value
        g_max = int(np.argmax(counts))
        impulse_values.add(g_max)
        current[current == g_max] = 0
        iterations += 1
        trace.append(entropy(histogram_positive(current)))
        logger.debug(f"iteration={iterations} g_max={g_max} entropy={trace[-1]:.4f}")

    if trace[-1] <= cfg.entropy_threshold and not stalled and not (current > 0).any():
        raise FullyCorruptedError(f"Every pixel was classified as noise after {iterations} iteration(s)")

    values = sorted(impulse_values)
    noise_mask = np.isin(received, values)
    logger.info(
        f"Detected {len(values)} impulse value(s) in {iterations} iteration(s); "
        f"{int(noise_mask.sum())}/{noise_mask.size} pixels flagged"
    )
    return DetectionResult(
        impulse_values=values,
        noise_mask=noise_mask,
        entropy_trace=trace,
        iterations=iterations,
        stalled=stalled,
        received_entropy=image_entropy(received),
    )
