"""
Exact Euclidean distance transform of a clean-pixel mask with nearest-site retrieval.

scipy's feature transform (the separable linear-time exact algorithm of Maurer et al.)
supplies one nearest clean pixel per location; squared distances are recomputed from it
as exact integers, and ties are then settled towards the smallest row, then column.
"""

from math import isqrt

import numpy as np
from scipy import ndimage

from core.errors import UnrestorableImageError
from core.schemas import DistanceField
from filters.config import get_logger

logger = get_logger("distance")


def lattice_table(sq_values: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Integer offsets (dy, dx) with dy^2 + dx^2 equal to each requested squared distance.

    Args:
        sq_values: sorted, distinct, non-negative squared distances

    Returns:
        (dy, dx, start, count): offsets grouped by squared distance and ordered by dy then dx
        inside each group; the group of sq_values[i] is dy[start[i]:start[i] + count[i]]
    """
    sq_values = np.asarray(sq_values, dtype=np.int64)
    reach = isqrt(int(sq_values.max(initial=0)))

    groups, dys, dxs = [], [], []
    for dy in range(-reach, reach + 1):
        rest = sq_values - dy * dy
        idx = np.nonzero(rest >= 0)[0]
        rest = rest[idx]
        dx = np.sqrt(rest).astype(np.int64)
        dx -= dx * dx > rest
        dx += (dx + 1) * (dx + 1) <= rest
        exact = dx * dx == rest
        idx, dx = idx[exact], dx[exact]
        pair = dx > 0
        groups.extend([idx[pair], idx])
        dys.extend([np.full(int(pair.sum()), dy), np.full(idx.size, dy)])
        dxs.extend([-dx[pair], dx])

    group = np.concatenate(groups) if groups else np.empty(0, dtype=np.intp)
    dy = np.concatenate(dys).astype(np.int64) if dys else np.empty(0, dtype=np.int64)
    dx = np.concatenate(dxs).astype(np.int64) if dxs else np.empty(0, dtype=np.int64)

    order = np.lexsort((dx, dy, group))
    group, dy, dx = group[order], dy[order], dx[order]
    count = np.bincount(group, minlength=sq_values.size)
    start = np.concatenate([[0], np.cumsum(count)[:-1]]).astype(np.intp)
    return dy, dx, start, count


def _first_sites(clean: np.ndarray, sq_dist: np.ndarray, site_rows: np.ndarray, site_cols: np.ndarray) -> None:
    """Rewrite sites in place so each is the lexicographically smallest nearest clean pixel."""
    height, width = clean.shape
    rows, cols = np.nonzero(sq_dist > 0)
    if rows.size == 0:
        return

    pixel_sq = sq_dist[rows, cols]
    sq_values = np.unique(pixel_sq)
    dy, dx, start, count = lattice_table(sq_values)
    group = np.searchsorted(sq_values, pixel_sq)
    first = start[group]
    pending = np.arange(rows.size)

    # the site found by scipy lies in every pixel's group, so each pixel is hit
    step = 0
    while pending.size:
        offset = first[pending] + step
        r = rows[pending] + dy[offset]
        c = cols[pending] + dx[offset]
        inside = (r >= 0) & (r < height) & (c >= 0) & (c < width)
        hit = np.zeros(pending.size, dtype=bool)
        hit[inside] = clean[r[inside], c[inside]]
        found = pending[hit]
        site_rows[rows[found], cols[found]] = r[hit]
        site_cols[rows[found], cols[found]] = c[hit]
        pending = pending[~hit]
        step += 1


def edt(clean_mask: np.ndarray) -> DistanceField:
    """
    Distance of every pixel to its nearest clean pixel.

    Args:
        clean_mask: 2-D boolean array, True where the pixel is uncorrupted

    Raises:
        UnrestorableImageError: the mask has no clean pixel
    """
    clean = np.asarray(clean_mask, dtype=bool)
    if clean.ndim != 2 or clean.size == 0:
        raise ValueError(f"Expected a non-empty 2-D mask, got shape {clean.shape}")
    if not clean.any():
        raise UnrestorableImageError("No clean pixels: the distance transform is undefined")

    site_rows, site_cols = ndimage.distance_transform_edt(~clean, return_distances=False, return_indices=True)
    site_rows = site_rows.astype(np.intp)
    site_cols = site_cols.astype(np.intp)

    grid_rows, grid_cols = np.indices(clean.shape)
    sq_dist = (grid_rows - site_rows).astype(np.int64) ** 2 + (grid_cols - site_cols).astype(np.int64) ** 2

    _first_sites(clean, sq_dist, site_rows, site_cols)
    logger.debug(f"edt shape={clean.shape} max_sq={int(sq_dist.max())}")
    return DistanceField(sq_dist=sq_dist, site_rows=site_rows, site_cols=site_cols)
