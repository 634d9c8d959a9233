"""
Repeated-trial denoising benchmark.

Every (image, spec, method) cell corrupts the image `runs` times with seeds derived from
(seed, image index, spec index, run), so both methods see the same noise patterns, and
reports the mean/stddev PSNR against the original plus the mean wall time.
"""

import math
import time
from pathlib import Path
from typing import Callable

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from core.graph import denoise
from core.image import image_entropy
from core.schemas import BenchResult, DetectorConfig, NoiseSpec, RestorationConfig
from filters.baselines import median3x3, psnr
from filters.config import get_logger
from filters.noise import corrupt, derive_seed, dump_noise_spec, gfn_type1, gfn_type2, parse_noise_spec

logger = get_logger("bench")

CSV_COLUMNS = ["image", "spec_json", "method", "runs", "psnr_mean_db", "psnr_std_db", "time_mean_s", "status"]
DENSITIES = (0.5, 0.6, 0.7, 0.8, 0.9)


# ---------------------------
# Methods
# ---------------------------
def _run_median(img, det_cfg, res_cfg):
    return median3x3(img)


def _run_aim(img, det_cfg, res_cfg):
    restored, _ = denoise(img, det_cfg, res_cfg)
    return restored


METHODS: dict[str, Callable] = {"median": _run_median, "aim": _run_aim}


# ---------------------------
# Published Grids
# ---------------------------
def _spn(p, salt=None, pepper=None):
    return parse_noise_spec({"kind": "spn", "p": p, "p_salt": salt, "p_pepper": pepper})


def _frin(m, low, high):
    return parse_noise_spec({"kind": "frin", "m": m, "p_low": low, "p_high": high})


PRESETS: dict[str, Callable[[int], tuple[list, list[str]]]] = {
    "table3": lambda seed: ([_spn(p) for p in DENSITIES], ["median", "aim"]),
    "table4": lambda seed: ([_spn(0.8)], ["median", "aim"]),
    "table6": lambda seed: (
        [_spn(0.8, salt, pepper) for salt, pepper in [(0.3, 0.5), (0.35, 0.45), (0.4, 0.4), (0.45, 0.35), (0.5, 0.3)]],
        ["aim"],
    ),
    "table7": lambda seed: ([_frin(m, 0.4, 0.4) for m in (10, 30, 50)], ["aim"]),
    "table8": lambda seed: (
        [_frin(30, low, high) for low, high in [(0.3, 0.5), (0.35, 0.45), (0.45, 0.35), (0.5, 0.3)]],
        ["aim"],
    ),
    "table9": lambda seed: ([gfn_type1(p, derive_seed(seed, i)) for i, p in enumerate(DENSITIES)], ["aim"]),
    "table10": lambda seed: ([gfn_type2(p) for p in DENSITIES], ["aim"]),
}


# ---------------------------
# Cells
# ---------------------------
def summarize(values: list[float]) -> tuple[float, float]:
    """Mean and population stddev; identical-image (infinite) runs make the mean infinite."""
    if any(math.isinf(v) for v in values):
        return math.inf, 0.0
    return float(np.mean(values)), float(np.std(values))


def bench_cell(
    image_id: str,
    image_index: int,
    img: np.ndarray,
    spec: NoiseSpec,
    spec_index: int,
    method: str,
    runs: int,
    seed: int,
    det_cfg: DetectorConfig | None = None,
    res_cfg: RestorationConfig | None = None,
) -> BenchResult:
    """Run one cell; pipeline errors mark the cell failed instead of raising."""
    scores, times = [], []
    try:
        for run in range(runs):
            corrupted, _ = corrupt(img, spec, derive_seed(seed, image_index, spec_index, run))
            start = time.perf_counter()
            restored = METHODS[method](corrupted, det_cfg, res_cfg)
            times.append(time.perf_counter() - start)
            scores.append(psnr(img, restored))
    except Exception as e:
        logger.error(f"Cell failed image={image_id} spec={dump_noise_spec(spec)} method={method}: {e}")
        return BenchResult(image=image_id, spec=spec, method=method, runs=runs, status=f"failed: {e}")

    mean, std = summarize(scores)
    logger.info(f"image={image_id} kind={spec.kind} p={spec.p:.2f} method={method} psnr={mean:.2f}±{std:.2f} dB")
    return BenchResult(
        image=image_id,
        spec=spec,
        method=method,
        runs=runs,
        psnr_mean=mean,
        psnr_stddev=std,
        wall_time_mean=float(np.mean(times)),
    )


def bench(
    images: list[tuple[str, np.ndarray]],
    specs: list[NoiseSpec],
    methods: list[str],
    runs: int,
    seed: int,
    jobs: int = 1,
    det_cfg: DetectorConfig | None = None,
    res_cfg: RestorationConfig | None = None,
) -> list[BenchResult]:
    """
    Sweep every (image, spec, method) cell.

    Args:
        images: (id, uint8 image) pairs
        specs: noise descriptions
        methods: names from METHODS
        runs: trials per cell
        seed: base seed for the per-run derivation
        jobs: joblib worker count; 1 keeps timings undisturbed

    Returns:
        One BenchResult per cell, in image, spec, method order
    """
    if runs < 1:
        raise ValueError(f"runs must be >= 1, got {runs}")
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        raise ValueError(f"Unknown method(s) {unknown}; choose from {sorted(METHODS)}")

    cells = [
        (image_id, i, img, spec, j, method)
        for i, (image_id, img) in enumerate(images)
        for j, spec in enumerate(specs)
        for method in methods
    ]
    logger.info(f"Benchmarking {len(cells)} cell(s) x {runs} run(s) with {jobs} job(s)")
    return Parallel(n_jobs=jobs)(
        delayed(bench_cell)(image_id, i, img, spec, j, method, runs, seed, det_cfg, res_cfg)
        for image_id, i, img, spec, j, method in cells
    )


# ---------------------------
# Output
# ---------------------------
def results_frame(results: list[BenchResult], include_timing: bool = True) -> pd.DataFrame:
    rows = [
        {
            "image": r.image,
            "spec_json": dump_noise_spec(r.spec),
            "method": r.method,
            "runs": r.runs,
            "psnr_mean_db": r.psnr_mean,
            "psnr_std_db": r.psnr_stddev,
            "time_mean_s": r.wall_time_mean if include_timing else None,
            "status": r.status,
        }
        for r in results
    ]
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def write_csv(results: list[BenchResult], path: str | Path, include_timing: bool = True) -> None:
    """Write the sweep; without timing the file depends only on inputs and seed."""
    results_frame(results, include_timing).to_csv(path, index=False, float_format="%.4f")


def entropy_sweep(img: np.ndarray, densities: list[float], runs: int, seed: int) -> pd.DataFrame:
    """Mean full-histogram entropy of the image under salt-and-pepper noise of each density."""
    rows = []
    for j, density in enumerate(densities):
        values = [image_entropy(corrupt(img, _spn(density), derive_seed(seed, 0, j, run))[0]) for run in range(runs)]
        rows.append({"density": density, "entropy_mean": float(np.mean(values)), "entropy_std": float(np.std(values))})
    return pd.DataFrame(rows, columns=["density", "entropy_mean", "entropy_std"])
