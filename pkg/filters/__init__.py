"""
Filters package: noise synthesis, impulse detection, distance transform, AIM restoration
and the median baseline.
"""

from filters.noise import corrupt, impulse_set, gfn_type1, gfn_type2, load_noise_spec, dump_noise_spec
from filters.detector import detail_image, detect
from filters.distance import edt
from filters.aim import init_nearest, aim_restore
from filters.baselines import psnr, median3x3
from filters.orchestrator import detector_node, restorer_node

__all__ = [
    "corrupt",
    "impulse_set",
    "gfn_type1",
    "gfn_type2",
    "load_noise_spec",
    "dump_noise_spec",
    "detail_image",
    "detect",
    "edt",
    "init_nearest",
    "aim_restore",
    "psnr",
    "median3x3",
    "detector_node",
    "restorer_node",
]
