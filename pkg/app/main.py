"""
Command-line frontend for the impulse denoising toolkit.

Subcommands: corrupt, detect, denoise, eval, bench. Run `python -m app.main --help`.
"""

import argparse
import json
import math
import sys
from pathlib import Path

import pandas as pd
from pydantic import ValidationError

from core.errors import FullyCorruptedError, NoiseSpecError, PgmFormatError, UnrestorableImageError
from core.graph import denoise
from core.pgm import read_pgm, save_mask_pgm, save_pgm16, write_pgm
from core.schemas import DetectorConfig, RestorationConfig
from eval.bench import DENSITIES, METHODS, PRESETS, bench, entropy_sweep, write_csv
from filters.baselines import psnr
from filters.config import (
    CORRELATION_THRESHOLD,
    ENTROPY_THRESHOLD,
    MAX_ITERATIONS,
    add_event,
    end_run,
    generate_run_id,
    get_logger,
    start_run,
)
from filters.detector import detect
from filters.distance import edt
from filters.noise import corrupt, derive_seed, gfn_type1, gfn_type2, load_noise_spec, parse_noise_spec, random_seed

logger = get_logger("cli")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_FORMAT = 4
EXIT_UNRESTORABLE = 5

EPILOG = f"""\
exit codes:
  {EXIT_OK}  success
  {EXIT_FAILURE}  unexpected failure
  {EXIT_USAGE}  bad arguments
  {EXIT_IO}  unreadable input or unwritable output path
  {EXIT_FORMAT}  malformed PGM, JSON or noise spec
  {EXIT_UNRESTORABLE}  unrestorable input (every pixel classified as noise)

Threshold defaults are the published settings (entropy 6 bits, correlation 8 grey-levels)
unless IMPULSE_ENTROPY_THRESHOLD / IMPULSE_CORRELATION_THRESHOLD override them.

bench CSVs carry wall-clock timings, so two runs with the same --seed differ in
time_mean_s. Pass --no-timing as well to get byte-identical CSVs.
"""


# ---------------------------
# Parser
# ---------------------------
def _seed_value(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed: {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be a non-negative 64-bit integer, got {value}")
    return value


def _add_thresholds(parser: argparse.ArgumentParser, detector: bool = True) -> None:
    if detector:
        parser.add_argument("--entropy-threshold", type=float, default=ENTROPY_THRESHOLD, metavar="B",
                            help=f"stop detecting once the surviving entropy exceeds B bits (default: {ENTROPY_THRESHOLD:g})")
        parser.add_argument("--max-iterations", type=int, default=MAX_ITERATIONS, metavar="N",
                            help=f"detector iteration cap (default: {MAX_ITERATIONS})")
    parser.add_argument("--correlation-threshold", type=float, default=CORRELATION_THRESHOLD, metavar="T",
                        help=f"detail / snap-back threshold in grey-levels (default: {CORRELATION_THRESHOLD:g})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="impulse-denoise",
        description="Impulse noise synthesis, entropy-based impulse detection and AIM restoration for PGM images.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=EPILOG,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_corrupt = sub.add_parser("corrupt", help="add impulse noise; writes the corrupted image and the ground-truth mask")
    p_corrupt.add_argument("input")
    p_corrupt.add_argument("output")
    p_corrupt.add_argument("mask")
    noise = p_corrupt.add_mutually_exclusive_group(required=True)
    noise.add_argument("--spn", type=float, metavar="P", help="salt-and-pepper noise of density P, split evenly")
    noise.add_argument("--spn-split", type=float, nargs=2, metavar=("SALT", "PEPPER"), help="salt-and-pepper noise with explicit densities")
    noise.add_argument("--frin", nargs=3, metavar=("M", "P1", "P2"), help="fixed-range noise: ranges of length M with densities P1 (low) and P2 (high)")
    noise.add_argument("--gfn", metavar="FILE.json", help="noise spec JSON file")
    noise.add_argument("--gfn-type1", type=float, metavar="P", help="20 random grey-values, equally likely, total density P")
    noise.add_argument("--gfn-type2", type=float, metavar="P", help="every even grey-value, equally likely, total density P")
    p_corrupt.add_argument("--seed", type=_seed_value, metavar="N", help="non-negative random seed (printed when omitted)")

    p_detect = sub.add_parser("detect", help="detect impulse values; writes the result JSON and the noise mask")
    p_detect.add_argument("input")
    p_detect.add_argument("result")
    p_detect.add_argument("mask")
    _add_thresholds(p_detect)

    p_denoise = sub.add_parser("denoise", help="detect and restore; writes the restored image and the result JSON")
    p_denoise.add_argument("input")
    p_denoise.add_argument("output")
    p_denoise.add_argument("result")
    p_denoise.add_argument("--distance-out", metavar="PATH", help="also write the distance field as a 16-bit PGM")
    _add_thresholds(p_denoise)

    p_eval = sub.add_parser("eval", help="print the PSNR between two images")
    p_eval.add_argument("reference")
    p_eval.add_argument("candidate")

    p_bench = sub.add_parser("bench", help="repeated-trial PSNR/runtime sweep written as CSV")
    p_bench.add_argument("images", nargs="+")
    p_bench.add_argument("-o", "--output", required=True, metavar="CSV")
    p_bench.add_argument("--preset", choices=sorted(PRESETS), help="noise grid and methods of a published table")
    p_bench.add_argument("--spn", type=float, nargs="+", action="extend", default=[], metavar="P")
    p_bench.add_argument("--frin", nargs=3, action="append", default=[], metavar=("M", "P1", "P2"))
    p_bench.add_argument("--gfn", action="append", default=[], metavar="FILE.json")
    p_bench.add_argument("--gfn-type1", type=float, nargs="+", action="extend", default=[], metavar="P")
    p_bench.add_argument("--gfn-type2", type=float, nargs="+", action="extend", default=[], metavar="P")
    p_bench.add_argument("--methods", nargs="+", choices=sorted(METHODS), metavar="METHOD",
                         help=f"methods to run, from {sorted(METHODS)} (default: both, or the preset's)")
    p_bench.add_argument("--runs", type=int, default=20, metavar="K", help="trials per cell (default: 20)")
    p_bench.add_argument("--jobs", type=int, default=1, metavar="J", help="parallel cells (default: 1 for timing fidelity)")
    p_bench.add_argument("--seed", type=_seed_value, metavar="N",
                         help="non-negative base seed (printed when omitted); fixes the noise, not the timings")
    p_bench.add_argument("--no-timing", action="store_true", help="leave time_mean_s empty; with --seed the CSV is then byte-identical across runs")
    p_bench.add_argument("--entropy-out", metavar="CSV", help="also write received-image entropy versus SPN density")
    _add_thresholds(p_bench)

    return parser


# ---------------------------
# Helpers
# ---------------------------
def _seed(args) -> int:
    if args.seed is None:
        args.seed = random_seed()
        print(f"seed: {args.seed}", file=sys.stderr)
    return args.seed


def _frin(values) -> dict:
    try:
        m, p_low, p_high = int(values[0]), float(values[1]), float(values[2])
    except ValueError as e:
        raise NoiseSpecError(f"--frin expects an integer and two densities, got {values}") from e
    return {"kind": "frin", "m": m, "p_low": p_low, "p_high": p_high}


def _corrupt_spec(args, seed: int):
    if args.spn is not None:
        return parse_noise_spec({"kind": "spn", "p": args.spn})
    if args.spn_split is not None:
        salt, pepper = args.spn_split
        return parse_noise_spec({"kind": "spn", "p": salt + pepper, "p_salt": salt, "p_pepper": pepper})
    if args.frin is not None:
        return parse_noise_spec(_frin(args.frin))
    if args.gfn is not None:
        return load_noise_spec(Path(args.gfn).read_text())
    if args.gfn_type1 is not None:
        return gfn_type1(args.gfn_type1, derive_seed(seed, 0))
    return gfn_type2(args.gfn_type2)


def _bench_specs(args, seed: int):
    specs, methods = PRESETS[args.preset](seed) if args.preset else ([], ["median", "aim"])
    specs = list(specs)
    specs += [parse_noise_spec({"kind": "spn", "p": p}) for p in args.spn]
    specs += [parse_noise_spec(_frin(values)) for values in args.frin]
    specs += [load_noise_spec(Path(path).read_text()) for path in args.gfn]
    specs += [gfn_type1(p, derive_seed(seed, 1, i)) for i, p in enumerate(args.gfn_type1)]
    specs += [gfn_type2(p) for p in args.gfn_type2]
    if not specs:
        raise NoiseSpecError("bench needs --preset or at least one noise option")
    return specs, args.methods or methods


def _detector_config(args) -> DetectorConfig:
    return DetectorConfig(
        entropy_threshold=args.entropy_threshold,
        correlation_threshold=args.correlation_threshold,
        max_iterations=args.max_iterations,
    )


def _restoration_config(args) -> RestorationConfig:
    return RestorationConfig(correlation_threshold=args.correlation_threshold)


# ---------------------------
# Subcommands
# ---------------------------
def cmd_corrupt(args, run_id: str) -> None:
    seed = _seed(args)
    img = read_pgm(args.input)
    spec = _corrupt_spec(args, seed)
    corrupted, mask = corrupt(img, spec, seed)
    write_pgm(args.output, corrupted)
    Path(args.mask).write_bytes(save_mask_pgm(mask))
    add_event(run_id, seed=seed, spec=spec.model_dump(), corrupted_pixels=int(mask.sum()))


def cmd_detect(args, run_id: str) -> None:
    img = read_pgm(args.input)
    detection = detect(img, _detector_config(args))
    Path(args.result).write_text(detection.to_json())
    Path(args.mask).write_bytes(save_mask_pgm(detection.noise_mask))
    add_event(run_id, impulse_values=detection.impulse_values, iterations=detection.iterations)


def cmd_denoise(args, run_id: str) -> None:
    img = read_pgm(args.input)
    restored, detection = denoise(img, _detector_config(args), _restoration_config(args), run_id=run_id)
    write_pgm(args.output, restored)
    Path(args.result).write_text(detection.to_json())
    if args.distance_out:
        if detection.noise_mask.all():
            raise UnrestorableImageError("No clean pixels: the distance field is undefined")
        field = edt(~detection.noise_mask)
        Path(args.distance_out).write_bytes(save_pgm16(field.dist.round()))


def cmd_eval(args, run_id: str) -> None:
    value = psnr(read_pgm(args.reference), read_pgm(args.candidate))
    print("PSNR: identical (inf dB)" if math.isinf(value) else f"PSNR: {value:.4f} dB")
    add_event(run_id, psnr_db=value)


def cmd_bench(args, run_id: str) -> None:
    seed = _seed(args)
    images = [(Path(path).stem, read_pgm(path)) for path in args.images]
    specs, methods = _bench_specs(args, seed)
    results = bench(
        images, specs, methods, args.runs, seed,
        jobs=args.jobs, det_cfg=_detector_config(args), res_cfg=_restoration_config(args),
    )
    write_csv(results, args.output, include_timing=not args.no_timing)
    if args.entropy_out:
        densities = args.spn or list(DENSITIES)
        frames = [entropy_sweep(img, densities, args.runs, seed).assign(image=image_id) for image_id, img in images]
        table = pd.concat(frames, ignore_index=True)
        table[["image", "density", "entropy_mean", "entropy_std"]].to_csv(args.entropy_out, index=False, float_format="%.4f")
    add_event(run_id, seed=seed, cells=len(results), failed=sum(r.status != "ok" for r in results))


COMMANDS = {
    "corrupt": cmd_corrupt,
    "detect": cmd_detect,
    "denoise": cmd_denoise,
    "eval": cmd_eval,
    "bench": cmd_bench,
}


def run(argv: list[str] | None = None) -> int:
    """Parse argv, run one subcommand and return the process exit status."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    run_id = generate_run_id()
    start_run(run_id, args.command)
    try:
        COMMANDS[args.command](args, run_id)
    except (PgmFormatError, NoiseSpecError, json.JSONDecodeError) as e:
        status, error = EXIT_FORMAT, e
    except ValidationError as e:
        status, error = EXIT_USAGE, e
    except (UnrestorableImageError, FullyCorruptedError) as e:
        status, error = EXIT_UNRESTORABLE, e
    except OSError as e:
        status, error = EXIT_IO, e
    except Exception as e:
        logger.error(f"Unexpected failure in {args.command}", exc_info=True)
        status, error = EXIT_FAILURE, e
    else:
        end_run(run_id, "success")
        return EXIT_OK

    message = " ".join(str(error).split())
    print(f"error: {message}", file=sys.stderr)
    add_event(run_id, error=message)
    end_run(run_id, "error")
    return status


def main() -> None:
    sys.exit(run())


# Run with: python -m app.main <subcommand> ...
if __name__ == "__main__":
    main()
