"""
Command line front end: rate math, codec round trips, sweeps and capacity.

Usage:
    itc rate --profile 2:0.85,7:0.15 --puncture 11101101110
    itc encode --frame-size 40 --seed 3
    itc decode --preset ITC-1003-bpsk --ebno 1.5 --trace trace.csv
    itc sweep --config sweep.json --out results/bpsk.csv
    itc capacity --snr -5:20:1
    itc selftest

Exit codes: 0 success, 1 failed check or --strict censoring, 2 usage or
configuration error. Flags win over a --config file, which wins over ITC_*
environment defaults.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import ValidationError

from ..channel.phy import MODULATION_ORDERS, awgn, constellation, demap, map_bits
from ..coding.codec import IrregularTurboCodec, IterationSnapshot
from ..coding.errors import FrameLengthError, InterleaverError, ProfileError
from ..coding.presets import get_preset, list_presets, resolve_pattern
from ..coding.profile import DegreeProfile, PuncturePattern, average_degree, code_rate
from ..simulation.config import SweepFile, expand_grid
from ..simulation.metrics import capacity_gap, ebno_to_snr, shannon_capacity
from ..simulation.pipeline import FramePipeline, frame_rng
from ..simulation.results import SimPoint, write_results
from ..simulation.runner import SweepRunner
from .selftest import run_selftest
from .settings import DEFAULT_LOG_FORMAT, Settings, load_settings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

USAGE_ERRORS = (ProfileError, InterleaverError, FrameLengthError, ValidationError, ValueError)


def _ebno_value(text: str):
    """"start:stop:step" for a grid, or a single dB value."""
    parts = text.split(":")
    try:
        values = [float(part) for part in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad Eb/N0 value '{text}'") from None
    if len(values) == 1:
        return values[0]
    if len(values) != 3:
        raise argparse.ArgumentTypeError(f"Eb/N0 grid must be start:stop:step, got '{text}'")
    return values


def _add_codec_flags(parser: argparse.ArgumentParser, with_frame: bool = True) -> None:
    group = parser.add_argument_group("code")
    examples = ", ".join(list_presets()[:2])
    group.add_argument("--preset", help=f"reference configuration ({examples}, ...)")
    group.add_argument("--profile", help='degree profile, e.g. "2:0.85,7:0.15"')
    group.add_argument(
        "--puncture", help='parity keep mask, e.g. "11101101110", or a pattern name'
    )
    if with_frame:
        group.add_argument("--frame-size", type=int, help="information bits per frame K")
        group.add_argument(
            "--interleaver-seed", type=int, help="interleaver seed (defaults to --seed)"
        )
        group.add_argument("--max-iter", type=int, help="SISO pass budget")
        group.add_argument(
            "--stop-rule",
            choices=["fixed", "stable-decisions", "genie"],
            help="iteration stopping rule",
        )
        group.add_argument("--seed", type=int, help="master seed for every random draw")


def create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="itc", description="Irregular turbo codes over AWGN: rates, codecs and BER sweeps."
    )
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR (env ITC_LOG_LEVEL)")
    parser.add_argument("--quiet", action="store_true", help="no progress bars")
    commands = parser.add_subparsers(dest="command", required=True)

    rate = commands.add_parser("rate", help="print average degree, f0, theta and rate")
    _add_codec_flags(rate, with_frame=False)

    encode = commands.add_parser("encode", help="encode one frame and print the transmitted bits")
    _add_codec_flags(encode)
    encode.add_argument("--bits", help="information bits as a 0/1 string (default: seeded random)")
    encode.add_argument("--out", help="write the bit string here instead of stdout")
    encode.add_argument("--dump-interleaver", metavar="PATH", help="write the interleaver table")

    decode = commands.add_parser("decode", help="simulate and decode one seeded frame")
    _add_codec_flags(decode)
    decode.add_argument("--mod", choices=sorted(MODULATION_ORDERS), help="modulation")
    decode.add_argument("--ebno", type=float, required=True, help="Eb/N0 in dB")
    decode.add_argument("--trace", metavar="PATH", help="per-iteration extrinsic snapshots as CSV")

    sweep = commands.add_parser("sweep", help="Monte Carlo BER/FER sweep")
    _add_codec_flags(sweep)
    sweep.add_argument("--config", help="JSON sweep file")
    sweep.add_argument("--mod", choices=sorted(MODULATION_ORDERS), help="modulation")
    sweep.add_argument("--ebno", type=_ebno_value, help="dB value or start:stop:step grid")
    sweep.add_argument("--workers", type=int, help="worker processes (env ITC_WORKERS)")
    sweep.add_argument("--min-frame-errors", type=int, help="frame errors that end a point")
    sweep.add_argument("--max-frames", type=int, help="frame budget per point")
    sweep.add_argument("--uncoded", action="store_true", default=None, help="bypass the codec")
    sweep.add_argument("--rate-basis", choices=["nominal", "measured"], help="rate used for Eb")
    sweep.add_argument("--ber-floor", type=float, help="stop the sweep once BER drops below")
    sweep.add_argument("--out", help="CSV path (env ITC_RESULTS_DIR)")
    sweep.add_argument("--strict", action="store_true", help="exit 1 if any point is censored")

    capacity = commands.add_parser("capacity", help="Shannon capacity curve")
    capacity.add_argument(
        "--snr", type=_ebno_value, default=[-10.0, 20.0, 1.0], help="start:stop:step in dB"
    )
    capacity.add_argument(
        "--sweep-json", metavar="PATH", help="place a sweep's throughput on the curve"
    )

    selftest = commands.add_parser("selftest", help="run the oracle and property checks")
    selftest.add_argument("--golden", metavar="PATH", help="RSC golden vector file")

    commands.add_parser("presets", help="list reference configurations")
    return parser


def _sweep_fields(args: argparse.Namespace, settings: Settings) -> Dict[str, Any]:
    """Merge environment defaults, the --config file and explicit flags."""
    fields: Dict[str, Any] = {"workers": settings.workers, "seed": settings.seed}
    if getattr(args, "config", None):
        try:
            with open(args.config, "r") as f:
                fields.update(json.load(f))
        except (OSError, json.JSONDecodeError) as e:
            raise ValueError(f"cannot read config {args.config}: {str(e)}") from None
    flags = {
        "preset": args.preset,
        "profile": args.profile,
        "puncture": args.puncture,
        "frame_size": args.frame_size,
        "interleaver_seed": args.interleaver_seed,
        "max_iter": args.max_iter,
        "stop_rule": args.stop_rule,
        "seed": args.seed,
        "modulation": getattr(args, "mod", None),
        "ebno": getattr(args, "ebno", None),
        "workers": getattr(args, "workers", None),
        "min_frame_errors": getattr(args, "min_frame_errors", None),
        "max_frames": getattr(args, "max_frames", None),
        "uncoded": getattr(args, "uncoded", None),
        "rate_basis": getattr(args, "rate_basis", None),
        "ber_floor": getattr(args, "ber_floor", None),
    }
    fields.update({key: value for key, value in flags.items() if value is not None})
    fields.setdefault("ebno", 0.0)
    return fields


def cmd_rate(args: argparse.Namespace, settings: Settings) -> int:
    reference = get_preset(args.preset) if args.preset else None
    if args.profile:
        profile = DegreeProfile.parse(args.profile)
    else:
        profile = reference.profile if reference else DegreeProfile.regular()
    if args.puncture:
        pattern = resolve_pattern(args.puncture)
    else:
        pattern = reference.pattern if reference else PuncturePattern.unpunctured()

    print(f"profile={profile.literal} puncture={pattern.literal}")
    print(f"d_avg={average_degree(profile):.4f}")
    print(f"f0={pattern.f0:.4f}")
    print(f"theta={pattern.theta:.4f}")
    print(f"R={code_rate(profile, pattern):.4f}")
    if reference is not None and not (args.profile or args.puncture):
        consistent = "yes" if reference.label_consistent else "no"
        print(f"label={reference.label_rate:.2f} consistent={consistent}")
    return EXIT_OK


def cmd_encode(args: argparse.Namespace, settings: Settings) -> int:
    sweep = SweepFile(**_sweep_fields(args, settings))
    config = sweep.codec_config()
    codec = IrregularTurboCodec(config)
    if args.bits:
        if any(c not in "01" for c in args.bits):
            raise ValueError("--bits must contain only 0 and 1")
        bits = np.array([int(c) for c in args.bits], dtype=np.int8)
        if bits.size != config.frame_size:
            raise FrameLengthError(
                f"--bits has {bits.size} bits, frame size is {config.frame_size}"
            )
    else:
        bits = frame_rng(sweep.seed, 0, 0).integers(0, 2, config.frame_size, dtype=np.int8)

    encoded = codec.encode(bits)
    text = "".join(str(int(b)) for b in encoded.bits())
    if args.out:
        Path(args.out).write_text(text + "\n")
        logger.info(f"Wrote {len(text)} transmitted bits to {args.out}")
    else:
        print(text)
    if args.dump_interleaver:
        codec.permutation.dump(args.dump_interleaver)
        logger.info(f"Wrote interleaver table to {args.dump_interleaver}")
    return EXIT_OK


def _trace_rows(codec: IrregularTurboCodec, rows: List[Dict[str, Any]]):
    repetition = codec.repetition

    def collect(snapshot: IterationSnapshot) -> None:
        for position in range(repetition.repeated_length):
            rows.append(
                {
                    "iteration": snapshot.iteration,
                    "source": int(repetition.layout_source[position]),
                    "copy": int(repetition.layout_copy[position]),
                    "extrinsic": float(snapshot.extrinsic[position]),
                    "next_apriori": float(snapshot.next_apriori[position]),
                }
            )

    return collect


def cmd_decode(args: argparse.Namespace, settings: Settings) -> int:
    sweep = SweepFile(**_sweep_fields(args, settings))
    sim_config = sweep.to_sim_config()
    pipeline = FramePipeline(sim_config)
    codec = pipeline.codec
    const = pipeline.const

    rng = frame_rng(sim_config.master_seed, 0, 0)
    bits = rng.integers(0, 2, sim_config.codec.frame_size, dtype=np.int8)
    symbols, pad = map_bits(codec.encode(bits).bits(), const)
    sigma2 = pipeline.sigma2(args.ebno)
    llrs = demap(awgn(symbols, sigma2, rng, real_only=const.real_only), const, sigma2)
    llrs = llrs[: llrs.size - pad]

    rows: List[Dict[str, Any]] = []
    trace = _trace_rows(codec, rows) if args.trace else None
    reference = bits if sim_config.codec.stop_rule == "genie" else None
    result = codec.decode(codec.split(llrs), reference=reference, trace=trace)

    errors = int(np.count_nonzero(result.decisions != bits))
    print(f"ebno={args.ebno:g} sigma2={sigma2:.6f} bit_errors={errors}/{bits.size}")
    print(
        f"passes={result.iterations_used} reported_iterations={result.reported_iterations:g} "
        f"converged={result.converged}"
    )
    if args.trace:
        pd.DataFrame(rows).to_csv(args.trace, index=False)
        logger.info(f"Wrote {len(rows)} trace rows to {args.trace}")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace, settings: Settings) -> int:
    sweep = SweepFile(**_sweep_fields(args, settings))
    config = sweep.to_sim_config()
    out = Path(args.out) if args.out else Path(settings.results_dir) / "sweep.csv"

    logger.info(
        f"Sweep {config.modulation} K={config.codec.frame_size} "
        f"profile={config.codec.profile.literal} pattern={config.codec.pattern.literal} "
        f"points={list(config.ebno_points)} workers={config.workers}"
    )
    with SweepRunner(config, progress=not args.quiet) as runner:
        result = runner.run_sweep()
    try:
        write_results(result, out)
    except OSError as e:
        logger.error(f"Cannot write results to {out}: {str(e)}")
        return EXIT_FAILURE

    print(result.to_frame().to_string(index=False))
    if args.strict and result.censored:
        logger.error("Censored points present (--strict)")
        return EXIT_FAILURE
    return EXIT_OK


def cmd_capacity(args: argparse.Namespace, settings: Settings) -> int:
    grid = expand_grid(*args.snr) if isinstance(args.snr, list) else [args.snr]
    print("snr_db,capacity")
    for snr_db in grid:
        print(f"{snr_db:g},{shannon_capacity(snr_db):.6f}")

    if args.sweep_json:
        try:
            with open(args.sweep_json, "r") as f:
                mirror = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ValueError(f"cannot read sweep results {args.sweep_json}: {str(e)}") from None
        order = MODULATION_ORDERS[mirror["config"]["modulation"]]
        print("ebno_db,snr_db,throughput,capacity_gap_db")
        for raw in mirror["points"]:
            point = SimPoint(**raw)
            if point.throughput <= 0:
                continue
            snr_db = ebno_to_snr(point.ebno_db, point.nominal_rate, order)
            gap = capacity_gap(point, point.nominal_rate, order)
            print(f"{point.ebno_db:g},{snr_db:.4f},{point.throughput:.4f},{gap:.4f}")
    return EXIT_OK


def cmd_selftest(args: argparse.Namespace, settings: Settings) -> int:
    results = run_selftest(args.golden)
    failed = [r for r in results if not r.passed]
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        print(f"{mark} {r.name} ({r.seconds:.2f}s){': ' + r.detail if r.detail else ''}")
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_FAILURE if failed else EXIT_OK


def cmd_presets(args: argparse.Namespace, settings: Settings) -> int:
    for name in list_presets():
        preset = get_preset(name)
        print(
            f"{name}: K={preset.frame_size} {preset.modulation} "
            f"profile={preset.profile.literal} pattern={preset.pattern.literal} "
            f"R={preset.nominal_rate:.4f} label={preset.label_rate:.2f}"
        )
    return EXIT_OK


COMMANDS = {
    "rate": cmd_rate,
    "encode": cmd_encode,
    "decode": cmd_decode,
    "sweep": cmd_sweep,
    "capacity": cmd_capacity,
    "selftest": cmd_selftest,
    "presets": cmd_presets,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = create_parser()
    args = parser.parse_args(argv)
    try:
        settings = load_settings()
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    level = (args.log_level or settings.log_level).upper()
    logging.basicConfig(level=getattr(logging, level, logging.INFO), format=DEFAULT_LOG_FORMAT)

    try:
        return COMMANDS[args.command](args, settings)
    except USAGE_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
