"""Command-line interface: detect, eval, synth and dump subcommands.

Exit codes: detect returns 0 for positive polarity and 1 for negative;
all other successful commands return 0; any error returns >= 2.
"""
from __future__ import annotations

import argparse
import logging
import sys

from .errors import PolarityError
from .harness import (
    detect_file,
    dump_diagnostics,
    eval_corpus,
    format_report_text,
    report_json_lines,
)
from .moments import MomentSpec
from .ompd import OMPDConfig
from .synth import make_eval_corpus

EXIT_POSITIVE = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2


def _add_detector_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--method", choices=("ompd", "pc", "rps"), default="ompd",
        help="detector to run (default ompd)",
    )
    parser.add_argument(
        "--p1", type=int, default=1,
        help="statistical order of the polarity-independent moment (default 1)",
    )
    parser.add_argument(
        "--p2", type=int, default=2,
        help="non-linearity order of the polarity-independent moment (default 2)",
    )
    parser.add_argument("--shift-low", type=float, default=-0.12,
                        help="lower bound of the positive decision interval")
    parser.add_argument("--shift-high", type=float, default=0.38,
                        help="upper bound of the positive decision interval")
    parser.add_argument("--hop-ms", type=float, default=10.0,
                        help="frame hop in milliseconds (default 10)")
    parser.add_argument("--f0-min", type=float, default=50.0)
    parser.add_argument("--f0-max", type=float, default=500.0)


def _config_from(args) -> OMPDConfig:
    return OMPDConfig(
        shift_low=args.shift_low,
        shift_high=args.shift_high,
        hop_s=args.hop_ms / 1000.0,
        f0_min=args.f0_min,
        f0_max=args.f0_max,
        even_spec=MomentSpec(args.p1, args.p2),
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ompolarity", description="Speech polarity detection toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="detect the polarity of one WAV file")
    p.add_argument("wav")
    _add_detector_flags(p)
    p.add_argument("--format", choices=("text", "json-lines"), default="text")

    p = sub.add_parser("eval", help="evaluate a labeled corpus manifest")
    p.add_argument("manifest")
    _add_detector_flags(p)
    p.add_argument("--format", choices=("text", "json-lines"), default="text")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--strict", action="store_true",
                   help="fail on the first unreadable file instead of counting KO")

    p = sub.add_parser("synth", help="generate a labeled synthetic corpus")
    p.add_argument("out_dir")
    p.add_argument("--n-files", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--duration-s", type=float, default=1.0)
    p.add_argument("--sample-rate", type=int, default=16000)
    p.add_argument("--jitter-pct", type=float, default=1.0)

    p = sub.add_parser("dump", help="write moment and phase-shift diagnostics")
    p.add_argument("wav")
    p.add_argument("out_dir")
    _add_detector_flags(p)
    p.add_argument(
        "--orders", default="",
        help="extra moment orders as p1:p2 pairs, e.g. 2:1,3:1,4:1",
    )
    return parser


def _run(args) -> int:
    if args.command == "detect":
        outcome = detect_file(args.wav, args.method, _config_from(args))
        if args.format == "json-lines":
            import json

            print(json.dumps(outcome, sort_keys=True))
        else:
            print(
                f"{outcome['path']}: {outcome['label']} "
                f"(confidence {outcome['confidence']:.3f}, "
                f"{outcome['n_frames']} frames)"
            )
        return EXIT_POSITIVE if outcome["label"] == "positive" else EXIT_NEGATIVE

    if args.command == "eval":
        report = eval_corpus(
            args.manifest, args.method, _config_from(args), args.jobs, args.strict
        )
        if args.format == "json-lines":
            print(report_json_lines(report))
        else:
            print(format_report_text(report))
        return 0

    if args.command == "synth":
        manifest = make_eval_corpus(
            args.n_files,
            args.seed,
            args.out_dir,
            duration_s=args.duration_s,
            sample_rate_hz=args.sample_rate,
            jitter_pct=args.jitter_pct,
        )
        print(manifest)
        return 0

    if args.command == "dump":
        orders = tuple(
            tuple(int(x) for x in pair.split(":"))
            for pair in args.orders.split(",")
            if pair
        )
        paths = dump_diagnostics(args.wav, args.out_dir, _config_from(args), orders)
        print(paths["moments"])
        print(paths["shifts"])
        return 0

    raise AssertionError(f"unhandled command {args.command}")


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except (PolarityError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
