"""Command line front end: detect and attack subcommands.

Both emit the detection interchange format; attack also writes the
attacked images.  Exit codes: 0 success, 2 usage or input problems.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .attacks import ATTACKS
from .backends import BUILTIN_SHAPE
from .errors import AdapterError
from .interchange import records_to_json
from .runner import AdapterConfig, attack_directory, detect_directory

EXIT_OK = 0
EXIT_INPUT = 2


def _warn_all(warnings):
    for line in warnings:
        print(f"warning: {line}", file=sys.stderr)


def cmd_detect(args) -> int:
    config = AdapterConfig(
        images_dir=args.images,
        model=args.model,
        confidence_floor=args.min_conf,
    )
    records, warnings = detect_directory(config)
    _warn_all(warnings)
    args.out.write_text(records_to_json(records), encoding="utf-8")
    print(f"detected: {len(records)} images -> {args.out}")
    return EXIT_OK


def cmd_attack(args) -> int:
    config = AdapterConfig(
        images_dir=args.images,
        model=args.model,
        confidence_floor=args.min_conf,
        attack=args.attack,
        param=args.param,
    )
    if config.is_extrapolation:
        spec = config.attack_spec()
        lo, hi = spec.validated
        print(
            f"note: {spec.name} parameter {args.param} is outside the validated "
            f"range [{lo}, {hi}]; treating this run as extrapolation",
            file=sys.stderr,
        )
    records, warnings = attack_directory(config, args.out_images)
    _warn_all(warnings)
    args.out.write_text(records_to_json(records), encoding="utf-8")
    lost = sum(1 for rec in records if rec is None)
    print(
        f"attacked: {args.attack}({args.param}) on {len(records)} images, "
        f"{lost} lost -> {args.out}"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="detector-adapter",
        description="Detect objects in image directories and apply robustness attacks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="emit a detection interchange file for a directory")
    p.add_argument("--images", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument(
        "--model",
        default=BUILTIN_SHAPE,
        help=f"'{BUILTIN_SHAPE}' or a path to YOLO weights (default {BUILTIN_SHAPE})",
    )
    p.add_argument("--min-conf", type=float, default=0.0, help="confidence floor for the detector")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("attack", help="attack a directory and re-detect")
    p.add_argument("--images", type=Path, required=True)
    p.add_argument("--attack", choices=sorted(ATTACKS), required=True)
    p.add_argument("--param", required=True, help="attack parameter; see each attack's docs")
    p.add_argument("--out-images", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--model", default=BUILTIN_SHAPE)
    p.add_argument("--min-conf", type=float, default=0.0)
    p.set_defaults(func=cmd_attack)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AdapterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
