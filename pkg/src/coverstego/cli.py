"""Command line front end.

Subcommands cover the full lifecycle: build-dict derives the shared
label mapping from a detection corpus, keygen emits a receiver key file,
hide turns a secret file into a stego manifest plus sealed position
keys, extract reverses it on the receiver side, and bench runs the
capacity and robustness sweeps.

The receiver's detections file for extract lists one record per
transmitted image, in manifest order, with null entries standing in for
images that never arrived.

Exit codes: 0 success, 2 malformed or inconsistent input, 3 algorithmic
failure (nothing to hide or nothing usable to hide with), 4 failed
authentication of sealed keys.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from pathlib import Path

from .detection import FilterThresholds, parse_detection_file
from .dictionary import MappingDictionary, build_dictionary
from .errors import (
    AuthenticationError,
    EmptyDictionaryError,
    EmptyIndexError,
    EmptyMessageError,
    FormatError,
    FramingError,
    KeyLengthError,
    ParseError,
    ProtocolError,
    StegoError,
    UnknownFactorError,
    UnmatchableBitError,
    ValidationError,
)
from .evalsuite import (
    AttackModel,
    PipelineConfig,
    capacity_sweep,
    robustness_to_csv,
    run_robustness,
    sweep_to_csv,
)
from .extractor import bits_to_text, extract
from .hider import SecretMessage, hide
from .keying import (
    DEFAULT_KEY_LENGTH,
    derive_sequence_key,
    sequence_key_from_bytes,
    sequence_key_to_bytes,
)
from .stego_index import build_index
from .transport import open_keys, seal_keys

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_ALGORITHM = 3
EXIT_AUTH = 4

_INPUT_ERRORS = (
    ParseError,
    ValidationError,
    FormatError,
    FramingError,
    KeyLengthError,
    EmptyDictionaryError,
    ProtocolError,
)
_ALGORITHM_ERRORS = (
    EmptyMessageError,
    UnmatchableBitError,
    EmptyIndexError,
    UnknownFactorError,
)


def _thresholds(args) -> FilterThresholds:
    return FilterThresholds(
        min_area_fraction=args.min_area,
        min_confidence=args.min_conf,
    )


def _add_threshold_flags(parser):
    parser.add_argument(
        "--min-area",
        type=float,
        default=0.15,
        help="minimum object area as a fraction of the image, exclusive (default 0.15)",
    )
    parser.add_argument(
        "--min-conf",
        type=float,
        default=0.5,
        help="minimum detector confidence, exclusive (default 0.5)",
    )


def _add_key_flags(parser):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument(
        "--receiver-id",
        type=lambda v: int(v, 0),
        help="derive the sequence key from this receiver id",
    )
    group.add_argument("--key-file", type=Path, help="sequence key file from keygen (override)")
    parser.add_argument(
        "--key-length",
        type=int,
        default=DEFAULT_KEY_LENGTH,
        help=f"key length in bits when deriving from --receiver-id (default {DEFAULT_KEY_LENGTH})",
    )


def _load_key(args):
    if args.key_file is not None:
        return sequence_key_from_bytes(args.key_file.read_bytes())
    return derive_sequence_key(args.receiver_id, args.key_length)


def _read_psk(path: Path) -> bytes:
    secret = path.read_bytes()
    if len(secret) != 32:
        raise ValidationError(f"psk file must hold exactly 32 bytes, got {len(secret)}")
    return secret


def _load_records(path: Path, allow_missing: bool = False):
    return parse_detection_file(path.read_text(encoding="utf-8"), allow_missing=allow_missing)


def _int_list(value: str) -> list[int]:
    return [int(v) for v in value.split(",") if v.strip()]


def _float_list(value: str) -> list[float]:
    return [float(v) for v in value.split(",") if v.strip()]


def cmd_build_dict(args) -> int:
    records = _load_records(args.detections)
    mapping = build_dictionary(records, _thresholds(args), order=args.order)
    args.out.write_text(mapping.to_json(indent=2) + "\n", encoding="utf-8")
    print(f"dictionary: {mapping.factor_count} labels -> {args.out}")
    return EXIT_OK


def cmd_keygen(args) -> int:
    key = derive_sequence_key(args.receiver_id, args.key_length)
    args.out.write_bytes(sequence_key_to_bytes(key))
    print(f"key: receiver {args.receiver_id}, {key.t} bits -> {args.out}")
    return EXIT_OK


def cmd_hide(args) -> int:
    secret = _read_psk(args.psk)
    message = SecretMessage.from_bytes(args.message.read_bytes())
    if message.bit_length == 0:
        raise EmptyMessageError("empty message: input file has no bytes")
    records = _load_records(args.detections)
    mapping = MappingDictionary.from_json(args.dict.read_text(encoding="utf-8"))
    key = _load_key(args)
    index = build_index(records, mapping, key, _thresholds(args))
    result = hide(message, index, selector_seed=args.seed)
    manifest = {"images": list(result.stego_images)}
    args.out_manifest.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    args.out_keyfile.write_bytes(seal_keys(result.position_keys, secret))
    print(
        f"hidden: {message.bit_length} bits in {result.segment_count} images "
        f"({message.bit_length / result.segment_count:.2f} bits/image)"
    )
    return EXIT_OK


def cmd_extract(args) -> int:
    secret = _read_psk(args.psk)
    position_keys = open_keys(args.keyfile.read_bytes(), secret)
    stego_records = _load_records(args.detections, allow_missing=True)
    mapping = MappingDictionary.from_json(args.dict.read_text(encoding="utf-8"))
    key = _load_key(args)
    report = extract(stego_records, position_keys, mapping, key, _thresholds(args))
    if report.bits.size % 8 == 0:
        args.out.write_bytes(bits_to_text(report.bits))
        form = f"{report.bits.size // 8} bytes"
    else:
        args.out.write_text("".join(str(b) for b in report.bits), encoding="utf-8")
        form = f"{report.bits.size} raw bits (not byte-aligned)"
    print(
        f"extracted: {form} from {len(position_keys)} segments, padded_bits={report.padded_bits}"
    )
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.mode == "capacity":
        cells = capacity_sweep(
            t_values=args.t_grid,
            factor_counts=args.factor_grid,
            trials=args.trials,
            seed=args.seed,
            message_bits=args.message_bits,
        )
        csv = sweep_to_csv(cells)
    else:
        config = PipelineConfig(
            image_count=args.images,
            label_count=args.labels,
            key_length=args.key_length,
            message_bits=args.message_bits,
        )
        rows = []
        for drop, decay, flip in itertools.product(
            args.drop_prob, args.conf_decay, args.flip_prob
        ):
            model = AttackModel(
                drop_probability=drop,
                confidence_decay=decay,
                label_flip_probability=flip,
            )
            rows.append((model, run_robustness(config, model, args.trials, args.seed)))
        csv = robustness_to_csv(rows)
    if args.out is None:
        sys.stdout.write(csv)
    else:
        args.out.write_text(csv, encoding="utf-8")
        print(f"wrote {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coverstego",
        description="Coverless image steganography over detection records.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-dict", help="derive the label-to-factor dictionary")
    p.add_argument("--detections", type=Path, required=True)
    p.add_argument("--order", choices=("ascending", "descending"), default="ascending")
    _add_threshold_flags(p)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_build_dict)

    p = sub.add_parser("keygen", help="derive and store a receiver sequence key")
    p.add_argument("--receiver-id", type=lambda v: int(v, 0), required=True)
    p.add_argument("--key-length", type=int, default=DEFAULT_KEY_LENGTH)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("hide", help="hide a secret file in a corpus")
    p.add_argument("--message", type=Path, required=True, help="file whose bytes to hide")
    p.add_argument("--detections", type=Path, required=True)
    p.add_argument("--dict", type=Path, required=True)
    _add_key_flags(p)
    p.add_argument("--psk", type=Path, required=True, help="32-byte pre-shared secret file")
    p.add_argument(
        "--seed", type=lambda v: int(v, 0), default=None, help="deterministic image selection"
    )
    _add_threshold_flags(p)
    p.add_argument("--out-manifest", type=Path, required=True)
    p.add_argument("--out-keyfile", type=Path, required=True)
    p.set_defaults(func=cmd_hide)

    p = sub.add_parser("extract", help="recover a secret file from received images")
    p.add_argument(
        "--detections",
        type=Path,
        required=True,
        help="receiver-side detections, one record per segment in manifest order, null for lost images",
    )
    p.add_argument("--dict", type=Path, required=True)
    _add_key_flags(p)
    p.add_argument("--psk", type=Path, required=True, help="32-byte pre-shared secret file")
    p.add_argument("--keyfile", type=Path, required=True, help="sealed position keys")
    _add_threshold_flags(p)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("bench", help="capacity and robustness sweeps")
    p.add_argument("--mode", choices=("capacity", "robustness"), required=True)
    p.add_argument("--trials", type=int, default=30)
    p.add_argument("--seed", type=lambda v: int(v, 0), default=0)
    p.add_argument("--message-bits", type=int, default=10000)
    p.add_argument("--t-grid", type=_int_list, default=[100, 1000, 10000])
    p.add_argument("--factor-grid", type=_int_list, default=[34, 50])
    p.add_argument("--drop-prob", type=_float_list, default=[0.0])
    p.add_argument("--conf-decay", type=_float_list, default=[0.0])
    p.add_argument("--flip-prob", type=_float_list, default=[0.0])
    p.add_argument("--images", type=int, default=200)
    p.add_argument("--labels", type=int, default=50)
    p.add_argument("--key-length", type=int, default=DEFAULT_KEY_LENGTH)
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AuthenticationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_AUTH
    except _ALGORITHM_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ALGORITHM
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except StegoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
