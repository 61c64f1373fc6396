"""Coverless image steganography over object-detection records.

A message is never embedded in pixels.  The sender picks ordinary images
whose dominant detected object selects a scrambling of the receiver's
secret bit sequence, and transmits only (start, length) position keys
that address message segments as substrings of those scramblings.  The
receiver, holding the same sequence key and label dictionary, re-runs
detection and reads the segments back out.
"""

from .detection import (
    DEFAULT_THRESHOLDS,
    DetectedObject,
    DetectionRecord,
    FilterThresholds,
    parse_detection_file,
    select_optimal_object,
    serialize_detection_file,
    synthetic_detector,
)
from .dictionary import MappingDictionary, build_dictionary, lookup
from .errors import (
    AuthenticationError,
    EmptyDictionaryError,
    EmptyIndexError,
    EmptyMessageError,
    FormatError,
    FramingError,
    KeyLengthError,
    NotInDictionaryError,
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
    RobustnessResult,
    RobustnessSummary,
    SweepCell,
    capacity_sweep,
    factor_complete_corpus,
    perturb,
    recovery_rate,
    robustness_to_csv,
    run_robustness,
    sweep_to_csv,
)
from .extractor import ExtractionReport, bits_to_text, extract, text_to_bits
from .hider import CapacityEstimate, HideResult, SecretMessage, estimate_capacity, hide
from .keying import (
    DEFAULT_KEY_LENGTH,
    EnginePrng,
    ScrambledSequence,
    ScramblingFactor,
    SequenceKey,
    derive_sequence_key,
    prng_next,
    random_bits,
    scramble,
    scramble_permutation,
    sequence_key_from_bytes,
    sequence_key_to_bytes,
    splitmix64_array,
    unscramble_position,
)
from .stego_index import (
    IndexEntry,
    MatchResult,
    StegoIndex,
    assemble_index,
    build_index,
    longest_match,
    pick_image,
    substring_spans,
)
from .transport import open_keys, seal_keys

__version__ = "0.1.0"

__all__ = [
    "AttackModel",
    "AuthenticationError",
    "CapacityEstimate",
    "DEFAULT_KEY_LENGTH",
    "DEFAULT_THRESHOLDS",
    "DetectedObject",
    "DetectionRecord",
    "EmptyDictionaryError",
    "EmptyIndexError",
    "EmptyMessageError",
    "EnginePrng",
    "ExtractionReport",
    "FilterThresholds",
    "FormatError",
    "FramingError",
    "HideResult",
    "IndexEntry",
    "KeyLengthError",
    "MappingDictionary",
    "MatchResult",
    "NotInDictionaryError",
    "ParseError",
    "PipelineConfig",
    "ProtocolError",
    "RobustnessResult",
    "RobustnessSummary",
    "ScrambledSequence",
    "ScramblingFactor",
    "SecretMessage",
    "SequenceKey",
    "StegoError",
    "StegoIndex",
    "SweepCell",
    "UnknownFactorError",
    "UnmatchableBitError",
    "ValidationError",
    "assemble_index",
    "bits_to_text",
    "build_dictionary",
    "build_index",
    "capacity_sweep",
    "derive_sequence_key",
    "estimate_capacity",
    "extract",
    "factor_complete_corpus",
    "hide",
    "longest_match",
    "lookup",
    "open_keys",
    "parse_detection_file",
    "perturb",
    "pick_image",
    "prng_next",
    "random_bits",
    "recovery_rate",
    "robustness_to_csv",
    "run_robustness",
    "scramble",
    "scramble_permutation",
    "seal_keys",
    "select_optimal_object",
    "sequence_key_from_bytes",
    "sequence_key_to_bytes",
    "serialize_detection_file",
    "splitmix64_array",
    "substring_spans",
    "sweep_to_csv",
    "synthetic_detector",
    "text_to_bits",
    "unscramble_position",
]
