"""Receiver side: rebuild the message from images, position keys, and the key.

For every received image the receiver re-runs detection filtering, maps
the optimal label to its factor, re-scrambles its own sequence key under
that factor, and reads the segment bits at the transmitted (start,
length).  Any segment whose image is missing or no longer resolves to a
dictionary factor is zero-padded so downstream framing stays aligned.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .detection import DEFAULT_THRESHOLDS, FilterThresholds, select_optimal_object
from .dictionary import MappingDictionary
from .errors import FramingError, NotInDictionaryError, ProtocolError
from .keying import SequenceKey, as_bit_array, scramble

SEGMENT_RECOVERED = "recovered"
SEGMENT_PADDED = "padded"


@dataclass(frozen=True, eq=False)
class ExtractionReport:
    """Recovered bitstream plus which segments had to be padded."""

    bits: np.ndarray
    segment_status: tuple[str, ...]
    padded_bits: int

    def __post_init__(self):
        arr = as_bit_array(self.bits)
        arr.setflags(write=False)
        object.__setattr__(self, "bits", arr)

    @property
    def segments_lost(self) -> int:
        return sum(1 for s in self.segment_status if s == SEGMENT_PADDED)


def extract(
    stego_records,
    position_keys,
    mapping: MappingDictionary,
    key: SequenceKey,
    thresholds: FilterThresholds = DEFAULT_THRESHOLDS,
) -> ExtractionReport:
    """Reassemble the message bits in transmission order.

    stego_records holds one DetectionRecord per segment, or None where
    the image never arrived; it must align one-to-one with position_keys.
    Each position key must address a real substring of a t-bit sequence.
    Segments that cannot be resolved are replaced by zeros of the keyed
    length rather than dropped, preserving every other segment's offset.
    """
    records = list(stego_records)
    keys = [tuple(k) for k in position_keys]
    if len(records) != len(keys):
        raise ProtocolError(
            f"{len(records)} records but {len(keys)} position keys"
        )
    t = key.t
    for i, (start, length) in enumerate(keys):
        if length < 1 or start < 0 or start + length > t:
            raise ProtocolError(
                f"position key {i} ({start}, {length}) does not address a substring of a {t}-bit sequence"
            )
    scrambled_cache: dict[int, np.ndarray] = {}
    parts: list[np.ndarray] = []
    status: list[str] = []
    padded = 0
    for rec, (start, length) in zip(records, keys):
        factor = None
        if rec is not None:
            obj = select_optimal_object(rec, thresholds)
            if obj is not None:
                try:
                    factor = mapping.factor_for(obj.label)
                except NotInDictionaryError:
                    factor = None
        if factor is None:
            parts.append(np.zeros(length, dtype=np.uint8))
            status.append(SEGMENT_PADDED)
            padded += length
            continue
        bits = scrambled_cache.get(factor.value)
        if bits is None:
            bits = scramble(key, factor).bits
            scrambled_cache[factor.value] = bits
        parts.append(bits[start : start + length])
        status.append(SEGMENT_RECOVERED)
    joined = np.concatenate(parts) if parts else np.zeros(0, dtype=np.uint8)
    return ExtractionReport(
        bits=joined,
        segment_status=tuple(status),
        padded_bits=padded,
    )


def text_to_bits(data: bytes) -> np.ndarray:
    """Bytes to bits, most significant bit of each byte first."""
    return np.unpackbits(np.frombuffer(data, dtype=np.uint8))


def bits_to_text(bits) -> bytes:
    """Bits back to bytes; the length must be a multiple of 8."""
    arr = as_bit_array(bits)
    if arr.size % 8:
        raise FramingError(f"{arr.size} bits is not a whole number of bytes")
    return np.packbits(arr).tobytes()
