"""Greedy hiding: cover a message with substring matches, emit images and keys.

Each round matches the longest possible prefix of the remaining message
against the index, records the (start, length) position key of the match
inside the winning factor's scrambled sequence, and selects one image
from that factor's pool to transmit.  The images carry the information;
no pixel is ever touched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyMessageError, UnmatchableBitError, ValidationError
from .keying import EnginePrng, ScramblingFactor, as_bit_array, random_bits
from .stego_index import StegoIndex, longest_match, pick_image


@dataclass(frozen=True, eq=False)
class SecretMessage:
    """Bit payload to hide.  byte_length is set when built from bytes."""

    bits: np.ndarray
    byte_length: int | None = None

    def __post_init__(self):
        arr = as_bit_array(self.bits)
        arr.setflags(write=False)
        object.__setattr__(self, "bits", arr)
        if self.byte_length is not None and self.byte_length * 8 != arr.size:
            raise ValidationError("byte_length inconsistent with bit count")

    @classmethod
    def from_bytes(cls, data: bytes) -> "SecretMessage":
        bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))
        return cls(bits=bits, byte_length=len(data))

    @classmethod
    def from_bits(cls, bits) -> "SecretMessage":
        return cls(bits=as_bit_array(bits))

    @property
    def bit_length(self) -> int:
        return int(self.bits.size)


@dataclass(frozen=True, eq=False)
class HideResult:
    """Everything the sender produces for one message.

    stego_images[i] is the image that encodes segment i, position_keys[i]
    its (start, length) inside the corresponding scrambled sequence, and
    segments[i] the same with the factor attached for diagnostics.  The
    three tuples always have equal length.
    """

    stego_images: tuple[str, ...]
    position_keys: tuple[tuple[int, int], ...]
    segments: tuple[tuple[ScramblingFactor, int, int], ...]

    @property
    def segment_count(self) -> int:
        return len(self.position_keys)


def hide(message: SecretMessage, index: StegoIndex, selector_seed: int | None = None) -> HideResult:
    """Cover the whole message greedily, left to right.

    Every segment takes the longest available match, so segment lengths
    are maximal at each step; total covered bits always equal the message
    length.  A message bit that appears in no sequence at all (possible
    only when every scrambled sequence is constant) raises
    UnmatchableBitError.  With a selector_seed the image choices are
    deterministic; each segment draws its own sub-seed from the seed's
    PRNG stream so pools of different sizes stay independently uniform.
    """
    bits = message.bits
    if bits.size == 0:
        raise EmptyMessageError("empty message: nothing to hide")
    picker = EnginePrng(selector_seed) if selector_seed is not None else None
    t = index.key_length
    images: list[str] = []
    keys: list[tuple[int, int]] = []
    segments: list[tuple[ScramblingFactor, int, int]] = []
    pos = 0
    total = int(bits.size)
    while pos < total:
        n_max = min(t, total - pos)
        found = longest_match(index, bits[pos : pos + n_max], n_max)
        if found is None:
            raise UnmatchableBitError(
                f"bit value {int(bits[pos])} at offset {pos} occurs in no sequence"
            )
        keys.append((found.start, found.length))
        segments.append((found.factor, found.start, found.length))
        images.append(
            pick_image(index, found.factor, picker.next() if picker else None)
        )
        pos += found.length
    return HideResult(
        stego_images=tuple(images),
        position_keys=tuple(keys),
        segments=tuple(segments),
    )


@dataclass(frozen=True)
class CapacityEstimate:
    """Mean and sample spread of bits carried per image."""

    mean_bits_per_image: float
    stddev: float
    trials: int


def estimate_capacity(
    index: StegoIndex,
    trials: int,
    message_bits: int,
    seed: int,
) -> CapacityEstimate:
    """Hide `trials` random messages and average bits per image.

    Each trial hides a fresh message_bits-bit message drawn from the
    seed's PRNG stream; the per-trial statistic is message_bits divided
    by the number of images used.  stddev is the sample standard
    deviation across trials (0.0 for a single trial).
    """
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    if message_bits < 1:
        raise ValidationError("message_bits must be >= 1")
    engine = EnginePrng(seed)
    ratios = []
    for _ in range(trials):
        msg_seed = engine.next()
        pick_seed = engine.next()
        msg = SecretMessage.from_bits(random_bits(msg_seed, message_bits))
        result = hide(msg, index, selector_seed=pick_seed)
        ratios.append(message_bits / result.segment_count)
    mean = sum(ratios) / trials
    if trials > 1:
        var = sum((r - mean) ** 2 for r in ratios) / (trials - 1)
        stddev = math.sqrt(var)
    else:
        stddev = 0.0
    return CapacityEstimate(mean_bits_per_image=mean, stddev=stddev, trials=trials)
