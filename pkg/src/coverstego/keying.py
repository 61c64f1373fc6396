"""Deterministic keyed randomness.

One fixed-point PRNG drives everything that must be reproducible across
machines: per-receiver sequence keys, factor-keyed scrambling permutations,
synthetic corpora, and seeded image selection.  The generator is SplitMix64,
chosen because a single 64-bit seed fully determines the stream and the
update is cheap enough to vectorize.
"""

from __future__ import annotations

import functools
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import FormatError, KeyLengthError, ValidationError

_M64 = 0xFFFFFFFFFFFFFFFF
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

DEFAULT_KEY_LENGTH = 10000

KEYFILE_MAGIC = b"CSSK"
KEYFILE_VERSION = 1


class EnginePrng:
    """SplitMix64 stream.

    State advances by a fixed odd constant and each output is a bijective
    mix of the new state, so distinct seeds give distinct full-period
    streams.  All engine randomness flows through this class or its
    vectorized equivalents below.
    """

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _M64

    def next(self) -> int:
        self.state = (self.state + _GAMMA) & _M64
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _M64
        z = ((z ^ (z >> 27)) * _MIX2) & _M64
        return z ^ (z >> 31)

    def next_float(self) -> float:
        """Uniform draw in [0, 1) with 53 random bits."""
        return (self.next() >> 11) * (2.0**-53)


def prng_next(engine: EnginePrng) -> int:
    """Advance the engine one step and return its 64-bit output."""
    return engine.next()


def splitmix64_array(seed: int, count: int) -> np.ndarray:
    """First `count` outputs of the seed's stream as a uint64 array.

    Identical to calling EnginePrng(seed).next() `count` times; the state
    after k steps is seed + k * gamma mod 2**64, so the whole stream maps
    to elementwise arithmetic.
    """
    if count < 0:
        raise ValidationError("count must be non-negative")
    steps = np.arange(1, count + 1, dtype=np.uint64)
    z = np.uint64(seed & _M64) + steps * np.uint64(_GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def random_bits(seed: int, count: int) -> np.ndarray:
    """`count` pseudo-random bits as uint8 values in {0, 1}.

    Each 64-bit PRNG output is consumed least significant bit first, so
    the first bit equals output_1 & 1.
    """
    if count < 0:
        raise ValidationError("count must be non-negative")
    words = splitmix64_array(seed, (count + 63) // 64)
    bits = np.unpackbits(words.astype("<u8").view(np.uint8), bitorder="little")
    return bits[:count].copy()


def as_bit_array(bits) -> np.ndarray:
    """Coerce a bit container to a validated uint8 array of 0/1 values."""
    arr = np.asarray(bits)
    if arr.ndim != 1:
        raise ValidationError("bit arrays must be one-dimensional")
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValidationError("bit arrays may contain only 0 and 1")
    return arr.astype(np.uint8)


@dataclass(frozen=True)
class ScramblingFactor:
    """Dense ordinal assigned to one dictionary label."""

    value: int

    def __post_init__(self):
        if not isinstance(self.value, int) or isinstance(self.value, bool):
            raise ValidationError("factor value must be an int")
        if self.value < 0:
            raise ValidationError("factor value must be non-negative")


@dataclass(frozen=True, eq=False)
class SequenceKey:
    """Per-receiver secret bit sequence of length t >= 2.

    receiver_id is None for keys loaded from a key file, which stores only
    the bits.
    """

    bits: np.ndarray
    receiver_id: int | None = None

    def __post_init__(self):
        arr = as_bit_array(self.bits)
        if arr.size < 2:
            raise KeyLengthError("sequence keys need at least 2 bits")
        arr.setflags(write=False)
        object.__setattr__(self, "bits", arr)

    @property
    def t(self) -> int:
        return int(self.bits.size)


@dataclass(frozen=True, eq=False)
class ScrambledSequence:
    """A sequence key permuted under one factor's scrambling."""

    bits: np.ndarray
    factor: ScramblingFactor

    def __post_init__(self):
        arr = as_bit_array(self.bits)
        arr.setflags(write=False)
        object.__setattr__(self, "bits", arr)


def derive_sequence_key(receiver_id: int, t: int = DEFAULT_KEY_LENGTH) -> SequenceKey:
    """Expand a receiver id into its t-bit sequence key.

    The same (receiver_id, t) always yields the same key; different ids
    yield keys that agree only by chance.
    """
    if t < 2:
        raise KeyLengthError(f"key length must be >= 2, got {t}")
    return SequenceKey(bits=random_bits(receiver_id, t), receiver_id=receiver_id)


@functools.lru_cache(maxsize=1024)
def scramble_permutation(factor_value: int, t: int) -> np.ndarray:
    """Permutation applied by `scramble` for one (factor, t) pair.

    Fisher-Yates driven by the factor's PRNG stream: position i from t-1
    down to 1 swaps with j = next_output mod (i + 1).  Returned array maps
    output position -> source position and is cached because it depends
    only on the factor value and t, never on the key bits.
    """
    if t < 2:
        raise KeyLengthError(f"key length must be >= 2, got {t}")
    draws = splitmix64_array(factor_value, t - 1)
    sizes = np.arange(t, 1, -1, dtype=np.uint64)
    js = (draws % sizes).tolist()
    idx = list(range(t))
    i = t - 1
    for j in js:
        idx[i], idx[j] = idx[j], idx[i]
        i -= 1
    perm = np.array(idx, dtype=np.int64)
    perm.setflags(write=False)
    return perm


def scramble(key: SequenceKey, factor: ScramblingFactor) -> ScrambledSequence:
    """Permute the key bits under the factor's keyed shuffle.

    Bijective in both arguments' roles: the multiset of bits is preserved
    and the permutation can be inverted exactly via unscramble_position.
    """
    perm = scramble_permutation(factor.value, key.t)
    return ScrambledSequence(bits=key.bits[perm], factor=factor)


def unscramble_position(scrambled_index: int, factor: ScramblingFactor, t: int) -> int:
    """Map a position in the scrambled sequence back to the key position."""
    if not 0 <= scrambled_index < t:
        raise IndexError(f"position {scrambled_index} out of range for t={t}")
    perm = scramble_permutation(factor.value, t)
    return int(perm[scrambled_index])


def sequence_key_to_bytes(key: SequenceKey) -> bytes:
    """Serialize a key: magic, version, t as u32 LE, bits packed LSB-first."""
    packed = np.packbits(key.bits, bitorder="little").tobytes()
    return KEYFILE_MAGIC + bytes([KEYFILE_VERSION]) + struct.pack("<I", key.t) + packed


def sequence_key_from_bytes(data: bytes) -> SequenceKey:
    """Parse a serialized key, rejecting anything structurally off."""
    if len(data) < 9:
        raise FormatError("key file truncated")
    if data[:4] != KEYFILE_MAGIC:
        raise FormatError("bad key file magic")
    if data[4] != KEYFILE_VERSION:
        raise FormatError(f"unsupported key file version {data[4]}")
    (t,) = struct.unpack("<I", data[5:9])
    if t < 2:
        raise FormatError(f"key length must be >= 2, got {t}")
    body = data[9:]
    expected = (t + 7) // 8
    if len(body) != expected:
        raise FormatError(f"key file holds {len(body)} payload bytes, expected {expected}")
    bits = np.unpackbits(np.frombuffer(body, dtype=np.uint8), bitorder="little")
    if bits[t:].any():
        raise FormatError("key file padding bits must be zero")
    return SequenceKey(bits=bits[:t])
