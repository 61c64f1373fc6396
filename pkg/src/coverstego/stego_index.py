"""Four-level stego index and the longest-prefix matcher.

Level structure: one sequence key fans out to every dictionary factor,
each factor owns the key's scrambling under that factor, and each
scrambled sequence owns the image ids whose optimal object maps to the
factor.  Hiding then reduces to repeated queries: find the longest prefix
of the remaining message that occurs as a substring of any scrambled
sequence, preferring the lowest factor value and then the smallest start
position on ties.

The matcher indexes every position's 16-bit window as an integer code.
Long queries binary-search a sorted (code, factor, position) array and
extend candidates by vectorized comparison; short queries scan the code
matrix under a bit mask.  Results are exactly those of the naive
quadratic scan, including tie-breaks, just computed in bulk.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np

from .detection import DEFAULT_THRESHOLDS, FilterThresholds, select_optimal_object
from .dictionary import MappingDictionary
from .errors import (
    EmptyIndexError,
    NotInDictionaryError,
    UnknownFactorError,
    ValidationError,
)
from .keying import (
    EnginePrng,
    ScrambledSequence,
    ScramblingFactor,
    SequenceKey,
    as_bit_array,
    scramble,
)

WINDOW = 16

_POW2 = (np.uint64(1) << np.arange(WINDOW, dtype=np.uint64)).astype(np.uint64)


@dataclass(frozen=True, eq=False)
class IndexEntry:
    """One factor's slot: its scrambled sequence and its image pool."""

    factor: ScramblingFactor
    sequence: ScrambledSequence
    images: tuple[str, ...]


@dataclass(frozen=True)
class MatchResult:
    """Where a message prefix was found and how many bits it covered."""

    factor: ScramblingFactor
    start: int
    length: int


def _window_codes(bits: np.ndarray) -> np.ndarray:
    """16-bit window code at every position, low bit first.

    codes[p] packs bits[p : p + 16] with bit i at weight 2**i; windows
    running past the end are zero-padded, which is harmless because only
    positions with a full window enter the long-query search array and
    short queries mask down to bits that exist.
    """
    t = bits.size
    padded = np.zeros(t + WINDOW - 1, dtype=np.uint32)
    padded[:t] = bits
    codes = np.zeros(t, dtype=np.uint32)
    for i in range(WINDOW):
        codes |= padded[i : i + t] << np.uint32(i)
    return codes


class StegoIndex:
    """Immutable search structure over all scrambled sequences.

    Rows are ordered by ascending factor value, so row-major scans meet
    candidates in exactly the tie-break order the matcher must honor.
    """

    __slots__ = ("key", "entries", "_by_factor", "_bits", "_codes", "_search_keys")

    def __init__(self, key: SequenceKey, entries: Sequence[IndexEntry]):
        entries = tuple(sorted(entries, key=lambda e: e.factor.value))
        if not entries:
            raise EmptyIndexError("index needs at least one factor with images")
        if len(entries) > 1 << WINDOW:
            raise ValidationError(f"index supports at most {1 << WINDOW} factors")
        seen = set()
        for e in entries:
            if e.factor.value in seen:
                raise ValidationError(f"duplicate factor {e.factor.value}")
            seen.add(e.factor.value)
            if not e.images:
                raise ValidationError(f"factor {e.factor.value} has no images")
            if e.sequence.bits.size != key.t:
                raise ValidationError("sequence length differs from key length")
        self.key = key
        self.entries = entries
        self._by_factor = {e.factor.value: e for e in entries}
        self._bits = np.vstack([e.sequence.bits for e in entries])
        self._codes = np.vstack([_window_codes(e.sequence.bits) for e in entries])
        self._search_keys = self._build_search_keys()

    def _build_search_keys(self) -> np.ndarray:
        t = self.key.t
        valid = t - WINDOW + 1
        if valid <= 0:
            return np.empty(0, dtype=np.uint64)
        rows = np.arange(len(self.entries), dtype=np.uint64)
        positions = np.arange(valid, dtype=np.uint64)
        keys = (
            (self._codes[:, :valid].astype(np.uint64) << np.uint64(48))
            | (rows[:, None] << np.uint64(32))
            | positions[None, :]
        )
        return np.sort(keys.ravel())

    @property
    def key_length(self) -> int:
        return self.key.t

    @property
    def factor_count(self) -> int:
        return len(self.entries)

    def factors(self) -> list[ScramblingFactor]:
        return [e.factor for e in self.entries]

    def entry_for(self, factor: ScramblingFactor) -> IndexEntry:
        try:
            return self._by_factor[factor.value]
        except KeyError:
            raise UnknownFactorError(f"factor {factor.value} not in index") from None

    def substring_span_count(self) -> int:
        """Number of (start, length) substring descriptors per sequence,
        counted by honest enumeration.  Equals t * (t + 1) / 2."""
        return sum(1 for _ in substring_spans(self.key_length))


def substring_spans(t: int) -> Iterator[tuple[int, int]]:
    """Every (start, length) pair addressing a substring of a t-bit sequence."""
    for length in range(1, t + 1):
        for start in range(t - length + 1):
            yield (start, length)


def assemble_index(
    key: SequenceKey,
    images_by_factor: Mapping[int, Sequence[str]],
) -> StegoIndex:
    """Build an index from an explicit factor -> image ids mapping."""
    entries = []
    for value in sorted(images_by_factor):
        factor = ScramblingFactor(value)
        entries.append(
            IndexEntry(
                factor=factor,
                sequence=scramble(key, factor),
                images=tuple(images_by_factor[value]),
            )
        )
    return StegoIndex(key, entries)


def build_index(
    records,
    mapping: MappingDictionary,
    key: SequenceKey,
    thresholds: FilterThresholds = DEFAULT_THRESHOLDS,
) -> StegoIndex:
    """Group a corpus by factor and assemble the index.

    Records with no qualifying object, or whose optimal label is missing
    from the dictionary, are skipped.  An index with zero usable images
    raises EmptyIndexError.
    """
    groups: dict[int, list[str]] = {}
    for rec in records:
        obj = select_optimal_object(rec, thresholds)
        if obj is None:
            continue
        try:
            factor = mapping.factor_for(obj.label)
        except NotInDictionaryError:
            continue
        groups.setdefault(factor.value, []).append(rec.image_id)
    if not groups:
        raise EmptyIndexError("index needs at least one factor with images")
    return assemble_index(key, groups)


def _prefix_code(msg: np.ndarray, n: int) -> int:
    return int(msg[:n].astype(np.uint64) @ _POW2[:n])


def _match_length(seq_row: np.ndarray, pos: int, msg: np.ndarray, start_n: int, limit: int) -> int:
    """Extend a verified start_n-bit match to its exact length, capped at limit."""
    n = start_n
    chunk = 64
    while n < limit:
        step = min(chunk, limit - n)
        diff = seq_row[pos + n : pos + n + step] != msg[n : n + step]
        if diff.any():
            return n + int(diff.argmax())
        n += step
        chunk *= 2
    return limit


def longest_match(index: StegoIndex, message, n_max: int) -> MatchResult | None:
    """Longest prefix of `message` occurring in any scrambled sequence.

    Considers match lengths 1..n_max only; n_max must not exceed the key
    length or the message length.  Ties on length resolve to the lowest
    factor value, then the smallest start position.  Returns None when
    not even the first bit occurs anywhere, which for a two-valued
    alphabet means every sequence is constant with the opposite bit.
    """
    msg = as_bit_array(message)
    if msg.size == 0:
        raise ValidationError("message must be non-empty")
    if not 1 <= n_max <= min(index.key_length, msg.size):
        raise ValidationError(
            f"n_max must lie in [1, min(t, message bits)], got {n_max}"
        )
    t = index.key_length

    if n_max >= WINDOW and index._search_keys.size:
        val = _prefix_code(msg, WINDOW)
        keys = index._search_keys
        lo = int(np.searchsorted(keys, np.uint64(val) << np.uint64(48), side="left"))
        if val == (1 << WINDOW) - 1:
            hi = keys.size
        else:
            hi = int(np.searchsorted(keys, np.uint64(val + 1) << np.uint64(48), side="left"))
        if hi > lo:
            cands = keys[lo:hi]
            rows = ((cands >> np.uint64(32)) & np.uint64(0xFFFF)).tolist()
            positions = (cands & np.uint64(0xFFFFFFFF)).tolist()
            best_len = 0
            best_row = best_pos = -1
            for row, pos in zip(rows, positions):
                length = _match_length(
                    index._bits[row], pos, msg, WINDOW, min(n_max, t - pos)
                )
                if length > best_len:
                    best_len, best_row, best_pos = length, row, pos
                    if best_len == n_max:
                        break
            entry = index.entries[best_row]
            return MatchResult(factor=entry.factor, start=best_pos, length=best_len)

    for n in range(min(n_max, WINDOW - 1), 0, -1):
        width = t - n + 1
        mask = np.uint32((1 << n) - 1)
        val = np.uint32(_prefix_code(msg, n))
        hits = (index._codes[:, :width] & mask) == val
        flat = int(hits.argmax())
        row, pos = divmod(flat, width)
        if hits[row, pos]:
            entry = index.entries[row]
            return MatchResult(factor=entry.factor, start=pos, length=n)
    return None


def pick_image(index: StegoIndex, factor: ScramblingFactor, selector_seed: int | None = None) -> str:
    """Choose one image id from the factor's pool.

    With a selector_seed the choice is a deterministic function of the
    seed and the pool; without one it falls back to the process RNG.
    """
    entry = index.entry_for(factor)
    if selector_seed is None:
        return random.choice(entry.images)
    return entry.images[EnginePrng(selector_seed).next() % len(entry.images)]
