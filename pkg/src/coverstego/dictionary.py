"""Label-to-factor mapping dictionary.

Sender and receiver must agree on which scrambling factor each object
label selects.  The dictionary is built once from a detection corpus:
every label that wins the optimal-object filter for at least one image
gets a dense ordinal factor, assigned in byte-wise lexicographic label
order.  Serialized form is versioned JSON so both sides can pin it.
"""

from __future__ import annotations

import json
import types
from dataclasses import dataclass

from .detection import DEFAULT_THRESHOLDS, FilterThresholds, select_optimal_object
from .errors import EmptyDictionaryError, FormatError, NotInDictionaryError, ValidationError
from .keying import ScramblingFactor

DICTIONARY_VERSION = 1
_ORDERS = ("ascending", "descending")


def _byte_key(label: str) -> bytes:
    return label.encode("utf-8")


@dataclass(frozen=True, eq=False)
class MappingDictionary:
    """Immutable label -> factor table plus the order it was built with."""

    order: str
    entries: types.MappingProxyType

    def __post_init__(self):
        if self.order not in _ORDERS:
            raise ValidationError(f"order must be one of {_ORDERS}, got {self.order!r}")
        table = dict(self.entries)
        if not table:
            raise EmptyDictionaryError("dictionary has no entries")
        values = sorted(table.values())
        if values != list(range(len(table))):
            raise ValidationError("factors must be exactly the dense range 0..n-1")
        for label in table:
            if not isinstance(label, str) or not label:
                raise ValidationError("labels must be non-empty strings")
        object.__setattr__(self, "entries", types.MappingProxyType(table))

    @property
    def factor_count(self) -> int:
        return len(self.entries)

    def labels(self) -> list[str]:
        """All labels in byte-wise lexicographic order."""
        return sorted(self.entries, key=_byte_key)

    def factor_for(self, label: str) -> ScramblingFactor:
        try:
            return ScramblingFactor(self.entries[label])
        except KeyError:
            raise NotInDictionaryError(f"label {label!r} not in dictionary") from None

    def to_json(self, indent: int | None = None) -> str:
        """Serialize with entries sorted by label bytes for stable output."""
        doc = {
            "version": DICTIONARY_VERSION,
            "order": self.order,
            "entries": [[label, self.entries[label]] for label in self.labels()],
        }
        return json.dumps(doc, indent=indent, ensure_ascii=False)

    @classmethod
    def from_json(cls, data: str | bytes) -> "MappingDictionary":
        """Parse and fully validate a serialized dictionary."""
        try:
            doc = json.loads(data)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid dictionary JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise FormatError("dictionary document must be a JSON object")
        if doc.get("version") != DICTIONARY_VERSION:
            raise FormatError(f"unsupported dictionary version {doc.get('version')!r}")
        if doc.get("order") not in _ORDERS:
            raise FormatError(f"bad dictionary order {doc.get('order')!r}")
        raw = doc.get("entries")
        if not isinstance(raw, list) or not raw:
            raise FormatError("entries must be a non-empty array")
        table = {}
        for i, pair in enumerate(raw):
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or not isinstance(pair[0], str)
                or not isinstance(pair[1], int)
                or isinstance(pair[1], bool)
            ):
                raise FormatError(f"entries[{i}] must be a [label, factor] pair")
            label, factor = pair
            if label in table:
                raise FormatError(f"duplicate label {label!r}")
            table[label] = factor
        if sorted(table.values()) != list(range(len(table))):
            raise FormatError("factors must be exactly the dense range 0..n-1")
        return cls(order=doc["order"], entries=table)


def build_dictionary(
    records,
    thresholds: FilterThresholds = DEFAULT_THRESHOLDS,
    order: str = "ascending",
) -> MappingDictionary:
    """Derive the dictionary from a corpus of detection records.

    Labels are the distinct optimal-object labels across the corpus,
    sorted by their UTF-8 bytes.  "ascending" maps the first label to
    factor 0 upward; "descending" maps the first label to factor n-1
    downward.  A corpus where no record passes the filter raises
    EmptyDictionaryError.
    """
    if order not in _ORDERS:
        raise ValidationError(f"order must be one of {_ORDERS}, got {order!r}")
    labels = set()
    for rec in records:
        obj = select_optimal_object(rec, thresholds)
        if obj is not None:
            labels.add(obj.label)
    if not labels:
        raise EmptyDictionaryError("no usable images: no record passed the filter")
    ordered = sorted(labels, key=_byte_key)
    n = len(ordered)
    if order == "ascending":
        table = {label: i for i, label in enumerate(ordered)}
    else:
        table = {label: n - 1 - i for i, label in enumerate(ordered)}
    return MappingDictionary(order=order, entries=table)


def lookup(mapping: MappingDictionary, label: str) -> ScramblingFactor:
    """Factor assigned to a label; NotInDictionaryError when absent."""
    return mapping.factor_for(label)
