"""Object detection records and the optimal-object filter.

The engine never looks at pixels.  Everything it knows about an image
arrives as a detection record: the image's size plus a list of labeled,
scored boxes.  This module defines those value types, the JSON interchange
they travel in, the filter that picks each image's single representative
object, and a synthetic detector for corpus generation in tests and
benchmarks.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import ParseError, ValidationError
from .keying import EnginePrng


@dataclass(frozen=True)
class FilterThresholds:
    """Cutoffs for the optimal-object filter.

    An object qualifies only when its box covers strictly more than
    min_area_fraction of the image and its confidence is strictly above
    min_confidence.
    """

    min_area_fraction: float = 0.15
    min_confidence: float = 0.5

    def __post_init__(self):
        if not (0.0 < self.min_area_fraction < 1.0):
            raise ValidationError("min_area_fraction must lie in (0, 1)")
        if not (0.0 <= self.min_confidence < 1.0):
            raise ValidationError("min_confidence must lie in [0, 1)")


DEFAULT_THRESHOLDS = FilterThresholds()


@dataclass(frozen=True)
class DetectedObject:
    """One detector hit: label, confidence in [0, 1], box as (x, y, w, h)."""

    label: str
    confidence: float
    bbox: tuple[float, float, float, float]

    def __post_init__(self):
        if not isinstance(self.label, str) or not self.label:
            raise ValidationError("label must be a non-empty string")
        conf = float(self.confidence)
        if math.isnan(conf) or not (0.0 <= conf <= 1.0):
            raise ValidationError(f"confidence {self.confidence!r} outside [0, 1]")
        if len(self.bbox) != 4:
            raise ValidationError("bbox must have exactly 4 entries")
        x, y, w, h = (float(v) for v in self.bbox)
        if w <= 0 or h <= 0:
            raise ValidationError("bbox width and height must be positive")
        if x < 0 or y < 0:
            raise ValidationError("bbox origin must be non-negative")
        object.__setattr__(self, "confidence", conf)
        object.__setattr__(self, "bbox", (x, y, w, h))

    @property
    def area(self) -> float:
        return self.bbox[2] * self.bbox[3]


@dataclass(frozen=True)
class DetectionRecord:
    """All detections for one image."""

    image_id: str
    width: int
    height: int
    objects: tuple[DetectedObject, ...]

    def __post_init__(self):
        if not isinstance(self.image_id, str) or not self.image_id:
            raise ValidationError("image_id must be a non-empty string")
        if self.width <= 0 or self.height <= 0:
            raise ValidationError("image dimensions must be positive")
        object.__setattr__(self, "objects", tuple(self.objects))
        for obj in self.objects:
            x, y, w, h = obj.bbox
            if x + w > self.width or y + h > self.height:
                raise ValidationError(
                    f"bbox {obj.bbox} exceeds image bounds {self.width}x{self.height}"
                )

    def area_fraction(self, obj: DetectedObject) -> float:
        """Fraction of the image this object's box covers."""
        return obj.area / (self.width * self.height)


def select_optimal_object(
    record: DetectionRecord,
    thresholds: FilterThresholds = DEFAULT_THRESHOLDS,
) -> DetectedObject | None:
    """Pick the image's single representative object, or None.

    Qualification is strict on both thresholds.  Among qualifiers the
    winner has the highest confidence; confidence ties go to the larger
    box area, and remaining ties to the earliest list position, so the
    choice is total and deterministic.
    """
    best = None
    best_rank = None
    for pos, obj in enumerate(record.objects):
        if record.area_fraction(obj) <= thresholds.min_area_fraction:
            continue
        if obj.confidence <= thresholds.min_confidence:
            continue
        rank = (obj.confidence, obj.area, -pos)
        if best_rank is None or rank > best_rank:
            best, best_rank = obj, rank
    return best


def _parse_object(raw, where: str) -> DetectedObject:
    if not isinstance(raw, dict):
        raise ParseError(f"{where}: object entry must be a JSON object")
    for key in ("label", "confidence", "bbox"):
        if key not in raw:
            raise ParseError(f"{where}: missing field {key!r}")
    if not isinstance(raw["bbox"], (list, tuple)):
        raise ParseError(f"{where}: bbox must be an array")
    if not isinstance(raw["confidence"], (int, float)) or isinstance(raw["confidence"], bool):
        raise ParseError(f"{where}: confidence must be a number")
    for v in raw["bbox"]:
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise ParseError(f"{where}: bbox entries must be numbers")
    return DetectedObject(
        label=raw["label"],
        confidence=float(raw["confidence"]),
        bbox=tuple(raw["bbox"]),
    )


def _parse_record(raw, where: str) -> DetectionRecord:
    if not isinstance(raw, dict):
        raise ParseError(f"{where}: image entry must be a JSON object")
    for key in ("image_id", "width", "height", "objects"):
        if key not in raw:
            raise ParseError(f"{where}: missing field {key!r}")
    if not isinstance(raw["objects"], list):
        raise ParseError(f"{where}: objects must be an array")
    for key in ("width", "height"):
        if not isinstance(raw[key], int) or isinstance(raw[key], bool):
            raise ParseError(f"{where}: {key} must be an integer")
    objects = tuple(
        _parse_object(o, f"{where}.objects[{i}]") for i, o in enumerate(raw["objects"])
    )
    return DetectionRecord(
        image_id=raw["image_id"],
        width=raw["width"],
        height=raw["height"],
        objects=objects,
    )


def parse_detection_file(data: str | bytes, allow_missing: bool = False):
    """Parse interchange JSON into a list of DetectionRecord.

    The document is an object with an "images" array.  When allow_missing
    is true a null image entry is preserved as None in the result, which
    extraction uses to represent a record lost in transit; otherwise null
    entries are rejected.

    Syntax and shape problems raise ParseError; entries that parse but
    violate value invariants raise ValidationError.  Both name the
    offending entry.
    """
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "images" not in doc:
        raise ParseError('top level must be an object with an "images" array')
    if not isinstance(doc["images"], list):
        raise ParseError('"images" must be an array')
    records = []
    for i, raw in enumerate(doc["images"]):
        where = f"images[{i}]"
        if raw is None:
            if allow_missing:
                records.append(None)
                continue
            raise ParseError(f"{where}: null image entry")
        try:
            records.append(_parse_record(raw, where))
        except ValidationError as exc:
            raise ValidationError(f"{where}: {exc}") from exc
    return records


def serialize_detection_file(records, indent: int | None = None) -> str:
    """Render records (None allowed for lost entries) back to interchange JSON."""
    images = []
    for rec in records:
        if rec is None:
            images.append(None)
            continue
        images.append(
            {
                "image_id": rec.image_id,
                "width": rec.width,
                "height": rec.height,
                "objects": [
                    {
                        "label": o.label,
                        "confidence": o.confidence,
                        "bbox": [int(v) if v.is_integer() else v for v in o.bbox],
                    }
                    for o in rec.objects
                ],
            }
        )
    return json.dumps({"images": images}, indent=indent)


def synthetic_detector(seed: int, image_count: int, label_pool) -> list[DetectionRecord]:
    """Generate a deterministic corpus of detection records.

    Each image gets one object guaranteed to pass the default thresholds
    (confidence above 0.55, box covering at least a fifth of the image)
    plus up to three weaker decoys.  Labels come from label_pool via the
    engine PRNG, so the same (seed, image_count, label_pool) always gives
    byte-identical output.
    """
    pool = list(label_pool)
    if image_count < 0:
        raise ValidationError("image_count must be non-negative")
    if image_count and not pool:
        raise ValidationError("label_pool must be non-empty")
    engine = EnginePrng(seed)
    records = []
    for i in range(image_count):
        width = 320 + engine.next() % 961
        height = 240 + engine.next() % 721

        def make_box(frac: float) -> tuple[int, int, int, int]:
            side = math.sqrt(frac)
            bw = max(1, int(width * side))
            bh = max(1, int(height * side))
            x = engine.next() % (width - bw + 1)
            y = engine.next() % (height - bh + 1)
            return (x, y, bw, bh)

        primary = DetectedObject(
            label=pool[engine.next() % len(pool)],
            confidence=0.55 + engine.next_float() * 0.45,
            bbox=make_box(0.2 + engine.next_float() * 0.45),
        )
        objects = [primary]
        for _ in range(engine.next() % 4):
            objects.append(
                DetectedObject(
                    label=pool[engine.next() % len(pool)],
                    confidence=engine.next_float() * 0.85,
                    bbox=make_box(engine.next_float() ** 2 * 0.3 + 0.0005),
                )
            )
        records.append(
            DetectionRecord(
                image_id=f"synth_{i:05d}",
                width=width,
                height=height,
                objects=tuple(objects),
            )
        )
    return records
