"""Detection interchange records and their JSON form.

This mirrors the consumer's wire format without importing it: the JSON
file is the contract between the two packages.  Null entries stand for
images lost to an attack, keeping positional alignment with the clean
file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


@dataclass(frozen=True)
class ObjectDetection:
    """One detected object: label, confidence, pixel bbox (x, y, w, h)."""

    label: str
    confidence: float
    bbox: tuple[float, float, float, float]


@dataclass(frozen=True)
class ImageRecord:
    """All detections for one image plus its dimensions."""

    image_id: str
    width: int
    height: int
    objects: tuple[ObjectDetection, ...]


def _number(v: float):
    # keep integral values as ints so files are stable and compact
    f = float(v)
    return int(f) if f.is_integer() else f


def records_to_json(records, indent: int = 2) -> str:
    """Render records (None entries allowed) as an interchange file."""
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
                        "label": obj.label,
                        "confidence": float(obj.confidence),
                        "bbox": [_number(v) for v in obj.bbox],
                    }
                    for obj in rec.objects
                ],
            }
        )
    return json.dumps({"images": images}, indent=indent, sort_keys=True) + "\n"
