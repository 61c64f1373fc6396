"""Directory-level detect and attack pipelines.

detect_directory turns a directory of images into interchange records,
one per readable image, sorted by filename for stable output.  Unreadable
files are skipped with a warning instead of failing the batch.

attack_directory applies one named attack to every image the clean pass
would have processed, re-runs detection on the attacked pixels, and
keeps the output aligned with the clean file: same order, same
image_ids, null entries where the attack destroyed the image.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import cv2

from .attacks import ATTACKS, AttackSpec, apply_attack
from .backends import BUILTIN_SHAPE, resolve_backend
from .errors import AttackParameterError
from .interchange import ImageRecord

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg", ".bmp", ".webp", ".tif", ".tiff")


@dataclass(frozen=True)
class AdapterConfig:
    """One batch: where the images are, which detector, which attack."""

    images_dir: Path
    model: str = BUILTIN_SHAPE
    confidence_floor: float = 0.0
    attack: str | None = None
    param: str | None = None

    def attack_spec(self) -> AttackSpec:
        if self.attack is None:
            raise AttackParameterError("no attack configured")
        try:
            return ATTACKS[self.attack]
        except KeyError:
            known = ", ".join(sorted(ATTACKS))
            raise AttackParameterError(
                f"unknown attack {self.attack!r}; known attacks: {known}"
            ) from None

    def parsed_param(self):
        spec = self.attack_spec()
        if self.param is None:
            raise AttackParameterError(f"attack {spec.name!r} needs --param ({spec.parameter})")
        return spec.parse(self.param)

    @property
    def is_extrapolation(self) -> bool:
        """True when the parameter falls outside the attack's validated range."""
        spec = self.attack_spec()
        return spec.is_extrapolation(self.parsed_param())


def _image_files(images_dir: Path) -> list[Path]:
    if not images_dir.is_dir():
        raise NotADirectoryError(f"not a directory: {images_dir}")
    return sorted(
        p for p in images_dir.iterdir()
        if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES
    )


def detect_directory(config: AdapterConfig):
    """Detect every readable image; returns (records, warnings)."""
    backend = resolve_backend(config.model, config.confidence_floor)
    records = []
    warnings = []
    for path in _image_files(config.images_dir):
        image = cv2.imread(str(path))
        if image is None:
            warnings.append(f"skipping unreadable image {path.stem}")
            continue
        records.append(
            ImageRecord(
                image_id=path.stem,
                width=image.shape[1],
                height=image.shape[0],
                objects=tuple(backend.detect(image)),
            )
        )
    return records, warnings


def attack_directory(config: AdapterConfig, out_images_dir: Path):
    """Attack every readable image, re-detect, write surviving images.

    Returns (records, warnings) where records has exactly one entry per
    clean-pass record, in the same order: an ImageRecord with the
    original image_id when the attacked image still exists, None when
    the attack destroyed it.
    """
    spec = config.attack_spec()
    param = config.parsed_param()
    backend = resolve_backend(config.model, config.confidence_floor)
    out_images_dir.mkdir(parents=True, exist_ok=True)
    records = []
    warnings = []
    for path in _image_files(config.images_dir):
        image = cv2.imread(str(path))
        if image is None:
            warnings.append(f"skipping unreadable image {path.stem}")
            continue
        attacked = apply_attack(spec, image, param)
        if attacked is None:
            records.append(None)
            continue
        out_path = out_images_dir / f"{path.stem}.png"
        cv2.imwrite(str(out_path), attacked)
        records.append(
            ImageRecord(
                image_id=path.stem,
                width=attacked.shape[1],
                height=attacked.shape[0],
                objects=tuple(backend.detect(attacked)),
            )
        )
    return records, warnings
