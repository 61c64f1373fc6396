"""Image-space attacks for robustness runs.

Geometric attacks (crops, rotation, translation, scaling) reshape or
displace content; noise and filtering attacks perturb intensities.  Each
attack takes one parameter from the command line, documented per entry,
and returns the attacked image or None when nothing of the image
survives (degenerate crops and scales), which downstream becomes a null
record.

Noise draws are seeded from a hash of the attack, its parameter, and the
input pixels, so attacking the same directory twice produces identical
outputs without any global seed plumbing.

Every attack carries the parameter range it was validated on; values
outside it still run but are flagged as extrapolation by the caller.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Callable

import cv2
import numpy as np

from .errors import AttackParameterError


def _parse_float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise AttackParameterError(f"expected a number, got {text!r}") from None


def _parse_fraction(text: str) -> float:
    v = _parse_float(text)
    if not 0.0 <= v <= 1.0:
        raise AttackParameterError(f"fraction must lie in [0, 1], got {v}")
    return v


def _parse_positive(text: str) -> float:
    v = _parse_float(text)
    if v <= 0.0:
        raise AttackParameterError(f"expected a positive number, got {v}")
    return v


def _parse_nonnegative(text: str) -> float:
    v = _parse_float(text)
    if v < 0.0:
        raise AttackParameterError(f"expected a non-negative number, got {v}")
    return v


def _parse_odd_kernel(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise AttackParameterError(f"expected an integer kernel size, got {text!r}") from None
    if v < 3 or v % 2 == 0:
        raise AttackParameterError(f"kernel size must be an odd integer >= 3, got {v}")
    return v


def _parse_offsets(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) == 1:
        v = _parse_float(parts[0])
        return (v, v)
    if len(parts) == 2:
        return (_parse_float(parts[0]), _parse_float(parts[1]))
    raise AttackParameterError(f"expected dx,dy or a single offset, got {text!r}")


def _center_crop(image, fraction):
    h, w = image.shape[:2]
    kh, kw = round(h * (1.0 - fraction)), round(w * (1.0 - fraction))
    if kh < 1 or kw < 1:
        return None
    y0, x0 = (h - kh) // 2, (w - kw) // 2
    return image[y0 : y0 + kh, x0 : x0 + kw].copy()


def _edge_crop(image, fraction):
    # removes the right and bottom margins, unlike the centered variant
    h, w = image.shape[:2]
    kh, kw = round(h * (1.0 - fraction)), round(w * (1.0 - fraction))
    if kh < 1 or kw < 1:
        return None
    return image[:kh, :kw].copy()


def _rotation(image, degrees):
    h, w = image.shape[:2]
    matrix = cv2.getRotationMatrix2D((w / 2.0, h / 2.0), degrees, 1.0)
    return cv2.warpAffine(image, matrix, (w, h))


def _translation(image, offsets):
    dx, dy = offsets
    h, w = image.shape[:2]
    if abs(dx) >= w or abs(dy) >= h:
        return None
    matrix = np.array([[1.0, 0.0, dx], [0.0, 1.0, dy]], dtype=np.float64)
    return cv2.warpAffine(image, matrix, (w, h))


def _scaling(image, factor):
    h, w = image.shape[:2]
    nh, nw = round(h * factor), round(w * factor)
    if nh < 1 or nw < 1:
        return None
    interp = cv2.INTER_AREA if factor < 1.0 else cv2.INTER_LINEAR
    return cv2.resize(image, (nw, nh), interpolation=interp)


def _gaussian_noise(image, variance, rng):
    noise = rng.normal(0.0, np.sqrt(variance), image.shape)
    noisy = image.astype(np.float64) / 255.0 + noise
    return (np.clip(noisy, 0.0, 1.0) * 255.0).round().astype(np.uint8)


def _salt_pepper(image, density, rng):
    out = image.copy()
    mask = rng.random(image.shape[:2])
    out[mask < density / 2.0] = 0
    out[mask > 1.0 - density / 2.0] = 255
    return out


def _speckle(image, variance, rng):
    noise = rng.normal(0.0, np.sqrt(variance), image.shape)
    scaled = image.astype(np.float64) / 255.0
    noisy = scaled + scaled * noise
    return (np.clip(noisy, 0.0, 1.0) * 255.0).round().astype(np.uint8)


def _median_filter(image, kernel):
    return cv2.medianBlur(image, kernel)


def _mean_filter(image, kernel):
    return cv2.blur(image, (kernel, kernel))


def _gaussian_filter(image, kernel):
    return cv2.GaussianBlur(image, (kernel, kernel), 0)


@dataclass(frozen=True)
class AttackSpec:
    """One registered attack: how to parse, apply, and bound its parameter."""

    name: str
    parse: Callable[[str], object]
    apply: Callable
    uses_rng: bool
    validated: tuple[float, float]
    parameter: str

    def magnitude(self, param) -> float:
        if isinstance(param, tuple):
            return max(abs(v) for v in param)
        return abs(float(param))

    def is_extrapolation(self, param) -> bool:
        lo, hi = self.validated
        return not lo <= self.magnitude(param) <= hi


ATTACKS = {
    spec.name: spec
    for spec in (
        AttackSpec("center_crop", _parse_fraction, _center_crop, False, (0.05, 0.20),
                   "fraction of each dimension removed around the border"),
        AttackSpec("edge_crop", _parse_fraction, _edge_crop, False, (0.05, 0.20),
                   "fraction of each dimension removed from right and bottom"),
        AttackSpec("rotation", _parse_float, _rotation, False, (10.0, 50.0),
                   "counterclockwise degrees about the center"),
        AttackSpec("translation", _parse_offsets, _translation, False, (20.0, 80.0),
                   "dx,dy pixel offsets (single value applies to both)"),
        AttackSpec("scaling", _parse_positive, _scaling, False, (3.0, 3.0),
                   "size multiplier for both dimensions"),
        AttackSpec("gaussian_noise", _parse_nonnegative, _gaussian_noise, True, (0.001, 0.001),
                   "noise variance on the [0, 1] intensity scale"),
        AttackSpec("salt_pepper", _parse_fraction, _salt_pepper, True, (0.001, 0.001),
                   "fraction of pixels forced to black or white"),
        AttackSpec("speckle", _parse_nonnegative, _speckle, True, (0.01, 0.01),
                   "multiplicative noise variance"),
        AttackSpec("median_filter", _parse_odd_kernel, _median_filter, False, (3.0, 3.0),
                   "odd kernel size in pixels"),
        AttackSpec("mean_filter", _parse_odd_kernel, _mean_filter, False, (3.0, 3.0),
                   "odd kernel size in pixels"),
        AttackSpec("gaussian_filter", _parse_odd_kernel, _gaussian_filter, False, (3.0, 3.0),
                   "odd kernel size in pixels"),
    )
}


def _rng_for(name: str, param, image: np.ndarray) -> np.random.Generator:
    digest = hashlib.blake2s()
    digest.update(name.encode())
    digest.update(repr(param).encode())
    digest.update(image.tobytes())
    seed = int.from_bytes(digest.digest()[:8], "little")
    return np.random.default_rng(seed)


def apply_attack(spec: AttackSpec, image: np.ndarray, param) -> np.ndarray | None:
    """Run one attack; None means the image did not survive it."""
    if spec.uses_rng:
        return spec.apply(image, param, _rng_for(spec.name, param, image))
    return spec.apply(image, param)
