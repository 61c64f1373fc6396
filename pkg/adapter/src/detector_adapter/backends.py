"""Detector backends.

Two producers of ObjectDetection lists from a BGR image:

ShapeBackend is the default.  It is a deterministic classical-CV
detector for solid geometric shapes (threshold, contours, polygon
approximation), so the full pipeline runs and re-runs byte-identically
with no model weights at all.  Its label set is small but that is all
the downstream mapping needs.

YoloBackend wraps a pretrained YOLO checkpoint through the ultralytics
package when that is installed and a weights file is at hand.  Detection
quality and label set then depend entirely on the chosen checkpoint, so
results are environment-specific; nothing downstream assumes a
particular model.
"""

from __future__ import annotations

import math

import cv2
import numpy as np

from .errors import ModelError
from .interchange import ObjectDetection

SHAPE_LABELS = ("circle", "polygon", "rectangle", "square", "triangle")


class ShapeBackend:
    """Deterministic contour-based detector for solid shapes.

    Confidence is the contour's solidity (area over convex hull area),
    a pure function of the pixels, so identical inputs always produce
    identical records.
    """

    def __init__(self, confidence_floor: float = 0.0, min_area_fraction: float = 0.005):
        if not 0.0 <= confidence_floor <= 1.0:
            raise ModelError("confidence floor must lie in [0, 1]")
        if not 0.0 < min_area_fraction < 1.0:
            raise ModelError("min area fraction must lie in (0, 1)")
        self.confidence_floor = confidence_floor
        self.min_area_fraction = min_area_fraction

    def detect(self, image: np.ndarray) -> list[ObjectDetection]:
        height, width = image.shape[:2]
        gray = cv2.cvtColor(image, cv2.COLOR_BGR2GRAY)
        blurred = cv2.GaussianBlur(gray, (5, 5), 0)
        _, binary = cv2.threshold(blurred, 0, 255, cv2.THRESH_BINARY + cv2.THRESH_OTSU)
        # shapes must be the bright phase; flip if background dominates
        if np.count_nonzero(binary) > binary.size // 2:
            binary = cv2.bitwise_not(binary)
        contours, _ = cv2.findContours(binary, cv2.RETR_EXTERNAL, cv2.CHAIN_APPROX_SIMPLE)
        detections = []
        for contour in contours:
            area = cv2.contourArea(contour)
            if area < self.min_area_fraction * width * height:
                continue
            perimeter = cv2.arcLength(contour, True)
            if perimeter <= 0:
                continue
            hull = cv2.convexHull(contour)
            hull_area = cv2.contourArea(hull)
            solidity = float(area / hull_area) if hull_area > 0 else 0.0
            confidence = round(min(0.99, solidity), 6)
            if confidence < self.confidence_floor:
                continue
            x, y, w, h = cv2.boundingRect(contour)
            label = self._classify(contour, area, perimeter)
            detections.append(
                ObjectDetection(label=label, confidence=confidence, bbox=(x, y, w, h))
            )
        return detections

    @staticmethod
    def _classify(contour, area: float, perimeter: float) -> str:
        approx = cv2.approxPolyDP(contour, 0.03 * perimeter, True)
        vertices = len(approx)
        if vertices == 3:
            return "triangle"
        if vertices == 4:
            # minAreaRect sides are rotation-invariant
            (_, (w, h), _) = cv2.minAreaRect(contour)
            if min(w, h) > 0 and min(w, h) / max(w, h) >= 0.92:
                return "square"
            return "rectangle"
        circularity = 4.0 * math.pi * area / (perimeter * perimeter)
        if circularity > 0.84:
            return "circle"
        return "polygon"


class YoloBackend:
    """Pretrained YOLO checkpoint behind the ultralytics runtime.

    Boxes and confidences pass through unmodified; only the confidence
    floor is forwarded to the model.  Requires the ultralytics package
    and a local weights file.
    """

    def __init__(self, weights: str, confidence_floor: float = 0.25):
        try:
            from ultralytics import YOLO
        except ImportError as exc:
            raise ModelError(
                "ultralytics is not installed; install it to use YOLO weights "
                "or keep the default builtin:shape backend"
            ) from exc
        try:
            self._model = YOLO(weights)
        except Exception as exc:
            raise ModelError(f"could not load YOLO weights {weights!r}: {exc}") from exc
        self.confidence_floor = confidence_floor

    def detect(self, image: np.ndarray) -> list[ObjectDetection]:
        result = self._model.predict(
            image, conf=self.confidence_floor, verbose=False
        )[0]
        names = result.names
        detections = []
        for box in result.boxes:
            x1, y1, x2, y2 = (float(v) for v in box.xyxy[0])
            detections.append(
                ObjectDetection(
                    label=str(names[int(box.cls[0])]),
                    confidence=float(box.conf[0]),
                    bbox=(x1, y1, x2 - x1, y2 - y1),
                )
            )
        return detections


BUILTIN_SHAPE = "builtin:shape"


def resolve_backend(model: str, confidence_floor: float):
    """Map a model identifier to a backend instance.

    "builtin:shape" selects the deterministic shape detector; any other
    value is treated as a path to YOLO weights.
    """
    if model == BUILTIN_SHAPE:
        return ShapeBackend(confidence_floor=confidence_floor)
    return YoloBackend(model, confidence_floor=confidence_floor)
