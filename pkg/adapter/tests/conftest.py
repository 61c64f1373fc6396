import cv2
import numpy as np
import pytest

# (kind, geometry) per sample image; every shape is solid, bright on a
# dark ground, and large enough that its bbox covers well over 15% of
# the 320x240 canvas
SAMPLE_SHAPES = [
    ("circle", (160, 120, 80)),
    ("square", (90, 50, 140)),
    ("triangle", ((60, 200), (260, 200), (160, 40))),
    ("rectangle", (40, 70, 240, 100)),
    ("circle", (140, 110, 70)),
    ("square", (110, 60, 120)),
    ("triangle", ((40, 210), (240, 190), (150, 50))),
    ("rectangle", (60, 40, 200, 120)),
    ("circle", (170, 130, 75)),
    ("square", (80, 45, 150)),
]

CANVAS = (240, 320)
BACKGROUND = 40
FOREGROUND = 220


def draw_sample(kind, geometry) -> np.ndarray:
    canvas = np.full((*CANVAS, 3), BACKGROUND, np.uint8)
    color = (FOREGROUND, FOREGROUND, FOREGROUND)
    if kind == "circle":
        x, y, r = geometry
        cv2.circle(canvas, (x, y), r, color, -1)
    elif kind == "square":
        x, y, side = geometry
        cv2.rectangle(canvas, (x, y), (x + side, y + side), color, -1)
    elif kind == "rectangle":
        x, y, w, h = geometry
        cv2.rectangle(canvas, (x, y), (x + w, y + h), color, -1)
    elif kind == "triangle":
        cv2.fillPoly(canvas, [np.array(geometry, np.int32)], color)
    else:
        raise ValueError(kind)
    return canvas


def write_samples(directory, shapes=SAMPLE_SHAPES):
    directory.mkdir(parents=True, exist_ok=True)
    for i, (kind, geometry) in enumerate(shapes):
        cv2.imwrite(str(directory / f"img_{i:02d}.png"), draw_sample(kind, geometry))
    return [kind for kind, _ in shapes]


@pytest.fixture()
def sample_dir(tmp_path):
    directory = tmp_path / "images"
    write_samples(directory)
    return directory
