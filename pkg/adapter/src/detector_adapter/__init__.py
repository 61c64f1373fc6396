"""Real-image front end for the coverless steganography pipeline.

Produces detection interchange files from image directories and applies
image-space attacks for robustness runs.  All steganographic logic lives
in the consumer; this package only detects and perturbs.
"""

from .attacks import ATTACKS, AttackSpec, apply_attack
from .backends import BUILTIN_SHAPE, SHAPE_LABELS, ShapeBackend, YoloBackend, resolve_backend
from .errors import AdapterError, AttackParameterError, ModelError
from .interchange import ImageRecord, ObjectDetection, records_to_json
from .runner import AdapterConfig, attack_directory, detect_directory

__version__ = "0.1.0"

__all__ = [
    "ATTACKS",
    "AdapterConfig",
    "AdapterError",
    "AttackParameterError",
    "AttackSpec",
    "BUILTIN_SHAPE",
    "ImageRecord",
    "ModelError",
    "ObjectDetection",
    "SHAPE_LABELS",
    "ShapeBackend",
    "YoloBackend",
    "apply_attack",
    "attack_directory",
    "detect_directory",
    "records_to_json",
    "resolve_backend",
]
