"""Adapter error taxonomy."""


class AdapterError(Exception):
    """Base class for adapter failures."""


class ModelError(AdapterError):
    """Detector backend could not be constructed or run."""


class AttackParameterError(AdapterError):
    """Attack parameter is malformed or out of its legal domain."""
