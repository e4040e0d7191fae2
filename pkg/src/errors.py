"""Exception types raised by the plane engine.

Every domain violation is a ValueError subclass carrying a stable ``code``
string, so the DSL can turn it into a positioned diagnostic and the CLI can
report it without parsing messages.
"""
from typing import Any, Dict, Optional


class DesarguesError(ValueError):
    """Base class for engine errors."""

    code = "engine-error"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.details = details or {}


class ModelMismatchError(DesarguesError):
    code = "model-mismatch"


class InvalidModelError(DesarguesError):
    code = "invalid-model"


class ZeroInverseError(DesarguesError):
    code = "zero-inverse"


class ScalarSyntaxError(DesarguesError):
    code = "scalar-syntax"


class CoincidentPointsError(DesarguesError):
    code = "coincident-points"


class DegenerateLineError(DesarguesError):
    code = "degenerate-line"


class OffLineError(DesarguesError):
    code = "off-line"


class AuxOnLineError(DesarguesError):
    code = "aux-on-line"


class ZeroPointError(DesarguesError):
    code = "zero-point"


class ZeroDenominatorError(DesarguesError):
    code = "zero-denominator"


class ParameterError(DesarguesError):
    code = "parameter-violation"


class PreconditionError(DesarguesError):
    code = "precondition-violated"


class MalformedConfigError(DesarguesError):
    code = "malformed-config"


class DegenerateSampleError(DesarguesError):
    """Raised by random generators when a draw is unusable; always retried."""

    code = "degenerate-sample"


class GeneratorExhaustedError(DesarguesError):
    code = "generator-exhausted"


class ScopeTooLargeError(DesarguesError):
    code = "scope-too-large"


class ProjectionUndefinedError(DesarguesError):
    code = "projection-undefined"


class DegenerateImageError(DesarguesError):
    code = "degenerate-image"


class NonComposableError(DesarguesError):
    code = "non-composable"


class FigureSpecError(DesarguesError):
    code = "figure-spec"


class NoIntersectionError(DesarguesError):
    code = "no-intersection"


class TypeMismatchError(DesarguesError):
    code = "type-mismatch"


class InvalidNameError(DesarguesError):
    """An emitted artifact name that cannot be used as a file name in the output directory."""

    code = "invalid-name"
