"""
BraneGauge Errors

Exception hierarchy shared by the core modules and the CLI.
"""

from dataclasses import dataclass, field


class BraneGaugeError(Exception):
    """Base class for every error raised by branegauge."""


class DimensionMismatchError(BraneGaugeError):
    """Matrix or Hom-element shapes do not fit the complexes involved."""


class InvalidComplexError(BraneGaugeError):
    """A complex violates d∘d = 0 or its degree bookkeeping."""


class InvalidChainMapError(BraneGaugeError):
    """A chain map does not commute with the differentials."""


class IncompatibleConnectionError(BraneGaugeError):
    """A connection family (or chain map) is not compatible with the differentials."""


class NonFlatConnectionError(BraneGaugeError):
    """A connection family has nonzero curvature where flatness is required."""


class MetricError(BraneGaugeError):
    """A Hermitian metric is not Hermitian positive-definite, or weights are inconsistent."""


class QuadratureError(BraneGaugeError):
    """Numerical integration failed its resolution check."""


class DegreeBoundError(BraneGaugeError):
    """A stationarity equation exceeds polynomial degree 3."""


class BezoutBoundError(BraneGaugeError):
    """An isolated critical-point count exceeds the Bézout ceiling."""


class SchemaError(BraneGaugeError):
    """An input file does not match the schema of its declared model."""


@dataclass
class ValidationReport:
    """
    Result of a report-style check.

    Report-style operations never raise; they collect problems here.
    """
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.errors

    def extend(self, other: "ValidationReport") -> None:
        self.errors.extend(other.errors)
        self.warnings.extend(other.warnings)

    def to_dict(self) -> dict:
        return {"valid": self.valid, "errors": list(self.errors), "warnings": list(self.warnings)}
