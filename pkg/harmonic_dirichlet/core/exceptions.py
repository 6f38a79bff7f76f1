from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass
class HarmonicDirichletError(Exception):
    """Base exception for every error raised by the library."""

    message: str | None = None

    def __str__(self) -> str:
        return self.message or self.__class__.__name__


@dataclass
class DomainError(HarmonicDirichletError):
    """Exception raised when an argument lies outside the domain of an operation."""

    value: Any = None
    constraint: str = ""
    base_message: str = "Argument outside domain"

    def __str__(self) -> str:
        if self.message:
            return self.message

        return f"{self.base_message}: {self.value!r} violates {self.constraint}"


@dataclass
class InvalidMeasureError(HarmonicDirichletError):
    """Exception raised for measures violating positivity or finiteness."""

    reason: str = ""

    def __str__(self) -> str:
        return self.message or f"Invalid circle measure: {self.reason}"


@dataclass
class InvalidFunctionError(HarmonicDirichletError):
    """Exception raised when an expression node cannot be certified holomorphic on the disc."""

    reason: str = ""

    def __str__(self) -> str:
        return self.message or f"Invalid analytic function: {self.reason}"


@dataclass
class InvalidSamplesError(HarmonicDirichletError):
    """Exception raised for unusable boundary log-modulus samples"""

    reason: str = ""

    def __str__(self) -> str:
        return self.message or f"Invalid log-modulus samples: {self.reason}"


@dataclass
class InvalidQuadratureSpecError(HarmonicDirichletError):
    """Exception raised when a quadrature specification field is out of range."""

    field_name: str = ""
    value: Any = None

    def __str__(self) -> str:
        if self.message:
            return self.message

        return f"Invalid quadrature spec: {self.field_name}={self.value!r}"


@dataclass
class NonFiniteSampleError(HarmonicDirichletError):
    """Exception raised when an integrand returns a non-finite value."""

    location: complex | float | None = None
    base_message: str = "Integrand is not finite at"

    def __str__(self) -> str:
        if self.message:
            return self.message

        return f"{self.base_message} {self.location!r}"


@dataclass
class NotOuterError(HarmonicDirichletError):
    """Exception raised when an operation requiring an outer function receives something else."""

    reason: str = ""

    def __str__(self) -> str:
        return self.message or f"Function is not outer: {self.reason}"


@dataclass
class DivergenceError(HarmonicDirichletError):
    """Exception raised when a radial extrapolation r -> 1 does not stabilise."""

    quantity: str = ""
    radius: float | None = None

    def __str__(self) -> str:
        if self.message:
            return self.message

        return f"{self.quantity} does not stabilise as r -> 1 (last radius {self.radius!r})"


@dataclass
class ValidationError(HarmonicDirichletError):
    """Exception raised when a computed table fails its own consistency check."""

    quantity: str = ""
    detail: str = ""

    def __str__(self) -> str:
        return self.message or f"Validation of {self.quantity} failed: {self.detail}"


@dataclass
class ProblemFileError(HarmonicDirichletError):
    """Exception raised for malformed problem, spec or function JSON, with a pointer to the offending field."""

    pointer: str = ""
    reason: str = ""

    def __str__(self) -> str:
        if self.message:
            return self.message

        return f"{self.pointer or '/'}: {self.reason}"


@dataclass
class SweepError(HarmonicDirichletError):
    """Exception raised when a check of a verification sweep fails unexpectedly"""

    case: str = ""
    cause: Exception | None = None

    def __str__(self) -> str:
        if self.message:
            return self.message

        if self.cause:
            cause_msg = str(self.cause)
            if cause_msg:
                return f'Check "{self.case}" failed => {cause_msg}'

            return f'Check "{self.case}" failed due to: {self.cause.__class__.__name__}'

        return f'Check "{self.case}" failed'
