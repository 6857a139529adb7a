"""Custom exceptions shared by all mixot packages."""

from __future__ import annotations

from typing import Optional


class MixotError(Exception):
    """Base error carrying a stable machine-readable code."""

    def __init__(self, code: str, message: str | None = None) -> None:
        super().__init__(message or code)
        self.code = code

    def to_dict(self) -> dict:
        return {'ok': False, 'error': self.code, 'message': str(self)}


class InvalidInputError(MixotError):
    """Raised for malformed numbers, shapes or weights."""


class SingularSourceError(InvalidInputError):
    """Raised when an affine map needs an invertible source scatter."""


class FamilyMismatchError(MixotError):
    """Raised when two atoms or mixtures live in different families."""


class ConvergenceError(MixotError):
    """Raised when an iterative scheme stops before reaching its tolerance."""

    def __init__(
        self,
        code: str,
        message: str | None = None,
        residual: Optional[float] = None,
        iterations: Optional[int] = None,
    ) -> None:
        super().__init__(code, message)
        self.residual = residual
        self.iterations = iterations

    def to_dict(self) -> dict:
        payload = super().to_dict()
        payload['residual'] = self.residual
        payload['iterations'] = self.iterations
        return payload


class CapacityError(MixotError):
    """Raised when a dense problem would exceed the configured size guard."""


class UnsupportedError(MixotError):
    """Raised for operations a family, group or dimension does not support."""


class EmptySupportError(MixotError):
    """Raised when a rasterized density has no mass on the grid."""


class InvalidGridError(MixotError):
    """Raised for inconsistent grids."""


class DegenerateDeterminantError(MixotError):
    """Raised when a Slater determinant density vanishes identically."""


class SchemaError(MixotError):
    """Raised when a mixture spec document fails validation."""

    def __init__(
        self,
        code: str,
        message: str | None = None,
        field: Optional[str] = None,
        line: Optional[int] = None,
    ) -> None:
        details = message or code
        if field:
            details = f'{field}: {details}'
        if line is not None:
            details = f'line {line}: {details}'
        super().__init__(code, details)
        self.field = field
        self.line = line

    def to_dict(self) -> dict:
        payload = super().to_dict()
        payload['field'] = self.field
        payload['line'] = self.line
        return payload


class OracleViolationError(MixotError):
    """Raised when the grid oracle contradicts the closed-form mixture value."""


class ValidationFailedError(MixotError):
    """Raised when at least one invariant suite check fails."""


__all__ = [
    'CapacityError',
    'ConvergenceError',
    'DegenerateDeterminantError',
    'EmptySupportError',
    'FamilyMismatchError',
    'InvalidGridError',
    'InvalidInputError',
    'MixotError',
    'OracleViolationError',
    'SchemaError',
    'SingularSourceError',
    'UnsupportedError',
    'ValidationFailedError',
]
