"""
Typed exceptions raised across qcmm.
"""

from typing import Dict, Optional


class QcmmError(Exception):
    """Base class for all qcmm errors."""


class InvalidState(QcmmError, ValueError):
    """A matrix fails the Hermitian / unit-trace preconditions of an operation."""


class NotHermitian(InvalidState):
    """A matrix handed to the Hermitian eigensolver is not Hermitian."""

    def __init__(self, residual: float, tol: float):
        self.residual = residual
        self.tol = tol
        super().__init__(f"matrix is not Hermitian: residual {residual:.3e} > tol {tol:.1e}")


class NonPositive(InvalidState):
    """Composition produced a matrix with a negative eigenvalue."""

    def __init__(self, min_eigenvalue: float, tol: float):
        self.min_eigenvalue = min_eigenvalue
        self.tol = tol
        super().__init__(
            f"parameters do not describe a state: min eigenvalue "
            f"{min_eigenvalue:.6g} < -{tol:.1e}"
        )


class NotD7Class(QcmmError, ValueError):
    """Off-pattern Fano entries exceed the projection tolerance."""

    def __init__(self, offending: Dict[str, float], tol: float):
        self.offending = dict(offending)
        self.tol = tol
        listing = ", ".join(f"{k}={v:.3e}" for k, v in self.offending.items())
        super().__init__(f"state is not in the D-7 class (tol {tol:.1e}): {listing}")


class DomainError(QcmmError, ValueError):
    """A parameter lies outside the declared domain."""


class DegenerateClock(QcmmError, ArithmeticError):
    """The pseudo-time coordinate of a branch is stationary; velocity undefined."""

    def __init__(self, branch: int, transposed: bool, rate: float):
        self.branch = branch
        self.transposed = transposed
        self.rate = rate
        kind = "transposed " if transposed else ""
        super().__init__(
            f"{kind}branch {branch}: clock rate {rate:.3e} is stationary"
        )


class MalformedTable(QcmmError, ValueError):
    """A tabulated model violates the table invariants."""


class StateParseError(QcmmError, ValueError):
    """A JSON state document could not be parsed."""

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(f"field '{field}'")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)


class ConfigError(QcmmError, ValueError):
    """A command-line run configuration is inconsistent."""
