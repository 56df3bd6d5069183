"""Exception hierarchy.

Two families: ``ValidationError`` for bad or inconsistent input data and
``NumericalError`` for failures that arise while computing on valid data.
The CLI maps them to exit codes 1 and 2 respectively.
"""

from __future__ import annotations


class IotaError(Exception):
    """Base class for every error raised by the toolkit."""


class ValidationError(IotaError, ValueError):
    pass


class NumericalError(IotaError, ArithmeticError):
    pass


# -- input / structural -------------------------------------------------------

class ParseError(ValidationError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class DimensionMismatch(ValidationError):
    pass


class NonSquare(ValidationError):
    pass


class NegativeEntry(ValidationError):
    pass


class NegativeFlow(ValidationError):
    pass


class NonPositive(ValidationError):
    def __init__(self, name: str, index: int):
        self.name = name
        self.index = index
        super().__init__(f"{name}[{index}] must be strictly positive")


class ZeroOutput(ValidationError):
    def __init__(self, sector: str | int):
        self.sector = sector
        super().__init__(f"total output of {sector!r} is not positive")


class BalanceViolation(ValidationError):
    def __init__(self, sector: str, gap: float, what: str = "balance"):
        self.sector = sector
        self.gap = gap
        super().__init__(f"{what} violated for {sector!r}: relative gap {gap:.3e}")


class EmptyGroup(ValidationError):
    pass


class ZeroCapital(ValidationError):
    pass


class NotSelfReplacing(ValidationError):
    def __init__(self, commodity: str, gap: float):
        self.commodity = commodity
        self.gap = gap
        super().__init__(f"system is not self-replacing in {commodity!r}: relative gap {gap:.3e}")


class NotInterindustrial(ValidationError):
    def __init__(self, commodity: str, gap: float):
        self.commodity = commodity
        self.gap = gap
        super().__init__(f"Se != q for {commodity!r}: relative gap {gap:.3e}")


class NoLabor(ValidationError):
    pass


class InvalidNumeraire(ValidationError):
    pass


class InfeasibleRate(ValidationError):
    pass


class ReducibleSystem(ValidationError):
    pass


class ReducibleSystemWarning(UserWarning):
    """Price solve on a reducible system; the solution may not be unique."""


# -- numerical ----------------------------------------------------------------

class NonConvergence(NumericalError):
    def __init__(self, iterations: int, residual: float | None = None):
        self.iterations = iterations
        self.residual = residual
        msg = f"no convergence after {iterations} iterations"
        if residual is not None:
            msg += f" (residual {residual:.3e})"
        super().__init__(msg)


class SingularMatrix(NumericalError):
    pass


class NotProductive(NumericalError):
    def __init__(self, lam: float):
        self.lam = lam
        super().__init__(f"Frobenius eigenvalue {lam:.12g} >= 1; economy is not productive")


class SingularSystem(NumericalError):
    pass


class SingularOutputMatrix(NumericalError):
    pass


class SingularNetOutput(NumericalError):
    pass
