"""Exception hierarchy for the engine.

Every error raised on purpose derives from :class:`EngineError`, so callers
(and the CLI) can separate contract violations from genuine bugs.
"""


class EngineError(Exception):
    """Base class for all deliberate engine errors."""


# coefficient ring
class IllegalExponent(EngineError):
    pass


class IllegalCoefficient(EngineError):
    pass


class ConfigMismatch(EngineError):
    pass


class NotHomogeneous(EngineError):
    pass


class ZeroElement(EngineError):
    pass


class NotDivisible(EngineError):
    pass


# graded modules
class BasisMismatch(EngineError):
    pass


class LevelMismatch(EngineError):
    """Two maps were composed across non-consecutive action levels."""


class NotInvertible(EngineError):
    pass


class DegreeViolation(EngineError):
    pass


# products and Seidel maps
class NotGenerated(EngineError):
    pass


class NonIntegralWeight(EngineError):
    pass


# solver
class SolverError(EngineError):
    def __init__(self, message, residual=(), level=None):
        super().__init__(message)
        self.residual = list(residual)
        self.level = level


class Stuck(SolverError):
    pass


class Inconsistent(SolverError):
    pass


# limits
class VerificationFailed(EngineError):
    pass


class RouteMismatch(EngineError):
    pass


# Floer complex
class TruncationTooSmall(EngineError):
    pass


class UnexpectedFactor(EngineError):
    pass


# catalog
class UnknownSpace(EngineError):
    pass


class BadParam(EngineError):
    pass


class SpecSyntaxError(EngineError):
    def __init__(self, message, line=None, column=None, expected=()):
        where = f"{line}:{column}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
        self.column = column
        self.expected = tuple(expected)


class SemanticError(EngineError):
    def __init__(self, message, line=None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
