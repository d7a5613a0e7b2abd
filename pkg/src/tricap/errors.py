"""Exception hierarchy.

Every error carries a short upper-case ``code`` so the command line can
report failures as a single machine-parsable line.
"""


class TricapError(Exception):
    code = "ERROR"


class InvalidParameter(TricapError, ValueError):
    code = "INVALID_PARAMETER"

    def __init__(self, field, message=None):
        self.field = field
        super().__init__(message or field)


class TotalSpreading(InvalidParameter):
    code = "TOTAL_SPREADING"

    def __init__(self, sigmas):
        self.sigmas = tuple(sigmas)
        bad = [f"sigma{i + 1}={s:g}" for i, s in enumerate(sigmas) if s <= 0]
        super().__init__("spreading", "non-positive spreading coefficient: " + ", ".join(bad))


class LinearSolveFailure(TricapError, RuntimeError):
    code = "LINEAR_SOLVE_FAILURE"


class PoissonSolveFailure(LinearSolveFailure):
    code = "POISSON_SOLVE_FAILURE"


class CflViolation(TricapError, RuntimeError):
    code = "CFL_VIOLATION"


class Inverted(TricapError, RuntimeError):
    code = "INVERTED_ELEMENT"


class InvariantBreach(TricapError, RuntimeError):
    code = "INVARIANT_BREACH"


class ParseError(TricapError, ValueError):
    code = "PARSE_ERROR"

    def __init__(self, message, line=None, key=None):
        self.line = line
        self.key = key
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownKey(ParseError):
    code = "UNKNOWN_KEY"


class ContourNotFound(TricapError, RuntimeError):
    code = "CONTOUR_NOT_FOUND"


class IoFailure(TricapError, OSError):
    code = "IO_FAILURE"
