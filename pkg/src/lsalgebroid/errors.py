"""Exception hierarchy.

Every error raised by the library derives from :class:`AlgebroidError`, so the
CLI can map the whole family onto exit code 2 in one place.
"""


class AlgebroidError(Exception):
    pass


class DivisionByZero(AlgebroidError, ZeroDivisionError):
    pass


class UnknownVariable(AlgebroidError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class ParseError(AlgebroidError, ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class DegreeOverflow(AlgebroidError, ArithmeticError):
    pass


class ShapeMismatch(AlgebroidError, ValueError):
    pass


class DegreeError(AlgebroidError, ValueError):
    pass


class InvalidStructure(AlgebroidError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotAlternating(AlgebroidError, ValueError):
    pass


class Degenerate(AlgebroidError, ValueError):
    pass


class NotCocycle(AlgebroidError):
    pass


class SEquationFailed(AlgebroidError):
    def __init__(self, message, witness=None, value=None):
        super().__init__(message)
        self.witness = witness
        self.value = value


class RankDeficient(AlgebroidError):
    pass


class NotFlat(InvalidStructure):
    pass


class NotTorsionFree(InvalidStructure):
    pass


class NotHessian(InvalidStructure):
    pass


class SchemaError(AlgebroidError):
    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer
