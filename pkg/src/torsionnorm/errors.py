"""Exception hierarchy shared by all modules."""


class TorsionNormError(Exception):
    """Base class for library errors."""


class DivisionByZero(TorsionNormError, ZeroDivisionError):
    pass


class RingMismatch(TorsionNormError, ValueError):
    pass


class ZeroMap(TorsionNormError, ValueError):
    """A homomorphism phi: Z^m -> Z was required to be nonzero."""


class ZeroInput(TorsionNormError, ValueError):
    pass


class NotSquare(TorsionNormError, ValueError):
    pass


class ZeroDeterminant(TorsionNormError, ValueError):
    pass


class ZeroPolynomial(TorsionNormError, ValueError):
    pass


class NotASummand(TorsionNormError, ValueError):
    """Minkowski difference P - Q failed the round trip (R + Q != P)."""


class InvalidRep(TorsionNormError, ValueError):
    pass


class NoPivotGenerator(TorsionNormError, ValueError):
    pass


class NotDeficiencyOne(TorsionNormError, ValueError):
    pass


class ZeroTorsion(TorsionNormError, ValueError):
    pass


class ParseError(TorsionNormError, ValueError):
    """Syntax error in a textual input; ``line`` and ``column`` are 1-based."""

    def __init__(self, message, text=None, line=None, column=None, path=None):
        super().__init__(message)
        self.text = text
        self.line = line
        self.column = column
        self.path = path

    def location(self):
        loc = {}
        if self.path is not None:
            loc["path"] = self.path
        if self.line is not None:
            loc["line"] = self.line
        if self.column is not None:
            loc["column"] = self.column
        return loc


class ValidationError(TorsionNormError, ValueError):
    def __init__(self, message, path=None):
        super().__init__(message)
        self.path = path

    def location(self):
        return {} if self.path is None else {"path": self.path}


class ComputeError(TorsionNormError, RuntimeError):
    def __init__(self, message, path=None):
        super().__init__(message)
        self.path = path

    def location(self):
        return {} if self.path is None else {"path": self.path}
