"""Exception hierarchy.

Everything raised on bad input derives from :class:`SaxError`; the CLI maps
those to exit code 2.
"""


class SaxError(Exception):
    """Base class for data errors."""


class DegenerateSeries(SaxError, ValueError):
    """Series has (near) zero variance where a non-degenerate one is needed."""


class TooShort(SaxError, ValueError):
    pass


class IndivisibleLength(SaxError, ValueError):
    """Series length is not a multiple of the word length."""


class InvalidWordLength(SaxError, ValueError):
    pass


class InvalidCardinality(SaxError, ValueError):
    pass


class DegeneratePaa(SaxError, ValueError):
    """PAA means are (near) constant and cannot be re-normalized."""


class ShapeMismatch(SaxError, ValueError):
    pass


class LagTooLarge(SaxError, ValueError):
    pass


class TooFewSamples(SaxError, ValueError):
    """Expected count per cell falls below the chi-squared validity floor."""


class DomainError(SaxError, ValueError):
    pass


class DegeneratePredictor(SaxError, ValueError):
    """Regression predictor is constant or has too few points."""


class NonFiniteValue(SaxError, ValueError):
    pass


class DatasetNotFound(SaxError, FileNotFoundError):
    pass


class ParseError(SaxError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ColumnNotFound(SaxError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class NonNumericValue(ParseError):
    def __init__(self, value, line, column):
        self.value = value
        self.column = column
        super().__init__(f"non-numeric value {value!r} in column {column}", line)
