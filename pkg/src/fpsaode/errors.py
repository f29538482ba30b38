"""Exception hierarchy.

Every error carries a short machine-readable ``code`` and the process exit
status the CLI uses when it surfaces the error.
"""


class AodeError(Exception):
    code = "error"
    exit_status = 1


class FieldMismatchError(AodeError, TypeError):
    code = "mixed-field-tag"


class DivisionByZeroError(AodeError, ZeroDivisionError):
    code = "division-by-zero"


class IncompatibleRingError(AodeError, ValueError):
    code = "incompatible-variable-table"


class ZeroPolynomialError(AodeError, ValueError):
    code = "zero-polynomial"


class NoOrderError(AodeError, ValueError):
    """The differential polynomial does not involve y at all."""

    code = "y-free-input"


class HypothesisError(AodeError, ValueError):
    code = "hypothesis-violation"


class JetLengthError(AodeError, ValueError):
    code = "insufficient-jet-length"


class PreconditionError(AodeError, ValueError):
    code = "precondition-violation"


class SeparantVanishesError(PreconditionError):
    code = "separant-vanishes"


class NotOnVarietyError(PreconditionError):
    code = "not-on-jet-variety"


class UnsupportedFieldError(AodeError, ValueError):
    code = "outside-supported-field"


class InvariantError(AodeError, RuntimeError):
    """An internal consistency check failed; indicates a bug."""

    code = "internal-invariant"
    exit_status = 3


class ParseError(AodeError, ValueError):
    code = "syntax-error"

    def __init__(self, message, span=None, text=None):
        self.span = span
        self.text = text
        if span is not None:
            message = f"{message} at {span[0]}:{span[1]}"
            if text is not None:
                message += f"\n  {text}\n  {' ' * span[0]}{'^' * max(1, span[1] - span[0])}"
        super().__init__(message)


class UndeclaredParameterError(ParseError):
    code = "undeclared-parameter"


class ImaginaryUnitError(ParseError):
    code = "imaginary-unit-outside-gaussian"


class ExponentOverflowError(ParseError):
    code = "exponent-overflow"
