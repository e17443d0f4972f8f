"""Exception hierarchy shared by every pipeline stage."""


class ToposourcesError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParam(ToposourcesError, ValueError):
    pass


class NyquistViolation(InvalidParam):
    pass


class SignalTooShort(ToposourcesError, ValueError):
    pass


class InvalidFraction(InvalidParam):
    pass


class ResultEmpty(ToposourcesError, ValueError):
    pass


class ZeroPowerSignal(ToposourcesError, ValueError):
    pass


class InvalidRange(InvalidParam):
    pass


class DimensionMismatch(ToposourcesError, ValueError):
    pass


class InvalidStride(InvalidParam):
    pass


class TooManyLandmarks(ToposourcesError, ValueError):
    pass


class NonmonotoneFiltration(ToposourcesError, ValueError):
    pass


class TooFewSnapshots(ToposourcesError, ValueError):
    pass


class DegenerateSpectrum(ToposourcesError, ValueError):
    pass


class ParseError(ToposourcesError, ValueError):
    """Malformed serialized input; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownAxis(ToposourcesError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class ConfigError(ToposourcesError, ValueError):
    pass
