"""Exception hierarchy shared by the library and the CLI."""


class StableCrdError(Exception):
    """Base class for all errors raised by stablecrd."""


class DimensionError(StableCrdError, ValueError):
    pass


class CountOverflowError(StableCrdError, OverflowError):
    pass


class NotApplicableError(StableCrdError, ValueError):
    pass


class ZeroConfigurationError(StableCrdError, ValueError):
    """The zero configuration is neither o-stable nor o-unstable."""


class UnsupportedClassError(StableCrdError):
    """The CRD is outside the class an operation can handle."""


class CapExceededError(StableCrdError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class AntichainError(StableCrdError, ValueError):
    """An insertion would break the antichain invariant."""


class UncertifiableError(StableCrdError):
    """A truncated min(U) cannot certify stability of the given configuration."""


class ParseError(StableCrdError, ValueError):
    def __init__(self, diagnostics, source=None):
        self.diagnostics = list(diagnostics)
        self.source = source
        super().__init__(self._render())

    def _render(self):
        prefix = f"{self.source}:" if self.source else ""
        return "\n".join(f"{prefix}{line}:{col}: {msg}" for line, col, msg in self.diagnostics)
