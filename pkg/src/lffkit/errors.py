"""Exception hierarchy shared by all lffkit modules."""


class LffError(Exception):
    """Base class for every error raised by lffkit."""


class ConfigError(LffError):
    """Unknown semiring name, bad flag combination and similar."""


class AlphabetError(LffError):
    """A letter or variable outside the declared alphabet."""


class SemiringMismatch(LffError, TypeError):
    """Values or polynomials over different semirings were combined."""


class OutputKindMismatch(LffError, TypeError):
    """Two behaviors with incompatible output kinds were compared."""


class ResolutionError(LffError):
    """A flat equation imports a handle that cannot be resolved."""


class SearchBoundExceeded(LffError):
    """A bounded search hit its resource limit before deciding."""


class SchemeError(LffError):
    """A recursive program scheme failed validation."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


class PreconditionError(LffError, ValueError):
    """An argument violates a documented precondition."""


class ParseError(LffError):
    """Malformed spec file; carries the 1-based offending line number."""

    def __init__(self, message, line=None, path=None):
        self.message = message
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)
