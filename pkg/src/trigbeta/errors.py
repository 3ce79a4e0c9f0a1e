"""Exception hierarchy shared across the package."""


class TrigBetaError(Exception):
    """Base class for every error raised by this package."""


class DomainError(TrigBetaError, ValueError):
    """Argument outside the domain of a function."""


class PoleError(DomainError):
    """Gamma evaluated at a nonpositive integer."""


class EvaluationOverflow(TrigBetaError, OverflowError):
    """Result magnitude exceeds the double-precision range."""


class ParseError(TrigBetaError, ValueError):
    """Integrand source text rejected by the DSL front-end.

    ``position`` is the 0-based character offset into the original text.
    """

    def __init__(self, message, text="", position=0):
        self.message = message
        self.text = text
        self.position = position
        super().__init__(self._format())

    def _format(self):
        if not self.text:
            return f"{self.message} (at position {self.position})"
        caret = " " * self.position + "^"
        return f"{self.message} (at position {self.position})\n  {self.text}\n  {caret}"


class IntegrandDomainError(ParseError):
    """Syntactically valid integrand that the reduction families do not admit."""


class Divergent(TrigBetaError, ValueError):
    """The integral diverges at ``endpoint`` ("lower" or "upper")."""

    def __init__(self, endpoint, reason):
        self.endpoint = endpoint
        self.reason = reason
        super().__init__(f"integral diverges at the {endpoint} endpoint: {reason}")


class ConstraintViolated(TrigBetaError, ValueError):
    """Quarter-pi integrand does not satisfy alpha + beta + 2 gamma + 2 = 0."""

    def __init__(self, defect):
        self.defect = defect
        super().__init__(
            f"alpha + beta + 2*gamma + 2 = {defect} != 0; no beta closed form"
        )


class CorpusError(TrigBetaError, ValueError):
    """Malformed corpus document."""
