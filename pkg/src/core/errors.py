"""Exception hierarchy shared by every module."""

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from src.models.certificate import Certificate


class PDSplitError(Exception):
    """Root of all errors raised by this package."""


class LayoutError(PDSplitError, ValueError):
    """Block layouts of two operands (or of an operand and a problem) disagree."""


class NumericFailure(PDSplitError, ArithmeticError):
    """A computation produced a non-finite value."""

    def __init__(self, component: str, detail: str = "non-finite value") -> None:
        self.component = component
        super().__init__(f"{component}: {detail}")


class ParameterError(PDSplitError, ValueError):
    """A scalar parameter is outside its admissible range, or a required constant is missing."""


class ProblemError(PDSplitError, ValueError):
    """Unknown problem, incomplete parameters, or a solver that cannot handle the problem."""


class CertificateRejected(PDSplitError):
    """A step-length certificate failed and the run was not marked uncertified."""

    def __init__(self, certificate: "Certificate") -> None:
        self.certificate = certificate
        super().__init__(
            f"step rule '{certificate.rule}' rejected: margin {certificate.margin:.6g}"
        )


class ConfigError(PDSplitError, ValueError):
    """A run configuration could not be parsed or validated."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class ImageFormatError(PDSplitError, ValueError):
    """A PGM file is malformed or truncated."""
