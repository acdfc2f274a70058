"""Exception hierarchy shared by every module."""

from __future__ import annotations


class RevHardyError(Exception):
    """Base class for all errors raised by the package."""


class InvalidExponents(RevHardyError, ValueError):
    """Exponents violate ``q <= p < 0``."""


class InvalidParams(RevHardyError, ValueError):
    """Parameter set fails the hypotheses of the inequality."""


class InadmissibleWeights(RevHardyError, ValueError):
    """Weights are not locally (or globally) integrable where required."""


class InadmissibleExponent(RevHardyError, ValueError):
    """A power exponent sits on or beyond the convergence boundary."""


class InadmissibleTail(RevHardyError, ValueError):
    """Extremal-family tail makes the right-hand integral infinite."""


class BalanceViolated(RevHardyError, ValueError):
    """Scaling balance condition between weights and exponents fails."""


class ConfigError(RevHardyError, ValueError):
    """Malformed or incomplete run configuration."""


class DegenerateSampler(RevHardyError, ValueError):
    """Importance density vanishes (or is not normalisable) where it must not."""


class NumericalError(RevHardyError, ArithmeticError):
    """Base for numerical failures (exit code 3 in the CLI)."""


class NonConvergent(NumericalError):
    """Adaptive refinement ran out of budget before meeting tolerance."""


class DivergentIntegral(NumericalError):
    """Power-law analysis shows the integral is infinite.

    ``where`` is ``"zero"``, ``"inf"`` or a free-form label; ``exponent`` is the
    integrand exponent (in ``r``) responsible, when known.
    """

    def __init__(self, message: str, where: str | None = None, exponent: float | None = None):
        super().__init__(message)
        self.where = where
        self.exponent = exponent
