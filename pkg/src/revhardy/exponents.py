"""Negative exponent pairs, their conjugates, and the two-sided constant bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidExponents


def conjugate(p: float) -> float:
    """``p' = p / (p - 1)``; lies in (0, 1) for ``p < 0``."""
    return p / (p - 1.0)


@dataclass(frozen=True)
class ExponentPair:
    p: float
    q: float

    def __post_init__(self):
        if not (math.isfinite(self.p) and math.isfinite(self.q)):
            raise InvalidExponents(f"exponents must be finite, got p={self.p}, q={self.q}")
        if not self.q <= self.p < 0:
            raise InvalidExponents(f"need q <= p < 0, got p={self.p}, q={self.q}")

    @property
    def p_conj(self) -> float:
        return conjugate(self.p)

    @property
    def q_conj(self) -> float:
        return conjugate(self.q)

    def to_dict(self) -> dict:
        return {"p": self.p, "q": self.q, "p_conj": self.p_conj, "q_conj": self.q_conj}


def make_exponents(p: float, q: float) -> ExponentPair:
    return ExponentPair(float(p), float(q))


def lower_factor(exps: ExponentPair) -> float:
    """``|p|^{1/q} (p')^{1/p'}``, the ratio between the lower and upper bound."""
    pc = exps.p_conj
    return abs(exps.p) ** (1.0 / exps.q) * pc ** (1.0 / pc)


def constant_bounds(exps: ExponentPair, D: float) -> tuple[float, float]:
    """Lower and upper bounds ``(factor * D, D)`` for the best Hardy constant."""
    if not D >= 0:
        raise ValueError(f"D must be non-negative, got {D}")
    return lower_factor(exps) * D, D
