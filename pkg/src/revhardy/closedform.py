"""Closed forms for power weights ``u = |x|^alpha``, ``v = |x|^beta`` on
spaces with polar density ``r^{Q-1}``.

Ball integrals ``int_{B(0,r)} |x|^gamma dx = |S| r^{Q+gamma} / (Q+gamma)``
make the Muckenhoupt-type functional a pure power of ``t``; the balance
condition kills that power, leaving a constant.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BalanceViolated, InadmissibleExponent
from .exponents import ExponentPair, constant_bounds, lower_factor

BOUNDARY = 1e-10
BALANCE_TOL = 1e-12


def ball_power_integral(Q: float, sphere_area: float, gamma: float, r: float) -> float:
    """``int_{|x|<r} |x|^gamma dx``."""
    e = Q + gamma
    if e <= BOUNDARY:
        raise InadmissibleExponent(f"ball integral of |x|^{gamma} diverges at 0 (Q+gamma={e})")
    if not r > 0:
        raise ValueError("radius must be positive")
    return sphere_area / e * r ** e


def complement_power_integral(Q: float, sphere_area: float, gamma: float, r: float) -> float:
    """``int_{|x|>r} |x|^gamma dx``."""
    e = Q + gamma
    if e >= -BOUNDARY:
        raise InadmissibleExponent(f"complement integral of |x|^{gamma} diverges at infinity (Q+gamma={e})")
    if not r > 0:
        raise ValueError("radius must be positive")
    return sphere_area / abs(e) * r ** e


@dataclass(frozen=True)
class PowerParams:
    Q: float
    sphere_area: float
    alpha: float
    beta: float
    exps: ExponentPair
    case: str = "direct"

    def __post_init__(self):
        if self.case not in ("direct", "conjugate"):
            raise ValueError(f"case must be 'direct' or 'conjugate', got {self.case!r}")

    @property
    def u_exponent(self) -> float:
        """``Q + alpha``: polar exponent of ``int u`` near the relevant end."""
        return self.Q + self.alpha

    @property
    def v_exponent(self) -> float:
        """``Q + beta (1 - p')``, the same for ``v^{1-p'}``."""
        return self.Q + self.beta * (1.0 - self.exps.p_conj)

    def check_case(self) -> None:
        a, b = self.u_exponent, self.v_exponent
        if self.case == "direct":
            if a <= BOUNDARY or b <= BOUNDARY:
                raise InadmissibleExponent(
                    f"direct case needs alpha+Q > 0 and Q+beta(1-p') > 0, got {a:g}, {b:g}")
        elif a >= -BOUNDARY or b >= -BOUNDARY:
            raise InadmissibleExponent(
                f"conjugate case needs alpha+Q < 0 and Q+beta(1-p') < 0, got {a:g}, {b:g}")


def balance_residual(params: PowerParams) -> float:
    e = params.exps
    return params.u_exponent / e.q + params.v_exponent / e.p_conj


def balance_check_direct(params: PowerParams) -> dict:
    r = balance_residual(params)
    return {"holds": abs(r) <= BALANCE_TOL, "residual": r}


# direct and conjugate inequalities share the scaling balance; only the sign regime differs
balance_check_conjugate = balance_check_direct


def solve_beta(alpha: float, Q: float, p: float, q: float) -> float:
    """``beta`` making the balance residual vanish for the given ``alpha``."""
    pc = p / (p - 1.0)
    return (-pc * (Q + alpha) / q - Q) / (1.0 - pc)


def _constant(params: PowerParams, case: str) -> dict:
    if params.case != case:
        params = PowerParams(params.Q, params.sphere_area, params.alpha, params.beta,
                             params.exps, case)
    params.check_case()
    bal = balance_check_direct(params)
    if not bal["holds"]:
        raise BalanceViolated(f"balance residual {bal['residual']:.3e}")
    e = params.exps
    S = params.sphere_area
    D = (S / abs(params.u_exponent)) ** (1.0 / e.q) * (S / abs(params.v_exponent)) ** (1.0 / e.p_conj)
    lo, hi = constant_bounds(e, D)
    return {"D": D, "c_lower": lo, "c_upper": hi, "factor": lower_factor(e),
            "residual": bal["residual"]}


def hardy_constant_direct(params: PowerParams) -> dict:
    """``D1 = (|S|/(alpha+Q))^{1/q} (|S|/(Q+beta(1-p')))^{1/p'}`` with bounds."""
    out = _constant(params, "direct")
    out["D1"] = out["D"]
    return out


def hardy_constant_conjugate(params: PowerParams) -> dict:
    """``D2`` with absolute values of the (negative) exponents, with bounds."""
    out = _constant(params, "conjugate")
    out["D2"] = out["D"]
    return out


def d_power_profile(params: PowerParams, t: float) -> float:
    """Closed-form ``D1(t)`` (direct) or ``D2(t)`` (conjugate) without balance."""
    params.check_case()
    e = params.exps
    S = params.sphere_area
    if params.case == "direct":
        U = ball_power_integral(params.Q, S, params.alpha, t)
        V = ball_power_integral(params.Q, S, params.beta * (1 - e.p_conj), t)
    else:
        U = complement_power_integral(params.Q, S, params.alpha, t)
        V = complement_power_integral(params.Q, S, params.beta * (1 - e.p_conj), t)
    return U ** (1.0 / e.q) * V ** (1.0 / e.p_conj)
