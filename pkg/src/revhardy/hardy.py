"""Reverse Hardy inequalities with two negative exponents ``q <= p < 0``.

For radial data on a polar space the inequality reads

    ( int_X ( int_{B(0,|x|)} f )^q u(x) dx )^{1/q}  >=  C ( int_X f^p v )^{1/p}

and the best ``C`` is bracketed by ``factor * D <= C <= D`` where ``D`` is the
infimum over ``t`` of

    D1(t) = ( int_{B(0,t)} u )^{1/q} ( int_{B(0,t)} v^{1-p'} )^{1/p'}.

The conjugate inequality uses complements ``X \\ B(0,|x|)`` and ``D2``.
Everything here is radial: integrals are one-dimensional in ``r`` with the
polar factor ``|S| lambda(r)``.  Products of powers are evaluated in log space
so that deep tails (``r`` near ``1e-300`` or ``1e300``) neither under- nor
overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .errors import (DivergentIntegral, InadmissibleTail, InadmissibleWeights,
                     InvalidExponents, RevHardyError)
from .exponents import ExponentPair, constant_bounds, lower_factor, make_exponents  # noqa: F401
from .montecarlo import make_rng
from .quadrature import (EndpointExponents, GridSpec, QuadratureConfig, cumulative,
                         integrate_semiaxis, scale_free)
from .spaces import PolarSpace

EXTREMAL_NOTE = (
    "extremal family uses large amplitude A -> infinity: with p < 0 the tail "
    "term A^p int v f1^p vanishes only in that direction, which is what "
    "yields the upper bound C <= D; the small-amplitude limit diverges instead"
)
NONMONOTONE_NOTE = (
    "the profile is not monotone in the direction the bounds assume; the "
    "infimum is reported but no bound is extrapolated, so the verdict is inconclusive"
)
RATIO_TOL = 1e-6
FAMILY_TOL = 1e-2
MONOTONE_SLACK = 1e-9


# ---------------------------------------------------------------------------
# radial functions and weights
# ---------------------------------------------------------------------------

def _log(r):
    with np.errstate(divide="ignore"):
        return np.log(np.asarray(r, dtype=float))


@dataclass(frozen=True)
class RadialFunction:
    """Positive radial function with optional power-law exponents at 0 and inf.

    ``log_func`` (if given) must return ``log func(r)``; it is used wherever
    the function is multiplied with other powers.
    """

    func: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    at_zero: float | None = None
    at_inf: float | None = None
    breakpoints: tuple[float, ...] = ()
    log_func: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)
    label: str = "radial"

    def __call__(self, r):
        return np.asarray(self.func(np.asarray(r, dtype=float)), dtype=float)

    def log(self, r):
        if self.log_func is not None:
            return np.asarray(self.log_func(np.asarray(r, dtype=float)), dtype=float)
        return _log(self(r))

    def log_at_log(self, lr):
        with np.errstate(over="ignore", under="ignore"):
            return self.log(np.exp(np.asarray(lr, dtype=float)))

    @property
    def hints(self) -> EndpointExponents:
        return EndpointExponents(self.at_zero, self.at_inf)

    def scaled(self, c: float) -> "RadialFunction":
        lc = math.log(c)
        return RadialFunction(lambda r: c * self.func(r), self.at_zero, self.at_inf,
                              self.breakpoints, lambda r: lc + self.log(r),
                              f"{c:g}*{self.label}")

    def describe(self) -> dict:
        return {"kind": self.label, "at_zero": self.at_zero, "at_inf": self.at_inf}


@dataclass(frozen=True)
class PiecewisePowerFunction:
    """``scale * r^s0`` for ``r <= R`` and ``scale * R^{s0-s_inf} r^{s_inf}`` beyond."""

    s0: float
    s_inf: float
    R: float = 1.0
    scale: float = 1.0

    def __post_init__(self):
        if not (self.R > 0 and self.scale > 0):
            raise ValueError("R and scale must be positive")

    def log_at_log(self, lr):
        """``log f`` as a function of ``log r`` (no under/overflow in ``r``)."""
        lr = np.asarray(lr, dtype=float)
        lR = math.log(self.R)
        return math.log(self.scale) + np.where(
            lr <= lR, self.s0 * lr, (self.s0 - self.s_inf) * lR + self.s_inf * lr)

    def log(self, r):
        return self.log_at_log(_log(r))

    def __call__(self, r):
        return np.exp(self.log(r))

    @property
    def at_zero(self) -> float:
        return self.s0

    @property
    def at_inf(self) -> float:
        return self.s_inf

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return (self.R,)

    @property
    def hints(self) -> EndpointExponents:
        return EndpointExponents(self.s0, self.s_inf)

    def scaled(self, c: float) -> "PiecewisePowerFunction":
        return replace(self, scale=self.scale * c)

    def power(self, k: float) -> "PiecewisePowerFunction":
        """``f**k``, again a piecewise power."""
        return PiecewisePowerFunction(k * self.s0, k * self.s_inf, self.R, self.scale ** k)

    def describe(self) -> dict:
        return {"kind": "piecewise_power", "s0": self.s0, "s_inf": self.s_inf,
                "R": self.R, "scale": self.scale}


@dataclass(frozen=True)
class RadialWeight:
    """Weight ``|x|^exponent`` (or ``func(|x|)``), optionally cut off at ``r_max``."""

    exponent: float | None = None
    func: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)
    r_max: float = math.inf
    label: str = ""

    def __post_init__(self):
        if (self.exponent is None) == (self.func is None):
            raise ValueError("give exactly one of exponent or func")

    @classmethod
    def power(cls, gamma: float) -> "RadialWeight":
        return cls(exponent=float(gamma), label=f"|x|^{gamma:g}")

    @classmethod
    def indicator(cls, r_max: float) -> "RadialWeight":
        return cls(exponent=0.0, r_max=float(r_max), label=f"1_B(0,{r_max:g})")

    @property
    def is_power(self) -> bool:
        return self.exponent is not None and math.isinf(self.r_max)

    def log(self, r):
        r = np.asarray(r, dtype=float)
        if self.exponent is not None:
            out = self.exponent * _log(r)
        else:
            out = _log(self.func(r))
        if math.isfinite(self.r_max):
            out = np.where(r < self.r_max, out, -np.inf)
        return out

    def __call__(self, r):
        return np.exp(self.log(r))

    @property
    def hints(self) -> EndpointExponents:
        if self.exponent is None:
            return EndpointExponents()
        return EndpointExponents(self.exponent, self.exponent if math.isinf(self.r_max) else None)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return (self.r_max,) if math.isfinite(self.r_max) else ()

    def describe(self) -> dict:
        return {"exponent": self.exponent, "r_max": self.r_max,
                "label": self.label or ("callable" if self.func else "")}


@dataclass(frozen=True)
class WeightPair:
    u: RadialWeight
    v: RadialWeight

    @property
    def is_power(self) -> bool:
        return self.u.is_power and self.v.is_power

    def describe(self) -> dict:
        return {"u": self.u.describe(), "v": self.v.describe()}


def power_weights(alpha: float, beta: float) -> WeightPair:
    return WeightPair(RadialWeight.power(alpha), RadialWeight.power(beta))


# ---------------------------------------------------------------------------
# hint arithmetic
# ---------------------------------------------------------------------------

def _h(obj) -> EndpointExponents:
    return getattr(obj, "hints", None) or EndpointExponents()


def _lin(*terms, shift=0.0, end="at_zero"):
    """Sum ``k * exponent`` over ``(k, hints)`` terms; None if any is unknown."""
    total = shift
    for k, h in terms:
        e = getattr(h, end)
        if e is None:
            return None
        total += k * e
    return total


def _space_hints(space: PolarSpace) -> EndpointExponents:
    return EndpointExponents(space.density_exponent_at_zero(),
                             space.Q - 1.0 if space.power_law else None)


def _combine(space, *terms) -> EndpointExponents:
    sh = _space_hints(space)
    return EndpointExponents(_lin(*terms, (1.0, sh), end="at_zero"),
                             _lin(*terms, (1.0, sh), end="at_inf"))


def _breaks(*objs) -> tuple[float, ...]:
    out = []
    for o in objs:
        out.extend(getattr(o, "breakpoints", ()) or ())
    return tuple(sorted(set(float(b) for b in out)))


def _polar(space: PolarSpace, *terms) -> Callable:
    """``|S| lambda(r) prod f_i(r)^{k_i}`` evaluated through logs."""
    lS = math.log(space.sphere_area)

    def g(r):
        r = np.asarray(r, dtype=float)
        acc = lS + space.log_density(r)
        for k, fn in terms:
            acc = acc + k * fn.log(r)
        with np.errstate(over="ignore", invalid="ignore"):
            out = np.exp(acc)
        return np.where(np.isnan(out), 0.0, out)
    return g


def _cfg(config):
    return scale_free(config)


# ---------------------------------------------------------------------------
# reverse Hoelder
# ---------------------------------------------------------------------------

def radial_integral(space: PolarSpace, terms: Sequence[tuple[float, object]],
                    config: QuadratureConfig | None = None, r_hi: float = math.inf) -> float:
    """``int_{B(0, r_hi)} prod f_i^{k_i} dx`` for radial ``f_i``."""
    g = _polar(space, *terms)
    hints = _combine(space, *[(k, _h(f)) for k, f in terms])
    return integrate_semiaxis(g, _cfg(config), hints, 0.0, r_hi,
                              _breaks(*[f for _, f in terms]))


def reverse_holder_check(f, g, p: float, space: PolarSpace,
                         config: QuadratureConfig | None = None,
                         r_hi: float = math.inf, tol: float = 1e-10) -> dict:
    """``int fg >= (int f^p)^{1/p} (int g^{p'})^{1/p'}`` for ``p < 0``.

    A divergent left side counts as holding; divergent right-hand integrals
    are refused.
    """
    if not p < 0:
        raise InvalidExponents("reverse Hoelder needs p < 0")
    pc = p / (p - 1.0)
    A = radial_integral(space, [(p, f)], config, r_hi)
    B = radial_integral(space, [(pc, g)], config, r_hi)
    if not (A > 0 and B > 0 and math.isfinite(A) and math.isfinite(B)):
        raise DivergentIntegral("reverse Hoelder needs 0 < int f^p, int g^p' < inf")
    rhs = A ** (1.0 / p) * B ** (1.0 / pc)
    try:
        lhs = radial_integral(space, [(1.0, f), (1.0, g)], config, r_hi)
    except DivergentIntegral:
        lhs = math.inf
    return {"lhs": lhs, "rhs": rhs, "holds": bool(lhs >= rhs * (1.0 - tol))}


# ---------------------------------------------------------------------------
# Muckenhoupt-type profiles
# ---------------------------------------------------------------------------

@dataclass
class DProfile:
    radii: np.ndarray
    values: np.ndarray
    infimum: float
    argmin: float
    monotone_verdict: str
    expected: str
    warnings: list[str] = field(default_factory=list)

    @property
    def spread(self) -> float:
        """``(max - min) / min`` over the grid."""
        return float((np.max(self.values) - np.min(self.values)) / np.min(self.values))

    def to_dict(self) -> dict:
        return {"radii": [float(x) for x in self.radii],
                "values": [float(x) for x in self.values],
                "infimum": self.infimum, "argmin": self.argmin,
                "monotone_verdict": self.monotone_verdict, "expected": self.expected,
                "spread": self.spread, "warnings": list(self.warnings)}


def monotone_verdict(values: np.ndarray, expected: str, slack: float = MONOTONE_SLACK) -> str:
    """Successive-difference test with relative slack; flat profiles count as
    monotone in the ``expected`` direction."""
    v = np.asarray(values, dtype=float)
    d = np.diff(v)
    tol = slack * np.maximum(np.abs(v[:-1]), np.abs(v[1:]))
    up = bool(np.all(d >= -tol))
    down = bool(np.all(d <= tol))
    if up and down:
        return expected
    if up:
        return "non_decreasing"
    if down:
        return "non_increasing"
    return "neither"


def default_radii(n: int = 64, lo: float = 1e-3, hi: float = 1e3) -> np.ndarray:
    return np.logspace(math.log10(lo), math.log10(hi), n)


def _profile(space, weights, exps, radii, config, conjugate):
    pc = exps.p_conj
    u, v = weights.u, weights.v
    radii = np.asarray(default_radii() if radii is None else radii, dtype=float)
    if space.power_law and weights.is_power:
        a = space.Q + u.exponent
        b = space.Q + v.exponent * (1.0 - pc)
        if not conjugate and (a <= 0 or b <= 0):
            raise InadmissibleWeights(
                f"ball integrals of u and v^(1-p') diverge at 0 (Q+alpha={a:g}, Q+beta(1-p')={b:g})")
        if conjugate and (a >= 0 or b >= 0):
            raise InadmissibleWeights(
                f"complement integrals of u and v^(1-p') diverge at infinity (Q+alpha={a:g}, Q+beta(1-p')={b:g})")
    direction = "outer" if conjugate else "inner"
    grid = GridSpec(extra=_breaks(u, v))
    cfg = _cfg(config)
    U = cumulative(_polar(space, (1.0, u)), grid, cfg, direction, _combine(space, (1.0, _h(u))))
    V = cumulative(_polar(space, (1.0 - pc, v)), grid, cfg, direction,
                   _combine(space, (1.0 - pc, _h(v))))
    vals = np.exp(U.log_value(radii) / exps.q + V.log_value(radii) / pc)
    expected = "non_increasing" if conjugate else "non_decreasing"
    verdict = monotone_verdict(vals, expected)
    k = int(np.argmin(vals))
    prof = DProfile(radii, vals, float(vals[k]), float(radii[k]), verdict, expected)
    if k in (0, radii.size - 1) and prof.spread > MONOTONE_SLACK:
        prof.warnings.append(
            f"infimum attained at grid edge t={radii[k]:g}; the true infimum may lie beyond the grid")
    return prof


def d1_profile(space: PolarSpace, weights: WeightPair, exps: ExponentPair,
               radii: Sequence[float] | None = None,
               config: QuadratureConfig | None = None) -> DProfile:
    """``D1(t) = (int_{B(0,t)} u)^{1/q} (int_{B(0,t)} v^{1-p'})^{1/p'}`` on ``radii``."""
    return _profile(space, weights, exps, radii, config, conjugate=False)


def d2_profile(space: PolarSpace, weights: WeightPair, exps: ExponentPair,
               radii: Sequence[float] | None = None,
               config: QuadratureConfig | None = None) -> DProfile:
    """Same with the complements ``X \\ B(0,t)``."""
    return _profile(space, weights, exps, radii, config, conjugate=True)


# ---------------------------------------------------------------------------
# the two sides of the inequality
# ---------------------------------------------------------------------------

def _running_exponents(space, f, conjugate):
    """Power-law exponents of ``int_{B(0,r)} f`` (or of the complement integral)."""
    if not space.power_law:
        return None, None
    Q = space.Q
    f0, fi = f.hints.at_zero if hasattr(f, "hints") else None, \
        f.hints.at_inf if hasattr(f, "hints") else None
    if conjugate:
        e0 = None if f0 is None else min(f0 + Q, 0.0)
        ei = None if fi is None else fi + Q
    else:
        e0 = None if f0 is None else f0 + Q
        ei = None if fi is None else max(fi + Q, 0.0)
    return e0, ei


def hardy_lhs(space: PolarSpace, f, u: RadialWeight, q: float,
              config: QuadratureConfig | None = None, conjugate: bool = False) -> float:
    """``[ int_X (int_{B(0,|x|)} f)^q u dx ]^{1/q}`` (complement if ``conjugate``)."""
    cfg = _cfg(config)
    direction = "outer" if conjugate else "inner"
    grid = GridSpec(extra=_breaks(f, u))
    F = cumulative(_polar(space, (1.0, f)), grid, cfg, direction, _combine(space, (1.0, _h(f))))
    e0, ei = _running_exponents(space, f, conjugate)
    sh = _space_hints(space)
    uh = _h(u)
    h0 = None if None in (e0, uh.at_zero, sh.at_zero) else e0 * q + uh.at_zero + sh.at_zero
    hi = None if None in (ei, uh.at_inf, sh.at_inf) else ei * q + uh.at_inf + sh.at_inf
    lS = math.log(space.sphere_area)

    def outer(r):
        acc = q * F.log_value(r) + u.log(r) + space.log_density(r) + lS
        with np.errstate(over="ignore", invalid="ignore"):
            out = np.exp(acc)
        return np.where(np.isnan(out), 0.0, out)

    r_hi = u.r_max
    I = integrate_semiaxis(outer, cfg, EndpointExponents(h0, hi), 0.0, r_hi, _breaks(f, u))
    return I ** (1.0 / q)


def hardy_rhs(space: PolarSpace, f, v: RadialWeight, p: float,
              config: QuadratureConfig | None = None) -> float:
    """``( int_X f^p v dx )^{1/p}``."""
    I = radial_integral(space, [(p, f), (1.0, v)], config, v.r_max)
    if not I > 0:
        raise DivergentIntegral("int f^p v vanishes")
    return I ** (1.0 / p)


def hardy_ratio(space: PolarSpace, f, weights: WeightPair, exps: ExponentPair,
                config: QuadratureConfig | None = None) -> float:
    return hardy_lhs(space, f, weights.u, exps.q, config) / hardy_rhs(space, f, weights.v, exps.p, config)


def conjugate_hardy_ratio(space: PolarSpace, f, weights: WeightPair, exps: ExponentPair,
                          config: QuadratureConfig | None = None) -> float:
    return (hardy_lhs(space, f, weights.u, exps.q, config, conjugate=True)
            / hardy_rhs(space, f, weights.v, exps.p, config))


# ---------------------------------------------------------------------------
# near-extremal functions
# ---------------------------------------------------------------------------

def extremal_family(space: PolarSpace, v: RadialWeight, t: float, A: float, f1,
                    exps: ExponentPair, conjugate: bool = False,
                    config: QuadratureConfig | None = None) -> RadialFunction:
    """``v^{1-p'}`` on ``|x| <= t`` and ``A f1`` beyond (mirrored if ``conjugate``).

    Raises :class:`InadmissibleTail` when ``int v f1^p`` over the ``A``-region
    is infinite, since then the right-hand side vanishes identically.
    """
    if not (A > 0 and t > 0):
        raise ValueError("A and t must be positive")
    k = 1.0 - exps.p_conj
    p = exps.p
    lo, hi = (0.0, t) if conjugate else (t, math.inf)
    g = _polar(space, (p, f1), (1.0, v))
    hints = _combine(space, (p, _h(f1)), (1.0, _h(v)))
    try:
        tail = integrate_semiaxis(g, _cfg(config), hints, lo, hi, _breaks(f1, v))
    except DivergentIntegral as exc:
        raise InadmissibleTail(f"int v f1^p diverges on the amplitude region: {exc}") from None
    if not math.isfinite(tail):
        raise InadmissibleTail("int v f1^p is infinite on the amplitude region")
    lA = math.log(A)

    def logf(r):
        r = np.asarray(r, dtype=float)
        core = k * v.log(r)
        amp = lA + f1.log(r)
        inner = r <= t
        return np.where(inner, core, amp) if not conjugate else np.where(inner, amp, core)

    vh, fh = _h(v), _h(f1)
    if conjugate:
        at0 = fh.at_zero
        ati = None if vh.at_inf is None else k * vh.at_inf
    else:
        at0 = None if vh.at_zero is None else k * vh.at_zero
        ati = fh.at_inf
    return RadialFunction(lambda r: np.exp(logf(r)), at0, ati, _breaks(f1, v) + (t,),
                          logf, f"extremal(t={t:g},A={A:g})")


# ---------------------------------------------------------------------------
# proof identity
# ---------------------------------------------------------------------------

def proof_identity_check(space: PolarSpace, v: RadialWeight, exps: ExponentPair,
                         t_grid: Sequence[float], config: QuadratureConfig | None = None,
                         tol: float = 1e-6) -> dict:
    """Check ``H1(t) = p' h(t)^p`` where ``h = (int_0^t V)^{1/(p p')}``,
    ``V = |S| lambda v^{1-p'}`` and ``H1(t) = int_0^t h^{-p'} V``.

    ``W(t) = int_0^t V`` enters the integrand through a cached running
    integral; the right side uses fresh quadratures of ``W(t)``.
    """
    p, pc = exps.p, exps.p_conj
    cfg = _cfg(config)
    Vd = _polar(space, (1.0 - pc, v))
    Vh = _combine(space, (1.0 - pc, _h(v)))
    W = cumulative(Vd, GridSpec(extra=_breaks(v)), cfg, "inner", Vh)

    def integrand(s):
        acc = (-1.0 / p) * W.log_value(s) + _log(Vd(s))
        with np.errstate(over="ignore", invalid="ignore"):
            out = np.exp(acc)
        return np.where(np.isnan(out), 0.0, out)

    # W^{-1/p} V ~ s^{(e+1)(-1/p) + e} with e the exponent of V at 0
    h0 = None if Vh.at_zero is None else (Vh.at_zero + 1.0) * (-1.0 / p) + Vh.at_zero
    rows = []
    for t in t_grid:
        t = float(t)
        H1 = integrate_semiaxis(integrand, cfg, EndpointExponents(h0, None), 0.0, t, _breaks(v))
        Wt = integrate_semiaxis(Vd, cfg, Vh, 0.0, t, _breaks(v))
        h = Wt ** (1.0 / (p * pc))
        rhs = pc * h ** p
        err = abs(H1 - rhs) / abs(rhs)
        rows.append({"t": t, "H1": H1, "rhs": rhs, "h": h, "rel_err": err, "holds": err <= tol})
    return {"rows": rows, "max_rel_err": max(r["rel_err"] for r in rows),
            "holds": all(r["holds"] for r in rows)}


# ---------------------------------------------------------------------------
# admissible families
# ---------------------------------------------------------------------------

def admissible_window(Q: float, alpha: float, beta: float, exps: ExponentPair,
                      conjugate: bool = False) -> dict:
    """Open intervals for ``(s0, s_inf)`` making both sides finite and positive
    for power weights ``|x|^alpha``, ``|x|^beta`` (``None`` = unbounded)."""
    aq = (alpha + Q) / abs(exps.q) - Q
    bp = (beta + Q) / abs(exps.p)
    if conjugate:
        return {"s0": (None, min(-Q, aq, bp)), "s_inf": (max(aq, bp), -Q)}
    return {"s0": (-Q, min(aq, bp)), "s_inf": (max(-Q, aq, bp), None)}


def _shrink(lo, hi, margin=0.1, span=3.0):
    if lo is None and hi is None:
        lo, hi = -span / 2, span / 2
    elif lo is None:
        lo = hi - span
    elif hi is None:
        hi = lo + span
    if not hi > lo:
        return None
    w = hi - lo
    return lo + margin * w, hi - margin * w


def generate_family(Q: float, alpha: float, beta: float, exps: ExponentPair,
                    count: int = 50, seed: int = 0, conjugate: bool = False,
                    stream: int = 0) -> list[PiecewisePowerFunction]:
    """Seeded piecewise powers drawn uniformly inside the admissible window,
    with ``R`` log-uniform in ``[0.1, 10]``."""
    win = admissible_window(Q, alpha, beta, exps, conjugate)
    w0 = _shrink(*win["s0"])
    wi = _shrink(*win["s_inf"])
    if w0 is None or wi is None:
        raise InadmissibleWeights(f"empty admissible window {win}")
    rng = make_rng(seed, stream)
    s0 = rng.uniform(*w0, count)
    si = rng.uniform(*wi, count)
    R = np.exp(rng.uniform(math.log(0.1), math.log(10.0), count))
    return [PiecewisePowerFunction(float(a), float(b), float(c)) for a, b, c in zip(s0, si, R)]


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HardyOptions:
    ratio_tol: float = RATIO_TOL
    family_tol: float = FAMILY_TOL
    amplitudes: tuple[float, ...] = (1e2, 1e3, 1e4)
    extremal_t: float = 1.0
    radii: tuple[float, ...] | None = None
    config: QuadratureConfig | None = None


@dataclass
class HardyReport:
    exponents: ExponentPair
    weights: WeightPair
    conjugate: bool
    D: float
    c_lower: float
    c_upper: float
    ratios: list[tuple[dict, float]]
    extremal: list[tuple[float, float]]
    min_ratio: float
    margin: float
    verdict: str
    profile: DProfile | None
    diagnostics: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def extremal_min(self) -> float:
        return min((r for _, r in self.extremal), default=math.nan)

    def to_dict(self) -> dict:
        return {
            "exponents": self.exponents.to_dict(),
            "weights": self.weights.describe(),
            "conjugate": self.conjugate,
            "D": self.D, "c_lower": self.c_lower, "c_upper": self.c_upper,
            "factor": lower_factor(self.exponents),
            "ratios": [{"function": d, "ratio": r} for d, r in self.ratios],
            "extremal": [{"A": a, "ratio": r} for a, r in self.extremal],
            "extremal_min": self.extremal_min,
            "min_ratio": self.min_ratio, "margin": self.margin,
            "verdict": self.verdict,
            "profile": None if self.profile is None else self.profile.to_dict(),
            "diagnostics": list(self.diagnostics),
        }


def _extremal_f1(space, weights, exps, conjugate):
    """Power ``f1`` with an integrable amplitude-region term, or None."""
    if not (space.power_law and weights.is_power):
        return None
    win = admissible_window(space.Q, weights.u.exponent, weights.v.exponent, exps, conjugate)
    if conjugate:
        lo, hi = win["s0"]
        s = hi - 1.0 if lo is None else 0.5 * (lo + hi)
    else:
        lo, hi = win["s_inf"]
        s = lo + 1.0 if hi is None else 0.5 * (lo + hi)
    return PiecewisePowerFunction(s, s)


def verify_hardy(space: PolarSpace, weights: WeightPair, exps: ExponentPair,
                 family: Sequence | None = None, options: HardyOptions | None = None,
                 conjugate: bool = False, f1=None, family_count: int = 50,
                 seed: int = 0) -> HardyReport:
    """Check every family ratio against ``c_lower`` and that the extremal
    family comes down to within ``family_tol`` of ``c_upper``.

    The bounds are only meaningful when the profile is monotone in the
    direction the bounds assume; otherwise the verdict is ``inconclusive``.
    """
    opts = options or HardyOptions()
    cfg = opts.config
    ratio_fn = conjugate_hardy_ratio if conjugate else hardy_ratio
    prof = (d2_profile if conjugate else d1_profile)(space, weights, exps, opts.radii, cfg)
    D = prof.infimum
    lo, hi = constant_bounds(exps, D)
    diagnostics = list(prof.warnings)
    warnings = [EXTREMAL_NOTE]
    if prof.monotone_verdict != prof.expected:
        diagnostics.append(
            f"profile is {prof.monotone_verdict}, expected {prof.expected}; bounds do not apply")
        warnings.append(NONMONOTONE_NOTE)
        return HardyReport(exps, weights, conjugate, D, lo, hi, [], [], math.nan, math.nan,
                           "inconclusive", prof, diagnostics, warnings)
    if family is None:
        if not (space.power_law and weights.is_power):
            raise RevHardyError("a family is required for non-power weights")
        family = generate_family(space.Q, weights.u.exponent, weights.v.exponent, exps,
                                 family_count, seed, conjugate)
    ratios = []
    for f in family:
        try:
            ratios.append((f.describe(), float(ratio_fn(space, f, weights, exps, cfg))))
        except DivergentIntegral as exc:
            diagnostics.append(f"skipped non-admissible member {f.describe()}: {exc}")
    f1 = f1 if f1 is not None else _extremal_f1(space, weights, exps, conjugate)
    extremal = []
    if f1 is not None:
        for A in opts.amplitudes:
            g = extremal_family(space, weights.v, opts.extremal_t, A, f1, exps, conjugate, cfg)
            try:
                extremal.append((float(A), float(ratio_fn(space, g, weights, exps, cfg))))
            except DivergentIntegral as exc:
                # an infinite integral raised to 1/q < 0 makes the left side 0
                extremal.append((float(A), 0.0))
                diagnostics.append(f"extremal member A={A:g} has a zero left side: {exc}")
    min_ratio = min((r for _, r in ratios), default=math.nan)
    margin = min_ratio - lo
    ext_min = min((r for _, r in extremal), default=math.nan)
    if prof.warnings:
        verdict = "inconclusive"
        diagnostics.append("the infimum of the profile is not resolved on the grid")
    elif ratios and min_ratio < lo * (1.0 - opts.ratio_tol):
        verdict = "violated"
    elif ratios and extremal and ext_min <= hi * (1.0 + opts.family_tol):
        verdict = "verified"
    else:
        verdict = "inconclusive"
        if not ratios:
            diagnostics.append("no admissible family member could be evaluated")
        elif not extremal:
            diagnostics.append("no extremal family available for these weights")
        else:
            diagnostics.append(f"extremal family min {ext_min:.6g} stays above c_upper {hi:.6g}")
    return HardyReport(exps, weights, conjugate, D, lo, hi, ratios, extremal, min_ratio,
                       margin, verdict, prof, diagnostics, warnings)
