"""Reverse Hardy-Littlewood-Sobolev and Stein-Weiss bilinear forms.

    int int |x|^alpha f(x) |y^{-1}x|^lambda h(y) |y|^beta dx dy
        >= C ||f||_{q'} ||h||_p,      1/p' + 1/q + (alpha+beta+lambda)/Q = 0

with ``q <= p < 0`` (strict ``q < p`` and ``alpha = beta = 0`` for HLS).

Two mechanisms make the left side infinite for *every* admissible pair:

* ``lambda <= -Q``: the kernel is not integrable across the diagonal;
* ``(beta+lambda)p' + Q >= 0``: for any ``h`` with ``int h^p < inf`` the
  reverse Hoelder inequality on ``{|y| > 2|x|}`` forces the ``y``-integral to
  diverge at infinity.

In both regimes the inequality holds trivially and the report carries a
divergence certificate plus truncation evidence instead of a number.
Otherwise the form is estimated by importance-sampled Monte Carlo on the
group, and on the real line also by deterministic quadrature.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .closedform import (BOUNDARY, PowerParams, hardy_constant_conjugate,
                         hardy_constant_direct)
from .errors import (DegenerateSampler, DivergentIntegral, InadmissibleExponent,
                     InvalidParams, RevHardyError)
from .exponents import ExponentPair, lower_factor, make_exponents
from .hardy import (PiecewisePowerFunction, RadialFunction, RadialWeight, WeightPair,
                    _breaks, _combine, _h, _polar, _shrink, admissible_window,
                    conjugate_hardy_ratio, hardy_ratio, radial_integral)
from .montecarlo import MCEstimate, PairSampler, RadialPowerSampler, make_rng, mc_pair_integrate
from .quadrature import EndpointExponents, QuadratureConfig, integrate_semiaxis, scale_free
from .spaces import PolarSpace, random_points

BALANCE_TOL = 1e-12
DEFAULT_MC_SAMPLES = 200_000
MC_SIGMAS = 3.0

DIAGONAL_NOTE = (
    "kernel exponent lambda <= -Q: the kernel is not integrable across the "
    "diagonal, so the left side is +infinity for every admissible pair; the "
    "inequality holds trivially and no principal-value or truncated reading is attempted"
)
TAIL_NOTE = (
    "(beta+lambda)p' + Q >= 0: for every h with int h^p < infinity the "
    "y-integral diverges at infinity (reverse Hoelder on |y| > 2|x|), so the "
    "left side is +infinity and the inequality holds trivially"
)
HLS_STRICT_NOTE = (
    "the HLS form requires strict q < p while the weighted form allows q <= p; "
    "each hypothesis is enforced as stated"
)


@dataclass(frozen=True)
class SWParams:
    Q: float
    sphere_area: float
    exps: ExponentPair
    alpha: float
    beta: float
    lam: float
    case_a: bool
    case_b: bool
    triangle_constant: float = 1.0

    @property
    def active_case(self) -> str:
        return "a" if self.case_a else "b"

    @property
    def regime(self) -> str:
        """``full`` when the kernel is locally integrable, else ``trivial``."""
        return "full" if self.lam > -self.Q else "trivial"

    @property
    def tail_exponent(self) -> float:
        """``(beta+lambda)p' + Q``; non-negative means a divergent y-tail."""
        return (self.beta + self.lam) * self.exps.p_conj + self.Q

    @property
    def diagonal_divergent(self) -> bool:
        return self.lam <= -self.Q

    @property
    def tail_divergent(self) -> bool:
        return self.tail_exponent >= 0

    @property
    def lhs_infinite(self) -> bool:
        return self.diagonal_divergent or self.tail_divergent

    def to_dict(self) -> dict:
        d = asdict(self)
        d["exps"] = self.exps.to_dict()
        d.update(active_case=self.active_case, regime=self.regime,
                 tail_exponent=self.tail_exponent,
                 diagonal_divergent=self.diagonal_divergent,
                 tail_divergent=self.tail_divergent)
        return d


def _space_constants(space):
    C = space.group.triangle_constant if space.group is not None else 1.0
    return space.Q, space.sphere_area, C


def hls_param_check(space, p: float, q: float, lam: float | None = None) -> dict:
    """HLS hypotheses: ``q < p < 0`` strictly, ``lambda = -Q(1/p' + 1/q) < 0``."""
    Q = space.Q if isinstance(space, PolarSpace) else float(space)
    if not q < p < 0:
        raise InvalidParams(f"HLS needs q < p < 0 strictly, got p={p}, q={q}")
    e = make_exponents(p, q)
    derived = -Q * (1.0 / e.p_conj + 1.0 / e.q)
    if lam is not None and abs(lam - derived) > BALANCE_TOL * max(1.0, abs(derived)):
        raise InvalidParams(f"lambda={lam} violates balance (needs {derived})")
    if not derived < 0:
        raise InvalidParams(f"derived lambda={derived} is not negative")
    return {"valid": True, "derived_lambda": derived, "diagonal_divergent": derived <= -Q}


def sw_param_check(space: PolarSpace, p: float, q: float, alpha: float, beta: float,
                   lam: float | None = None) -> SWParams:
    """Solve ``lambda`` from the balance condition and record cases (a)/(b)."""
    e = make_exponents(p, q)
    Q, S, C = _space_constants(space)
    derived = -Q * (1.0 / e.p_conj + 1.0 / e.q) - alpha - beta
    if lam is not None and abs(lam - derived) > BALANCE_TOL * max(1.0, abs(derived)):
        raise InvalidParams(f"lambda={lam} violates balance (needs {derived})")
    if not derived < 0:
        raise InvalidParams(f"derived lambda={derived:g} must be negative")
    case_a = beta > -Q / e.p_conj
    case_b = alpha > -Q / e.q
    if not (case_a or case_b):
        raise InvalidParams(
            f"neither beta > -Q/p' ({beta:g} vs {-Q / e.p_conj:g}) nor alpha > -Q/q "
            f"({alpha:g} vs {-Q / e.q:g}) holds")
    return SWParams(Q, S, e, float(alpha), float(beta), float(derived), case_a, case_b, C)


def hls_params(space: PolarSpace, p: float, q: float) -> SWParams:
    hls_param_check(space, p, q)
    return sw_param_check(space, p, q, 0.0, 0.0)


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------

def sw_lower_constant(params: SWParams, case: str | None = None) -> float:
    """Constructive lower constant ``(2C)^lambda * factor * D`` of the chosen case.

    Case (a) restricts to ``|y| < |x|`` where ``|y^{-1}x| <= 2C|x|`` and meets a
    Hardy inequality with ``u = |x|^{(alpha+lambda)q}``, ``v = |x|^{-beta p}``;
    case (b) restricts to ``|y| > |x|`` and meets the conjugate inequality with
    ``u = |x|^{alpha q}``, ``v = |x|^{-(beta+lambda)p}``.
    """
    case = case or params.active_case
    e, Q, S = params.exps, params.Q, params.sphere_area
    pc, q, lam = e.p_conj, e.q, params.lam
    if case == "a":
        a = Q + (params.alpha + lam) * q
        b = params.beta * pc + Q
        if a <= BOUNDARY or b <= BOUNDARY:
            raise InadmissibleExponent(
                f"case (a) needs Q+(alpha+lambda)q > 0 and beta p'+Q > 0, got {a:g}, {b:g}")
    elif case == "b":
        a = Q + params.alpha * q
        b = (params.beta + lam) * pc + Q
        if a >= -BOUNDARY or b >= -BOUNDARY:
            raise InadmissibleExponent(
                f"case (b) needs Q+alpha q < 0 and (beta+lambda)p'+Q < 0, got {a:g}, {b:g}")
    else:
        raise ValueError(f"case must be 'a' or 'b', got {case!r}")
    D = (S / abs(a)) ** (1.0 / q) * (S / abs(b)) ** (1.0 / pc)
    return (2.0 * params.triangle_constant) ** lam * lower_factor(e) * D


def lower_constants(params: SWParams) -> dict:
    out = {}
    for case in ("a", "b"):
        try:
            out[case] = sw_lower_constant(params, case)
        except InadmissibleExponent:
            pass
    return out


def reduced_weights(params: SWParams, case: str) -> tuple[WeightPair, float]:
    """Hardy weights of the reduced step and the exponent shift ``z = h |y|^shift``."""
    p, q = params.exps.p, params.exps.q
    if case == "a":
        return (WeightPair(RadialWeight.power((params.alpha + params.lam) * q),
                           RadialWeight.power(-params.beta * p)), params.beta)
    return (WeightPair(RadialWeight.power(params.alpha * q),
                       RadialWeight.power(-(params.beta + params.lam) * p)),
            params.beta + params.lam)


# ---------------------------------------------------------------------------
# quasi-norms on the right-hand side
# ---------------------------------------------------------------------------

def counter_norm(f, e: float, space: PolarSpace, config: QuadratureConfig | None = None,
                 r_hi: float = math.inf) -> float:
    """``(int f^e)^{1/e}`` for ``e = q'`` in (0, 1) or ``e = p < 0``."""
    if e < 0:
        probe = np.logspace(-6, 6, 241)
        probe = probe[probe < r_hi]
        if np.any(~(np.asarray(f(probe)) > 0)):
            raise DivergentIntegral("f vanishes on a set of positive measure, so int f^e = inf for e < 0")
    I = radial_integral(space, [(e, f)], config, r_hi)
    if not (I > 0 and math.isfinite(I)):
        raise DivergentIntegral(f"int f^{e:g} is not finite and positive")
    return I ** (1.0 / e)


# ---------------------------------------------------------------------------
# exponent bookkeeping for power-tailed pairs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DivergentFlag:
    reason: str
    exponent: float | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {"divergent": True, "reason": self.reason, "exponent": self.exponent,
                "detail": self.detail}


def _exps(obj):
    h = obj.hints
    if h.at_zero is None or h.at_inf is None:
        raise DegenerateSampler("functions must declare power-law exponents at 0 and infinity")
    return h.at_zero, h.at_inf


def pair_exponents(params: SWParams, f, h, kernel: str = "riesz") -> dict:
    """Polar exponents (including ``r^{Q-1}``) of the ``x``- and ``y``-marginals
    of the integrand, plus a divergence reason if any end is not integrable."""
    Q, al, be = params.Q, params.alpha, params.beta
    lam = params.lam if kernel == "riesz" else 0.0
    a0, ai = _exps(f)
    b0, bi = _exps(h)
    if kernel == "riesz":
        if params.diagonal_divergent:
            return {"divergent": DivergentFlag("diagonal", lam + Q, DIAGONAL_NOTE)}
        # I(x) = int |y^{-1}x|^lam h |y|^beta dy and J(y) = int |x|^alpha f K dx
        checks = [("y near 0", be + b0 + Q, +1), ("y at infinity", lam + be + bi + Q, -1),
                  ("x near 0", al + a0 + Q, +1), ("x at infinity", lam + al + ai + Q, -1)]
        I0 = min(0.0, lam + be + b0 + Q)
        Ii = lam + max(0.0, be + bi + Q)
        J0 = min(0.0, lam + al + a0 + Q)
        Ji = lam + max(0.0, al + ai + Q)
    else:
        checks = [("y near 0", be + b0 + Q, +1), ("y at infinity", be + bi + Q, -1),
                  ("x near 0", al + a0 + Q, +1), ("x at infinity", al + ai + Q, -1)]
        I0 = Ii = J0 = Ji = 0.0
    x0 = al + a0 + I0 + Q - 1.0
    xi = al + ai + Ii + Q - 1.0
    y0 = be + b0 + J0 + Q - 1.0
    yi = be + bi + Ji + Q - 1.0
    out = {"x": (x0, xi), "y": (y0, yi), "divergent": None}
    # partial integrals that are infinite pointwise make everything infinite
    for name, e, sign in checks:
        if kernel != "riesz" and name.startswith("x"):
            continue
        if (sign > 0 and e <= 0) or (sign < 0 and e >= 0):
            if kernel == "riesz" and name == "y at infinity" and params.tail_divergent:
                out["divergent"] = DivergentFlag("y_tail", params.tail_exponent, TAIL_NOTE)
            else:
                out["divergent"] = DivergentFlag("pair", e, f"inner integral diverges ({name})")
            return out
    for name, (e0, ei) in (("x", (x0, xi)), ("y", (y0, yi))):
        if e0 <= -1.0 or ei >= -1.0:
            out["divergent"] = DivergentFlag("pair", e0 if e0 <= -1 else ei,
                                             f"{name}-marginal not integrable")
            return out
    return out


def _fatten_zero(e):
    return e - min(0.5, 0.5 * (e + 1.0))


def _fatten_inf(e):
    return e + min(0.5, 0.5 * (-1.0 - e))


def default_sampler(params: SWParams, f, h, kernel: str = "riesz",
                    diag_weight: float = 0.3) -> PairSampler:
    """Product design from the marginal exponents, plus a diagonal component
    ``y = x . w`` with ``|w| / |x|`` distributed as ``r^{lambda+Q-1}`` on (0, 1]."""
    ex = pair_exponents(params, f, h, kernel)
    if ex["divergent"] is not None:
        raise DegenerateSampler(f"integrand is not integrable: {ex['divergent'].detail}")
    xs = RadialPowerSampler(_fatten_zero(ex["x"][0]), _fatten_inf(ex["x"][1]))
    ys = RadialPowerSampler(_fatten_zero(ex["y"][0]), _fatten_inf(ex["y"][1]))
    if kernel != "riesz":
        return PairSampler(xs, ys)
    e = params.lam + params.Q - 1.0
    ds = RadialPowerSampler(e, e, scale=1.0, r_max=1.0)
    return PairSampler(xs, ys, diag_weight, ds, diag_relative=True)


# ---------------------------------------------------------------------------
# the bilinear form
# ---------------------------------------------------------------------------

def _integrand(space, f, h, params, kernel="riesz", eps=0.0, y_max=math.inf, x_max=math.inf):
    group = space.group
    al, be, lam = params.alpha, params.beta, params.lam

    def g(x, y):
        rx = group.quasi_norm(x)
        ry = group.quasi_norm(y)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            acc = al * np.log(rx) + f.log(rx) + be * np.log(ry) + h.log(ry)
            if kernel == "riesz":
                kn = group.kernel_norm(x, y)
                acc = acc + lam * np.log(kn)
                keep = kn > eps
            else:
                keep = np.ones(rx.shape, bool)
            out = np.exp(acc)
        keep &= (ry <= y_max) & (rx <= x_max)
        return np.where(keep & np.isfinite(out), out, 0.0)
    return g


def sw_form(space: PolarSpace, f, h, params: SWParams, n_samples: int = DEFAULT_MC_SAMPLES,
            seed: int = 0, stream: int = 0, kernel: str = "riesz",
            sampler: PairSampler | None = None):
    """Monte Carlo estimate of the left side, or a :class:`DivergentFlag`.

    ``kernel="constant"`` replaces the kernel by 1 (a separable diagnostic).
    """
    if space.group is None:
        raise InvalidParams(f"{space.name} has no group structure for the bilinear form")
    if kernel == "riesz" and params.diagonal_divergent:
        return DivergentFlag("diagonal", params.lam + params.Q, DIAGONAL_NOTE)
    if kernel == "riesz" and params.tail_divergent:
        return DivergentFlag("y_tail", params.tail_exponent, TAIL_NOTE)
    ex = pair_exponents(params, f, h, kernel)
    if ex["divergent"] is not None:
        return ex["divergent"]
    sampler = sampler or default_sampler(params, f, h, kernel)
    return mc_pair_integrate(space, _integrand(space, f, h, params, kernel), sampler,
                             n_samples, seed, stream)


# ---------------------------------------------------------------------------
# deterministic evaluation on the real line
# ---------------------------------------------------------------------------

def _line_check(space):
    if not (space.group is not None and space.group.dim == 1):
        raise InvalidParams("deterministic bilinear quadrature is only available on the real line")


def line_inner_log(x: float, h, params: SWParams, region: str = "full",
                   shift: float | None = None, kernel_power: float | None = None,
                   config: QuadratureConfig | None = None) -> float:
    """``log`` of ``int_{region} |x-y|^lambda h(|y|) |y|^beta dy`` on the real
    line, ``x > 0``.

    ``region`` is ``full``, ``ball`` (``|y| < x``) or ``complement``.  The
    integral is taken in ``sigma = |y| / x`` with ``h`` normalised by ``h(x)``,
    so any ``x`` in floating range works; the diagonal singularity is removed
    by the substitution ``w = |1 - sigma|``.  Raises :class:`DivergentIntegral`
    when the y-tail diverges.
    """
    cfg = scale_free(config or QuadratureConfig(rel_tol=1e-10))
    lam = params.lam if kernel_power is None else kernel_power
    be = params.beta if shift is None else shift
    b0, bi = _exps(h)
    lhx = float(h.log(np.array([x]))[0])
    Rh = tuple(r / x for r in getattr(h, "breakpoints", ()))

    lx = math.log(x)

    def hs_log(sig):
        with np.errstate(divide="ignore"):
            ls = np.log(sig)
        return h.log_at_log(lx + ls) - lhx + be * ls

    def near(sign):
        def g(w):
            with np.errstate(divide="ignore", over="ignore"):
                return np.exp(hs_log(1.0 + sign * w) + lam * np.log(w))
        return g

    def far(sig):
        with np.errstate(divide="ignore", over="ignore"):
            return np.exp(hs_log(sig) + lam * np.log(np.abs(sig - 1.0)))

    def mirror(sig):
        with np.errstate(divide="ignore", over="ignore"):
            return np.exp(hs_log(sig) + lam * np.log1p(sig))

    total = 0.0
    if region in ("full", "ball"):
        total += integrate_semiaxis(far, cfg, EndpointExponents(b0 + be, None), 0.0, 0.5, Rh)
        total += integrate_semiaxis(near(-1), cfg, EndpointExponents(lam, None), 0.0, 0.5,
                                    tuple(1.0 - r for r in Rh))
        total += integrate_semiaxis(mirror, cfg, EndpointExponents(b0 + be, None), 0.0, 1.0, Rh)
    if region in ("full", "complement"):
        total += integrate_semiaxis(near(+1), cfg, EndpointExponents(lam, None), 0.0, 1.0,
                                    tuple(r - 1.0 for r in Rh))
        tail = EndpointExponents(None, bi + be + lam)
        total += integrate_semiaxis(far, cfg, tail, 2.0, math.inf, Rh)
        total += integrate_semiaxis(mirror, cfg, tail, 1.0, math.inf, Rh)
    return lhx + (1.0 + be + lam) * math.log(x) + math.log(total)


def line_inner_integral(x: float, h, params: SWParams, region: str = "full",
                        shift: float | None = None, kernel_power: float | None = None,
                        config: QuadratureConfig | None = None) -> float:
    """The inner integral itself; see :func:`line_inner_log`."""
    return math.exp(line_inner_log(x, h, params, region, shift, kernel_power, config))


@dataclass
class LineInner:
    """Spline of ``log I(x)`` in ``log x`` with exact evaluation off the grid."""

    h: object
    params: SWParams
    region: str = "full"
    shift: float | None = None
    lo: float = 1e-8
    hi: float = 1e8
    per_decade: int = 8
    config: QuadratureConfig | None = None
    _spline: CubicSpline | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        n = int(round(math.log10(self.hi / self.lo) * self.per_decade)) + 1
        xs = np.logspace(math.log10(self.lo), math.log10(self.hi), n)
        vals = np.array([self.exact_log(x) for x in xs])
        self._spline = CubicSpline(np.log(xs), vals)

    def exact_log(self, x: float) -> float:
        return line_inner_log(float(x), self.h, self.params, self.region, self.shift,
                              config=self.config)

    def log(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty_like(x)
        inside = (x >= self.lo) & (x <= self.hi)
        out[inside] = self._spline(np.log(x[inside]))
        for i in np.flatnonzero(~inside):
            out[i] = self.exact_log(x[i])
        return out


def line_sw_form(f, h, params: SWParams, config: QuadratureConfig | None = None,
                 inner: LineInner | None = None) -> float:
    """Deterministic left side on the real line (|S| = 2)."""
    if params.diagonal_divergent or params.tail_divergent:
        return math.inf
    inner = inner or LineInner(h, params)
    a0, ai = _exps(f)
    ex = pair_exponents(params, f, h)
    if ex["divergent"] is not None:
        return math.inf
    al = params.alpha

    def g(x):
        with np.errstate(divide="ignore", over="ignore"):
            return 2.0 * np.exp(al * np.log(x) + f.log(x) + inner.log(x))

    cfg = scale_free(config or QuadratureConfig(rel_tol=1e-9))
    return integrate_semiaxis(g, cfg, EndpointExponents(*ex["x"]), 0.0, math.inf,
                              tuple(getattr(f, "breakpoints", ())) + (inner.lo, inner.hi))


# ---------------------------------------------------------------------------
# admissible pairs
# ---------------------------------------------------------------------------

def pair_window(params: SWParams) -> dict:
    """Exponent windows for ``h`` making ``int h^p`` and the y-integral finite."""
    Q, p, be, lam = params.Q, params.exps.p, params.beta, params.lam
    hp = Q / abs(p)
    lo0 = -be - Q
    hi_inf = -lam - be - Q
    return {"b0": (lo0, hp), "b_inf": (hp, hi_inf if hi_inf > hp else None)}


def f_window(params: SWParams, b0: float, bi: float) -> dict:
    """Exponent windows for ``f`` given the exponents of ``h``."""
    Q, al, be, lam = params.Q, params.alpha, params.beta, params.lam
    qc = params.exps.q_conj
    e0 = min(0.0, lam + be + b0 + Q)
    ei = lam + max(0.0, be + bi + Q)
    return {"a0": (max(-Q / qc, -al - e0 - Q), None),
            "a_inf": (None, min(-Q / qc, -al - ei - Q))}


def generate_pairs(params: SWParams, count: int = 10, seed: int = 0,
                   stream: int = 1) -> list[tuple[PiecewisePowerFunction, PiecewisePowerFunction]]:
    """Seeded ``(f, h)`` pairs inside the admissible windows.

    When the y-tail diverges for every ``h`` the ``h``-window at infinity is
    unbounded above, and ``h`` is drawn from the reduced Hardy window instead.
    """
    rng = make_rng(seed, stream)
    win = pair_window(params)
    if params.tail_divergent:
        hw = h_family_window(params, params.active_case)
        w0, wi = _shrink(*hw["s0"]), _shrink(*hw["s_inf"])
    else:
        w0, wi = _shrink(*win["b0"]), _shrink(*win["b_inf"])
    if w0 is None or wi is None:
        raise InvalidParams(f"empty admissible window for h: {win}")
    out = []
    for _ in range(count):
        b0, bi = rng.uniform(*w0), rng.uniform(*wi)
        fw = f_window(params, b0, bi)
        fa0, fai = _shrink(*fw["a0"]), _shrink(*fw["a_inf"])
        if fa0 is None or fai is None:
            raise InvalidParams(f"empty admissible window for f: {fw}")
        a0, ai = rng.uniform(*fa0), rng.uniform(*fai)
        Rf, Rh = np.exp(rng.uniform(math.log(0.5), math.log(2.0), 2))
        out.append((PiecewisePowerFunction(float(a0), float(ai), float(Rf)),
                    PiecewisePowerFunction(float(b0), float(bi), float(Rh))))
    return out


def h_family_window(params: SWParams, case: str) -> dict:
    """Window for ``h`` whose substituted ``z`` is admissible for the reduced
    Hardy step, intersected with ``int h^p < inf``."""
    w, shift = reduced_weights(params, case)
    win = admissible_window(params.Q, w.u.exponent, w.v.exponent, params.exps,
                            conjugate=(case == "b"))

    def move(iv):
        lo, hi = iv
        return (None if lo is None else lo - shift, None if hi is None else hi - shift)
    hp = params.Q / abs(params.exps.p)
    s0, si = move(win["s0"]), move(win["s_inf"])
    s0 = (s0[0], hp if s0[1] is None else min(s0[1], hp))
    si = (hp if si[0] is None else max(si[0], hp), si[1])
    if not params.tail_divergent:
        # keep the full y-integral finite too, so every chain step is non-trivial
        pw = pair_window(params)
        s0 = (_max_opt(s0[0], pw["b0"][0]), s0[1])
        si = (si[0], _min_opt(si[1], pw["b_inf"][1]))
    return {"s0": s0, "s_inf": si}


def _max_opt(a, b):
    return b if a is None else a if b is None else max(a, b)


def _min_opt(a, b):
    return b if a is None else a if b is None else min(a, b)


def generate_h_family(params: SWParams, count: int = 20, seed: int = 0,
                      case: str | None = None, stream: int = 2) -> list[PiecewisePowerFunction]:
    case = case or params.active_case
    win = h_family_window(params, case)
    w0, wi = _shrink(*win["s0"]), _shrink(*win["s_inf"])
    if w0 is None or wi is None:
        raise InvalidParams(f"empty admissible window for h: {win}")
    rng = make_rng(seed, stream)
    s0 = rng.uniform(*w0, count)
    si = rng.uniform(*wi, count)
    R = np.exp(rng.uniform(math.log(0.5), math.log(2.0), count))
    return [PiecewisePowerFunction(float(a), float(b), float(c)) for a, b, c in zip(s0, si, R)]


# ---------------------------------------------------------------------------
# divergence evidence
# ---------------------------------------------------------------------------

def divergence_evidence(space: PolarSpace, f, h, params: SWParams, kind: str,
                        n_samples: int = 100_000, seed: int = 0, levels: int = 4,
                        box: float = 4.0) -> dict:
    """Truncated estimates that grow without bound as the truncation is removed.

    ``kind="diagonal"`` cuts ``|y^{-1}x| > eps_k`` with ``eps_k = 4^{-k}/4``
    inside ``|x|, |y| <= box``; ``kind="y_tail"`` cuts ``|y| <= 10^{k+1}``.
    ``increasing`` requires every step to exceed three combined standard errors.
    """
    Q, lam = params.Q, params.lam
    a0, ai = _exps(f)
    b0, bi = _exps(h)
    ests, cuts = [], []
    for k in range(levels):
        if kind == "diagonal":
            eps = 0.25 * 4.0 ** (-k)
            xs = RadialPowerSampler(max(params.alpha + a0 + Q - 1, -0.5), 0.0, 1.0, r_max=box)
            ys = RadialPowerSampler(max(params.beta + b0 + Q - 1, -0.5), 0.0, 1.0, r_max=box)
            e = lam + Q - 1.0
            ds = RadialPowerSampler(e, e, scale=2 * box, r_min=eps, r_max=2 * box)
            sampler = PairSampler(xs, ys, 0.5, ds)
            g = _integrand(space, f, h, params, eps=eps, y_max=box, x_max=box)
            cuts.append(eps)
        elif kind == "y_tail":
            R = 10.0 ** (k + 1)
            ex_y0 = params.beta + b0 + min(0.0, lam + params.alpha + a0 + Q) + Q - 1
            ex_yi = params.beta + bi + lam + Q - 1
            ex_x0 = params.alpha + a0 + min(0.0, lam + params.beta + b0 + Q) + Q - 1
            ex_xi = params.alpha + ai + lam + Q - 1
            xs = RadialPowerSampler(_fatten_zero(ex_x0), min(_fatten_inf(ex_xi), -1.05))
            ys = RadialPowerSampler(_fatten_zero(ex_y0), ex_yi, 1.0, r_max=R)
            e = lam + Q - 1.0
            ds = RadialPowerSampler(e, e, 1.0, r_max=1.0)
            sampler = PairSampler(xs, ys, 0.3, ds, diag_relative=True)
            g = _integrand(space, f, h, params, y_max=R)
            cuts.append(R)
        else:
            raise ValueError(f"unknown divergence kind {kind!r}")
        ests.append(mc_pair_integrate(space, g, sampler, n_samples, seed, stream=100 + k))
    steps = []
    for a, b in zip(ests[:-1], ests[1:]):
        sig = math.hypot(a.std_error, b.std_error)
        steps.append(bool(b.mean - a.mean > MC_SIGMAS * sig))
    return {"kind": kind, "cutoffs": cuts,
            "estimates": [e.to_dict() for e in ests],
            "growth": [b.mean / a.mean for a, b in zip(ests[:-1], ests[1:])],
            "increasing": all(steps)}


# ---------------------------------------------------------------------------
# proof-chain checks
# ---------------------------------------------------------------------------

def _step(name, holds, **detail):
    return {"step": name, "holds": None if holds is None else bool(holds), **detail}


def chain_check(space: PolarSpace, h, params: SWParams, case: str | None = None,
                f=None, radii: Sequence[float] | None = None, n_pairs: int = 10_000,
                seed: int = 0, config: QuadratureConfig | None = None) -> list[dict]:
    """Check every inequality of the reduction from the bilinear form to a
    Hardy inequality, on one ``h`` (and one ``f`` for the first step).

    Steps needing radial inner integrals are evaluated only on the real line;
    elsewhere they are reported with ``holds=None``.
    """
    case = case or params.active_case
    lower = sw_lower_constant(params, case)  # raises for an inadmissible case
    e = params.exps
    lam, C = params.lam, params.triangle_constant
    radii = np.logspace(-2, 2, 12) if radii is None else np.asarray(radii, float)
    steps = []
    line = space.group is not None and space.group.dim == 1
    weights, shift = reduced_weights(params, case)
    z = _shifted(h, shift)

    # weight translation: int z^p |y|^{-shift p} == int h^p
    hp = radial_integral(space, [(e.p, h)], config)
    zp = radial_integral(space, [(e.p, z), (1.0, weights.v)], config)
    steps.append(_step("weight_translation", abs(zp - hp) <= 1e-8 * abs(hp),
                       int_h_p=hp, int_z_p_v=zp))

    # pointwise kernel comparison on sampled pairs
    rng = make_rng(seed, 7)
    g = space.group
    x = random_points(g, n_pairs, rng)
    y = random_points(g, n_pairs, rng)
    nx, ny = g.quasi_norm(x), g.quasi_norm(y)
    if case == "a":
        sel = ny <= nx
        bound = (2.0 * C * nx) ** lam
    else:
        sel = ny >= nx
        bound = (2.0 * C * ny) ** lam
    K = g.kernel_norm(x, y) ** lam
    bad = int(np.sum(sel & (K < bound * (1 - 1e-12))))
    steps.append(_step("kernel_bound", bad == 0, pairs=int(sel.sum()), violations=bad))

    # inner integral comparisons on a radius grid (real line only)
    region = "ball" if case == "a" else "complement"
    if line:
        rows = []
        ok_restrict = ok_kernel = True
        for r in radii:
            try:
                full = line_inner_integral(r, h, params, "full", config=config)
            except DivergentIntegral:
                full = math.inf
            part = line_inner_integral(r, h, params, region, config=config)
            if case == "a":
                zint = radial_integral(space, [(1.0, z)], config, r_hi=r)
                kb = (2.0 * C * r) ** lam * zint
            else:
                zint = _complement_integral(space, z, r, config)
                kb = (2.0 * C) ** lam * zint
            ok_restrict &= full >= part and (full ** e.q if math.isfinite(full) else 0.0) <= part ** e.q
            ok_kernel &= part >= kb * (1 - 1e-9)
            rows.append({"r": float(r), "full": full, "restricted": part, "kernel_bound": kb})
        steps.append(_step("ball_restriction" if case == "a" else "complement_restriction",
                           ok_restrict, rows=rows))
        steps.append(_step("kernel_integrated", ok_kernel))
    else:
        steps.append(_step("ball_restriction" if case == "a" else "complement_restriction", None,
                           note="inner integrals are only tabulated on the real line"))
        steps.append(_step("kernel_integrated", None,
                           note="inner integrals are only tabulated on the real line"))

    # reduced Hardy inequality for z with the substituted weights
    ratio_fn = hardy_ratio if case == "a" else conjugate_hardy_ratio
    pp = PowerParams(params.Q, params.sphere_area, weights.u.exponent, weights.v.exponent, e,
                     "direct" if case == "a" else "conjugate")
    const = (hardy_constant_direct if case == "a" else hardy_constant_conjugate)(pp)
    rr = ratio_fn(space, z, weights, e, config)
    steps.append(_step("reduced_hardy", rr >= const["c_lower"] * (1 - 1e-6),
                       ratio=rr, c_lower=const["c_lower"], D=const["D"]))

    # reverse Hoelder reduction in x (needs f and the full inner integral)
    if line and f is not None:
        try:
            line_inner_log(1.0, h, params, config=config)
            infinite = params.lhs_infinite
        except DivergentIntegral:
            infinite = True
        if infinite:
            steps.append(_step("reverse_holder_reduction", True, lhs=math.inf, rhs=math.inf,
                               note="both sides are +infinity"))
        else:
            inner = LineInner(h, params, config=config)
            lhs = line_sw_form(f, h, params, config, inner)
            red = _reduced_x_integral(params, inner, config)
            rhs = red * counter_norm(f, e.q_conj, space, config)
            steps.append(_step("reverse_holder_reduction", lhs >= rhs * (1 - 1e-8),
                               lhs=lhs, rhs=rhs))
            steps.append(_step("end_to_end", lhs >= lower * counter_norm(f, e.q_conj, space, config)
                               * counter_norm(h, e.p, space, config), lhs=lhs, lower=lower))
    else:
        steps.append(_step("reverse_holder_reduction", None,
                           note="needs f and the real-line inner integral"))
    return steps


def _shifted(h, shift):
    """``z(y) = h(y) |y|^shift`` as a piecewise power (or generic radial function)."""
    if isinstance(h, PiecewisePowerFunction):
        R = h.R
        return PiecewisePowerFunction(h.s0 + shift, h.s_inf + shift, R, h.scale)
    return RadialFunction(lambda r: h(r) * np.asarray(r) ** shift,
                          None if h.hints.at_zero is None else h.hints.at_zero + shift,
                          None if h.hints.at_inf is None else h.hints.at_inf + shift,
                          tuple(getattr(h, "breakpoints", ())),
                          lambda r: h.log(r) + shift * np.log(r))


def _complement_integral(space, z, r, config):
    g = _polar(space, (1.0, z))
    return integrate_semiaxis(g, scale_free(config), _combine(space, (1.0, _h(z))), r,
                              math.inf, _breaks(z))


def _reduced_x_integral(params, inner: LineInner, config):
    """``( int (|x|^alpha I(x))^q dx )^{1/q}`` on the real line."""
    q, al = params.exps.q, params.alpha

    def g(x):
        with np.errstate(divide="ignore", over="ignore"):
            return 2.0 * np.exp(q * (al * np.log(x) + inner.log(x)))
    cfg = scale_free(config or QuadratureConfig(rel_tol=1e-9))
    return integrate_semiaxis(g, cfg, None, 0.0, math.inf, (inner.lo, inner.hi)) ** (1.0 / q)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass
class BilinearReport:
    params: SWParams
    constructive_lower: float
    lower_by_case: dict
    pairs: list[dict]
    chain_checks: list[list[dict]]
    evidence: dict | None
    verdict: str
    seeds: list[int]
    warnings: list[str] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)

    @property
    def min_ratio(self) -> float:
        vals = [s["ratio"] for p in self.pairs for s in p["runs"]]
        return min(vals, default=math.nan)

    def to_dict(self) -> dict:
        return {"params": self.params.to_dict(),
                "constructive_lower": self.constructive_lower,
                "lower_by_case": self.lower_by_case,
                "pairs": self.pairs, "min_ratio": self.min_ratio,
                "chain_checks": self.chain_checks, "evidence": self.evidence,
                "verdict": self.verdict, "seeds": self.seeds,
                "diagnostics": list(self.diagnostics)}


def _lhs_dict(lhs):
    return lhs.to_dict() if isinstance(lhs, (MCEstimate, DivergentFlag)) else lhs


def verify_sw(space: PolarSpace, params: SWParams, pairs: Sequence | None = None,
              n_samples: int = DEFAULT_MC_SAMPLES, seed: int = 0, pair_count: int = 10,
              chain_count: int = 0, evidence_samples: int = 100_000,
              config: QuadratureConfig | None = None) -> BilinearReport:
    """Ratios ``lhs / (||f||_{q'} ||h||_p)`` against the constructive lower constant.

    Every pair is estimated under seeds ``seed`` and ``seed + 1``; a pair holds
    for a seed when its ratio is at least ``lower * (1 - 3 * relative error)``.
    The two seeds must agree, otherwise the verdict is ``inconclusive``.
    """
    e = params.exps
    lowers = lower_constants(params)
    if not lowers:
        raise InvalidParams("no case admits a constructive lower constant")
    lower = max(lowers.values())
    seeds = [seed, seed + 1]
    warnings, diags = [], []
    if params.diagonal_divergent:
        warnings.append(DIAGONAL_NOTE)
    if params.tail_divergent:
        warnings.append(TAIL_NOTE)
    if pairs is None:
        pairs = generate_pairs(params, pair_count, seed)
    rows = []
    per_seed = {s: [] for s in seeds}
    for i, (f, h) in enumerate(pairs):
        fn = counter_norm(f, e.q_conj, space, config)
        hn = counter_norm(h, e.p, space, config)
        runs = []
        for s in seeds:
            lhs = sw_form(space, f, h, params, n_samples, s, stream=i)
            if isinstance(lhs, DivergentFlag):
                ratio, rel, holds = math.inf, 0.0, True
                if lhs.reason == "pair":
                    diags.append(f"pair {i}: {lhs.detail}")
            else:
                ratio = lhs.mean / (fn * hn)
                rel = lhs.rel_error
                holds = ratio >= lower * (1.0 - MC_SIGMAS * rel)
            per_seed[s].append(holds)
            runs.append({"seed": s, "lhs": _lhs_dict(lhs), "ratio": ratio,
                         "rel_std_error": rel, "holds": bool(holds)})
        rows.append({"f": f.describe(), "h": h.describe(), "norm_f_qconj": fn,
                     "norm_h_p": hn, "runs": runs})
    evidence = None
    if params.lhs_infinite:
        kind = "diagonal" if params.diagonal_divergent else "y_tail"
        f0, h0 = pairs[0]
        try:
            evidence = divergence_evidence(space, f0, h0, params, kind, evidence_samples, seed)
        except RevHardyError as exc:
            diags.append(f"divergence evidence unavailable: {exc}")
        verdict = "trivially_holds"
    else:
        seed_verdicts = {s: ("verified" if all(v) else "violated") for s, v in per_seed.items()}
        if len(set(seed_verdicts.values())) > 1:
            verdict = "inconclusive"
            diags.append(f"seeds disagree: {seed_verdicts}")
        else:
            verdict = seed_verdicts[seeds[0]]
    chains = []
    if chain_count:
        case = params.active_case
        for h in generate_h_family(params, chain_count, seed, case):
            f = pairs[0][0] if pairs else None
            chains.append(chain_check(space, h, params, case, f=f, seed=seed, config=config))
    return BilinearReport(params, lower, lowers, rows, chains, evidence, verdict, seeds,
                          warnings, diags)
