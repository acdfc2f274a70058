"""Deterministic radial quadrature on (0, inf).

Every radial integral in the package goes through :func:`integrate_semiaxis`.
Pieces that touch ``0`` or ``inf`` are mapped to the log variable ``u = ln r``
(which turns the power-law endpoint behaviour ``r**g`` into exponential decay)
and then compactified onto ``[0, 1)``; interior pieces are integrated in ``u``
directly.  All pieces are refined together by a vectorised, locally adaptive
Gauss-Kronrod (7/15) bisection scheme.

:class:`CumulativeIntegral` caches ``F(r) = int_0^r`` (or ``int_r^inf``) of a
radial density on a log grid so that nested Hardy integrals cost one
fixed-order Gauss-Legendre sweep per query.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import DivergentIntegral, NonConvergent

# Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
_XK_HALF = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
])
_WK_HALF = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
])
_WK_CENTER = 0.209482141084727828012999174891714
_WG_HALF = np.array([0.129484966168869693270611432679082,
                     0.279705391489276667901467771423780,
                     0.381830050505118944950369775488975])
_WG_CENTER = 0.417959183673469387755102040816327

_XK = np.concatenate([-_XK_HALF, [0.0], _XK_HALF[::-1]])
_WK = np.concatenate([_WK_HALF, [_WK_CENTER], _WK_HALF[::-1]])
_WG = np.zeros(15)
_WG[[1, 3, 5]] = _WG_HALF
_WG[7] = _WG_CENTER
_WG[[13, 11, 9]] = _WG_HALF

_GL_X, _GL_W = np.polynomial.legendre.leggauss(24)

_EPS = np.finfo(float).eps
# Radii outside this band are treated as the limit point (contribution 0).
_R_MIN = 1e-300
_R_MAX = 1e300


class InfinityTransform(str, Enum):
    ALGEBRAIC = "algebraic"      # tau = t / (1 - t)
    EXPONENTIAL = "exponential"  # tau = -ln(1 - t)


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_subdivisions: int = 2000
    infinity_transform: InfinityTransform = InfinityTransform.ALGEBRAIC

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        object.__setattr__(self, "infinity_transform",
                           InfinityTransform(self.infinity_transform))


DEFAULT_CONFIG = QuadratureConfig()


def scale_free(config: QuadratureConfig | None) -> QuadratureConfig:
    """Copy of ``config`` with a negligible absolute floor.

    Nested integrals (cumulative heads, Hardy layers) can be arbitrarily small
    in absolute terms, so they are controlled by ``rel_tol`` alone.
    """
    cfg = config or DEFAULT_CONFIG
    return replace(cfg, abs_tol=1e-300)


class EndpointExponents(NamedTuple):
    """Declared power-law exponents of an integrand ``g(r) ~ r**e``.

    ``None`` means unknown; the integrator then probes numerically.
    """

    at_zero: float | None = None
    at_inf: float | None = None


# ---------------------------------------------------------------------------
# adaptive core
# ---------------------------------------------------------------------------

def _gk15(f, a, b):
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    x = c[:, None] + h[:, None] * _XK[None, :]
    y = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    if not np.all(np.isfinite(y)):
        raise NonConvergent("integrand is not finite at a quadrature node")
    k = h * (y @ _WK)
    g = h * (y @ _WG)
    kabs = np.abs(h) * (np.abs(y) @ _WK)
    return k, np.abs(k - g), kabs


def _adaptive(f, a, b, rel_tol, abs_tol, max_sub, global_share=False):
    """Locally adaptive GK15 over the initial intervals ``[a_i, b_i]``.

    Returns per-initial-interval integrals and error estimates.  An interval
    is accepted once its error estimate is below ``rel_tol * |I_i|``, its share
    of ``abs_tol`` or the round-off floor.  With ``global_share`` an interval
    may also settle for its width-proportional share of ``rel_tol * |sum I_i|``,
    which stops negligible segments from being resolved to full relative
    accuracy when only the total is wanted.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n0 = a.size
    owner = np.arange(n0)
    total_width = float(np.sum(b - a)) or 1.0
    seg_width = b - a
    seg_width[seg_width == 0] = 1.0
    vals = np.zeros(n0)
    errs = np.zeros(n0)
    k, e, kabs = _gk15(f, a, b)
    n_split = 0
    while True:
        width = b - a
        # running estimate of each initial segment's integral
        seg_est = vals + np.bincount(owner, weights=k, minlength=n0)
        share = np.abs(seg_est[owner]) * width / seg_width[owner]
        floor = abs_tol
        if global_share:
            floor = max(abs_tol, rel_tol * abs(float(seg_est.sum())))
        tol = np.maximum.reduce([rel_tol * np.abs(k),
                                 rel_tol * share,
                                 floor * width / total_width,
                                 50.0 * _EPS * kabs])
        tiny = width <= 64 * _EPS * np.maximum(np.abs(a), np.abs(b))
        ok = (e <= tol) | tiny
        if np.any(ok):
            np.add.at(vals, owner[ok], k[ok])
            np.add.at(errs, owner[ok], e[ok])
        bad = ~ok
        nbad = int(bad.sum())
        if nbad == 0:
            return vals, errs
        n_split += nbad
        if n_split > max_sub + n0:
            raise NonConvergent(
                f"adaptive quadrature exhausted {max_sub} subdivisions "
                f"(remaining error {float(e[bad].sum()):.3g})")
        a_bad, b_bad, own = a[bad], b[bad], owner[bad]
        mid = 0.5 * (a_bad + b_bad)
        a = np.concatenate([a_bad, mid])
        b = np.concatenate([mid, b_bad])
        owner = np.concatenate([own, own])
        k, e, kabs = _gk15(f, a, b)


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------

def _tau(t, kind):
    if kind is InfinityTransform.ALGEBRAIC:
        s = 1.0 - t
        return t / s, 1.0 / (s * s)
    s = 1.0 - t
    return -np.log(s), 1.0 / s


def _eval_masked(g, r):
    """g(r) with radii outside the representable band contributing zero."""
    out = np.zeros_like(r)
    ok = (r > _R_MIN) & (r < _R_MAX)
    if np.any(ok):
        out[ok] = np.asarray(g(r[ok]), dtype=float)
    return out, ok


def _piece_integrand(g, lo, hi, kind):
    """Return (func, a, b) integrating g over [lo, hi] in a smooth variable."""
    if lo > 0 and math.isfinite(hi):
        ul, uh = math.log(lo), math.log(hi)

        def fu(u):
            r = np.exp(u)
            val, ok = _eval_masked(g, r)
            return val * r
        return fu, ul, uh
    if lo == 0 and math.isfinite(hi):
        def f0(t):
            tau, dtau = _tau(t, kind)
            with np.errstate(under="ignore", over="ignore"):
                r = hi * np.exp(-tau)
            val, ok = _eval_masked(g, r)
            with np.errstate(under="ignore", over="ignore", invalid="ignore"):
                out = np.where(ok, val * r * dtau, 0.0)
            return out
        return f0, 0.0, 1.0
    if lo > 0 and math.isinf(hi):
        def finf(t):
            tau, dtau = _tau(t, kind)
            with np.errstate(under="ignore", over="ignore"):
                r = lo * np.exp(tau)
            val, ok = _eval_masked(g, r)
            with np.errstate(under="ignore", over="ignore", invalid="ignore"):
                out = np.where(ok, val * r * dtau, 0.0)
            return out
        return finf, 0.0, 1.0
    raise ValueError(f"bad piece [{lo}, {hi}]")


def _split_points(lo, hi, breakpoints):
    pts = {float(lo), float(hi)}
    for bp in breakpoints:
        bp = float(bp)
        if lo < bp < hi and math.isfinite(bp):
            pts.add(bp)
    pts = sorted(pts)
    if pts[0] == 0.0 and math.isinf(pts[-1]) and len(pts) == 2:
        pts = [0.0, 1.0, math.inf]
    return pts


# ---------------------------------------------------------------------------
# divergence diagnostics
# ---------------------------------------------------------------------------

def probe_exponent(g: Callable, end: str) -> float | None:
    """Estimate the power-law exponent of ``g`` at ``end`` ('zero' or 'inf').

    Returns ``None`` when ``g`` is not strictly positive and finite at the
    probe radii (e.g. compactly supported integrands), or when two successive
    slope estimates disagree.
    """
    rs = np.array([1e-40, 1e-35, 1e-30]) if end == "zero" else np.array([1e30, 1e35, 1e40])
    with np.errstate(all="ignore"):
        vals = np.asarray(g(rs), dtype=float)
    if not (np.all(np.isfinite(vals)) and np.all(vals > 0)):
        return None
    lr, lv = np.log(rs), np.log(vals)
    s1 = (lv[1] - lv[0]) / (lr[1] - lr[0])
    s2 = (lv[2] - lv[1]) / (lr[2] - lr[1])
    if abs(s1 - s2) > 1e-3 * max(1.0, abs(s1)):
        return None
    return float(s2)


def check_divergence(hints: EndpointExponents | None, touches_zero: bool,
                     touches_inf: bool, g: Callable | None = None) -> None:
    """Raise DivergentIntegral when declared or probed exponents diverge."""
    hints = hints or EndpointExponents()
    e0, einf = hints.at_zero, hints.at_inf
    if touches_zero:
        if e0 is None and g is not None:
            e0 = probe_exponent(g, "zero")
        if e0 is not None and e0 <= -1.0 + 1e-9:
            raise DivergentIntegral(
                f"integrand ~ r^{e0:.6g} is not integrable at 0", "zero", e0)
    if touches_inf:
        if einf is None and g is not None:
            einf = probe_exponent(g, "inf")
        if einf is not None and einf >= -1.0 - 1e-9:
            raise DivergentIntegral(
                f"integrand ~ r^{einf:.6g} is not integrable at infinity", "inf", einf)


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------

def integrate_semiaxis(g: Callable, config: QuadratureConfig | None = None,
                       hints: EndpointExponents | None = None,
                       lo: float = 0.0, hi: float = math.inf,
                       breakpoints: Sequence[float] = (),
                       check: bool = True) -> float:
    """Integrate a vectorised radial function ``g`` over ``[lo, hi]``.

    ``hints`` declares endpoint exponents of ``g`` itself; when an endpoint
    exponent makes the integral infinite, :class:`DivergentIntegral` is raised
    instead of returning a number.  Without hints the endpoints are probed.
    """
    cfg = config or DEFAULT_CONFIG
    if not (0.0 <= lo <= hi):
        raise ValueError(f"need 0 <= lo <= hi, got [{lo}, {hi}]")
    if lo == hi:
        return 0.0
    if check:
        check_divergence(hints, lo == 0.0, math.isinf(hi), g)
    pts = _split_points(lo, hi, breakpoints)
    return _integrate_pieces(g, pts, cfg)


def _integrate_pieces(g, pts, cfg, per_piece=False):
    kind = cfg.infinity_transform
    funcs, spans = [], []
    for a, b in zip(pts[:-1], pts[1:]):
        fn, ta, tb = _piece_integrand(g, a, b, kind)
        funcs.append(fn)
        spans.append((ta, tb))
    # each piece lives in its own variable; stack them on a shared axis
    offsets = np.cumsum([0.0] + [tb - ta for ta, tb in spans])
    starts = np.array([ta for ta, _ in spans])

    def stacked(z):
        out = np.empty_like(z)
        idx = np.clip(np.searchsorted(offsets, z, side="right") - 1, 0, len(funcs) - 1)
        for i, fn in enumerate(funcs):
            m = idx == i
            if np.any(m):
                out[m] = fn(z[m] - offsets[i] + starts[i])
        return out

    vals, _ = _adaptive(stacked, offsets[:-1], offsets[1:],
                        cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions,
                        global_share=not per_piece)
    if per_piece:
        return vals
    return math.fsum(vals)


def gauss_legendre_log(g: Callable, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Fixed 24-point Gauss-Legendre of ``g`` over ``[lo_i, hi_i]`` in ``ln r``.

    Vectorised over interval arrays; intended for short log-intervals on
    which ``g`` is smooth.  Zero-length intervals give exactly 0.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    out = np.zeros(np.broadcast(lo, hi).shape)
    m = hi > lo
    if not np.any(m):
        return out
    ul, uh = np.log(lo[m]), np.log(hi[m])
    c, h = 0.5 * (ul + uh), 0.5 * (uh - ul)
    u = c[:, None] + h[:, None] * _GL_X[None, :]
    r = np.exp(u)
    y = np.asarray(g(r.ravel()), dtype=float).reshape(r.shape) * r
    out[m] = h * (y @ _GL_W)
    return out


def _log_slope(g, r1, r2):
    v1, v2 = float(g(np.array([r1]))[0]), float(g(np.array([r2]))[0])
    if v1 <= 0 or v2 <= 0 or not (math.isfinite(v1) and math.isfinite(v2)):
        return None
    return math.log(v2 / v1) / math.log(r2 / r1)


@dataclass(frozen=True)
class GridSpec:
    """Log grid for :class:`CumulativeIntegral`: ``[r_min, r_max]`` at
    ``per_decade`` points, plus extra breakpoints (kinks of the density)."""

    r_min: float = 1e-30
    r_max: float = 1e30
    per_decade: int = 8
    extra: tuple[float, ...] = ()

    def points(self) -> np.ndarray:
        n = max(2, int(round(math.log10(self.r_max / self.r_min) * self.per_decade)) + 1)
        base = np.logspace(math.log10(self.r_min), math.log10(self.r_max), n)
        extra = [e for e in self.extra if self.r_min < e < self.r_max]
        return np.unique(np.concatenate([base, np.asarray(extra, dtype=float)]))


@dataclass
class CumulativeIntegral:
    """Cached running integral of a non-negative radial density.

    ``direction="inner"`` stores ``F(r) = int_0^r density``; ``"outer"`` stores
    ``G(r) = int_r^inf density``.  Between breakpoints the value is the stored
    neighbour plus a Gauss-Legendre integral over the short remaining log
    interval (monotone, and exact at breakpoints); beyond the grid the density
    is continued as a power law with its locally measured exponent.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    direction: str
    density: Callable = field(repr=False)
    exponent_low: float = 0.0
    exponent_high: float = 0.0

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        scalar = r.ndim == 0
        r = np.atleast_1d(r)
        b, v = self.breakpoints, self.values
        out = np.empty_like(r)
        low = r < b[0]
        high = r > b[-1]
        mid = ~(low | high)
        if np.any(mid):
            rm = r[mid]
            if self.direction == "inner":
                k = np.clip(np.searchsorted(b, rm, side="right") - 1, 0, b.size - 1)
                out[mid] = v[k] + gauss_legendre_log(self.density, b[k], rm)
            else:
                k = np.clip(np.searchsorted(b, rm, side="left"), 0, b.size - 1)
                out[mid] = v[k] + gauss_legendre_log(self.density, rm, b[k])
        if np.any(low):
            out[low] = self._extrapolate_low(r[low])
        if np.any(high):
            out[high] = self._extrapolate_high(r[high])
        return out[0] if scalar else out

    def log_value(self, r):
        """``log`` of the running integral; exact in the power-law tails
        even where the value itself under- or overflows."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        b, v = self.breakpoints, self.values
        out = np.empty_like(r)
        if self.direction == "inner":
            dec = r < b[0]
            base, e = b[0], self.exponent_low
            lv = math.log(v[0]) if v[0] > 0 else -math.inf
        else:
            dec = r > b[-1]
            base, e = b[-1], self.exponent_high
            lv = math.log(v[-1]) if v[-1] > 0 else -math.inf
        with np.errstate(divide="ignore", over="ignore"):
            out[dec] = lv + (e + 1.0) * np.log(r[dec] / base)
            out[~dec] = np.log(self(r[~dec]))
        bad = ~np.isfinite(out) & ~dec
        if np.any(bad):
            out[bad] = self._log_growing_tail(r[bad])
        return out

    def _log_growing_tail(self, r):
        # the increasing end overflowed: keep only the dominant power term
        if self.direction == "inner":
            base, e = self.breakpoints[-1], self.exponent_high
        else:
            base, e = self.breakpoints[0], self.exponent_low
        c = float(self.density(np.array([base]))[0]) * base
        k = e + 1.0
        with np.errstate(divide="ignore"):
            return math.log(c / abs(k)) + k * np.log(r / base) if k != 0 else np.log(np.log(r / base) * c)

    def _extrapolate_low(self, r):
        with np.errstate(over="ignore", invalid="ignore"):
            return self._extrapolate_low_raw(r)

    def _extrapolate_high(self, r):
        with np.errstate(over="ignore", invalid="ignore"):
            return self._extrapolate_high_raw(r)

    def _extrapolate_low_raw(self, r):
        b0, v0, e = self.breakpoints[0], self.values[0], self.exponent_low
        if self.direction == "inner":
            return v0 * (r / b0) ** (e + 1.0)
        # outer: G(r) = G(b0) + int_r^b0 c s^e ds with c s^e matched at b0
        c = float(self.density(np.array([b0]))[0]) * b0
        if abs(e + 1.0) < 1e-12:
            return v0 + c * np.log(b0 / r)
        return v0 + c * (1.0 - (r / b0) ** (e + 1.0)) / (e + 1.0)

    def _extrapolate_high_raw(self, r):
        bn, vn, e = self.breakpoints[-1], self.values[-1], self.exponent_high
        if self.direction == "outer":
            return vn * (r / bn) ** (e + 1.0)
        c = float(self.density(np.array([bn]))[0]) * bn
        if abs(e + 1.0) < 1e-12:
            return vn + c * np.log(r / bn)
        return vn + c * ((r / bn) ** (e + 1.0) - 1.0) / (e + 1.0)


def cumulative(density: Callable, grid: GridSpec | None = None,
               config: QuadratureConfig | None = None, direction: str = "inner",
               hints: EndpointExponents | None = None) -> CumulativeIntegral:
    """Build a :class:`CumulativeIntegral` of ``density`` (already including
    any polar factor ``|S| lambda(r)``).

    Raises :class:`DivergentIntegral` when the density is not integrable at 0
    (``inner``) or at infinity (``outer``).
    """
    cfg = scale_free(config)
    grid = grid or GridSpec()
    if direction not in ("inner", "outer"):
        raise ValueError("direction must be 'inner' or 'outer'")
    b = grid.points()
    check_divergence(hints, direction == "inner", direction == "outer", density)
    segs = _integrate_pieces(density, list(b), cfg, per_piece=True)
    if direction == "inner":
        head = integrate_semiaxis(density, cfg, lo=0.0, hi=float(b[0]), check=False)
        vals = head + np.concatenate([[0.0], np.cumsum(segs)])
    else:
        tail = integrate_semiaxis(density, cfg, lo=float(b[-1]), hi=math.inf, check=False)
        vals = tail + np.concatenate([np.cumsum(segs[::-1])[::-1], [0.0]])
    e_lo = _log_slope(density, b[0], b[0] * 10 ** 0.5)
    e_hi = _log_slope(density, b[-1] / 10 ** 0.5, b[-1])
    if hints is not None:
        e_lo = hints.at_zero if hints.at_zero is not None else e_lo
        e_hi = hints.at_inf if hints.at_inf is not None else e_hi
    return CumulativeIntegral(b, vals, direction, density,
                              0.0 if e_lo is None else e_lo,
                              0.0 if e_hi is None else e_hi)
