"""Metric measure spaces with polar decomposition, and homogeneous groups.

Shipped instances: abelian ``R^n`` (n = 1, 2, 3) with the Euclidean norm,
the Heisenberg group ``H^1`` with the Koranyi norm, and hyperbolic space
``H^n`` exposed through its radial density only.

The sphere measure is always normalised as ``|S| = Q * vol(B(0, 1))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError, NonConvergent
from .montecarlo import MCEstimate, estimate_from_samples, make_rng
from .quadrature import EndpointExponents, QuadratureConfig, integrate_semiaxis

SPHERE_NOTE = (
    "sphere measure normalised as |S| = Q * vol(B(0,1)) for the chosen quasi-norm; "
    "other normalisations of the polar measure rescale every reported constant"
)


@dataclass(frozen=True)
class HomogeneousGroup:
    """A Lie group on ``R^n`` with dilations ``(s**nu_1 x_1, ..., s**nu_n x_n)``.

    ``product``, ``inverse`` and ``quasi_norm`` act on arrays of shape
    ``(..., n)``.  ``triangle_constant`` is the published ``C`` in
    ``|xy| <= C(|x| + |y|)``; ``ball_half_widths`` bound the unit ball.
    """

    name: str
    weights: tuple[float, ...]
    product: Callable[[np.ndarray, np.ndarray], np.ndarray] = field(repr=False)
    inverse: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    quasi_norm: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    triangle_constant: float = 1.0
    ball_half_widths: tuple[float, ...] = ()

    @property
    def dim(self) -> int:
        return len(self.weights)

    @property
    def Q(self) -> float:
        return float(sum(self.weights))

    def dilate(self, x: np.ndarray, s) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        s = np.asarray(s, dtype=float)
        if s.ndim:
            s = s[..., None]
        return x * s ** np.asarray(self.weights)

    def kernel_norm(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """``|y^{-1} x|``."""
        return self.quasi_norm(self.product(self.inverse(np.asarray(y, float)),
                                            np.asarray(x, float)))


def _abelian_norm(x):
    x = np.abs(np.asarray(x, float))
    m = np.max(x, axis=-1)
    # scale by the largest coordinate so huge radii do not overflow
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.where(m[..., None] > 0, x / m[..., None], 0.0)
    return np.where(np.isfinite(m), m * np.sqrt(np.sum(s * s, axis=-1)), np.inf)


def euclidean_group(n: int) -> HomogeneousGroup:
    if n < 1:
        raise ConfigError("dimension must be positive")
    return HomogeneousGroup(
        name=f"euclidean:{n}",
        weights=(1.0,) * n,
        product=lambda x, y: np.asarray(x, float) + np.asarray(y, float),
        inverse=lambda x: -np.asarray(x, float),
        quasi_norm=_abelian_norm,
        triangle_constant=1.0,
        ball_half_widths=(1.0,) * n,
    )


def _heis_product(x, y):
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    a, b, c = x[..., 0], x[..., 1], x[..., 2]
    a2, b2, c2 = y[..., 0], y[..., 1], y[..., 2]
    return np.stack([a + a2, b + b2, c + c2 + 0.5 * (a * b2 - b * a2)], axis=-1)


def _koranyi(x):
    x = np.asarray(x, float)
    rho2 = x[..., 0] ** 2 + x[..., 1] ** 2
    return (rho2 * rho2 + 16.0 * x[..., 2] ** 2) ** 0.25


def heisenberg_group() -> HomogeneousGroup:
    # Koranyi gauge with this law is the Cygan metric gauge: genuine triangle
    # inequality, so C = 1.
    return HomogeneousGroup(
        name="heisenberg:1",
        weights=(1.0, 1.0, 2.0),
        product=_heis_product,
        inverse=lambda x: -np.asarray(x, float),
        quasi_norm=_koranyi,
        triangle_constant=1.0,
        ball_half_widths=(1.0, 1.0, 0.25),
    )


@dataclass(frozen=True)
class PolarSpace:
    """Metric measure space with a radial polar density.

    ``int_X g(|x|) dx = sphere_area * int_0^inf g(r) radial_density(r) dr``.
    ``power_law`` marks ``radial_density(r) == r**(Q-1)`` exactly, which
    enables the analytic admissibility checks for power weights.
    """

    name: str
    topological_dim: int
    homogeneous_dim: float
    radial_density: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    sphere_area: float
    group: HomogeneousGroup | None = None
    power_law: bool = True

    @property
    def Q(self) -> float:
        return self.homogeneous_dim

    def log_density(self, r: np.ndarray) -> np.ndarray:
        """``log radial_density(r)``, stable far out in both tails."""
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore"):
            if self.power_law:
                return (self.Q - 1.0) * np.log(r)
            # sinh(r)^(n-1) without overflow
            log_sinh = r + np.log(-np.expm1(-2.0 * r)) - math.log(2.0)
            return (self.topological_dim - 1) * log_sinh

    def density_exponent_at_zero(self) -> float:
        return self.Q - 1.0 if self.power_law else self.topological_dim - 1.0


# ---------------------------------------------------------------------------
# ball volumes
# ---------------------------------------------------------------------------

def _extent(group, prefix, axis, radius):
    """Largest ``t >= 0`` with ``|(prefix, t, 0, ...)| <= radius`` (bisection)."""
    m = prefix.shape[0]
    n = group.dim
    pts = np.zeros((m, n))
    pts[:, :axis] = prefix
    lo = np.zeros(m)
    hi = np.full(m, group.ball_half_widths[axis] * radius ** group.weights[axis])
    pts[:, axis] = hi
    grow = group.quasi_norm(pts) < radius
    while np.any(grow):  # make sure the bracket encloses the boundary
        hi[grow] *= 2.0
        pts[:, axis] = hi
        grow = group.quasi_norm(pts) < radius
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        pts[:, axis] = mid
        inside = group.quasi_norm(pts) < radius
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    pts[:, axis] = 0.0
    empty = group.quasi_norm(pts) >= radius
    return np.where(empty, 0.0, 0.5 * (lo + hi))


def _slice_volume(group, prefix, axis, radius, theta, w):
    e = _extent(group, prefix, axis, radius)
    if axis == group.dim - 1:
        return 2.0 * e
    m, k = prefix.shape[0], theta.size
    x = e[:, None] * np.sin(theta)[None, :]
    jac = e[:, None] * np.cos(theta)[None, :]
    new = np.concatenate([np.repeat(prefix, k, axis=0), x.reshape(-1, 1)], axis=1)
    inner = _slice_volume(group, new, axis + 1, radius, theta, w).reshape(m, k)
    return (inner * jac) @ w


def ball_volume_quadrature(group: HomogeneousGroup, radius: float = 1.0,
                           nodes: int = 48, tol: float = 1e-9) -> float:
    """Volume of ``B(0, radius)`` by nested coordinate quadrature.

    Each coordinate is integrated over its slice extent with the substitution
    ``x = e sin(theta)``, which removes the square-root edge behaviour.
    Assumes slices are symmetric and centred (true for the shipped groups).
    """
    prev = None
    n = nodes
    while n <= 768:
        gx, gw = np.polynomial.legendre.leggauss(n)
        theta, w = 0.5 * math.pi * gx, 0.5 * math.pi * gw
        val = float(_slice_volume(group, np.zeros((1, 0)), 0, radius, theta, w)[0])
        if prev is not None and abs(val - prev) <= tol * abs(val):
            return val
        prev = val
        n *= 2
    raise NonConvergent(f"ball volume quadrature did not settle for {group.name}")


def ball_volume_mc(group: HomogeneousGroup, radius: float = 1.0,
                   n_samples: int = 1_000_000, seed: int = 0, stream: int = 0) -> MCEstimate:
    """Hit-or-miss volume of ``B(0, radius)`` in the dilated bounding box."""
    half = np.asarray(group.ball_half_widths) * radius ** np.asarray(group.weights)
    box = float(np.prod(2.0 * half))
    rng = make_rng(seed, stream)
    hits = []
    done = 0
    while done < n_samples:
        m = min(1 << 18, n_samples - done)
        z = (2.0 * rng.random((m, group.dim)) - 1.0) * half
        hits.append((group.quasi_norm(z) < radius).astype(float) * box)
        done += m
    return estimate_from_samples(np.concatenate(hits), seed, stream)


@lru_cache(maxsize=None)
def _sphere_area_quad(name: str) -> float:
    group = _GROUPS[name]()
    return group.Q * ball_volume_quadrature(group)


def sphere_area(obj, method: str = "quadrature", n_samples: int = 1_000_000,
                seed: int = 0) -> float:
    """``|S| = Q * vol(B(0, 1))`` for a group or a space built on one."""
    group = obj.group if isinstance(obj, PolarSpace) else obj
    if group is None:
        if isinstance(obj, PolarSpace):
            return obj.sphere_area
        raise ConfigError("sphere_area needs a group or a space")
    if method == "quadrature":
        if group.name in _GROUPS:
            return _sphere_area_quad(group.name)
        return group.Q * ball_volume_quadrature(group)
    if method == "mc":
        return group.Q * ball_volume_mc(group, 1.0, n_samples, seed).mean
    raise ConfigError(f"unknown sphere-area method {method!r}")


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

_GROUPS = {f"euclidean:{n}": (lambda n=n: euclidean_group(n)) for n in (1, 2, 3)}
_GROUPS["heisenberg:1"] = heisenberg_group


def _power_density(Q):
    if Q == 1:
        return lambda r: np.ones_like(np.asarray(r, float))
    return lambda r: np.asarray(r, float) ** (Q - 1.0)


def group_space(group: HomogeneousGroup, method: str = "quadrature",
                n_samples: int = 1_000_000, seed: int = 0) -> PolarSpace:
    S = sphere_area(group, method, n_samples, seed)
    return PolarSpace(group.name, group.dim, group.Q, _power_density(group.Q), S, group, True)


def hyperbolic_space(n: int) -> PolarSpace:
    if n < 1:
        raise ConfigError("dimension must be positive")
    S = n * ball_volume_quadrature(euclidean_group(n)) if n <= 3 else \
        2 * math.pi ** (n / 2) / math.gamma(n / 2)
    if n == 1:
        dens = _power_density(1)
    else:
        dens = lambda r: np.sinh(np.asarray(r, float)) ** (n - 1)  # noqa: E731
    return PolarSpace(f"hyperbolic:{n}", n, float(n), dens, S, None, n == 1)


def make_space(selector: str, sphere_method: str = "quadrature",
               n_samples: int = 1_000_000, seed: int = 0) -> PolarSpace:
    """Parse ``euclidean:<n>``, ``heisenberg:1`` or ``hyperbolic:<n>``."""
    try:
        kind, _, arg = selector.strip().partition(":")
        n = int(arg)
    except ValueError:
        raise ConfigError(f"bad space selector {selector!r}") from None
    if kind == "euclidean":
        if n not in (1, 2, 3):
            raise ConfigError("euclidean spaces ship for n = 1, 2, 3")
        return group_space(euclidean_group(n), sphere_method, n_samples, seed)
    if kind == "heisenberg":
        if n != 1:
            raise ConfigError("only heisenberg:1 is shipped")
        return group_space(heisenberg_group(), sphere_method, n_samples, seed)
    if kind == "hyperbolic":
        return hyperbolic_space(n)
    raise ConfigError(f"unknown space kind {kind!r}")


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def polar_integrate(space: PolarSpace, g: Callable, r_lo: float = 0.0,
                    r_hi: float = math.inf, config: QuadratureConfig | None = None,
                    hints: EndpointExponents | None = None,
                    breakpoints: Sequence[float] = ()) -> float:
    """``|S| * int_{r_lo}^{r_hi} g(r) lambda(r) dr``.

    ``hints`` are the endpoint exponents of ``g`` alone; the polar factor is
    added here for power-law spaces.
    """
    dens = space.radial_density

    def integrand(r):
        return g(r) * dens(r)

    h = None
    if hints is not None and space.power_law:
        shift = space.Q - 1.0
        h = EndpointExponents(None if hints.at_zero is None else hints.at_zero + shift,
                              None if hints.at_inf is None else hints.at_inf + shift)
    return space.sphere_area * integrate_semiaxis(integrand, config, h, r_lo, r_hi, breakpoints)


def kernel_norm(group: HomogeneousGroup, x, y) -> np.ndarray:
    """``|y^{-1} x|`` through the group law."""
    return group.kernel_norm(x, y)


def random_points(group: HomogeneousGroup, n: int, rng: np.random.Generator,
                  spread: float = 2.0) -> np.ndarray:
    """Heavy-ish test points: Gaussian coordinates at log-uniform scales."""
    z = rng.standard_normal((n, group.dim))
    s = np.exp(rng.uniform(-math.log(10 * spread), math.log(10 * spread), n))
    return group.dilate(z, s)


def quasi_norm_report(group: HomogeneousGroup, n: int = 10_000, seed: int = 0) -> dict:
    """Check the quasi-norm axioms and the triangle constant on random samples."""
    rng = make_rng(seed, 11)
    x = random_points(group, n, rng)
    y = random_points(group, n, rng)
    s = np.exp(rng.uniform(-3, 3, n))
    nx = group.quasi_norm(x)
    rel = lambda a, b: np.abs(a - b) / np.maximum(np.abs(b), 1e-300)  # noqa: E731
    sym = float(np.max(rel(group.quasi_norm(group.inverse(x)), nx)))
    hom = float(np.max(rel(group.quasi_norm(group.dilate(x, s)), s * nx)))
    ident = float(np.max(np.abs(group.product(x, group.inverse(x)))))
    ratio = group.quasi_norm(group.product(x, y)) / (nx + group.quasi_norm(y))
    kn = group.kernel_norm(x, y)
    kn_sym = float(np.max(rel(group.kernel_norm(y, x), kn)))
    return {
        "symmetry_max_rel": sym,
        "homogeneity_max_rel": hom,
        "norm_at_identity": float(group.quasi_norm(np.zeros(group.dim))),
        "min_norm_nonzero": float(np.min(nx)),
        "identity_max_abs": ident,
        "triangle_ratio_max": float(np.max(ratio)),
        "triangle_constant": group.triangle_constant,
        "kernel_symmetry_max_rel": kn_sym,
    }
