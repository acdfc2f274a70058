"""Seeded Monte Carlo on homogeneous groups.

Random streams come from numpy's counter-based Philox generator keyed by
``(seed, stream)``, so independent workers can draw reproducible, disjoint
streams.  Points are sampled in "polar" form: a radius from a two-piece power
density and a direction distributed as the normalised quasi-sphere measure
(obtained by rescaling a uniform point of the unit ball).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .errors import DegenerateSampler

CHUNK = 1 << 16


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    std_error: float
    n_samples: int
    seed: int
    stream: int = 0

    @property
    def rel_error(self) -> float:
        return self.std_error / abs(self.mean) if self.mean else math.inf

    def to_dict(self) -> dict:
        return asdict(self)


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Philox generator for ``(seed, stream)``; identical keys give identical draws."""
    if seed < 0 or stream < 0:
        raise ValueError("seed and stream must be non-negative")
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(stream),))
    return np.random.Generator(np.random.Philox(ss))


def estimate_from_samples(w: np.ndarray, seed: int, stream: int = 0) -> MCEstimate:
    n = w.size
    mean = float(np.mean(w))
    se = float(np.std(w, ddof=1) / math.sqrt(n)) if n > 1 else math.inf
    return MCEstimate(mean, se, n, seed, stream)


def _power_mass(e, lo, hi):
    """int_lo^hi x**e dx for 0 <= lo < hi <= inf (scaled units)."""
    if hi <= lo:
        return 0.0
    if abs(e + 1.0) < 1e-12:
        if lo == 0 or math.isinf(hi):
            return math.inf
        return math.log(hi / lo)
    if lo == 0 and e <= -1:
        return math.inf
    if math.isinf(hi) and e >= -1:
        return math.inf
    top = 0.0 if math.isinf(hi) else hi ** (e + 1.0)
    bot = 0.0 if lo == 0 else lo ** (e + 1.0)
    return (top - bot) / (e + 1.0)


def _power_inverse_cdf(e, lo, hi, u):
    if abs(e + 1.0) < 1e-12:
        return np.exp(math.log(lo) + u * (math.log(hi) - math.log(lo)))
    k = e + 1.0
    top = 0.0 if math.isinf(hi) else hi ** k
    bot = 0.0 if lo == 0 else lo ** k
    # heavy tails may land beyond floating range; such draws carry zero weight
    with np.errstate(over="ignore", divide="ignore"):
        return ((1.0 - u) * bot + u * top) ** (1.0 / k)


@dataclass(frozen=True)
class RadialPowerSampler:
    """Radial density proportional to ``(r/scale)**a`` below ``scale`` and
    ``(r/scale)**b`` above it, restricted to ``[r_min, r_max]``."""

    a: float
    b: float
    scale: float = 1.0
    r_min: float = 0.0
    r_max: float = math.inf

    def __post_init__(self):
        if not (self.scale > 0 and 0 <= self.r_min < self.r_max):
            raise DegenerateSampler(f"bad radial support {self}")
        m1, m2 = self._masses()
        if not (math.isfinite(m1) and math.isfinite(m2)) or m1 + m2 <= 0:
            raise DegenerateSampler(f"radial density is not normalisable: {self}")

    def _masses(self):
        lo, hi = self.r_min / self.scale, self.r_max / self.scale
        m1 = _power_mass(self.a, lo, min(1.0, hi)) if lo < 1.0 else 0.0
        m2 = _power_mass(self.b, max(1.0, lo), hi) if hi > 1.0 else 0.0
        return m1, m2

    def pdf(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        m1, m2 = self._masses()
        z = (m1 + m2) * self.scale
        x = r / self.scale
        with np.errstate(divide="ignore", over="ignore"):
            val = np.where(x <= 1.0, x ** self.a, x ** self.b) / z
        inside = (r >= self.r_min) & (r <= self.r_max) & (r > 0)
        return np.where(inside, val, 0.0)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        m1, m2 = self._masses()
        lo, hi = self.r_min / self.scale, self.r_max / self.scale
        pick_low = rng.random(n) < m1 / (m1 + m2)
        u = rng.random(n)
        out = np.empty(n)
        if m1 > 0:
            out[pick_low] = _power_inverse_cdf(self.a, lo, min(1.0, hi), u[pick_low])
        if m2 > 0:
            out[~pick_low] = _power_inverse_cdf(self.b, max(1.0, lo), hi, u[~pick_low])
        return out * self.scale


def sample_directions(group, n: int, rng: np.random.Generator) -> np.ndarray:
    """Points on the unit quasi-sphere distributed as ``sigma / |S|``."""
    half = np.asarray(group.ball_half_widths, dtype=float)
    out = np.empty((0, group.dim))
    while out.shape[0] < n:
        m = max(2 * (n - out.shape[0]), 64)
        z = (2.0 * rng.random((m, group.dim)) - 1.0) * half
        nz = group.quasi_norm(z)
        keep = (nz < 1.0) & (nz > 0.0)
        z, nz = z[keep], nz[keep]
        out = np.vstack([out, group.dilate(z, 1.0 / nz)])
    return out[:n]


def sample_points(group, radial: RadialPowerSampler, n: int, rng: np.random.Generator):
    """Return ``(x, |x|)`` with ``|x|`` drawn from ``radial``."""
    omega = sample_directions(group, n, rng)
    r = radial.sample(rng, n)
    return group.dilate(omega, r), r


def point_density(radial: RadialPowerSampler, r: np.ndarray, sphere_area: float, Q: float) -> np.ndarray:
    """Lebesgue density of :func:`sample_points` at a point of radius ``r``."""
    with np.errstate(divide="ignore", invalid="ignore"):
        return radial.pdf(r) / (sphere_area * r ** (Q - 1.0))


@dataclass(frozen=True)
class PairSampler:
    """Product importance design for double integrals over ``G x G``.

    ``y`` is drawn from a mixture of ``y_radial`` (independent of ``x``) and,
    with probability ``diag_weight``, ``y = x . w`` with ``|w|`` drawn from
    ``diag_radial``; the latter absorbs the kernel singularity on the diagonal.
    With ``diag_relative`` the diagonal radius is measured in units of ``|x|``.
    """

    x_radial: RadialPowerSampler
    y_radial: RadialPowerSampler
    diag_weight: float = 0.0
    diag_radial: RadialPowerSampler | None = None
    diag_relative: bool = False

    def __post_init__(self):
        if not 0.0 <= self.diag_weight < 1.0:
            raise DegenerateSampler("diag_weight must lie in [0, 1)")
        if self.diag_weight > 0 and self.diag_radial is None:
            raise DegenerateSampler("diag_weight > 0 needs diag_radial")


def mc_pair_integrate(space, integrand: Callable[[np.ndarray, np.ndarray], np.ndarray],
                      sampler: PairSampler, n_samples: int, seed: int,
                      stream: int = 0) -> MCEstimate:
    """Importance-sampled estimate of ``int int integrand(x, y) dx dy``.

    ``space`` must carry ``group``, ``sphere_area`` and ``homogeneous_dim``.
    Deterministic for a given ``(seed, stream, n_samples)``.
    """
    group = space.group
    if group is None:
        raise DegenerateSampler(f"space {space.name} has no group structure")
    S, Q = space.sphere_area, space.homogeneous_dim
    rng = make_rng(seed, stream)
    chunks = []
    done = 0
    while done < n_samples:
        m = min(CHUNK, n_samples - done)
        x, rx = sample_points(group, sampler.x_radial, m, rng)
        y, ry = sample_points(group, sampler.y_radial, m, rng)
        wd = sampler.diag_weight
        if wd > 0:
            use_diag = rng.random(m) < wd
            k = int(use_diag.sum())
            unit = rx if sampler.diag_relative else np.ones(m)
            if k:
                w, _ = sample_points(group, sampler.diag_radial, k, rng)
                w = group.dilate(w, unit[use_diag])
                y[use_diag] = group.product(x[use_diag], w)
            ry = group.quasi_norm(y)
            rd = group.quasi_norm(group.product(group.inverse(x), y))
            with np.errstate(divide="ignore", invalid="ignore"):
                pd = point_density(sampler.diag_radial, rd / unit, S, Q) / unit ** Q
            py = (1 - wd) * point_density(sampler.y_radial, ry, S, Q) + wd * pd
        else:
            py = point_density(sampler.y_radial, ry, S, Q)
        px = point_density(sampler.x_radial, rx, S, Q)
        val = np.asarray(integrand(x, y), dtype=float)
        dens = px * py
        bad = (val != 0) & ~(dens > 0)
        if np.any(bad):
            raise DegenerateSampler("importance density is zero where the integrand is not")
        with np.errstate(divide="ignore", invalid="ignore"):
            chunks.append(np.where(val != 0, val / dens, 0.0))
        done += m
    return estimate_from_samples(np.concatenate(chunks), seed, stream)
