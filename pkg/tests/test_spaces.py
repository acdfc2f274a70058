import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import HEIS_AREA, rel
from revhardy.errors import ConfigError, DivergentIntegral
from revhardy.montecarlo import make_rng
from revhardy.quadrature import EndpointExponents
from revhardy.spaces import (ball_volume_mc, ball_volume_quadrature, euclidean_group,
                             heisenberg_group, kernel_norm, make_space, polar_integrate,
                             quasi_norm_report, random_points, sphere_area)

GROUPS = [euclidean_group(1), euclidean_group(2), euclidean_group(3), heisenberg_group()]


# -- polar_integrate ---------------------------------------------------------

def test_polar_unit_disk(plane):
    val = polar_integrate(plane, lambda r: np.ones_like(r), 0.0, 1.0, hints=EndpointExponents(0, 0))
    assert val == pytest.approx(math.pi, rel=1e-9)


def test_polar_group_ball_volume(heis):
    # indicator of B(0, r) on a Q = 4 group integrates to |S| r^4 / 4
    for r in (0.5, 2.0):
        val = polar_integrate(heis, lambda s: np.ones_like(s), 0.0, r, hints=EndpointExponents(0, 0))
        assert rel(val, heis.sphere_area * r ** 4 / 4) < 1e-9


def test_polar_inverse_sqrt(line):
    # |S| = 2 times int_0^1 r^{-1/2} dr = 2
    val = polar_integrate(line, lambda r: r ** -0.5, 0.0, 1.0, hints=EndpointExponents(-0.5, None))
    assert val == pytest.approx(4.0, rel=1e-9)


def test_polar_refuses_divergent(line):
    with pytest.raises(DivergentIntegral):
        polar_integrate(line, lambda r: 1 / r, 0.0, 1.0, hints=EndpointExponents(-1.0, None))


def test_hyperbolic_density_and_area():
    sp = make_space("hyperbolic:3")
    assert sp.sphere_area == pytest.approx(4 * math.pi, rel=1e-9)
    r = np.array([1e-3, 0.5, 3.0, 50.0])
    assert np.allclose(sp.log_density(r), 2 * np.log(np.sinh(r)), rtol=1e-12)
    # stays finite where sinh itself would overflow or underflow
    assert np.all(np.isfinite(sp.log_density(np.array([1e-300, 1e5]))))
    # indicator of the unit geodesic ball: 4 pi int_0^1 sinh^2
    exact = 4 * math.pi * (math.sinh(2) / 4 - 0.5)
    val = polar_integrate(sp, lambda s: np.ones_like(s), 0.0, 1.0)
    assert rel(val, exact) < 1e-9


# -- sphere areas ------------------------------------------------------------

@pytest.mark.parametrize("n, area", [(1, 2.0), (2, 2 * math.pi), (3, 4 * math.pi)])
def test_euclidean_sphere_area(n, area):
    assert abs(sphere_area(euclidean_group(n)) - area) < 1e-6


def test_heisenberg_sphere_area_quadrature():
    # Koranyi ball volume is (pi/2) int_0^1 sqrt(1-u^2) du = pi^2 / 8
    assert rel(sphere_area(heisenberg_group()), HEIS_AREA) < 1e-9


def test_heisenberg_mc_matches_quadrature():
    mc = sphere_area(heisenberg_group(), "mc", n_samples=400_000, seed=3)
    assert rel(mc, sphere_area(heisenberg_group())) < 5e-3


def test_sphere_area_rejects_unknown_method():
    with pytest.raises(ConfigError):
        sphere_area(heisenberg_group(), "surface")


@pytest.mark.parametrize("g", GROUPS, ids=lambda g: g.name)
def test_volume_dilation_quadrature(g):
    v1 = ball_volume_quadrature(g, 1.0)
    for s in (0.5, 2.0, 10.0):
        assert rel(ball_volume_quadrature(g, s), s ** g.Q * v1) < 1e-6


def test_volume_dilation_mc():
    g = heisenberg_group()
    v1 = ball_volume_quadrature(g)
    for s in (0.5, 2.0, 10.0):
        est = ball_volume_mc(g, s, 200_000, seed=1)
        assert rel(est.mean, s ** 4 * v1) < 1e-2


def test_make_space_grammar():
    assert make_space("euclidean:2").Q == 2
    assert make_space("heisenberg:1").Q == 4
    assert make_space("hyperbolic:2").power_law is False
    for bad in ("euclidean:7", "heisenberg:2", "torus:1", "euclidean", "euclidean:x"):
        with pytest.raises(ConfigError):
            make_space(bad)


# -- kernel norm and quasi-norm axioms --------------------------------------

def test_kernel_norm_abelian_reduces_to_euclidean():
    g = euclidean_group(3)
    rng = make_rng(5, 0)
    x, y = rng.normal(size=(100, 3)), rng.normal(size=(100, 3))
    assert np.allclose(kernel_norm(g, x, y), np.linalg.norm(x - y, axis=1), rtol=1e-14)


@pytest.mark.parametrize("g", GROUPS, ids=lambda g: g.name)
def test_kernel_norm_diagonal_is_zero(g):
    x = random_points(g, 50, make_rng(0, 1))
    assert np.all(kernel_norm(g, x, x) == 0.0)


def test_heisenberg_kernel_norm_unit_point():
    g = heisenberg_group()
    assert kernel_norm(g, np.array([1.0, 0, 0]), np.zeros(3)) == pytest.approx(1.0, abs=1e-15)
    # non-commutativity enters through the third coordinate
    x, y = np.array([1.0, 0, 0]), np.array([0, 1.0, 0])
    assert np.allclose(g.product(x, y), [1, 1, 0.5])
    assert np.allclose(g.product(y, x), [1, 1, -0.5])


@pytest.mark.parametrize("g", GROUPS, ids=lambda g: g.name)
def test_quasi_norm_axioms_on_samples(g):
    rep = quasi_norm_report(g, 10_000, seed=2)
    assert rep["symmetry_max_rel"] < 1e-12
    assert rep["homogeneity_max_rel"] < 1e-12
    assert rep["norm_at_identity"] == 0.0
    assert rep["min_norm_nonzero"] > 0
    assert rep["identity_max_abs"] < 1e-12
    assert rep["triangle_ratio_max"] <= rep["triangle_constant"] * (1 + 1e-12)
    assert rep["kernel_symmetry_max_rel"] < 1e-12


coords = st.floats(-1e3, 1e3, allow_nan=False)


@given(st.tuples(coords, coords, coords), st.tuples(coords, coords, coords),
       st.floats(1e-3, 1e3))
def test_heisenberg_norm_properties(x, y, s):
    g = heisenberg_group()
    x, y = np.array(x), np.array(y)
    nx = g.quasi_norm(x)
    assert g.quasi_norm(g.inverse(x)) == pytest.approx(nx, rel=1e-12, abs=1e-300)
    assert g.quasi_norm(g.dilate(x, s)) == pytest.approx(s * nx, rel=1e-12, abs=1e-300)
    assert g.kernel_norm(x, y) == pytest.approx(g.kernel_norm(y, x), rel=1e-12, abs=1e-300)
    assert g.quasi_norm(g.product(x, y)) <= (nx + g.quasi_norm(y)) * (1 + 1e-12) + 1e-300


def test_euclidean_norm_survives_huge_coordinates():
    g = euclidean_group(2)
    assert g.quasi_norm(np.array([3e200, 4e200])) == pytest.approx(5e200)
