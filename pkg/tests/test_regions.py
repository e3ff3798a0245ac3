import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from capacityloss import (Disk, InvalidRegion, Polygon, QuadratureFailure, Square, area,
                          epsilon_neighborhood_integral, moments, region_from_dict, uniform_power)
from capacityloss.regions import SMALL_TILT, _adaptive_panels

from conftest import polygons, random_polygon

UNIT_SQUARE_POLY = Polygon((1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j))


def polygon_second_moment(verts):
    """Exact int_P (x^2 + y^2) dA from the vertex formula (Green's theorem)."""
    v = np.asarray(verts, dtype=complex)
    x, y = v.real, v.imag
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    c = x * yn - xn * y
    ixx = np.sum(c * (y * y + y * yn + yn * yn)) / 12
    iyy = np.sum(c * (x * x + x * xn + xn * xn)) / 12
    return ixx + iyy


def test_area_examples():
    assert area(Square(1)) == 4.0
    assert area(Disk(1)) == pytest.approx(math.pi, rel=1e-15)
    assert area(UNIT_SQUARE_POLY) == pytest.approx(4.0, rel=1e-15)


def test_uniform_power_examples():
    # oracle: analytic double integrals evaluated by scipy quadrature
    sq = integrate.dblquad(lambda v, u: u * u + v * v, -1, 1, -1, 1)[0] / 4
    disk = integrate.quad(lambda r: r**2 * 2 * math.pi * r, 0, 1)[0] / math.pi
    assert sq == pytest.approx(2 / 3, rel=1e-12)
    assert disk == pytest.approx(0.5, rel=1e-12)
    assert uniform_power(Square(1)) == pytest.approx(sq, rel=1e-14)
    assert uniform_power(Disk(1)) == pytest.approx(disk, rel=1e-14)
    assert uniform_power(UNIT_SQUARE_POLY) == pytest.approx(2 / 3, rel=1e-12)


@pytest.mark.parametrize("c", [0.5, 2, 10])
def test_uniform_power_square_scaling(c):
    assert uniform_power(Square(c)) == pytest.approx(c * c * 2 / 3, rel=1e-14)


def test_moments_at_zero_tilt():
    m = moments(Disk(1), 0.0)
    assert (m.z0, m.m2) == (pytest.approx(math.pi), pytest.approx(math.pi / 2))
    m = moments(Square(1), 0.0)
    assert (m.z0, m.m2) == (pytest.approx(4.0), pytest.approx(8 / 3))


def test_moments_disk_against_radial_quadrature():
    z0 = integrate.quad(lambda r: 2 * math.pi * r * math.exp(-r * r), 0, 1, epsabs=0, epsrel=1e-13)[0]
    m2 = integrate.quad(lambda r: 2 * math.pi * r**3 * math.exp(-r * r), 0, 1, epsabs=0, epsrel=1e-13)[0]
    m = moments(Disk(1), 1.0)
    assert z0 == pytest.approx(math.pi * (1 - math.exp(-1)), rel=1e-13)
    assert m2 == pytest.approx(math.pi * (1 - 2 * math.exp(-1)), rel=1e-13)
    assert m.z0 == pytest.approx(z0, rel=1e-13)
    assert m.m2 == pytest.approx(m2, rel=1e-13)


@pytest.mark.parametrize("lam", [0.3, 2.0, 40.0])
def test_moments_square_against_dblquad(lam):
    f0 = integrate.dblquad(lambda v, u: math.exp(-lam * (u * u + v * v)), -1, 1, -1, 1,
                           epsabs=0, epsrel=1e-13)[0]
    f2 = integrate.dblquad(lambda v, u: (u * u + v * v) * math.exp(-lam * (u * u + v * v)), -1, 1, -1, 1,
                           epsabs=0, epsrel=1e-13)[0]
    m = moments(Square(1), lam)
    assert m.z0 == pytest.approx(f0, rel=1e-11)
    assert m.m2 == pytest.approx(f2, rel=1e-11)


@pytest.mark.parametrize("region", [Square(1.3), Disk(0.7), UNIT_SQUARE_POLY])
def test_small_tilt_switch_is_continuous(region):
    lam_switch = SMALL_TILT / region.sup_abs2
    below = region.moments(lam_switch * (1 - 1e-9))
    above = region.moments(lam_switch * (1 + 1e-9))
    assert below.z0 == pytest.approx(above.z0, rel=1e-12)
    assert below.m2 == pytest.approx(above.m2, rel=1e-12)


def test_polygon_moments_against_vertex_formula():
    rng = np.random.default_rng(3)
    for _ in range(20):
        p = random_polygon(rng)
        assert p.second_moment() == pytest.approx(polygon_second_moment(p.vertices), rel=1e-12)


@pytest.mark.parametrize("lam", [0.0, 0.1, 1.0, 10.0])
@pytest.mark.parametrize("a", [0.4, 1.0, 3.0])
def test_polygon_agrees_with_square_closed_form(lam, a):
    poly = Polygon((a + a * 1j, -a + a * 1j, -a - a * 1j, a - a * 1j))
    sq = Square(a)
    assert poly.moments(lam).z0 == pytest.approx(sq.moments(lam).z0, rel=1e-8)
    assert poly.moments(lam).m2 == pytest.approx(sq.moments(lam).m2, rel=1e-8)


def test_nonconvex_polygon_against_dblquad():
    # L-shaped hexagon around the origin
    poly = Polygon((-1 - 1j, 2 - 1j, 2 + 0.5j, 0.5 + 0.5j, 0.5 + 2j, -1 + 2j))
    lam = 0.7
    g = lambda v, u: math.exp(-lam * (u * u + v * v))
    ref = (integrate.dblquad(g, -1, 2, -1, 0.5, epsabs=0, epsrel=1e-13)[0]
           + integrate.dblquad(g, -1, 0.5, 0.5, 2, epsabs=0, epsrel=1e-13)[0])
    assert poly.moments(lam).z0 == pytest.approx(ref, rel=1e-10)
    assert poly.area() == pytest.approx(3 * 1.5 + 1.5 * 1.5)


@settings(max_examples=40, deadline=None)
@given(polygons(), st.floats(0.05, 20.0))
def test_scale_covariance(poly, c):
    big = poly.scaled(c)
    assert big.area() == pytest.approx(c * c * poly.area(), rel=1e-12)
    assert big.uniform_power() == pytest.approx(c * c * poly.uniform_power(), rel=1e-10)


@pytest.mark.parametrize("region", [Square(1), Disk(1), UNIT_SQUARE_POLY,
                                    Polygon((2, 1 + 2j, -1 + 1j, -1.5 - 1j, 1 - 1j))])
def test_tilted_power_strictly_decreasing(region):
    lams = np.concatenate([[0.0], np.geomspace(1e-8, 1e4, 60)])
    powers = [region.moments(l).power for l in lams]
    assert all(b < a for a, b in zip(powers, powers[1:]))
    assert powers[0] == pytest.approx(region.uniform_power(), rel=1e-12)
    assert all(p <= region.sup_abs2 for p in powers)


def test_moments_reject_negative_tilt():
    with pytest.raises(ValueError):
        Square(1).moments(-1.0)


def test_epsilon_neighborhood_examples():
    assert epsilon_neighborhood_integral(Disk(1), 0.5, 0.0) == pytest.approx(math.pi * 1.5**2, rel=1e-14)
    assert epsilon_neighborhood_integral(Square(1), 0.1, 0.0) == pytest.approx(
        4 + 4 * (2 * 0.1) + math.pi * 0.01, rel=1e-14)
    assert epsilon_neighborhood_integral(Disk(1), 1e-12, 1.0) == pytest.approx(
        math.pi * (1 - math.exp(-1)), rel=1e-10)


@pytest.mark.parametrize("lam", [0.5, 3.0])
@pytest.mark.parametrize("eps", [1e-3, 0.2, 2.0])
def test_square_neighborhood_is_exact_minkowski_integral(lam, eps):
    a = 1.0
    g = lambda v, u: math.exp(-lam * (u * u + v * v))
    cross = (integrate.dblquad(g, -a - eps, a + eps, -a, a, epsabs=0, epsrel=1e-13)[0]
             + 2 * integrate.dblquad(g, -a, a, a, a + eps, epsabs=0, epsrel=1e-13)[0])
    corner = integrate.dblquad(g, a, a + eps, a, lambda u: a + math.sqrt(max(eps * eps - (u - a) ** 2, 0)),
                               epsabs=0, epsrel=1e-13)[0]
    assert Square(a).epsilon_neighborhood_integral(eps, lam) == pytest.approx(cross + 4 * corner, rel=1e-10)


def test_polygon_neighborhood_is_upper_bound():
    # for the square polygon the exact S_eps integral is the Square closed form
    for lam in [0.0, 0.5, 4.0]:
        for eps in [1e-4, 0.1, 1.0, 10.0]:
            exact = Square(1).epsilon_neighborhood_integral(eps, lam)
            assert UNIT_SQUARE_POLY.epsilon_neighborhood_integral(eps, lam) >= exact * (1 - 1e-12)


@pytest.mark.parametrize("region", [Square(1), Disk(1.5), UNIT_SQUARE_POLY,
                                    Polygon((2, 1 + 2j, -1 + 1j, -1.5 - 1j, 1 - 1j))])
@pytest.mark.parametrize("lam", [0.0, 0.8])
def test_neighborhood_monotone_and_converges(region, lam):
    eps = np.geomspace(10.0, 1e-12, 40)
    vals = [region.epsilon_neighborhood_integral(e, lam) for e in eps]
    assert all(b <= a * (1 + 1e-14) for a, b in zip(vals, vals[1:]))
    assert vals[-1] == pytest.approx(region.moments(lam).z0, rel=1e-8)
    assert all(v >= region.moments(lam).z0 * (1 - 1e-14) for v in vals)


@pytest.mark.parametrize("verts", [
    (1 + 2j, 2 + 2j, 2 + 3j),  # origin outside
    (1 + 1j, -1 - 1j, -1 + 1j, 1 - 1j),  # bow tie
    (0, 1, 2),  # collinear
    (1, 1j),
])
def test_invalid_polygons(verts):
    with pytest.raises(InvalidRegion):
        Polygon(verts)


@pytest.mark.parametrize("bad", [lambda: Square(0), lambda: Disk(-1), lambda: Square(float("nan"))])
def test_invalid_shapes(bad):
    with pytest.raises(InvalidRegion):
        bad()


def test_polygon_orientation_and_boundary():
    cw = Polygon((1 - 1j, -1 - 1j, -1 + 1j, 1 + 1j))
    assert cw.area() == pytest.approx(4.0)
    # origin on an edge counts as inside
    Polygon((0, 1 + 0j, 1 + 1j, 1j))
    assert UNIT_SQUARE_POLY.contains(1 + 0.3j)
    assert not UNIT_SQUARE_POLY.contains(1.01 + 0.3j)


@pytest.mark.parametrize("region", [Square(1), Disk(1), Polygon((2, 1 + 2j, -1 + 1j, -1.5 - 1j, 1 - 1j))])
def test_projection_lands_in_region(region):
    rng = np.random.default_rng(0)
    z = rng.normal(size=500) * 3 + 1j * rng.normal(size=500) * 3
    p = region.project(z)
    assert np.all(region.contains(p))
    inside = region.contains(z)
    assert np.array_equal(p[inside], z[inside])
    # radial: same direction from the origin
    moved = ~inside
    assert np.allclose(np.angle(p[moved]), np.angle(z[moved]))


@pytest.mark.parametrize("region", [Square(1.5), Disk(2), Polygon((2, 1 + 2j, -1 + 1j, -1.5 - 1j, 1 - 1j))])
def test_json_roundtrip(region):
    again = region_from_dict(json.loads(json.dumps(region.to_dict())))
    assert again == region


def test_json_errors():
    with pytest.raises(InvalidRegion):
        region_from_dict({"shape": "hexagon"})
    with pytest.raises(InvalidRegion):
        region_from_dict({"shape": "disk"})


def test_quadrature_budget_raises():
    wild = lambda x, p: np.sin(1e6 * x)[..., None]
    with pytest.raises(QuadratureFailure):
        _adaptive_panels(wild, [0.0], [1.0], [0.0], budget=10_000)
