import math

import mpmath
import numpy as np
import pytest

from src.coords import HypercylindricalPoint, HypersphericalPoint, to_cartesian
from src.exceptions import DivergenceError, DomainError, OutOfDomainError
from src.legendre import LegendreOdeForm
from src.verify import (
    ResidualReport,
    fd_derivative,
    fd_derivatives,
    helmholtz_residual,
    laplacian_fd,
    latitude_grid,
    observed_order,
    ode_residual,
    oracle_bessel_j,
    oracle_hyp2f1,
    random_interior_points,
    richardson,
    wronskian_fd,
)


def test_fd_derivatives_of_exponential():
    assert fd_derivative(math.exp, 0.5, 1) == pytest.approx(math.exp(0.5), rel=1e-11)
    assert fd_derivative(math.exp, 0.5, 2, h=1e-2) == pytest.approx(math.exp(0.5), rel=1e-8)
    with pytest.raises(DomainError):
        fd_derivative(math.exp, 0.5, 3)


def test_richardson_improves_the_estimate():
    f = lambda x: math.sin(3 * x)
    exact = 3 * math.cos(0.6)
    h = 0.05
    coarse = fd_derivative(f, 0.2, 1, h)
    combined = richardson(coarse, fd_derivative(f, 0.2, 1, h / 2))
    assert abs(combined - exact) < abs(coarse - exact)
    value, d1, d2 = fd_derivatives(f, 0.2, 1e-3)
    assert value == f(0.2)
    assert d1 == pytest.approx(exact, rel=1e-10)
    assert d2 == pytest.approx(-9 * math.sin(0.6), rel=1e-8)


@pytest.mark.parametrize('order', [1, 2])
def test_stencil_is_fourth_order(order):
    exact = 3 * math.exp(0.6) if order == 1 else 9 * math.exp(0.6)
    assert observed_order(lambda u: math.exp(3 * u), exact, 0.2, order) == pytest.approx(4.0, abs=0.3)


def test_wronskian_of_sine_and_cosine():
    assert wronskian_fd(math.sin, math.cos, 0.7) == pytest.approx(-1.0, rel=1e-10)


def test_ode_residual_report():
    form = LegendreOdeForm(2.0)
    grid = latitude_grid(0.3, 20)
    report = ode_residual(form, lambda t: 1.5 * math.cos(t) ** 2 - 0.5, grid)
    assert report.passed
    assert report.name == 'legendre'
    assert len(report.grid) == 20
    assert report.scale == pytest.approx(1.5 * math.cos(0.3) ** 2 - 0.5)
    data = report.to_dict()
    assert data['pass'] is True
    assert 'passed' not in data
    assert data['relative_residual'] == report.relative_residual


def test_ode_residual_rejects_boundary_stencils():
    with pytest.raises(DomainError):
        ode_residual(LegendreOdeForm(1.0), math.cos, [0.001])


def test_residual_report_with_zero_scale():
    assert ResidualReport('zero', [], 1e-3, 0.0, 0.0, 0.0, 1e-6).passed
    assert not ResidualReport('bad', [], 1e-3, 1.0, 1.0, 0.0, 1e-6).passed


def test_laplacian_of_quadratic_in_curvilinear_coordinates():
    # |x|^2 has Laplacian 2N in every system
    f = lambda p: float(np.sum(to_cartesian(p).as_array() ** 2))
    hs = HypersphericalPoint(5, 1.3, (0.8, 1.9, 1.1), 2.0)
    hc = HypercylindricalPoint(4, 0.9, (1.2,), 0.5, -0.4)
    assert laplacian_fd('hs', 5, f, hs) == pytest.approx(10.0, rel=1e-6)
    assert laplacian_fd('hc', 4, f, hc) == pytest.approx(8.0, rel=1e-6)


def test_laplacian_checks_point():
    f = lambda p: 1.0
    with pytest.raises(DomainError):
        laplacian_fd('hc', 4, f, HypersphericalPoint(4, 1.0, (0.5, 0.5), 0.0))
    with pytest.raises(DomainError):
        laplacian_fd('hs', 3, f, HypersphericalPoint(3, 1e-4, (0.5,), 0.0))


def test_helmholtz_residual_of_plane_wave():
    k = 1.3
    f = lambda p: math.cos(k * to_cartesian(p).coords[0])
    points = random_interior_points('hs', 3, 10, np.random.default_rng(5))
    report = helmholtz_residual('hs', 3, f, points, k * k)
    assert report.passed, report.relative_residual
    assert len(report.grid[0]) == 3


@pytest.mark.parametrize('a,b,c,z', [(0.5, 1.5, 2.0, 0.25), (-1.3, 2.2, 0.7, -0.6), (2.0, 3.0, 1.5, 0.45)])
def test_oracle_hyp2f1_against_mpmath(a, b, c, z):
    assert oracle_hyp2f1(a, b, c, z) == pytest.approx(float(mpmath.hyp2f1(a, b, c, z)), rel=1e-13)


def test_oracle_hyp2f1_domain():
    assert oracle_hyp2f1(-2.0, 3.0, 1.0, 1.0) == pytest.approx(1.0)
    with pytest.raises(DivergenceError):
        oracle_hyp2f1(0.5, 0.5, 1.0, 1.0)
    with pytest.raises(DomainError):
        oracle_hyp2f1(0.5, 0.5, -1.0, 0.2)


def test_oracle_bessel_j():
    assert oracle_bessel_j(0.0, 1.0) == pytest.approx(0.7651976865579666, rel=1e-15)
    assert oracle_bessel_j(1.5, 4.0) == pytest.approx(float(mpmath.besselj(1.5, 4.0)), rel=1e-12)
    with pytest.raises(OutOfDomainError):
        oracle_bessel_j(0.0, 40.0)


def test_random_interior_points_stay_inside():
    points = random_interior_points('hc', 5, 30, np.random.default_rng(1), margin=0.4)
    for p in points:
        assert isinstance(p, HypercylindricalPoint)
        assert 0.5 <= p.r <= 3.0
        assert all(0.4 <= theta <= math.pi - 0.4 for theta in p.thetas)
        assert -1.0 <= p.z <= 1.0


def test_latitude_grid():
    grid = latitude_grid(0.3, 50)
    assert len(grid) == 50
    assert grid[0] == pytest.approx(0.3)
    assert grid[-1] == pytest.approx(math.pi - 0.3)


LAPLACIAN_POINTS = [('hs', 2), ('hs', 3), ('hs', 4), ('hs', 6), ('hc', 3), ('hc', 4), ('hc', 5)]


@pytest.mark.parametrize('system,dim', LAPLACIAN_POINTS)
def test_laplacian_is_linear(system, dim):
    rng = np.random.default_rng(11 * dim)
    c, d = rng.normal(0.0, 0.3, dim), rng.normal(0.0, 0.5, dim)
    a, b = rng.uniform(-2.0, 2.0, 2)
    f = lambda p: math.exp(float(np.dot(c, to_cartesian(p).as_array())))
    g = lambda p: math.sin(float(np.dot(d, to_cartesian(p).as_array())))
    combined = lambda p: a * f(p) + b * g(p)
    for p in random_interior_points(system, dim, 3, rng, r_range=(1.0, 2.0), margin=0.8):
        expected = a * laplacian_fd(system, dim, f, p, h=1e-2) + b * laplacian_fd(system, dim, g, p, h=1e-2)
        assert laplacian_fd(system, dim, combined, p, h=1e-2) == pytest.approx(expected, abs=1e-8)


@pytest.mark.parametrize('system,dim', LAPLACIAN_POINTS)
def test_cartesian_components_are_harmonic(system, dim):
    rng = np.random.default_rng(100 + dim)
    for p in random_interior_points(system, dim, 3, rng, r_range=(1.0, 2.0), margin=0.8):
        for i in range(dim):
            component = lambda q, i=i: to_cartesian(q).coords[i]
            assert abs(laplacian_fd(system, dim, component, p)) < 1e-6


def _polar_laplacian(f, r, phi, h=1e-3):
    along_r = lambda s: f(s, phi)
    along_phi = lambda s: f(r, s)
    return (fd_derivative(along_r, r, 2, h) + fd_derivative(along_r, r, 1, h) / r
            + fd_derivative(along_phi, phi, 2, h) / (r * r))


@pytest.mark.parametrize('r,phi', [(0.7, 0.4), (1.5, 2.2), (2.4, 5.1)])
def test_two_dimensional_laplacian_is_polar(r, phi):
    f = lambda s, t: math.exp(0.3 * s) * math.cos(t) + s * s * math.sin(2.0 * t)
    p = HypersphericalPoint(2, r, (), phi)
    assert laplacian_fd('hs', 2, lambda q: f(q.r, q.phi), p) == pytest.approx(
        _polar_laplacian(f, r, phi), abs=1e-8)
    # r^3 cos(2 phi) -> 9 r cos(2 phi) - 4 r cos(2 phi)
    cubic = lambda q: q.r ** 3 * math.cos(2.0 * q.phi)
    assert laplacian_fd('hs', 2, cubic, p) == pytest.approx(5.0 * r * math.cos(2.0 * phi), abs=1e-6)


def test_laplacian_of_r_cos_theta_vanishes():
    p = HypersphericalPoint(3, 1.4, (0.9,), 0.3)
    assert abs(laplacian_fd('hs', 3, lambda q: q.r * math.cos(q.thetas[0]), p)) < 1e-6
