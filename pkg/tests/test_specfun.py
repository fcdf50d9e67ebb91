import math

import mpmath
import pytest

from src.exceptions import ConvergenceError, DivergenceError, DomainError, OutOfDomainError, SingularityError
from src.specfun import (
    BesselOrder,
    Hyp2F1Call,
    bessel,
    bessel_j,
    bessel_y,
    gamma_fn,
    hankel,
    hyp2f1,
    hyp2f1_direct,
    pochhammer,
    spherical_bessel,
)


@pytest.mark.parametrize('x,expected', [(1.0, 1.0), (5.0, 24.0), (0.5, math.sqrt(math.pi))])
def test_gamma_known_values(x, expected):
    assert gamma_fn(x) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize('x', [0.1, 1.7, 3.25, 12.5, 40.0, -0.5, -2.3])
def test_gamma_against_mpmath(x):
    assert gamma_fn(x) == pytest.approx(float(mpmath.gamma(x)), rel=1e-12)


@pytest.mark.parametrize('x', [0.0, -1.0, -4.0])
def test_gamma_poles(x):
    with pytest.raises(DomainError):
        gamma_fn(x)


def test_gamma_overflow():
    with pytest.raises(DomainError):
        gamma_fn(200.0)


def test_pochhammer():
    assert pochhammer(3.0, 0) == 1.0
    assert pochhammer(3.0, 3) == 60.0
    assert pochhammer(-2.0, 3) == 0.0
    with pytest.raises(DomainError):
        pochhammer(1.0, -1)


def test_hyp2f1_at_origin():
    assert hyp2f1(Hyp2F1Call(2.3, -1.7, 0.9, 0.0)) == 1.0


def test_hyp2f1_log_identity():
    # z F(1, 1; 2; z) = -log(1 - z)
    z = 0.3
    assert z * hyp2f1(Hyp2F1Call(1.0, 1.0, 2.0, z)) == pytest.approx(-math.log(1 - z), rel=1e-14)


@pytest.mark.parametrize('a,b,c,z', [
    (0.5, 1.5, 2.0, 0.25),
    (-1.3, 2.2, 0.7, -0.6),
    (1.2, 0.8, 2.5, 0.8),
    (0.25, 0.75, 0.5, 0.95),
    (3.1, -0.4, 4.2, 0.65),
])
def test_hyp2f1_against_mpmath(a, b, c, z):
    expected = float(mpmath.hyp2f1(a, b, c, z))
    assert hyp2f1(Hyp2F1Call(a, b, c, z)) == pytest.approx(expected, rel=1e-11)


def test_hyp2f1_terminating_polynomial():
    # F(-2, b; c; z) = 1 - 2bz/c + b(b+1)z^2/(c(c+1))
    b, c, z = 3.0, 1.0, 0.5
    expected = 1 - 2 * b * z / c + b * (b + 1) * z * z / (c * (c + 1))
    assert hyp2f1(Hyp2F1Call(-2.0, b, c, z)) == pytest.approx(expected, rel=1e-15)
    assert Hyp2F1Call(-2.0, b, c, z).terminating_degree() == 2


def test_hyp2f1_terminating_outside_unit_disc():
    # Legendre P_2(-1) = 1 through F(-2, 3; 1; 1)
    assert hyp2f1(Hyp2F1Call(-2.0, 3.0, 1.0, 1.0)) == pytest.approx(1.0, rel=1e-15)


def test_hyp2f1_divergence():
    with pytest.raises(DivergenceError):
        hyp2f1(Hyp2F1Call(0.5, 0.5, 1.0, 1.0))
    with pytest.raises(DivergenceError):
        hyp2f1(Hyp2F1Call(0.5, 0.5, 1.0, -1.5))


def test_hyp2f1_gamma_pole():
    with pytest.raises(DomainError):
        hyp2f1(Hyp2F1Call(1.0, 1.0, -2.0, 0.3))
    # the series stops before the pole is reached
    assert hyp2f1(Hyp2F1Call(-1.0, 1.0, -2.0, 0.3)) == pytest.approx(1.0 + 0.3 / 2.0)


def test_hyp2f1_direct_agrees_with_euler_transform():
    call = Hyp2F1Call(0.3, 0.6, 1.4, 0.7)
    assert hyp2f1_direct(call) == pytest.approx(hyp2f1(call), rel=1e-12)


def test_hyp2f1_term_cap(monkeypatch):
    import src.specfun as specfun
    monkeypatch.setattr(specfun, 'HYP2F1_MAX_TERMS', 5)
    with pytest.raises(ConvergenceError):
        hyp2f1(Hyp2F1Call(0.5, 0.5, 1.0, 0.49))


def test_bessel_j0_at_one():
    assert bessel_j(0.0, 1.0) == pytest.approx(0.7651976865579666, rel=1e-15)


@pytest.mark.parametrize('sigma,x', [(0.0, 0.5), (1.0, 3.0), (math.sqrt(3.0), 2.0), (2.5, 10.0), (0.3, 8.0)])
def test_bessel_j_against_mpmath(sigma, x):
    assert bessel_j(sigma, x) == pytest.approx(float(mpmath.besselj(sigma, x)), rel=1e-9, abs=1e-12)


@pytest.mark.parametrize('sigma,x', [(0.5, 1.0), (math.sqrt(3.0), 2.0), (2.5, 5.0)])
def test_bessel_y_against_mpmath(sigma, x):
    assert bessel_y(sigma, x) == pytest.approx(float(mpmath.bessely(sigma, x)), rel=1e-10)


@pytest.mark.parametrize('sigma', [0.0, 1.0, 2.0])
def test_bessel_y_integer_order(sigma):
    assert bessel_y(sigma, 1.5) == pytest.approx(float(mpmath.bessely(sigma, 1.5)), rel=1e-6)


def test_bessel_recurrence():
    sigma, x = 1.3, 2.0
    lhs = bessel_j(sigma - 1, x) + bessel_j(sigma + 1, x)
    assert lhs == pytest.approx(2 * sigma / x * bessel_j(sigma, x), rel=1e-12)


def test_bessel_domain():
    with pytest.raises(SingularityError):
        bessel_y(1.0, 0.0)
    with pytest.raises(OutOfDomainError):
        bessel_j(1.0, 31.0)
    with pytest.raises(DomainError):
        bessel_j(-1.0, 1.0)
    with pytest.raises(DomainError):
        BesselOrder(-0.5)
    assert bessel_j(0.0, 0.0) == 1.0
    assert bessel_j(2.0, 0.0) == 0.0


def test_bessel_order_from_square():
    assert BesselOrder.from_square(3.0).sigma == pytest.approx(math.sqrt(3.0))
    with pytest.raises(DomainError):
        BesselOrder.from_square(-1.0)


def test_hankel_and_dispatch():
    sigma, x = 1.5, 2.0
    h1 = hankel(1, sigma, x)
    assert h1 == bessel('H1', sigma, x)
    assert h1.real == bessel_j(sigma, x)
    assert h1.imag == bessel_y(sigma, x)
    assert hankel(2, sigma, x) == h1.conjugate()
    assert bessel('y', sigma, x) == bessel_y(sigma, x)
    with pytest.raises(DomainError):
        bessel('K', sigma, x)


def test_spherical_bessel_closed_forms():
    x = 1.0
    assert spherical_bessel('j', 0, x) == pytest.approx(math.sin(x) / x, rel=1e-13)
    assert spherical_bessel('y', 0, x) == pytest.approx(-math.cos(x) / x, rel=1e-12)
    j1 = math.sin(x) / x ** 2 - math.cos(x) / x
    assert spherical_bessel('j', 1, x) == pytest.approx(j1, rel=1e-12)
    assert spherical_bessel('h1', 0, x) == pytest.approx(complex(math.sin(x), -math.cos(x)) / x, rel=1e-12)


def test_spherical_bessel_errors():
    assert spherical_bessel('j', 0, 0.0) == 1.0
    with pytest.raises(SingularityError):
        spherical_bessel('y', 1, 0.0)
    with pytest.raises(DomainError):
        spherical_bessel('j', 1.5, 1.0)


@pytest.mark.parametrize('x', [-1.0 - 1e-7, -1.0 + 1e-7, -2.0 + 1e-8, -5.0 - 1e-9, -3.9999999])
def test_gamma_near_negative_integers(x):
    assert gamma_fn(x) == pytest.approx(float(mpmath.gamma(mpmath.mpf(x))), rel=1e-11)


@pytest.mark.parametrize('sigma', [2.0 + 1e-7, 2.0 - 1e-7, 3.0 - 1e-7, 1.0 + 1e-6])
def test_bessel_y_just_outside_integer_window(sigma):
    expected = float(mpmath.bessely(mpmath.mpf(sigma), 3))
    assert bessel_y(sigma, 3.0) == pytest.approx(expected, rel=1e-7)


@pytest.mark.parametrize('kind,sigma,x,tolerance', [
    ('J', 0.0, 29.9, 2e-5),
    ('J', 2.5, 25.0, 2e-5),
    ('Y', 1.0, 20.0, 1e-4),
])
def test_bessel_accuracy_near_top_of_domain(kind, sigma, x, tolerance):
    reference = mpmath.besselj if kind == 'J' else mpmath.bessely
    assert bessel(kind, sigma, x) == pytest.approx(float(reference(sigma, x)), abs=tolerance)
