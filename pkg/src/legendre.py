"""
The Legendre hierarchy reduced to Gauss hypergeometric functions.

Four families share the differential equation

    G'' + (1 + 2 lambda) cot(theta) G' + [nu (nu + 1) - mu^2 csc^2(theta)] G = 0

Legendre (lambda = mu = 0), associated Legendre (lambda = 0), hyperspherical
Legendre (mu = 0) and hyperspherical associated Legendre (general). The last
one is (1 - x^2)^vartheta F(alpha, beta; 1/2; x^2) with x = cos(theta),
where vartheta solves vartheta^2 + lambda vartheta - mu^2/4 = 0.
"""

import math
import logging
from dataclasses import dataclass
from typing import Callable, Tuple

from src.exceptions import (
    ComplexParameterError,
    DivergenceError,
    DomainError,
    UnsupportedCombinationError,
)
from src.specfun import Hyp2F1Call, gamma_fn, hyp2f1

logger = logging.getLogger(__name__)

BRANCHES = ('plus', 'minus')
INTEGER_SNAP = 1e-12


def _as_integer(value: float):
    nearest = round(value)
    if abs(value - nearest) <= INTEGER_SNAP * max(1.0, abs(value)):
        return int(nearest)
    return None


@dataclass(frozen=True)
class HyperLegendreParams:
    """Degree nu, order mu, dimension lam and the vartheta root branch."""
    nu: float
    mu: float
    lam: float
    branch: str = 'plus'

    def __post_init__(self):
        for name in ('nu', 'mu', 'lam'):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.mu < 0:
            raise DomainError(f"Order mu must be >= 0, got {self.mu}")
        branch = str(self.branch).lower()
        if branch in ('+', 'p'):
            branch = 'plus'
        elif branch in ('-', 'm'):
            branch = 'minus'
        if branch not in BRANCHES:
            raise DomainError(f"Branch must be plus or minus, got {self.branch!r}")
        object.__setattr__(self, 'branch', branch)

    def with_branch(self, branch: str) -> 'HyperLegendreParams':
        return HyperLegendreParams(self.nu, self.mu, self.lam, branch)


@dataclass(frozen=True)
class ReducedParams:
    """Parameters of (1 - x^2)^vartheta F(alpha, beta; gamma_lower; x^2)."""
    vartheta: float
    alpha: float
    beta: float
    gamma_lower: float = 0.5


class OdeForm:
    """Second-order linear ODE a2(u) G'' + a1(u) G' + a0(u) G = 0 as a residual functional."""

    name = 'ode'
    domain = (-math.inf, math.inf)

    def coefficients(self, u: float) -> Tuple[float, float, float]:
        raise NotImplementedError

    def __call__(self, u: float, g: float, dg: float, d2g: float) -> float:
        a2, a1, a0 = self.coefficients(u)
        return a2 * d2g + a1 * dg + a0 * g


@dataclass(frozen=True)
class LegendreOdeForm(OdeForm):
    """G'' + (1 + 2 lam) cot(theta) G' + [nu(nu+1) - mu^2 csc^2(theta)] G in the latitude theta."""
    nu: float
    mu: float = 0.0
    lam: float = 0.0

    domain = (0.0, math.pi)

    @property
    def name(self) -> str:
        if self.lam == 0.0 and self.mu == 0.0:
            return 'legendre'
        if self.lam == 0.0:
            return 'assoc_legendre'
        if self.mu == 0.0:
            return 'hyper_legendre'
        return 'hyper_assoc_legendre'

    def coefficients(self, theta: float) -> Tuple[float, float, float]:
        sin_theta = math.sin(theta)
        if sin_theta == 0.0:
            raise DomainError(f"Legendre-type equation is singular at theta = {theta}")
        return (1.0,
                (1.0 + 2.0 * self.lam) * math.cos(theta) / sin_theta,
                self.nu * (self.nu + 1.0) - self.mu * self.mu / (sin_theta * sin_theta))


def legendre_ode_form(nu: float) -> LegendreOdeForm:
    return LegendreOdeForm(nu)


def assoc_legendre_ode_form(nu: float, mu: float) -> LegendreOdeForm:
    return LegendreOdeForm(nu, mu)


def hyper_legendre_ode_form(nu: float, lam: float) -> LegendreOdeForm:
    return LegendreOdeForm(nu, 0.0, lam)


def hyper_assoc_ode_residual_form(p: HyperLegendreParams) -> LegendreOdeForm:
    """Residual functional of the hyperspherical associated Legendre equation (both branches)."""
    return LegendreOdeForm(p.nu, p.mu, p.lam)


def legendre_p(nu: float, x: float) -> float:
    """Legendre function P_nu(x) = F(-nu, 1 + nu; 1; (1 - x)/2).

    Raises:
        DomainError: |x| > 1
        DivergenceError: x = -1 with non-integer nu
    """
    if not -1.0 <= x <= 1.0:
        raise DomainError(f"Legendre function needs -1 <= x <= 1, got {x}")
    return hyp2f1(Hyp2F1Call(-nu, 1.0 + nu, 1.0, 0.5 * (1.0 - x)))


def _assoc_legendre_integer(degree: int, order: int, x: float) -> float:
    # Standard upward recurrence in the degree, Condon-Shortley phase omitted
    if degree < 0:
        degree = -degree - 1
    if degree < order:
        return 0.0
    somx2 = math.sqrt((1.0 - x) * (1.0 + x))
    pmm = 1.0
    odd = 1.0
    for _ in range(order):
        pmm *= odd * somx2
        odd += 2.0
    if degree == order:
        return pmm
    pmmp1 = x * (2 * order + 1) * pmm
    for ll in range(order + 2, degree + 1):
        pll = (x * (2 * ll - 1) * pmmp1 - (ll + order - 1) * pmm) / (ll - order)
        pmm, pmmp1 = pmmp1, pll
    return pmmp1


def assoc_legendre_p(nu: float, mu: float, x: float) -> float:
    """Associated Legendre function P_nu^mu(x) on -1 < x < 1.

    Non-integer mu uses the real Ferrers form
    [(1+x)/(1-x)]^(mu/2) / Gamma(1-mu) F(-nu, nu+1; 1-mu; (1-x)/2);
    integer mu = m uses (1 - x^2)^(m/2) d^m P_l/dx^m without the
    Condon-Shortley phase.

    Raises:
        DomainError: x outside (-1, 1) or mu < 0
        UnsupportedCombinationError: integer mu >= 1 with non-integer nu
    """
    if not -1.0 < x < 1.0:
        raise DomainError(f"Associated Legendre function needs -1 < x < 1, got {x}")
    if mu < 0:
        raise DomainError(f"Order mu must be >= 0, got {mu}")
    order = _as_integer(mu)
    if order == 0:
        return legendre_p(nu, x)
    if order is not None:
        degree = _as_integer(nu)
        if degree is None:
            raise UnsupportedCombinationError(
                f"Integer order mu={order} with non-integer degree nu={nu} is not supported")
        return _assoc_legendre_integer(degree, order, x)
    prefactor = ((1.0 + x) / (1.0 - x)) ** (0.5 * mu) / gamma_fn(1.0 - mu)
    return prefactor * hyp2f1(Hyp2F1Call(-nu, nu + 1.0, 1.0 - mu, 0.5 * (1.0 - x)))


def _radical(nu: float, lam: float) -> float:
    value = (lam + 0.5) ** 2 + nu * (nu + 1.0)
    if value < 0:
        raise ComplexParameterError(
            f"(lambda + 1/2)^2 + nu(nu + 1) = {value} < 0 for nu={nu}, lambda={lam}")
    return math.sqrt(value)


def hyper_legendre(nu: float, lam: float, x: float) -> float:
    """Hyperspherical Legendre function F(alpha, beta; 1 + lambda; (1 - x)/2).

    alpha, beta = lambda + 1/2 +- sqrt((lambda + 1/2)^2 + nu(nu + 1)).

    Raises:
        DomainError: x outside [-1, 1]
        ComplexParameterError: negative radical
        DivergenceError: x = -1 unless the series terminates
    """
    if not -1.0 <= x <= 1.0:
        raise DomainError(f"Hyperspherical Legendre function needs -1 < x <= 1, got {x}")
    root = _radical(nu, lam)
    return hyp2f1(Hyp2F1Call(lam + 0.5 + root, lam + 0.5 - root, 1.0 + lam, 0.5 * (1.0 - x)))


def _vartheta(p: HyperLegendreParams) -> float:
    root = math.sqrt(0.25 * (p.lam * p.lam + p.mu * p.mu))
    return -0.5 * p.lam + (root if p.branch == 'plus' else -root)


def hyper_assoc_params(p: HyperLegendreParams) -> ReducedParams:
    """Parameters vartheta, alpha, beta of the hyperspherical associated Legendre function.

    vartheta = -lambda/2 +- sqrt((lambda^2 + mu^2)/4) by branch, and
    2{alpha, beta} = 2 vartheta + lambda + 1/2 +- sqrt((lambda + 1/2)^2 + nu(nu + 1)).

    Raises:
        ComplexParameterError: negative radical
    """
    vartheta = _vartheta(p)
    total = 2.0 * vartheta + p.lam + 0.5
    root = _radical(p.nu, p.lam)
    return ReducedParams(vartheta, 0.5 * (total + root), 0.5 * (total - root))


def uncorrected_hyper_assoc_params(p: HyperLegendreParams) -> ReducedParams:
    """Parameters with the extra 4 vartheta^2 term inside the alpha/beta radical.

    These do not solve the equation; kept as a negative control.
    """
    vartheta = _vartheta(p)
    total = 2.0 * vartheta + p.lam + 0.5
    root = math.sqrt(abs(4.0 * vartheta * vartheta + (p.lam + 0.5) ** 2 + p.nu * (p.nu + 1.0)))
    return ReducedParams(vartheta, 0.5 * (total + root), 0.5 * (total - root))


def reduced_value(reduced: ReducedParams, x: float, one_minus_x2: float = None) -> float:
    """(1 - x^2)^vartheta F(alpha, beta; gamma_lower; x^2) for |x| < 1."""
    if not -1.0 < x < 1.0:
        raise DivergenceError(
            f"Hyperspherical associated Legendre functions diverge for |x| >= 1, got x={x}")
    if one_minus_x2 is None:
        one_minus_x2 = (1.0 - x) * (1.0 + x)
    series = hyp2f1(Hyp2F1Call(reduced.alpha, reduced.beta, reduced.gamma_lower, x * x))
    return one_minus_x2 ** reduced.vartheta * series


def hyper_assoc_legendre(p: HyperLegendreParams, x: float) -> float:
    """Hyperspherical associated Legendre function (1 - x^2)^vartheta F(alpha, beta; 1/2; x^2).

    Raises:
        DivergenceError: |x| >= 1
        ComplexParameterError: negative radical
    """
    return reduced_value(hyper_assoc_params(p), x)


def hyper_assoc_legendre_theta(p: HyperLegendreParams, theta: float) -> float:
    """Same function in the latitude: sin^(2 vartheta)(theta) F(alpha, beta; 1/2; cos^2(theta))."""
    sin_theta = math.sin(theta)
    return reduced_value(hyper_assoc_params(p), math.cos(theta), sin_theta * sin_theta)


def family_function(nu: float, mu: float, lam: float,
                    branch: str = 'plus') -> Tuple[Callable[[float], float], LegendreOdeForm]:
    """Most specific member of the hierarchy as a function of theta, with its ODE form.

    The branch only matters for the general member (mu > 0 and lam != 0).
    """
    form = LegendreOdeForm(nu, mu, lam)
    if lam == 0.0 and mu == 0.0:
        return (lambda theta: legendre_p(nu, math.cos(theta))), form
    if lam == 0.0:
        return (lambda theta: assoc_legendre_p(nu, mu, math.cos(theta))), form
    if mu == 0.0:
        return (lambda theta: hyper_legendre(nu, lam, math.cos(theta))), form
    params = HyperLegendreParams(nu, mu, lam, branch)
    return (lambda theta: hyper_assoc_legendre_theta(params, theta)), form
