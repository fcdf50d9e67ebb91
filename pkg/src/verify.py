"""
Independent numerical oracles.

Finite-difference derivatives, ODE and Helmholtz residual harnesses, the
N-dimensional finite-difference Laplacian in curvilinear coordinates, and a
compensated-summation re-implementation of the 2F1 and Bessel J series that
shares no code with the kernels in src.specfun.
"""

import math
import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, Sequence, Tuple

import numpy as np

from src.coords import (
    CartesianPoint,
    CurvilinearPoint,
    from_coordinates,
    metric_log_derivatives,
    normalize_system,
    scale_factors,
    shifted,
    system_of,
)
from src.exceptions import (
    ConvergenceError,
    DivergenceError,
    DomainError,
    OutOfDomainError,
)

logger = logging.getLogger(__name__)

DEFAULT_STEP = 1e-3
ORACLE_EPS = 1e-17
ORACLE_MAX_TERMS = 100000


@dataclass
class ResidualReport:
    """Outcome of a residual check over a grid of points."""
    name: str
    grid: List[Any]
    step: float
    max_residual: float
    mean_residual: float
    scale: float
    tolerance: float
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = self.relative_residual < self.tolerance

    @property
    def relative_residual(self) -> float:
        if self.scale == 0.0:
            return math.inf if self.max_residual > 0 else 0.0
        return self.max_residual / self.scale

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['pass'] = data.pop('passed')
        data['relative_residual'] = self.relative_residual
        data['grid'] = [list(g) if isinstance(g, (tuple, list)) else g for g in self.grid]
        return data


def fd_derivative(f: Callable[[float], float], x: float, order: int = 1, h: float = DEFAULT_STEP):
    """Fourth-order five-point central difference of order 1 or 2."""
    f_m2, f_m1, f_p1, f_p2 = f(x - 2 * h), f(x - h), f(x + h), f(x + 2 * h)
    if order == 1:
        return (f_m2 - 8.0 * f_m1 + 8.0 * f_p1 - f_p2) / (12.0 * h)
    if order == 2:
        return (-f_m2 + 16.0 * f_m1 - 30.0 * f(x) + 16.0 * f_p1 - f_p2) / (12.0 * h * h)
    raise DomainError(f"Derivative order must be 1 or 2, got {order}")


def richardson(d_h, d_h2, order: int = 4):
    """Extrapolate two estimates at steps h and h/2 of a method with error O(h^order)."""
    factor = 2.0 ** order
    return (factor * d_h2 - d_h) / (factor - 1.0)


def fd_derivatives(f: Callable[[float], float], x: float, h: float = DEFAULT_STEP,
                   use_richardson: bool = True) -> Tuple[Any, Any, Any]:
    """Value, first and second derivative of ``f`` at ``x``."""
    d1 = fd_derivative(f, x, 1, h)
    d2 = fd_derivative(f, x, 2, h)
    if use_richardson:
        d1 = richardson(d1, fd_derivative(f, x, 1, 0.5 * h))
        d2 = richardson(d2, fd_derivative(f, x, 2, 0.5 * h))
    return f(x), d1, d2


def observed_order(f: Callable[[float], float], exact: float, x: float, order: int = 1,
                   h: float = 1e-2) -> float:
    """Convergence rate log2(e(h)/e(h/2)) of the stencil against a known derivative."""
    coarse = abs(fd_derivative(f, x, order, h) - exact)
    fine = abs(fd_derivative(f, x, order, 0.5 * h) - exact)
    if fine == 0.0:
        return math.inf
    return math.log2(coarse / fine)


def wronskian_fd(f: Callable[[float], float], g: Callable[[float], float], x: float,
                 h: float = DEFAULT_STEP) -> float:
    """f g' - f' g with finite-difference derivatives."""
    return f(x) * fd_derivative(g, x, 1, h) - fd_derivative(f, x, 1, h) * g(x)


def _report(name: str, grid: List[Any], step: float, residuals: Sequence[float],
            values: Sequence[float], tolerance: float) -> ResidualReport:
    residuals = np.asarray(residuals, dtype=float)
    scale = float(np.max(np.abs(values))) if len(values) else 0.0
    report = ResidualReport(name, list(grid), step, float(np.max(residuals)),
                            float(np.mean(residuals)), scale, tolerance)
    logger.debug(f"{name}: max residual {report.max_residual:.3e}, scale {scale:.3e}")
    return report


def ode_residual(coeff_form, f: Callable[[float], float], grid: Sequence[float],
                 h: float = DEFAULT_STEP, tolerance: float = 1e-6,
                 use_richardson: bool = True, name: str = None) -> ResidualReport:
    """Evaluate a residual functional ``coeff_form(u, g, g', g'')`` on ``grid``.

    Raises:
        DomainError: a stencil would leave the form's domain
    """
    low, high = getattr(coeff_form, 'domain', (-math.inf, math.inf))
    residuals, values = [], []
    for u in grid:
        if not (low < u - 2 * h and u + 2 * h < high):
            raise DomainError(f"Grid point {u} is within 2h of the domain boundary {low, high}")
        g, dg, d2g = fd_derivatives(f, u, h, use_richardson)
        residuals.append(abs(coeff_form(u, g, dg, d2g)))
        values.append(abs(g))
    return _report(name or getattr(coeff_form, 'name', 'ode'), list(grid), h,
                   residuals, values, tolerance)


def _check_interior(p: CurvilinearPoint, h: float) -> None:
    if p.r <= 2 * h:
        raise DomainError(f"Point too close to r = 0 for step {h}: r={p.r}")
    for index, theta in enumerate(p.thetas, start=1):
        if not 2 * h < theta < math.pi - 2 * h:
            raise DomainError(f"theta_{index}={theta} is within 2h of the axis")


def laplacian_fd(system: str, dim: int, f: Callable[[CurvilinearPoint], Any],
                 p: CurvilinearPoint, h: float = DEFAULT_STEP):
    """Finite-difference Laplacian sum_i h_i^-2 [f_ii + (d_i log sqrt g) f_i].

    Each term is the conservative form (1/sqrt g) d_i (sqrt g / h_i^2 d_i f)
    expanded with analytic weights; derivatives use five-point stencils.

    Raises:
        DomainError: degenerate point or mismatched system/dimension
    """
    if normalize_system(system) != system_of(p) or p.dim != dim:
        raise DomainError(f"Point {p} does not belong to {system} N={dim}")
    _check_interior(p, h)
    h_factors = scale_factors(p).h
    weights = metric_log_derivatives(p)
    centre = f(p)
    total = 0.0
    for i in range(dim):
        f_m2, f_m1 = f(shifted(p, i, -2 * h)), f(shifted(p, i, -h))
        f_p1, f_p2 = f(shifted(p, i, h)), f(shifted(p, i, 2 * h))
        first = (f_m2 - 8.0 * f_m1 + 8.0 * f_p1 - f_p2) / (12.0 * h)
        second = (-f_m2 + 16.0 * f_m1 - 30.0 * centre + 16.0 * f_p1 - f_p2) / (12.0 * h * h)
        total += (second + weights[i] * first) / (h_factors[i] * h_factors[i])
    return total


def cartesian_laplacian_fd(f: Callable[[CartesianPoint], Any], x: CartesianPoint,
                           h: float = DEFAULT_STEP):
    """Sum of five-point second differences along each Cartesian axis."""
    base = x.as_array()
    total = 0.0
    for i in range(x.dim):
        def along(value, i=i):
            moved = base.copy()
            moved[i] = value
            return f(CartesianPoint(tuple(moved)))
        total += fd_derivative(along, base[i], 2, h)
    return total


def helmholtz_residual(system: str, dim: int, f: Callable[[CurvilinearPoint], Any],
                       points: Sequence[CurvilinearPoint], k2: float,
                       h: float = DEFAULT_STEP, tolerance: float = 1e-4,
                       name: str = 'helmholtz') -> ResidualReport:
    """|laplacian(f) + k^2 f| over ``points``, normalized by max |f|."""
    residuals, values = [], []
    for p in points:
        value = f(p)
        residuals.append(abs(laplacian_fd(system, dim, f, p, h) + k2 * value))
        values.append(abs(value))
    grid = [tuple(float(v) for v in p.as_array()) for p in points]
    return _report(name, grid, h, residuals, values, tolerance)


class _CompensatedSum:
    """Neumaier's improved Kahan summation."""

    def __init__(self):
        self.total = 0.0
        self.compensation = 0.0

    def add(self, value: float) -> None:
        t = self.total + value
        if abs(self.total) >= abs(value):
            self.compensation += (self.total - t) + value
        else:
            self.compensation += (value - t) + self.total
        self.total = t

    @property
    def value(self) -> float:
        return self.total + self.compensation


def _oracle_integer_le_zero(value: float):
    if value > 0:
        return None
    nearest = math.floor(value + 0.5)
    return int(-nearest) if abs(value - nearest) < 1e-12 else None


def oracle_hyp2f1(alpha: float, beta: float, gamma: float, z: float) -> float:
    """Direct compensated sum of the 2F1 series without transformations."""
    stops = [n for n in (_oracle_integer_le_zero(alpha), _oracle_integer_le_zero(beta)) if n is not None]
    last = min(stops) if stops else None
    gamma_pole = _oracle_integer_le_zero(gamma)
    if gamma_pole is not None and (last is None or last > gamma_pole):
        raise DomainError(f"gamma={gamma} is a pole of the 2F1 series")
    if last is None and abs(z) >= 1.0:
        raise DivergenceError(f"2F1 series diverges at z={z}")
    acc = _CompensatedSum()
    acc.add(1.0)
    term = 1.0
    k = 0
    while True:
        if last is not None and k == last:
            return acc.value
        if k >= ORACLE_MAX_TERMS:
            raise ConvergenceError(f"oracle 2F1 did not converge at z={z}")
        previous = term
        term = term * (alpha + k) / (gamma + k) * (beta + k) / (k + 1) * z
        acc.add(term)
        k += 1
        shrinking = abs(term) < abs(previous)
        if last is None and shrinking and abs(term) < ORACLE_EPS * abs(acc.value):
            return acc.value


def oracle_bessel_j(sigma: float, x: float) -> float:
    """Compensated power series of J_sigma(x) with math.gamma for the leading term."""
    if sigma < 0 or x < 0:
        raise DomainError(f"oracle J needs sigma >= 0 and x >= 0, got {sigma}, {x}")
    if x > 30.0:
        raise OutOfDomainError(f"oracle J is validated for x <= 30, got {x}")
    if x == 0.0:
        return 1.0 if sigma == 0.0 else 0.0
    y = x * x / 4.0
    term = math.exp(sigma * math.log(x / 2.0)) / math.gamma(sigma + 1.0)
    acc = _CompensatedSum()
    acc.add(term)
    for k in range(1, 1000):
        term = -term * y / (k * (k + sigma))
        acc.add(term)
        if k > x and abs(term) < ORACLE_EPS * abs(acc.value):
            return acc.value
    raise ConvergenceError(f"oracle J_{sigma}({x}) did not converge")


def latitude_grid(margin: float = 0.3, count: int = 50) -> np.ndarray:
    """Evenly spaced latitudes on [margin, pi - margin]."""
    return np.linspace(margin, math.pi - margin, count)


def random_interior_points(system: str, dim: int, count: int, rng: np.random.Generator,
                           r_range: Tuple[float, float] = (0.5, 3.0),
                           margin: float = 0.4, z_range: Tuple[float, float] = (-1.0, 1.0)
                           ) -> List[CurvilinearPoint]:
    """Random points with r in ``r_range`` and latitudes in [margin, pi - margin]."""
    system = normalize_system(system)
    latitudes = dim - 2 if system == 'hs' else dim - 3
    points = []
    for _ in range(count):
        values = [rng.uniform(*r_range)]
        values += list(rng.uniform(margin, math.pi - margin, latitudes))
        values.append(rng.uniform(0.0, 2.0 * math.pi))
        if system == 'hc':
            values.append(rng.uniform(*z_range))
        points.append(from_coordinates(system, dim, values))
    return points
