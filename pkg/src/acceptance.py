"""
Acceptance matrix run by ``cli.py verify``.

Each suite returns CheckResult records; a suite passes only when every check
passes. Residual checks carry their ResidualReport for the JSON output.
"""

import math
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from src.config_manager import VerifySettings
from src.coords import (
    CartesianPoint,
    HypercylindricalPoint,
    HypersphericalPoint,
    base_vectors,
    coordinates,
    from_cartesian,
    from_coordinates,
    metric_det_sqrt,
    scale_factors,
    to_cartesian,
)
from src.exceptions import CheckFailedError, HyperHarmonicsError
from src.legendre import (
    HyperLegendreParams,
    family_function,
    hyper_assoc_legendre,
    hyper_assoc_legendre_theta,
    hyper_assoc_ode_residual_form,
    hyper_assoc_params,
    reduced_value,
    uncorrected_hyper_assoc_params,
)
from src.physics import (
    ModeSpec,
    PhysicsCoefficients,
    bessel_order,
    cartesian_mode,
    cartesian_wavenumber_sq,
    dispersion,
    hypersphere_flux,
    mode_eval,
    radial_ode_form,
    radial_prefactor,
    total_wavenumber_sq,
)
from src.specfun import (
    Hyp2F1Call,
    bessel_j,
    bessel_y,
    gamma_fn,
    hyp2f1,
    hyp2f1_direct,
)
from src.verify import (
    ResidualReport,
    cartesian_laplacian_fd,
    helmholtz_residual,
    latitude_grid,
    observed_order,
    ode_residual,
    oracle_bessel_j,
    oracle_hyp2f1,
    random_interior_points,
    wronskian_fd,
)

SUITES = ('coords', 'specfun', 'legendre', 'physics')

SQRT2 = math.sqrt(2.0)
SQRT6 = math.sqrt(6.0)
NU_VALUES = (1.0, 2.0, 3.0)
MU_VALUES = (0.0, SQRT2, SQRT6)
LAMBDA_VALUES = (0.0, 0.5, 1.0)
FIGURE_PRESETS = ((1, 1), (1, 2), (2, 2), (2, 3), (3, 1), (3, 3))
J0_AT_1 = 0.7651976865579666


@dataclass
class CheckResult:
    """Verdict of one acceptance check."""
    suite: str
    name: str
    passed: bool
    details: Dict[str, Any] = field(default_factory=dict)
    reports: List[ResidualReport] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'suite': self.suite,
            'name': self.name,
            'pass': bool(self.passed),
            'details': self.details,
            'reports': [report.to_dict() for report in self.reports],
        }


def _relative(a, b) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


class VerificationSuite:
    """Runs the acceptance checks with settings from ConfigManager."""

    def __init__(self, settings: VerifySettings):
        self.settings = settings
        self.logger = logging.getLogger(__name__)
        self.rng = np.random.default_rng(settings.seed)

    def run(self, suite: str = 'all') -> List[CheckResult]:
        suites = SUITES if suite == 'all' else (suite,)
        results = []
        for name in suites:
            runner: Optional[Callable[[], List[CheckResult]]] = getattr(self, f'run_{name}', None)
            if runner is None:
                raise CheckFailedError(f"Unknown verification suite: {name}")
            self.logger.info(f"Running {name} checks")
            results.extend(runner())
        return results

    @staticmethod
    def failures(results: List[CheckResult]) -> List[CheckResult]:
        return [result for result in results if not result.passed]

    def require_all(self, results: List[CheckResult]) -> None:
        """Raise CheckFailedError naming every failing check."""
        failed = self.failures(results)
        if failed:
            names = ', '.join(f"{r.suite}.{r.name}" for r in failed)
            raise CheckFailedError(f"{len(failed)} check(s) failed: {names}")

    def _record(self, suite: str, name: str, passed: bool, details: Dict[str, Any] = None,
                reports: List[ResidualReport] = None) -> CheckResult:
        result = CheckResult(suite, name, bool(passed), details or {}, reports or [])
        if result.passed:
            self.logger.info(f"PASS {suite}.{name}")
        else:
            self.logger.error(f"FAIL {suite}.{name}: {details}")
        return result

    # coords

    def _dims(self, minimum: int) -> range:
        low, high = self.settings.dims
        return range(max(low, minimum), high + 1)

    def _random_point(self, system: str, dim: int):
        latitudes = dim - 2 if system == 'hs' else dim - 3
        values = [self.rng.uniform(0.5, 3.0)]
        values += list(self.rng.uniform(0.1, math.pi - 0.1, latitudes))
        values.append(self.rng.uniform(0.0, 2.0 * math.pi))
        if system == 'hc':
            values.append(self.rng.uniform(-2.0, 2.0))
        return from_coordinates(system, dim, values)

    def run_coords(self) -> List[CheckResult]:
        results = []
        for system, minimum in (('hs', 2), ('hc', 3)):
            for dim in self._dims(minimum):
                worst = 0.0
                for _ in range(self.settings.coords_points):
                    x = CartesianPoint(tuple(self.rng.normal(size=dim)))
                    back = to_cartesian(from_cartesian(system, x)).as_array()
                    worst = max(worst, float(np.linalg.norm(back - x.as_array()) / np.linalg.norm(x.as_array())))
                results.append(self._record('coords', f'round_trip_{system}_N{dim}', worst < 1e-10,
                                            {'max_relative_error': worst}))
            for dim in self._dims(minimum):
                results.append(self._frame_check(system, dim))
        return results

    def _frame_check(self, system: str, dim: int) -> CheckResult:
        worst = {'orthogonality': 0.0, 'norm_law': 0.0, 'determinant_law': 0.0, 'jacobian': 0.0}
        step = 1e-6
        for _ in range(max(1, self.settings.coords_points // 10)):
            p = self._random_point(system, dim)
            frame = base_vectors(p)
            norms = frame.norms()
            gram = frame.gram()
            h = np.array(scale_factors(p).h)
            for i in range(dim):
                for j in range(i + 1, dim):
                    worst['orthogonality'] = max(worst['orthogonality'],
                                                 abs(gram[i, j]) / (norms[i] * norms[j]))
            worst['norm_law'] = max(worst['norm_law'], float(np.max(np.abs(norms - h) / h)))
            worst['determinant_law'] = max(worst['determinant_law'],
                                           _relative(metric_det_sqrt(p), float(np.prod(h))))
            values = coordinates(p)
            for i in range(dim):
                plus, minus = list(values), list(values)
                plus[i] += step
                minus[i] -= step
                derivative = (to_cartesian(from_coordinates(system, dim, plus)).as_array()
                              - to_cartesian(from_coordinates(system, dim, minus)).as_array()) / (2 * step)
                worst['jacobian'] = max(worst['jacobian'],
                                        float(np.max(np.abs(derivative - frame.vectors[i]))))
        passed = (worst['orthogonality'] < 1e-10 and worst['norm_law'] < 1e-10
                  and worst['determinant_law'] < 1e-12 and worst['jacobian'] < 1e-6)
        return self._record('coords', f'frame_laws_{system}_N{dim}', passed, worst)

    # specfun

    def run_specfun(self) -> List[CheckResult]:
        results = []

        gamma_cases = {1.0: 1.0, 5.0: 24.0, 0.5: math.sqrt(math.pi)}
        gamma_error = max(_relative(gamma_fn(x), value) for x, value in gamma_cases.items())
        sweep = np.linspace(0.5, 50.0, 200)
        gamma_error = max(gamma_error, max(_relative(gamma_fn(x), math.gamma(x)) for x in sweep))
        results.append(self._record('specfun', 'gamma_accuracy', gamma_error < 1e-12,
                                    {'max_relative_error': gamma_error}))

        worst = 0.0
        for _ in range(20):
            a, b = self.rng.uniform(0.2, 2.5, 2)
            c = self.rng.uniform(0.5, 3.0)
            z = self.rng.uniform(0.0, 0.5)
            h = 1e-5
            numeric = (hyp2f1(Hyp2F1Call(a, b, c, z + h)) - hyp2f1(Hyp2F1Call(a, b, c, z - h))) / (2 * h)
            exact = a * b / c * hyp2f1(Hyp2F1Call(a + 1, b + 1, c + 1, z))
            worst = max(worst, _relative(numeric, exact))
        results.append(self._record('specfun', 'hyp2f1_derivative_identity', worst < 1e-6,
                                    {'max_relative_error': worst}))

        worst = 0.0
        for _ in range(20):
            a, b = self.rng.uniform(-2.5, 2.5, 2)
            c = self.rng.uniform(0.5, 3.0)
            z = self.rng.uniform(0.1, 0.45)
            direct = hyp2f1_direct(Hyp2F1Call(a, b, c, z))
            transformed = (1 - z) ** (c - a - b) * hyp2f1_direct(Hyp2F1Call(c - a, c - b, c, z))
            worst = max(worst, abs(direct - transformed) / max(1.0, abs(direct)))
        results.append(self._record('specfun', 'hyp2f1_euler_transform', worst < 1e-10,
                                    {'max_relative_error': worst}))

        worst = 0.0
        for sigma in (1.3, math.sqrt(3.0), 2.5):
            for x in (0.5, 2.0, 10.0):
                lower, upper = bessel_j(sigma - 1, x), bessel_j(sigma + 1, x)
                middle = 2 * sigma / x * bessel_j(sigma, x)
                worst = max(worst, abs(lower + upper - middle) / (abs(lower) + abs(upper)))
        results.append(self._record('specfun', 'bessel_recurrence', worst < 1e-10,
                                    {'max_relative_error': worst}))

        sigma, x = math.sqrt(3.0), 2.0
        wronskian = wronskian_fd(lambda u: bessel_j(sigma, u), lambda u: bessel_y(sigma, u), x)
        error = abs(wronskian - 2.0 / (math.pi * x))
        results.append(self._record('specfun', 'bessel_wronskian', error < 1e-8,
                                    {'wronskian': wronskian, 'abs_error': error}))

        results.append(self._terminating_check())

        worst = 0.0
        for _ in range(100):
            a, b = self.rng.uniform(-3.0, 3.0, 2)
            c = self.rng.uniform(0.5, 4.0)
            z = self.rng.uniform(-0.5, 0.5)
            kernel = hyp2f1(Hyp2F1Call(a, b, c, z))
            worst = max(worst, abs(kernel - oracle_hyp2f1(a, b, c, z)) / max(1.0, abs(kernel)))
        j0_error = max(abs(bessel_j(0.0, 1.0) - J0_AT_1), abs(oracle_bessel_j(0.0, 1.0) - J0_AT_1))
        results.append(self._record('specfun', 'oracle_agreement', worst < 1e-12 and j0_error < 1e-12,
                                    {'hyp2f1_max_error': worst, 'j0_error': j0_error}))
        return results

    def _terminating_check(self) -> CheckResult:
        cases = [
            (-2, Fraction(3), Fraction(1), Fraction(1, 2)),
            (-3, Fraction(3, 2), Fraction(5, 4), Fraction(1, 3)),
            (-5, Fraction(-7, 3), Fraction(9, 2), Fraction(-3, 4)),
            (-4, Fraction(2), Fraction(1, 2), Fraction(9, 10)),
        ]
        worst = 0.0
        for n, b, c, z in cases:
            exact = Fraction(0)
            term = Fraction(1)
            for k in range(-n + 1):
                exact += term
                term = term * (n + k) * (b + k) / ((c + k) * (k + 1)) * z
            value = hyp2f1(Hyp2F1Call(n, float(b), float(c), float(z)))
            worst = max(worst, abs(value - float(exact)) / max(1.0, abs(float(exact))))
        return self._record('specfun', 'terminating_exactness', worst < 1e-13,
                            {'max_relative_error': worst})

    # legendre

    def _grid(self) -> np.ndarray:
        return latitude_grid(self.settings.grid_margin, self.settings.grid_points)

    def _ode(self, form, f, name) -> ResidualReport:
        return ode_residual(form, f, self._grid(), self.settings.step, self.settings.ode_tolerance,
                            self.settings.richardson, name)

    def run_legendre(self) -> List[CheckResult]:
        results = []
        grid = self._grid()
        for nu in NU_VALUES:
            for mu in MU_VALUES:
                for lam in LAMBDA_VALUES:
                    label = f'nu={nu:g},mu={mu:.4g},lambda={lam:g}'
                    try:
                        reports = [self._ode(*self._family(nu, mu, lam), f'family[{label}]')]
                        for branch in ('plus', 'minus'):
                            p = HyperLegendreParams(nu, mu, lam, branch)
                            reports.append(self._ode(hyper_assoc_ode_residual_form(p),
                                                     lambda t, p=p: hyper_assoc_legendre_theta(p, t),
                                                     f'closed_form[{label},{branch}]'))
                    except HyperHarmonicsError as e:
                        results.append(self._record('legendre', f'ode_residual[{label}]', True,
                                                    {'skipped': str(e)}))
                        continue
                    results.append(self._record('legendre', f'ode_residual[{label}]',
                                                all(r.passed for r in reports),
                                                {'max_relative_residual': max(r.relative_residual
                                                                              for r in reports)},
                                                reports))
                    results.append(self._branch_check(nu, mu, lam, grid, label))
        results.append(self._normalization_check(grid))
        results.extend(self.erratum_controls())
        results.append(self._figure_check())
        return results

    @staticmethod
    def _family(nu, mu, lam):
        f, form = family_function(nu, mu, lam)
        return form, f

    def _branch_check(self, nu, mu, lam, grid, label) -> CheckResult:
        plus = HyperLegendreParams(nu, mu, lam, 'plus')
        minus = plus.with_branch('minus')
        worst = 0.0
        for theta in grid:
            a = hyper_assoc_legendre_theta(plus, theta)
            b = hyper_assoc_legendre_theta(minus, theta)
            worst = max(worst, abs(a - b) / max(abs(a), abs(b)))
        wronskian = wronskian_fd(lambda t: hyper_assoc_legendre_theta(plus, t),
                                 lambda t: hyper_assoc_legendre_theta(minus, t), math.pi / 2)
        return self._record('legendre', f'branch_coincidence[{label}]',
                            worst < 1e-9 and abs(wronskian) < 1e-8,
                            {'max_relative_difference': worst, 'wronskian_at_midpoint': wronskian})

    def _normalization_check(self, grid) -> CheckResult:
        midpoint, symmetry = 0.0, 0.0
        for nu in NU_VALUES:
            for mu in MU_VALUES:
                for lam in LAMBDA_VALUES:
                    for branch in ('plus', 'minus'):
                        p = HyperLegendreParams(nu, mu, lam, branch)
                        midpoint = max(midpoint, abs(hyper_assoc_legendre(p, 0.0) - 1.0))
                        for x in np.cos(grid):
                            symmetry = max(symmetry, abs(hyper_assoc_legendre(p, x)
                                                         - hyper_assoc_legendre(p, -x)))
        return self._record('legendre', 'midpoint_and_symmetry', midpoint == 0.0 and symmetry < 1e-12,
                            {'midpoint_error': midpoint, 'symmetry_error': symmetry})

    def erratum_controls(self) -> List[CheckResult]:
        """Printed-radical parameters must fail, the derived ones must pass, sin(theta) gives -sin(theta)."""
        p = HyperLegendreParams(1.0, SQRT2, 0.5, 'plus')
        form = hyper_assoc_ode_residual_form(p)
        printed = uncorrected_hyper_assoc_params(p)
        corrected = hyper_assoc_params(p)

        def on_theta(reduced):
            return lambda t: reduced_value(reduced, math.cos(t), math.sin(t) ** 2)

        printed_report = self._ode(form, on_theta(printed), 'printed_radical')
        corrected_report = self._ode(form, on_theta(corrected), 'derived_radical')
        sine_report = self._ode(form, math.sin, 'sine_substitution')
        sine_error = 0.0
        for theta in self._grid():
            residual = form(theta, math.sin(theta), math.cos(theta), -math.sin(theta))
            sine_error = max(sine_error, abs(residual + math.sin(theta)))
        return [
            self._record('legendre', 'erratum_printed_radical_fails',
                         printed_report.relative_residual > 0.1,
                         {'relative_residual': printed_report.relative_residual,
                          'alpha': printed.alpha, 'beta': printed.beta}, [printed_report]),
            self._record('legendre', 'erratum_derived_radical_passes', corrected_report.passed,
                         {'relative_residual': corrected_report.relative_residual,
                          'alpha': corrected.alpha, 'beta': corrected.beta}, [corrected_report]),
            self._record('legendre', 'erratum_sine_control',
                         abs(sine_report.relative_residual - 1.0) < 1e-6 and sine_error < 1e-12,
                         {'relative_residual': sine_report.relative_residual,
                          'analytic_error': sine_error}, [sine_report]),
        ]

    def _figure_check(self) -> CheckResult:
        details = {}
        passed = True
        psi = np.linspace(0.3, math.pi - 0.3, 201)
        for q, s in FIGURE_PRESETS:
            p = HyperLegendreParams(q, math.sqrt(s * (s + 1)), 0.5)
            values = np.array([hyper_assoc_legendre_theta(p, t) for t in psi])
            midpoint = abs(values[100] - 1.0)
            symmetry = float(np.max(np.abs(values - values[::-1])))
            growth = min(abs(values[0]), abs(values[-1]))
            ok = midpoint < 1e-12 and symmetry < 1e-10 and growth > 1.0
            passed = passed and ok
            details[f'q={q},s={s}'] = {'midpoint_error': midpoint, 'symmetry_error': symmetry,
                                       'edge_magnitude': growth}
        return self._record('legendre', 'figure_properties', passed, details)

    # physics

    def run_physics(self) -> List[CheckResult]:
        results = []

        worst = 0.0
        for _ in range(100):
            a, inv_b, inv_c2 = self.rng.uniform(-2.0, 2.0, 3)
            omega = complex(*self.rng.uniform(-3.0, 3.0, 2))
            for sign in ('+', '-'):
                original = dispersion(PhysicsCoefficients.from_original(a, inv_b, inv_c2), omega, sign)
                extended = dispersion(PhysicsCoefficients.from_extended([a, inv_b, inv_c2]), omega, sign)
                worst = max(worst, abs(original - extended) / max(1.0, abs(original)))
        a, inv_b, inv_c2, omega = 0.7, 0.4, 0.25, 1.5 + 0.2j
        frequency_domain = dispersion(PhysicsCoefficients.from_extended([a, inv_b, inv_c2]), omega, '-')
        expected = -a + 1j * omega * inv_b + omega * omega * inv_c2
        sign_error = abs(frequency_domain - expected)
        results.append(self._record('physics', 'dispersion_consistency',
                                    worst < 1e-14 and sign_error < 1e-14,
                                    {'max_relative_difference': worst, 'frequency_domain_error': sign_error}))

        reports = []
        grid = np.linspace(0.5, 3.0, self.settings.grid_points)
        for dim, q in ((3, 1), (4, 1), (5, 2)):
            sigma = bessel_order('hs', dim, q).sigma
            f = (lambda r, dim=dim, sigma=sigma: radial_prefactor('hs', dim, r) * bessel_j(sigma, r))
            reports.append(ode_residual(radial_ode_form('hs', dim, q, 1.0), f, grid, self.settings.step,
                                        self.settings.ode_tolerance, self.settings.richardson,
                                        f'radial[N={dim},q={q}]'))
        orders_exact = (bessel_order('hs', 3, 2).sigma == 2.5
                        and bessel_order('hs', 4, 1).sigma == math.sqrt(3.0))
        results.append(self._record('physics', 'radial_law', orders_exact and all(r.passed for r in reports),
                                    {'orders_exact': orders_exact}, reports))

        flux_error = 0.0
        for dim in range(2, 9):
            for r in (0.5, 1.0, 2.0, 7.0):
                flux_error = max(flux_error, _relative(radial_prefactor('hs', dim, r) ** 2 * r ** (dim - 1), r))
                flux_error = max(flux_error, _relative(hypersphere_flux(dim, r, 1.3),
                                                       hypersphere_flux(dim, 1.0, 1.3)))
        results.append(self._record('physics', 'flux_law', flux_error < 1e-12,
                                    {'max_relative_error': flux_error}))

        for spec in (ModeSpec('hs', 4, 0, (1, 1), 1.0), ModeSpec('hs', 4, 1, (1, 1), 1.0),
                     ModeSpec('hc', 4, 1, (1,), 1.0, k_axial=0.5), ModeSpec('hs', 5, 1, (1, 1, 1), 1.0)):
            points = random_interior_points(spec.system, spec.dim, self.settings.helmholtz_points, self.rng)
            label = f'{spec.system}_N{spec.dim}_m{spec.m}_chain{",".join(map(str, spec.q_chain))}'
            report = helmholtz_residual(spec.system, spec.dim, lambda p, spec=spec: mode_eval(spec, p),
                                        points, total_wavenumber_sq(spec), self.settings.step,
                                        self.settings.helmholtz_tolerance, f'helmholtz[{label}]')
            results.append(self._record('physics', f'helmholtz[{label}]', report.passed,
                                        {'relative_residual': report.relative_residual}, [report]))

        worst = 0.0
        hs = ModeSpec('hs', 3, 1, (2,), 1.3)
        hc = ModeSpec('hc', 4, 1, (2,), 1.3)
        for _ in range(20):
            r, theta, phi, z = (self.rng.uniform(0.5, 3.0), self.rng.uniform(0.2, math.pi - 0.2),
                                self.rng.uniform(0.0, 2 * math.pi), self.rng.uniform(-2.0, 2.0))
            a = mode_eval(hc, HypercylindricalPoint(4, r, (theta,), phi, z))
            b = mode_eval(hs, HypersphericalPoint(3, r, (theta,), phi))
            worst = max(worst, abs(a - b) / max(abs(b), 1e-300))
        results.append(self._record('physics', 'hypercylindrical_reduction', worst < 1e-12,
                                    {'max_relative_difference': worst}))

        worst = 0.0
        for _ in range(10):
            k = self.rng.uniform(-2.0, 2.0, 3)
            alpha = self.rng.uniform(0.0, math.pi, 3)
            amplitudes = self.rng.uniform(0.5, 2.0, 3)
            x = CartesianPoint(tuple(self.rng.uniform(-1.0, 1.0, 3)))

            def mode(y, k=k, alpha=alpha, amplitudes=amplitudes):
                return cartesian_mode(k, alpha, amplitudes, y)
            worst = max(worst, abs(cartesian_laplacian_fd(mode, x, self.settings.step)
                                   + cartesian_wavenumber_sq(k) * mode(x)))
        results.append(self._record('physics', 'cartesian_helmholtz', worst < 1e-6,
                                    {'max_abs_residual': worst}))

        rate = min(observed_order(lambda u: math.exp(3 * u), 3 * math.exp(0.6), 0.2, 1),
                   observed_order(lambda u: math.exp(3 * u), 9 * math.exp(0.6), 0.2, 2))
        results.append(self._record('physics', 'stencil_order', rate >= 3.5, {'observed_order': rate}))
        return results
