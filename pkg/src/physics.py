"""
Separated modes of the generalized equation of mathematical physics.

The time operator sum_l A_l d^l/dt^l applied to a harmonic time factor
turns the equation into a Helmholtz equation with squared wavenumber k^2
given by the dispersion relation. Its separated solutions in hyperspherical
coordinates are

    r^(1-N/2) Z_sigma(k r) exp(i(m phi - omega t)) P_{q_{N-2}}^m(cos theta_{N-2})
        prod_j P_{nu_j, lambda_j}^{mu_j}(cos theta_j)

and in hypercylindrical coordinates the same with N -> N-1, the radial
wavenumber taken transverse to the axis and a factor exp(i K z).
"""

import cmath
import json
import math
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.coords import (
    CartesianPoint,
    CurvilinearPoint,
    HypercylindricalPoint,
    HypersphericalPoint,
    normalize_system,
)
from src.exceptions import DomainError, ModeSpecError, UnsupportedCombinationError
from src.legendre import (
    BRANCHES,
    HyperLegendreParams,
    OdeForm,
    assoc_legendre_p,
    hyper_assoc_legendre_theta,
)
from src.specfun import BESSEL_KINDS, BesselOrder, bessel

logger = logging.getLogger(__name__)

MODE_SCHEMA_VERSION = 1


def parse_sign(value: Union[str, int, float]) -> int:
    """Map '+', '-', 1 or -1 to +1 / -1."""
    text = str(value).strip().replace('−', '-')
    if text in ('+', '+1', '1', '1.0', 'plus'):
        return 1
    if text in ('-', '-1', '-1.0', 'minus'):
        return -1
    raise ModeSpecError(f"Sign must be + or -, got {value!r}")


def sign_text(sign: int) -> str:
    return '+' if sign > 0 else '-'


@dataclass(frozen=True)
class PhysicsCoefficients:
    """Coefficients of the time operator, original (a, 1/b, 1/c^2) or extended A_0..A_L."""
    form: str
    extended: Tuple[float, ...]
    original: Optional[Tuple[float, float, float]] = None

    def __post_init__(self):
        if self.form not in ('original', 'extended'):
            raise DomainError(f"Coefficient form must be original or extended, got {self.form!r}")
        extended = tuple(float(a) for a in self.extended)
        if not extended:
            raise DomainError("Extended coefficient list must not be empty")
        object.__setattr__(self, 'extended', extended)
        if self.form == 'original':
            if self.original is None or len(self.original) != 3:
                raise DomainError("Original form needs (a, inv_b, inv_c2)")
            object.__setattr__(self, 'original', tuple(float(v) for v in self.original))

    @classmethod
    def from_original(cls, a: float, inv_b: float, inv_c2: float) -> 'PhysicsCoefficients':
        return cls('original', extended_from_original(a, inv_b, inv_c2), (a, inv_b, inv_c2))

    @classmethod
    def from_extended(cls, coefficients: Sequence[float]) -> 'PhysicsCoefficients':
        return cls('extended', tuple(coefficients))

    @classmethod
    def laplace(cls) -> 'PhysicsCoefficients':
        return cls.from_original(0.0, 0.0, 0.0)

    @classmethod
    def wave(cls, c: float) -> 'PhysicsCoefficients':
        return cls.from_original(0.0, 0.0, 1.0 / (c * c))

    @classmethod
    def heat(cls, b: float) -> 'PhysicsCoefficients':
        return cls.from_original(0.0, 1.0 / b, 0.0)

    @classmethod
    def helmholtz(cls, k: float) -> 'PhysicsCoefficients':
        return cls.from_original(-k * k, 0.0, 0.0)

    @classmethod
    def klein_gordon(cls, a: float, c: float) -> 'PhysicsCoefficients':
        return cls.from_original(a, 0.0, 1.0 / (c * c))

    @classmethod
    def telegraph(cls, b: float, c: float) -> 'PhysicsCoefficients':
        return cls.from_original(0.0, 1.0 / b, 1.0 / (c * c))


def extended_from_original(a: float, inv_b: float, inv_c2: float) -> Tuple[float, float, float]:
    """A_0 = a, A_1 = 1/b, A_2 = 1/c^2."""
    return (float(a), float(inv_b), float(inv_c2))


def dispersion(c: PhysicsCoefficients, omega: complex, sign: Union[str, int] = '-') -> complex:
    """Squared wavenumber for the time factor exp(+-i omega t).

    Original: k^2 = omega^2/c^2 - a -+ i omega/b. Extended:
    k^2 = -sum_l A_l (+-i omega)^l. The sign '-' is the frequency-domain
    convention exp(-i omega t), giving k^2 = -a + i omega/b + omega^2/c^2.
    """
    s = parse_sign(sign)
    omega = complex(omega)
    if c.form == 'original':
        a, inv_b, inv_c2 = c.original
        return omega * omega * inv_c2 - a - s * 1j * omega * inv_b
    factor = s * 1j * omega
    total = 0j
    power = 1 + 0j
    for coefficient in c.extended:
        total += coefficient * power
        power *= factor
    return -total


def real_wavenumber(k2: complex, tolerance: float = 1e-12) -> float:
    """Positive real k from k^2; complex or negative k^2 is not supported for mode assembly."""
    k2 = complex(k2)
    if abs(k2.imag) > tolerance * max(1.0, abs(k2)) or k2.real <= 0:
        raise UnsupportedCombinationError(
            f"Mode assembly needs real k > 0, but k^2 = {k2} (complex Bessel arguments are not evaluated)")
    return math.sqrt(k2.real)


def wavenumber_from_dispersion(c: PhysicsCoefficients, omega: complex,
                               sign: Union[str, int] = '-') -> float:
    return real_wavenumber(dispersion(c, omega, sign))


def radial_wavenumber(k_total: float, k_axial: float) -> float:
    """Transverse wavenumber sqrt(k_total^2 - K^2) for hypercylindrical modes."""
    value = k_total * k_total - k_axial * k_axial
    if value < 0:
        raise DomainError(
            f"Axial wavenumber K={k_axial} exceeds total wavenumber {k_total}: k^2 = {value} < 0")
    return math.sqrt(value)


def _effective_dim(system: str, dim: int) -> int:
    system = normalize_system(system)
    minimum = 2 if system == 'hs' else 3
    if int(dim) != dim or dim < minimum:
        raise ModeSpecError(f"{system} modes need an integer dimension >= {minimum}, got {dim}")
    return int(dim) if system == 'hs' else int(dim) - 1


def bessel_order(system: str, dim: int, q: int) -> BesselOrder:
    """sigma^2 = q(q+1) + (N/2 - 1)^2 (hs) or q(q+1) + (N/2 - 3/2)^2 (hc)."""
    n = _effective_dim(system, dim)
    if int(q) != q or q < 1:
        raise ModeSpecError(f"Wavenumber q must be a positive integer, got {q}")
    return BesselOrder.from_square(q * (q + 1) + (0.5 * n - 1.0) ** 2)


@dataclass(frozen=True)
class ChainEntry:
    """One latitude described by a hyperspherical associated Legendre function."""
    n: int
    nu: float
    mu: float
    lam: float

    def params(self, branch: str = 'plus') -> HyperLegendreParams:
        return HyperLegendreParams(self.nu, self.mu, self.lam, branch)


@dataclass(frozen=True)
class LatitudeChain:
    """Full angular structure: hyperspherical entries, last latitude degree and radial q."""
    entries: Tuple[ChainEntry, ...]
    last_degree: Optional[int]
    radial_q: Optional[int]


def chain_length(system: str, dim: int) -> int:
    return _effective_dim(system, dim) - 2


def _validate_chain(system: str, dim: int, q_chain: Sequence[int]) -> Tuple[int, ...]:
    expected = chain_length(system, dim)
    if len(q_chain) != expected:
        raise ModeSpecError(
            f"{normalize_system(system)} N={dim} needs {expected} chain wavenumbers, got {len(q_chain)}")
    chain = []
    for q in q_chain:
        if int(q) != q or q < 1:
            raise ModeSpecError(f"Chain wavenumbers must be positive integers, got {q}")
        chain.append(int(q))
    return tuple(chain)


def chain_params(system: str, dim: int, q_chain: Sequence[int]) -> List[ChainEntry]:
    """Entries n = 3..N-1 (hs) or n = 4..N-1 (hc) with nu = q_{N-n}, mu = sqrt(q_{N-n+1}(q_{N-n+1}+1)).

    lambda = (n-2)/2 for hs and (n-3)/2 for hc. The last latitude is an
    ordinary associated Legendre function and is not listed here.
    """
    system = normalize_system(system)
    chain = _validate_chain(system, dim, q_chain)
    first_n = 3 if system == 'hs' else 4
    offset = 2.0 if system == 'hs' else 3.0
    entries = []
    for n in range(first_n, dim):
        j = dim - n
        nu = chain[j - 1]
        upper = chain[j]
        entries.append(ChainEntry(n, float(nu), math.sqrt(upper * (upper + 1)),
                                  (n - offset) / 2.0))
    return entries


def latitude_chain(system: str, dim: int, q_chain: Sequence[int]) -> LatitudeChain:
    chain = _validate_chain(system, dim, q_chain)
    entries = tuple(chain_params(system, dim, chain))
    if not chain:
        return LatitudeChain(entries, None, None)
    return LatitudeChain(entries, chain[-1], chain[0])


@dataclass(frozen=True)
class ModeSpec:
    """One separated solution: system, dimension, wavenumbers and kind selectors."""
    system: str
    dim: int
    m: int
    q_chain: Tuple[int, ...]
    k: float
    k_axial: float = 0.0
    omega: complex = 0j
    bessel_kind: str = 'J'
    phi_sign: str = '+'
    time_sign: str = '-'
    branch: str = 'plus'

    def __post_init__(self):
        system = normalize_system(self.system)
        object.__setattr__(self, 'system', system)
        object.__setattr__(self, 'q_chain', _validate_chain(system, self.dim, self.q_chain))
        object.__setattr__(self, 'dim', int(self.dim))
        if int(self.m) != self.m:
            raise ModeSpecError(f"Azimuthal wavenumber m must be an integer, got {self.m}")
        object.__setattr__(self, 'm', int(self.m))
        k = complex(self.k)
        if k.imag != 0.0:
            raise UnsupportedCombinationError(f"Complex radial wavenumber k={self.k} is not supported")
        if not k.real > 0:
            raise ModeSpecError(f"Radial wavenumber k must be > 0, got {self.k}")
        object.__setattr__(self, 'k', k.real)
        object.__setattr__(self, 'k_axial', float(self.k_axial))
        if system == 'hs' and self.k_axial != 0.0:
            raise ModeSpecError("Axial wavenumber K applies to hypercylindrical modes only")
        object.__setattr__(self, 'omega', complex(self.omega))
        kind = str(self.bessel_kind).upper()
        if kind not in BESSEL_KINDS:
            raise ModeSpecError(f"bessel_kind must be one of {BESSEL_KINDS}, got {self.bessel_kind!r}")
        object.__setattr__(self, 'bessel_kind', kind)
        object.__setattr__(self, 'phi_sign', sign_text(parse_sign(self.phi_sign)))
        object.__setattr__(self, 'time_sign', sign_text(parse_sign(self.time_sign)))
        if self.branch not in BRANCHES:
            raise ModeSpecError(f"branch must be plus or minus, got {self.branch!r}")

    @property
    def sigma(self) -> float:
        """Bessel order; |m| when there is no latitude chain."""
        if not self.q_chain:
            return float(abs(self.m))
        return bessel_order(self.system, self.dim, self.q_chain[0]).sigma

    @property
    def separation_constant(self) -> float:
        """Constant of the radial equation: q_1(q_1+1), or m^2 with no chain."""
        if not self.q_chain:
            return float(self.m * self.m)
        q = self.q_chain[0]
        return float(q * (q + 1))


def total_wavenumber_sq(spec: ModeSpec) -> float:
    """k^2 + K^2, the Helmholtz constant the assembled mode satisfies."""
    return spec.k * spec.k + spec.k_axial * spec.k_axial


def radial_prefactor(system: str, dim: int, r: float) -> float:
    """r^(1-N/2) (hs) or r^((3-N)/2) (hc)."""
    n = _effective_dim(system, dim)
    return r ** (1.0 - 0.5 * n)


def hypersphere_flux(dim: int, r: float, k: float) -> float:
    """A^2 r^(N-1) for the large-argument radial amplitude A = r^(1-N/2) sqrt(2/(pi k r)).

    Independent of r: the energy crossing a hypersphere is conserved.
    """
    amplitude = r ** (1.0 - 0.5 * dim) * math.sqrt(2.0 / (math.pi * k * r))
    return amplitude * amplitude * r ** (dim - 1)


@dataclass(frozen=True)
class RadialOdeForm(OdeForm):
    """R'' + (n-1)/r R' + (k^2 - L/r^2) R with n the effective dimension and L the separation constant."""
    effective_dim: int
    separation: float
    k: float

    name = 'radial'
    domain = (0.0, math.inf)

    def coefficients(self, r: float) -> Tuple[float, float, float]:
        if r == 0.0:
            raise DomainError("Radial equation is singular at r = 0")
        return (1.0, (self.effective_dim - 1) / r, self.k * self.k - self.separation / (r * r))


def radial_ode_form(system: str, dim: int, q: int, k: float) -> RadialOdeForm:
    """Radial equation with separation constant q(q+1)."""
    return RadialOdeForm(_effective_dim(system, dim), float(q * (q + 1)), float(k))


def mode_radial_form(spec: ModeSpec) -> RadialOdeForm:
    return RadialOdeForm(_effective_dim(spec.system, spec.dim), spec.separation_constant, spec.k)


def radial_factor(spec: ModeSpec, r: float):
    """r^(1-N/2) Z_sigma(k r) with the system's prefactor; complex for Hankel kinds."""
    return radial_prefactor(spec.system, spec.dim, r) * bessel(spec.bessel_kind, spec.sigma, spec.k * r)


def _check_point(spec: ModeSpec, p: CurvilinearPoint) -> None:
    expected = HypersphericalPoint if spec.system == 'hs' else HypercylindricalPoint
    if not isinstance(p, expected):
        raise DomainError(f"{spec.system} mode needs a {expected.__name__}, got {type(p).__name__}")
    if p.dim != spec.dim:
        raise DomainError(f"Point dimension {p.dim} does not match mode dimension {spec.dim}")
    if p.r <= 0.0:
        raise DomainError(f"Modes are evaluated at interior points only (r > 0), got r={p.r}")
    for index, theta in enumerate(p.thetas, start=1):
        if not 0.0 < theta < math.pi:
            raise DomainError(f"Latitude theta_{index}={theta} is on the axis; need 0 < theta < pi")


def angular_factor(spec: ModeSpec, p: CurvilinearPoint) -> float:
    """Product of the latitude factors (real)."""
    chain = latitude_chain(spec.system, spec.dim, spec.q_chain)
    value = 1.0
    for entry in chain.entries:
        value *= hyper_assoc_legendre_theta(entry.params(spec.branch), p.thetas[spec.dim - entry.n - 1])
    if chain.last_degree is not None:
        value *= assoc_legendre_p(chain.last_degree, abs(spec.m), math.cos(p.thetas[-1]))
    return value


def mode_eval(spec: ModeSpec, p: CurvilinearPoint, t: float = 0.0) -> complex:
    """Value of the separated mode at point ``p`` and time ``t``.

    Raises:
        DomainError: degenerate point or mismatched point type/dimension
        OutOfDomainError: k r beyond the Bessel series domain
    """
    _check_point(spec, p)
    phase = parse_sign(spec.phi_sign) * spec.m * p.phi
    value = complex(radial_factor(spec, p.r)) * angular_factor(spec, p)
    value *= cmath.exp(1j * phase)
    value *= cmath.exp(parse_sign(spec.time_sign) * 1j * spec.omega * t)
    if spec.system == 'hc':
        value *= cmath.exp(1j * spec.k_axial * p.z)
    return value


def superpose(terms: Sequence[Tuple[complex, ModeSpec]], p: CurvilinearPoint, t: float = 0.0) -> complex:
    """Finite weighted sum of modes."""
    total = 0j
    for weight, spec in terms:
        total += complex(weight) * mode_eval(spec, p, t)
    return total


def cartesian_wavenumber_sq(k_components: Sequence[float]) -> float:
    """k^2 = sum_n k_n^2."""
    k = np.asarray(k_components, dtype=float)
    return float(np.dot(k, k))


def cartesian_mode(k_components: Sequence[float], phases: Sequence[float],
                   amplitudes: Sequence[float], x: CartesianPoint) -> float:
    """prod_n C_n cos(k_n x_n - alpha_n)."""
    k = np.asarray(k_components, dtype=float)
    alpha = np.asarray(phases, dtype=float)
    c = np.asarray(amplitudes, dtype=float)
    coords = x.as_array()
    if not len(k) == len(alpha) == len(c) == len(coords):
        raise DomainError(
            f"Cartesian mode needs {len(coords)} wavenumbers, phases and amplitudes, "
            f"got {len(k)}, {len(alpha)}, {len(c)}")
    return float(np.prod(c * np.cos(k * coords - alpha)))


def amplitude_phase_to_exponential_pair(amplitude: float, phase: float) -> Tuple[complex, complex]:
    """(C, alpha) -> (B+, B-) with 2 B+- = C exp(-+i alpha)."""
    return (0.5 * amplitude * cmath.exp(-1j * phase), 0.5 * amplitude * cmath.exp(1j * phase))


def exponential_pair_to_amplitude_phase(b_plus: complex, b_minus: complex) -> Tuple[complex, float]:
    """(B+, B-) -> (C, alpha) with exp(2 i alpha) = B-/B+ and C = B+ e^(i alpha) + B- e^(-i alpha)."""
    if b_plus == 0:
        raise DomainError("B+ must be nonzero to recover the phase")
    alpha = 0.5 * cmath.phase(complex(b_minus) / complex(b_plus))
    amplitude = b_plus * cmath.exp(1j * alpha) + b_minus * cmath.exp(-1j * alpha)
    return complex(amplitude), alpha


def mode_spec_to_dict(spec: ModeSpec) -> Dict[str, Any]:
    return {
        'schema': MODE_SCHEMA_VERSION,
        'system': spec.system,
        'dim': spec.dim,
        'm': spec.m,
        'q_chain': list(spec.q_chain),
        'k': spec.k,
        'k_axial': spec.k_axial,
        'omega': [spec.omega.real, spec.omega.imag],
        'bessel_kind': spec.bessel_kind,
        'phi_sign': spec.phi_sign,
        'time_sign': spec.time_sign,
        'branch': spec.branch,
    }


def mode_spec_from_dict(data: Dict[str, Any]) -> ModeSpec:
    if not isinstance(data, dict):
        raise ModeSpecError("Mode specification must be a JSON object")
    if data.get('schema') != MODE_SCHEMA_VERSION:
        raise ModeSpecError(f"Unsupported mode schema {data.get('schema')!r} (expected {MODE_SCHEMA_VERSION})")
    missing = [key for key in ('system', 'dim', 'm', 'q_chain', 'k') if key not in data]
    if missing:
        raise ModeSpecError(f"Mode specification is missing {missing}")
    omega = data.get('omega', [0.0, 0.0])
    if isinstance(omega, (list, tuple)):
        if len(omega) != 2:
            raise ModeSpecError(f"omega must be [re, im], got {omega}")
        omega = complex(omega[0], omega[1])
    try:
        return ModeSpec(
            system=data['system'],
            dim=data['dim'],
            m=data['m'],
            q_chain=tuple(data['q_chain']),
            k=data['k'],
            k_axial=data.get('k_axial', 0.0),
            omega=omega,
            bessel_kind=data.get('bessel_kind', 'J'),
            phi_sign=data.get('phi_sign', '+'),
            time_sign=data.get('time_sign', '-'),
            branch=data.get('branch', 'plus'),
        )
    except (TypeError, ValueError) as e:
        raise ModeSpecError(f"Invalid mode specification: {e}")


def mode_spec_to_json(spec: ModeSpec) -> str:
    return json.dumps(mode_spec_to_dict(spec), indent=2)


def mode_spec_from_json(text: str) -> ModeSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModeSpecError(f"Mode specification is not valid JSON: {e}")
    return mode_spec_from_dict(data)
