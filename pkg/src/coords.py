"""
Coordinate transforms for N-dimensional hyperspherical and hypercylindrical systems.

Hyperspherical coordinates are one radius r, latitudes theta_1..theta_{N-2}
in [0, pi] and a longitude phi in [0, 2pi). Hypercylindrical coordinates
reuse the (N-1)-dimensional hyperspherical transform for x_1..x_{N-1} and
keep x_N = z as an axial Cartesian coordinate.
"""

import math
import logging
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple, Union

import numpy as np

from src.exceptions import DomainError

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi

SYSTEM_ALIASES = {
    'hs': 'hs',
    'hyperspherical': 'hs',
    'hc': 'hc',
    'hypercylindrical': 'hc',
}


def normalize_system(system: str) -> str:
    """Map a system name or alias to ``'hs'`` or ``'hc'``."""
    try:
        return SYSTEM_ALIASES[str(system).lower()]
    except KeyError:
        raise DomainError(f"Unknown coordinate system: {system!r} (expected hs or hc)")


def _finite_tuple(values: Sequence[float], name: str) -> Tuple[float, ...]:
    result = tuple(float(v) for v in values)
    if not all(math.isfinite(v) for v in result):
        raise DomainError(f"{name} must be finite, got {result}")
    return result


def _check_latitudes(thetas: Tuple[float, ...]) -> None:
    for theta in thetas:
        if not 0.0 <= theta <= math.pi:
            raise DomainError(f"Latitude {theta} outside [0, pi]")


@dataclass(frozen=True)
class CartesianPoint:
    """Point given by its N Cartesian components."""
    coords: Tuple[float, ...]

    def __post_init__(self):
        coords = _finite_tuple(self.coords, "Cartesian coordinates")
        if len(coords) < 2:
            raise DomainError(f"Cartesian point needs N >= 2 components, got {len(coords)}")
        object.__setattr__(self, 'coords', coords)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def as_array(self) -> np.ndarray:
        return np.array(self.coords)


@dataclass(frozen=True)
class HypersphericalPoint:
    """Point (r, theta_1..theta_{N-2}, phi) in N dimensions."""
    dim: int
    r: float
    thetas: Tuple[float, ...] = field(default=())
    phi: float = 0.0

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 2:
            raise DomainError(f"Hyperspherical dimension must be an integer >= 2, got {self.dim}")
        thetas = _finite_tuple(self.thetas, "latitudes")
        r, phi = _finite_tuple((self.r, self.phi), "r and phi")
        if len(thetas) != self.dim - 2:
            raise DomainError(f"N={self.dim} needs {self.dim - 2} latitudes, got {len(thetas)}")
        if r < 0:
            raise DomainError(f"Radius must be >= 0, got {r}")
        _check_latitudes(thetas)
        if not 0.0 <= phi < TWO_PI:
            raise DomainError(f"Longitude {phi} outside [0, 2pi)")
        object.__setattr__(self, 'dim', int(self.dim))
        object.__setattr__(self, 'r', r)
        object.__setattr__(self, 'thetas', thetas)
        object.__setattr__(self, 'phi', phi)

    @property
    def angles(self) -> Tuple[float, ...]:
        return self.thetas + (self.phi,)

    def as_array(self) -> np.ndarray:
        return np.array((self.r,) + self.angles)


@dataclass(frozen=True)
class HypercylindricalPoint:
    """Point (r, theta_1..theta_{N-3}, phi, z) in N dimensions; r is the distance to the axis."""
    dim: int
    r: float
    thetas: Tuple[float, ...] = field(default=())
    phi: float = 0.0
    z: float = 0.0

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 3:
            raise DomainError(f"Hypercylindrical dimension must be an integer >= 3, got {self.dim}")
        thetas = _finite_tuple(self.thetas, "latitudes")
        r, phi, z = _finite_tuple((self.r, self.phi, self.z), "r, phi and z")
        if len(thetas) != self.dim - 3:
            raise DomainError(f"N={self.dim} needs {self.dim - 3} latitudes, got {len(thetas)}")
        if r < 0:
            raise DomainError(f"Axial distance must be >= 0, got {r}")
        _check_latitudes(thetas)
        if not 0.0 <= phi < TWO_PI:
            raise DomainError(f"Longitude {phi} outside [0, 2pi)")
        object.__setattr__(self, 'dim', int(self.dim))
        object.__setattr__(self, 'r', r)
        object.__setattr__(self, 'thetas', thetas)
        object.__setattr__(self, 'phi', phi)
        object.__setattr__(self, 'z', z)

    @property
    def angles(self) -> Tuple[float, ...]:
        return self.thetas + (self.phi,)

    def as_array(self) -> np.ndarray:
        return np.array((self.r,) + self.angles + (self.z,))


CurvilinearPoint = Union[HypersphericalPoint, HypercylindricalPoint]


@dataclass(frozen=True)
class Frame:
    """Coordinate base vectors as rows of an N x N array of Cartesian components."""
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.vectors, axis=1)

    def gram(self) -> np.ndarray:
        """Matrix of pairwise dot products."""
        return self.vectors @ self.vectors.T


@dataclass(frozen=True)
class ScaleFactors:
    """Scale factors h_i, the norms of the coordinate base vectors."""
    h: Tuple[float, ...]

    def product(self) -> float:
        return float(np.prod(self.h))


def _wrap_phi(phi: float) -> float:
    phi = phi % TWO_PI
    # x % 2pi can round up to 2pi for tiny negative x
    return 0.0 if phi >= TWO_PI else phi


def _embedding(r: float, angles: Sequence[float], diff: int = None) -> np.ndarray:
    """Cartesian components of the hyperspherical map, or its derivative along angle ``diff``.

    Component i is r * sin(a_0)...sin(a_{i-1}) * cos(a_i); the last one ends
    with sin(a_{n-2}) in place of the cosine.
    """
    angles = np.asarray(angles, dtype=float)
    n = len(angles) + 1
    s, c = np.sin(angles), np.cos(angles)
    out = np.zeros(n)
    for i in range(n):
        if diff is not None and i < n - 1 and diff > i:
            continue
        value = r
        for j in range(min(i, n - 1)):
            value *= c[j] if j == diff else s[j]
        if i < n - 1:
            value *= -s[i] if i == diff else c[i]
        out[i] = value
    return out


def _hs_angles(x: np.ndarray) -> Tuple[float, List[float], float]:
    """Radius, latitudes and longitude of a Cartesian vector."""
    n = len(x)
    r = float(np.sqrt(np.dot(x, x)))
    if r == 0.0:
        return 0.0, [0.0] * (n - 2), 0.0
    tails = np.sqrt(np.cumsum((x ** 2)[::-1])[::-1])
    thetas = [math.atan2(tails[i + 1], x[i]) for i in range(n - 2)]
    phi = _wrap_phi(math.atan2(x[n - 1], x[n - 2]))
    return r, thetas, phi


def to_cartesian_hs(p: HypersphericalPoint) -> CartesianPoint:
    """Map a hyperspherical point to Cartesian coordinates."""
    return CartesianPoint(tuple(_embedding(p.r, p.angles)))


def from_cartesian_hs(x: CartesianPoint) -> HypersphericalPoint:
    """Invert :func:`to_cartesian_hs`; the zero vector maps to r=0 with all angles 0."""
    r, thetas, phi = _hs_angles(x.as_array())
    return HypersphericalPoint(x.dim, r, tuple(thetas), phi)


def to_cartesian_hc(p: HypercylindricalPoint) -> CartesianPoint:
    """Map a hypercylindrical point to Cartesian coordinates; x_N = z."""
    transverse = _embedding(p.r, p.angles)
    return CartesianPoint(tuple(transverse) + (p.z,))


def from_cartesian_hc(x: CartesianPoint) -> HypercylindricalPoint:
    """Invert :func:`to_cartesian_hc`; a zero transverse part maps to r=0 with all angles 0."""
    if x.dim < 3:
        raise DomainError(f"Hypercylindrical coordinates need N >= 3, got {x.dim}")
    values = x.as_array()
    r, thetas, phi = _hs_angles(values[:-1])
    return HypercylindricalPoint(x.dim, r, tuple(thetas), phi, float(values[-1]))


def to_cartesian(p: CurvilinearPoint) -> CartesianPoint:
    if isinstance(p, HypercylindricalPoint):
        return to_cartesian_hc(p)
    return to_cartesian_hs(p)


def from_cartesian(system: str, x: CartesianPoint) -> CurvilinearPoint:
    if normalize_system(system) == 'hc':
        return from_cartesian_hc(x)
    return from_cartesian_hs(x)


def base_vectors_hs(p: HypersphericalPoint) -> Frame:
    """Base vectors e_r, e_theta_1..e_theta_{N-2}, e_phi at ``p``."""
    angles = p.angles
    rows = [_embedding(1.0, angles)]
    rows.extend(_embedding(p.r, angles, diff=k) for k in range(len(angles)))
    return Frame(np.array(rows))


def base_vectors_hc(p: HypercylindricalPoint) -> Frame:
    """Base vectors e_r, e_theta_1..e_theta_{N-3}, e_phi, e_z at ``p``."""
    angles = p.angles
    rows = [_embedding(1.0, angles)]
    rows.extend(_embedding(p.r, angles, diff=k) for k in range(len(angles)))
    vectors = np.zeros((p.dim, p.dim))
    vectors[:-1, :-1] = np.array(rows)
    vectors[-1, -1] = 1.0
    return Frame(vectors)


def base_vectors(p: CurvilinearPoint) -> Frame:
    if isinstance(p, HypercylindricalPoint):
        return base_vectors_hc(p)
    return base_vectors_hs(p)


def _hs_scale_list(r: float, thetas: Sequence[float]) -> List[float]:
    h = [1.0, r]
    for theta in thetas:
        h.append(h[-1] * math.sin(theta))
    return h


def scale_factors_hs(p: HypersphericalPoint) -> ScaleFactors:
    """h = {1, r, r sin theta_1, ..., r sin theta_1 ... sin theta_{N-2}}."""
    return ScaleFactors(tuple(_hs_scale_list(p.r, p.thetas)))


def scale_factors_hc(p: HypercylindricalPoint) -> ScaleFactors:
    """h = {1, r, r sin theta_1, ..., r sin theta_1 ... sin theta_{N-3}, 1}."""
    return ScaleFactors(tuple(_hs_scale_list(p.r, p.thetas)) + (1.0,))


def scale_factors(p: CurvilinearPoint) -> ScaleFactors:
    if isinstance(p, HypercylindricalPoint):
        return scale_factors_hc(p)
    return scale_factors_hs(p)


def metric_det_sqrt(p: CurvilinearPoint) -> float:
    """Square root of the metric determinant, r^(N-1) prod sin^(N-n-1) theta_n for hs.

    The hypercylindrical form is the same with N replaced by N-1.
    """
    n = p.dim - 1 if isinstance(p, HypercylindricalPoint) else p.dim
    value = p.r ** (n - 1)
    for index, theta in enumerate(p.thetas, start=1):
        value *= math.sin(theta) ** (n - index - 1)
    return value


def volume_element(p: CurvilinearPoint) -> float:
    """Weight of dr dtheta_1 ... dphi (dz) in the volume element."""
    return metric_det_sqrt(p)


def metric_tensor(p: CurvilinearPoint) -> np.ndarray:
    """Diagonal covariant metric g_ij = h_i^2 delta_ij."""
    return np.diag(np.square(scale_factors(p).h))


def inverse_metric_tensor(p: CurvilinearPoint) -> np.ndarray:
    """Diagonal contravariant metric; rows of degenerate coordinates are zero."""
    h2 = np.square(scale_factors(p).h)
    inverse = np.zeros_like(h2)
    np.divide(1.0, h2, out=inverse, where=h2 > 0)
    return np.diag(inverse)


def metric_log_derivatives(p: CurvilinearPoint) -> List[float]:
    """Partial derivatives of log sqrt(g) along each coordinate.

    hs: (N-1)/r, (N-n-1) cot theta_n, 0 for phi. hc: (N-2)/r,
    (N-n-2) cot theta_n, 0 for phi and z.
    """
    hc = isinstance(p, HypercylindricalPoint)
    n = p.dim - 1 if hc else p.dim
    if p.r == 0.0:
        raise DomainError("log sqrt(g) is singular at r = 0")
    result = [(n - 1) / p.r]
    for index, theta in enumerate(p.thetas, start=1):
        if math.sin(theta) == 0.0:
            raise DomainError(f"log sqrt(g) is singular at theta_{index} = {theta}")
        result.append((n - index - 1) / math.tan(theta))
    result.append(0.0)
    if hc:
        result.append(0.0)
    return result


def coordinate_names(system: str, dim: int) -> List[str]:
    """Labels of the coordinates in transform order."""
    system = normalize_system(system)
    latitudes = dim - 2 if system == 'hs' else dim - 3
    names = ['r'] + [f'theta_{n}' for n in range(1, latitudes + 1)] + ['phi']
    return names + ['z'] if system == 'hc' else names


def coordinates(p: CurvilinearPoint) -> Tuple[float, ...]:
    """Coordinate tuple in transform order."""
    return tuple(p.as_array())


def from_coordinates(system: str, dim: int, values: Sequence[float]) -> CurvilinearPoint:
    """Build a point from a coordinate tuple; phi is wrapped into [0, 2pi)."""
    system = normalize_system(system)
    values = [float(v) for v in values]
    if system == 'hs':
        if len(values) != dim:
            raise DomainError(f"N={dim} hyperspherical point needs {dim} coordinates, got {len(values)}")
        return HypersphericalPoint(dim, values[0], tuple(values[1:-1]), _wrap_phi(values[-1]))
    if len(values) != dim:
        raise DomainError(f"N={dim} hypercylindrical point needs {dim} coordinates, got {len(values)}")
    return HypercylindricalPoint(dim, values[0], tuple(values[1:-2]), _wrap_phi(values[-2]), values[-1])


def system_of(p: CurvilinearPoint) -> str:
    return 'hc' if isinstance(p, HypercylindricalPoint) else 'hs'


def shifted(p: CurvilinearPoint, index: int, delta: float) -> CurvilinearPoint:
    """Copy of ``p`` with coordinate ``index`` moved by ``delta``."""
    values = list(coordinates(p))
    values[index] += delta
    return from_coordinates(system_of(p), p.dim, values)
