"""Point configurations on circles and spheres, and real harmonics on S^2.

An "enhanced" configuration doubles a p x q grid of (circle, sphere) pairs
with the antipodes of the sphere points: the 2pq product points are ordered
z-block by z-block with the circle index moving fastest, all plain blocks
first, then all antipodal blocks in the same order.  This ordering is what
gives the Gram matrices of such sets their 2 x 2 block structure.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import SamplingError

__all__ = [
    "CirclePoint",
    "SpherePoint",
    "EnhancedSet",
    "build_enhanced",
    "sample_config",
    "sph_basis_s2",
    "S2HarmonicBasis",
    "s2_quadrature",
]

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
_DISTINCT_TOL = 1e-12
_ANTIPODAL_TOL = 1e-9
_SAMPLING_GAP = 1e-9
_MAX_RESAMPLES = 1000


@dataclass(frozen=True)
class CirclePoint:
    """A point on the unit circle, stored as an angle canonicalized to [0, 2pi)."""

    theta: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.theta):
            raise ValueError("angle must be finite")
        object.__setattr__(self, "theta", float(self.theta) % TWO_PI)

    @property
    def coords(self) -> tuple[float, float]:
        return (math.cos(self.theta), math.sin(self.theta))

    def dot(self, other: "CirclePoint") -> float:
        return math.cos(self.theta - other.theta)

    def gap(self, other: "CirclePoint") -> float:
        """Angular distance mod 2pi."""
        d = abs(self.theta - other.theta) % TWO_PI
        return min(d, TWO_PI - d)


@dataclass(frozen=True)
class SpherePoint:
    """A unit vector in R^(m+1); the norm must already be 1 within 1e-12."""

    coords: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.coords) < 3:
            raise ValueError("sphere points need at least 3 coordinates (m >= 2)")
        norm = math.sqrt(sum(c * c for c in self.coords))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"sphere point norm {norm} deviates from 1 beyond 1e-12")

    @classmethod
    def from_vector(cls, v: Sequence[float]) -> "SpherePoint":
        arr = np.asarray(v, dtype=float)
        norm = float(np.linalg.norm(arr))
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(tuple(arr / norm))

    @property
    def dim(self) -> int:
        """The sphere dimension m (ambient dimension minus one)."""
        return len(self.coords) - 1

    def dot(self, other: "SpherePoint") -> float:
        return sum(a * b for a, b in zip(self.coords, other.coords))

    def antipode(self) -> "SpherePoint":
        return SpherePoint(tuple(-c for c in self.coords))


ProductPoint = tuple[CirclePoint, SpherePoint]


@dataclass(frozen=True)
class EnhancedSet:
    """The ordered 2pq product points built from p circle and q sphere points."""

    xs: tuple[CirclePoint, ...]
    zs: tuple[SpherePoint, ...]
    points: tuple[ProductPoint, ...]

    @property
    def p(self) -> int:
        return len(self.xs)

    @property
    def q(self) -> int:
        return len(self.zs)


def _check_circle_distinct(xs: Sequence[CirclePoint], tol: float) -> None:
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            if xs[i].gap(xs[j]) <= tol:
                raise ValueError(f"circle points {i} and {j} coincide within {tol}")


def _check_sphere_admissible(zs: Sequence[SpherePoint], tol: float) -> None:
    for i in range(len(zs)):
        for j in range(i + 1, len(zs)):
            diff = math.sqrt(sum((a - b) ** 2 for a, b in zip(zs[i].coords, zs[j].coords)))
            if diff <= _DISTINCT_TOL:
                raise ValueError(f"sphere points {i} and {j} coincide")
            summ = math.sqrt(sum((a + b) ** 2 for a, b in zip(zs[i].coords, zs[j].coords)))
            if summ <= tol:
                raise ValueError(f"sphere points {i} and {j} are antipodal within {tol}")


def build_enhanced(xs: Sequence[CirclePoint], zs: Sequence[SpherePoint]) -> EnhancedSet:
    """Validate the generators and lay out the 2pq points in block order."""
    if not xs or not zs:
        raise ValueError("need at least one circle and one sphere point")
    if len({z.dim for z in zs}) != 1:
        raise ValueError("sphere points must share one ambient dimension")
    _check_circle_distinct(xs, _DISTINCT_TOL)
    _check_sphere_admissible(zs, _ANTIPODAL_TOL)
    plain = [(x, z) for z in zs for x in xs]
    mirrored = [(x, z.antipode()) for z in zs for x in xs]
    points = tuple(plain + mirrored)
    assert len(points) == 2 * len(xs) * len(zs)
    return EnhancedSet(tuple(xs), tuple(zs), points)


def sample_config(
    m: int, n_circle: int, n_sphere: int, seed: int, min_gap: float = _SAMPLING_GAP
) -> tuple[list[CirclePoint], list[SpherePoint]]:
    """Deterministic rejection sampling of distinct circle points and
    pairwise non-antipodal sphere points on S^m."""
    if m < 2:
        raise ValueError(f"invalid dimension m={m}: need m >= 2")
    if n_circle < 0 or n_sphere < 0:
        raise ValueError("point counts must be >= 0")
    rng = np.random.default_rng(seed)
    resamples = 0

    xs: list[CirclePoint] = []
    while len(xs) < n_circle:
        cand = CirclePoint(float(rng.uniform(0.0, TWO_PI)))
        if all(cand.gap(p) > min_gap for p in xs):
            xs.append(cand)
        else:
            resamples += 1
            if resamples > _MAX_RESAMPLES:
                raise SamplingError(f"circle sampling failed after {_MAX_RESAMPLES} resamples")

    zs: list[SpherePoint] = []
    while len(zs) < n_sphere:
        vec = rng.standard_normal(m + 1)
        norm = float(np.linalg.norm(vec))
        if norm < 1e-8:
            resamples += 1
            continue
        cand = SpherePoint.from_vector(vec)
        far_enough = all(
            math.dist(cand.coords, z.coords) > min_gap
            and math.dist(cand.coords, z.antipode().coords) > min_gap
            for z in zs
        )
        if far_enough:
            zs.append(cand)
        else:
            resamples += 1
            if resamples > _MAX_RESAMPLES:
                raise SamplingError(f"sphere sampling failed after {_MAX_RESAMPLES} resamples")

    logger.debug("sample_config(seed=%s) used %d resamples", seed, resamples)
    return xs, zs


class S2HarmonicBasis:
    """Real orthonormal spherical harmonics of one degree on S^2.

    Calling the basis on an (n, 3) array of unit vectors returns a
    (2l+1, n) array; rows are ordered [m=0, cos terms m=1..l, sin terms
    m=1..l].  Normalization is L^2(S^2)-orthonormal, so the summed products
    over one degree reproduce (2l+1)/(4pi) times the zonal polynomial of the
    dot product.
    """

    def __init__(self, degree: int):
        if degree < 0:
            raise ValueError("degree must be >= 0")
        self.degree = degree

    @property
    def size(self) -> int:
        return 2 * self.degree + 1

    def __call__(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[1] != 3:
            raise ValueError("S^2 harmonics take points in R^3")
        l = self.degree
        ct = np.clip(pts[:, 2], -1.0, 1.0)
        st = np.hypot(pts[:, 0], pts[:, 1])
        phi = np.arctan2(pts[:, 1], pts[:, 0])

        # normalized associated Legendre values N_l^m(ct), built per order m
        plm = np.empty((l + 1, pts.shape[0]))
        pmm = np.full(pts.shape[0], math.sqrt(1.0 / (4.0 * math.pi)))
        for mo in range(l + 1):
            if mo > 0:
                pmm = -math.sqrt((2 * mo + 1) / (2.0 * mo)) * st * pmm
            if mo == l:
                plm[mo] = pmm
                continue
            prev, cur = pmm, math.sqrt(2 * mo + 3) * ct * pmm
            for ll in range(mo + 2, l + 1):
                a = math.sqrt((4.0 * ll * ll - 1.0) / (ll * ll - mo * mo))
                b = math.sqrt(((ll - 1.0) ** 2 - mo * mo) / (4.0 * (ll - 1.0) ** 2 - 1.0))
                prev, cur = cur, a * (ct * cur - b * prev)
            plm[mo] = cur

        out = np.empty((self.size, pts.shape[0]))
        out[0] = plm[0]
        root2 = math.sqrt(2.0)
        for mo in range(1, l + 1):
            out[mo] = root2 * plm[mo] * np.cos(mo * phi)
            out[l + mo] = root2 * plm[mo] * np.sin(mo * phi)
        return out


def sph_basis_s2(l: int) -> S2HarmonicBasis:
    """Real orthonormal degree-l harmonic basis on S^2, 2l+1 functions."""
    return S2HarmonicBasis(l)


def s2_quadrature(max_degree: int) -> tuple[np.ndarray, np.ndarray]:
    """Product quadrature on S^2 exact for harmonic products up to max_degree.

    Gauss-Legendre in the polar cosine crossed with a uniform azimuthal grid;
    returns (points (N, 3), weights (N,)) with weights summing to 4pi.
    """
    n_theta = max_degree + 2
    n_phi = 2 * max_degree + 2
    nodes, wts = np.polynomial.legendre.leggauss(n_theta)
    phi = TWO_PI * np.arange(n_phi) / n_phi
    ct = np.repeat(nodes, n_phi)
    st = np.sqrt(np.maximum(0.0, 1.0 - ct * ct))
    ph = np.tile(phi, n_theta)
    points = np.column_stack([st * np.cos(ph), st * np.sin(ph), ct])
    weights = np.repeat(wts, n_phi) * (TWO_PI / n_phi)
    return points, weights
