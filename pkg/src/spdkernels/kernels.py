"""Kernel specifications: space, symbolic coefficient support, scheme, truncation.

A spec describes an expansion f = sum a_j P_j (single spaces) or
f = sum a_{k,l} P_k^circle P_l^sphere (product spaces) through a symbolic
support plus a positive coefficient rule.  Certifiers judge the declared
symbolic support; the evaluation routines here work with the truncated
effective support (declared support clipped to the truncation box), which is
numerical evidence rather than proof.

Coefficient rules: ``constant(c)`` gives a_{k,l} = c on the support, and
``geometric(r_k, r_l, c)`` gives a_{k,l} = c * r_k**k * r_l**l.  Overlapping
support terms are a union: each index pair carries its rule value once.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Union

import numpy as np

from .errors import NotApplicableError
from .orthopoly import circle_table, gegenbauer_table, jacobi_table
from .supportsets import Parity, SupportSet1D, SupportSet2D, one

__all__ = [
    "BETA_BY_FAMILY",
    "DIMENSION_RULES",
    "DEFAULT_TRUNCATION",
    "SpaceDescriptor",
    "circle_space",
    "sphere_space",
    "circle_sphere_space",
    "circle_tph_space",
    "CoefficientScheme",
    "constant_scheme",
    "geometric_scheme",
    "KernelSpec",
    "eval_kernel",
    "kernel_values",
    "eval_marginal",
    "marginal_matrix",
    "truncated_parity_sum",
    "support_of",
]

# Jacobi beta parameter for each projective family; alpha is (d - 2)/2.
BETA_BY_FAMILY = {
    "real_proj": -0.5,
    "complex_proj": 0.0,
    "quat_proj": 1.0,
    "cayley": 3.0,
}

# Admissible dimensions d per projective family.
DIMENSION_RULES = {
    "real_proj": lambda d: d >= 2,
    "complex_proj": lambda d: d >= 4 and d % 2 == 0,
    "quat_proj": lambda d: d >= 8 and d % 4 == 0,
    "cayley": lambda d: d == 16,
}

DEFAULT_TRUNCATION = (60, 60)

_PRODUCT_KINDS = ("circle_sphere", "circle_tph")
_ALL_KINDS = ("circle", "sphere") + _PRODUCT_KINDS


@dataclass(frozen=True)
class SpaceDescriptor:
    """Which space the kernel lives on, with the derived polynomial parameters."""

    kind: str
    m: Optional[int] = None
    family: Optional[str] = None
    d: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind not in _ALL_KINDS:
            raise ValueError(f"unknown space kind {self.kind!r}; expected one of {_ALL_KINDS}")
        if self.kind == "circle":
            if self.m is not None or self.family is not None or self.d is not None:
                raise ValueError("circle takes no extra parameters")
        elif self.kind in ("sphere", "circle_sphere"):
            if self.m is None or self.m < 2:
                raise ValueError(f"invalid dimension m={self.m} for {self.kind}: need m >= 2")
            if self.family is not None or self.d is not None:
                raise ValueError(f"{self.kind} takes only the dimension m")
        else:  # circle_tph
            if self.family not in BETA_BY_FAMILY:
                raise ValueError(
                    f"unknown projective family {self.family!r}; "
                    f"expected one of {sorted(BETA_BY_FAMILY)}"
                )
            if self.d is None or not DIMENSION_RULES[self.family](self.d):
                raise ValueError(f"invalid dimension d={self.d} for family {self.family!r}")
            if self.m is not None:
                raise ValueError("circle_tph takes (family, d), not m")

    @property
    def is_product(self) -> bool:
        return self.kind in _PRODUCT_KINDS

    @property
    def alpha(self) -> float:
        if self.kind != "circle_tph":
            raise NotApplicableError("alpha is defined for circle_tph spaces only")
        return (self.d - 2) / 2.0

    @property
    def beta(self) -> float:
        if self.kind != "circle_tph":
            raise NotApplicableError("beta is defined for circle_tph spaces only")
        return BETA_BY_FAMILY[self.family]


def circle_space() -> SpaceDescriptor:
    return SpaceDescriptor("circle")


def sphere_space(m: int) -> SpaceDescriptor:
    return SpaceDescriptor("sphere", m=m)


def circle_sphere_space(m: int) -> SpaceDescriptor:
    return SpaceDescriptor("circle_sphere", m=m)


def circle_tph_space(family: str, d: int) -> SpaceDescriptor:
    return SpaceDescriptor("circle_tph", family=family, d=d)


@dataclass(frozen=True)
class CoefficientScheme:
    """Positive coefficient rule on the support."""

    kind: str
    scale: float = 1.0
    r_k: Optional[float] = None
    r_l: Optional[float] = None

    def __post_init__(self) -> None:
        if self.kind not in ("constant", "geometric"):
            raise ValueError(f"unknown scheme kind {self.kind!r}")
        if not self.scale > 0:
            raise ValueError(f"scheme scale must be positive, got {self.scale}")
        if self.kind == "geometric":
            for name, r in (("r_k", self.r_k), ("r_l", self.r_l)):
                if r is None or not 0.0 < r < 1.0:
                    raise ValueError(f"geometric rate {name} must lie in (0, 1), got {r}")
        elif self.r_k is not None or self.r_l is not None:
            raise ValueError("constant scheme takes no rates")

    def coefficient(self, k: int, l: int) -> float:
        if self.kind == "constant":
            return self.scale
        return self.scale * self.r_k**k * self.r_l**l

    def coefficient_axis(self, j: int, axis: str) -> float:
        """Rule restricted to one axis: the k-rate drives circle supports, the
        l-rate sphere supports."""
        if self.kind == "constant":
            return self.scale
        rate = self.r_k if axis == "k" else self.r_l
        return self.scale * rate**j


def constant_scheme(scale: float = 1.0) -> CoefficientScheme:
    return CoefficientScheme("constant", scale=scale)


def geometric_scheme(r_k: float = 0.9, r_l: float = 0.9, scale: float = 1.0) -> CoefficientScheme:
    return CoefficientScheme("geometric", scale=scale, r_k=r_k, r_l=r_l)


@dataclass(frozen=True)
class KernelSpec:
    """A kernel expansion: space + declared support + scheme + truncation box."""

    space: SpaceDescriptor
    support: Union[SupportSet1D, SupportSet2D]
    scheme: CoefficientScheme = field(default_factory=geometric_scheme)
    truncation: tuple[int, int] = DEFAULT_TRUNCATION

    def __post_init__(self) -> None:
        if self.space.is_product and not isinstance(self.support, SupportSet2D):
            raise ValueError("product spaces need a two-axis support")
        if not self.space.is_product and not isinstance(self.support, SupportSet1D):
            raise ValueError("single spaces need a one-axis support")
        kmax, lmax = self.truncation
        if kmax < 0 or lmax < 0:
            raise ValueError(f"truncation bounds must be >= 0, got {self.truncation}")

    @property
    def kmax(self) -> int:
        return self.truncation[0]

    @property
    def lmax(self) -> int:
        return self.truncation[1]

    @property
    def axis_cap(self) -> int:
        """Degree cap for single-space specs: kmax on the circle, lmax on spheres."""
        return self.kmax if self.space.kind == "circle" else self.lmax

    @cached_property
    def coefficient_matrix(self) -> np.ndarray:
        """Effective coefficients on the truncation box.

        Products: shape (kmax+1, lmax+1).  Single spaces: shape (cap+1,).
        Union semantics: overlapping terms mark an index once.
        """
        if self.space.is_product:
            mask = np.zeros((self.kmax + 1, self.lmax + 1), dtype=bool)
            for kt, lt in self.support.terms:
                ks = list(kt.members_upto(self.kmax))
                ls = list(lt.members_upto(self.lmax))
                if ks and ls:
                    mask[np.ix_(ks, ls)] = True
            if self.scheme.kind == "constant":
                values = np.full(mask.shape, self.scheme.scale)
            else:
                values = self.scheme.scale * np.outer(
                    self.scheme.r_k ** np.arange(self.kmax + 1),
                    self.scheme.r_l ** np.arange(self.lmax + 1),
                )
            return np.where(mask, values, 0.0)
        cap = self.axis_cap
        axis = "k" if self.space.kind == "circle" else "l"
        coeffs = np.zeros(cap + 1)
        for term in self.support.terms:
            for j in term.members_upto(cap):
                coeffs[j] = self.scheme.coefficient_axis(j, axis)
        return coeffs

    @cached_property
    def is_effectively_empty(self) -> bool:
        return not np.any(self.coefficient_matrix > 0)

    def sphere_axis_table(self, s: np.ndarray) -> np.ndarray:
        """Zonal polynomial values on the second axis, all degrees up to lmax."""
        if self.space.kind == "circle_sphere":
            return gegenbauer_table(self.lmax, self.space.m, s)
        if self.space.kind == "circle_tph":
            return jacobi_table(self.lmax, self.space.alpha, self.space.beta, s)
        raise NotApplicableError("sphere-axis table is defined for product specs only")

    @cached_property
    def value_at_one(self) -> float:
        """f(1, 1) for products, f(1) for single spaces."""
        if self.space.is_product:
            return float(kernel_values(self, np.array([1.0]), np.array([1.0]))[0])
        return float(kernel_values(self, np.array([1.0]))[0])


def _warn_if_empty(spec: KernelSpec) -> None:
    if spec.is_effectively_empty:
        warnings.warn(
            "degenerate kernel spec: effective support is empty, evaluating to 0",
            stacklevel=3,
        )


def kernel_values(spec: KernelSpec, t: np.ndarray, s: Optional[np.ndarray] = None) -> np.ndarray:
    """Vectorized truncated-kernel evaluation over paired argument arrays."""
    _warn_if_empty(spec)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if spec.space.is_product:
        if s is None:
            raise ValueError("product spaces need both arguments t and s")
        s = np.atleast_1d(np.asarray(s, dtype=float))
        if s.shape != t.shape:
            raise ValueError("t and s must have the same shape")
        circ = circle_table(spec.kmax, t)
        sph = spec.sphere_axis_table(s)
        return np.einsum("kp,kl,lp->p", circ, spec.coefficient_matrix, sph)
    if s is not None:
        raise ValueError("single spaces take one argument; drop s")
    table = (
        circle_table(spec.axis_cap, t)
        if spec.space.kind == "circle"
        else gegenbauer_table(spec.axis_cap, spec.space.m, t)
    )
    return spec.coefficient_matrix @ table


def eval_kernel(spec: KernelSpec, t: float, s: Optional[float] = None) -> float:
    """Truncated kernel value at (t, s); single spaces take t alone."""
    if not spec.space.is_product:
        if s is not None:
            raise ValueError("single spaces take one argument; drop s")
        return float(kernel_values(spec, np.array([float(t)]))[0])
    if s is None:
        raise ValueError("product spaces need both arguments t and s")
    return float(kernel_values(spec, np.array([float(t)]), np.array([float(s)]))[0])


def marginal_matrix(spec: KernelSpec, t: np.ndarray) -> np.ndarray:
    """All marginal values f_l(t) at once, shape (lmax+1, len(t)).

    The degree-l marginal is f_l(t) = sum_k a_{k,l} P_k^circle(t).
    """
    if not spec.space.is_product:
        raise NotApplicableError("marginals are defined for product specs only")
    t = np.atleast_1d(np.asarray(t, dtype=float))
    circ = circle_table(spec.kmax, t)
    return spec.coefficient_matrix.T @ circ


def eval_marginal(spec: KernelSpec, l: int, t: float) -> float:
    """Marginal f_l(t) for one sphere degree l <= lmax."""
    if not spec.space.is_product:
        raise NotApplicableError("marginals are defined for product specs only")
    if not 0 <= l <= spec.lmax:
        raise ValueError(f"marginal degree {l} outside the truncation box [0, {spec.lmax}]")
    _warn_if_empty(spec)
    return float(marginal_matrix(spec, np.array([float(t)]))[l, 0])


def truncated_parity_sum(spec: KernelSpec, gamma: int, parity: Parity, t: float) -> float:
    """Sum of marginals f_l(t) over sphere degrees l >= gamma in the parity class."""
    if not spec.space.is_product:
        raise NotApplicableError("parity sums are defined for product specs only")
    if gamma < 0:
        raise ValueError("gamma must be >= 0")
    if parity not in ("even", "odd"):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    _warn_if_empty(spec)
    start = gamma if (gamma % 2 == 0) == (parity == "even") else gamma + 1
    rows = np.arange(start, spec.lmax + 1, 2)
    if rows.size == 0:
        return 0.0
    weights = spec.coefficient_matrix[:, rows].sum(axis=1)
    circ = circle_table(spec.kmax, np.array([float(t)]))
    return float(weights @ circ[:, 0])


def support_of(spec: KernelSpec, truncated: bool = False) -> Union[SupportSet1D, SupportSet2D]:
    """Declared symbolic support, or the finite effective one as singletons."""
    if not truncated:
        return spec.support
    if spec.space.is_product:
        ks, ls = np.nonzero(spec.coefficient_matrix > 0)
        return SupportSet2D(tuple((one(int(k)), one(int(l))) for k, l in zip(ks, ls)))
    js = np.nonzero(spec.coefficient_matrix > 0)[0]
    return SupportSet1D(tuple(one(int(j)) for j in js))
