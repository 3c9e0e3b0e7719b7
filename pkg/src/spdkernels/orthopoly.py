"""Zonal polynomial families for isotropic kernel expansions.

Three families on [-1, 1], each evaluated by a three-term recurrence:

* ``circle_poly``: 1 for degree 0 and (2/k) cos(k arccos t) for degree k >= 1,
  computed through the Chebyshev recurrence rather than arccos;
* ``gegenbauer``: ultraspherical polynomials attached to the parameter
  (m - 1)/2 for the sphere S^m, m >= 2, normalized so the value at t = 1
  equals binom(n + m - 2, n);
* ``jacobi``: Jacobi polynomials P_l^(alpha, beta), alpha, beta > -1,
  normalized so the value at t = 1 equals the generalized binomial
  binom(l + alpha, l).

The Gegenbauer recurrence is run on values divided by the value at 1,

    R_0 = 1,  R_1 = t,
    R_n = ((2n + m - 3) t R_{n-1} - (n - 1) R_{n-2}) / (n + m - 2),

which keeps every intermediate inside [-1, 1]; the unnormalized value is
recovered through an incrementally built binomial factor (no factorials).
Degrees are capped at MAX_DEGREE so everything stays in double precision.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "MAX_DEGREE",
    "circle_poly",
    "circle_table",
    "gegenbauer",
    "gegenbauer_norm",
    "gegenbauer_table",
    "jacobi",
    "jacobi_norm_at_one",
    "jacobi_table",
    "ratio_at",
]

MAX_DEGREE = 10_000
_ARG_TOL = 1e-12


def _checked_degree(n: int) -> int:
    n = int(n)
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    if n > MAX_DEGREE:
        raise ValueError(f"unsupported degree {n}: recurrences are capped at {MAX_DEGREE}")
    return n


def _checked_dimension(m: int) -> int:
    m = int(m)
    if m < 2:
        raise ValueError(f"invalid dimension m={m}: this family needs m >= 2")
    return m


def _checked_argument(t) -> np.ndarray:
    """Validate arguments lie in [-1, 1] up to 1e-12 slack and clamp them."""
    arr = np.asarray(t, dtype=float)
    if arr.ndim > 1:
        raise ValueError("argument must be a scalar or 1-d array")
    flat = np.atleast_1d(arr)
    if not np.all(np.isfinite(flat)):
        raise ValueError("argument must be finite")
    if np.any(np.abs(flat) > 1.0 + _ARG_TOL):
        bad = flat[np.abs(flat) > 1.0 + _ARG_TOL][0]
        raise ValueError(f"argument {bad} outside [-1, 1]")
    return np.clip(flat, -1.0, 1.0)


def circle_table(kmax: int, t) -> np.ndarray:
    """Values of the circle family for all degrees 0..kmax, shape (kmax+1, len(t))."""
    kmax = _checked_degree(kmax)
    x = _checked_argument(t)
    out = np.empty((kmax + 1, x.size))
    out[0] = 1.0
    if kmax == 0:
        return out
    prev = np.ones_like(x)
    cur = x.copy()
    out[1] = 2.0 * cur
    for k in range(2, kmax + 1):
        prev, cur = cur, 2.0 * x * cur - prev
        out[k] = (2.0 / k) * cur
    return out


def circle_poly(k: int, t: float) -> float:
    """Circle-family value of degree k at t: 1 for k = 0, (2/k) cos(k arccos t) else."""
    k = _checked_degree(k)
    return float(circle_table(k, t)[k, 0])


def _ratio_table(nmax: int, m: int, x: np.ndarray) -> np.ndarray:
    out = np.empty((nmax + 1, x.size))
    out[0] = 1.0
    if nmax == 0:
        return out
    out[1] = x
    for n in range(2, nmax + 1):
        out[n] = ((2 * n + m - 3) * x * out[n - 1] - (n - 1) * out[n - 2]) / (n + m - 2)
    return out


def gegenbauer_norm(n: int, m: int) -> float:
    """Value at t = 1, i.e. binom(n + m - 2, n), built as an incremental product."""
    n = _checked_degree(n)
    m = _checked_dimension(m)
    acc = 1.0
    for i in range(1, n + 1):
        acc *= (i + m - 2) / i
    return acc


def _norm_vector(nmax: int, m: int) -> np.ndarray:
    norms = np.empty(nmax + 1)
    norms[0] = 1.0
    for n in range(1, nmax + 1):
        norms[n] = norms[n - 1] * (n + m - 2) / n
    return norms


def gegenbauer_table(nmax: int, m: int, t, normalized: bool = False) -> np.ndarray:
    """Ultraspherical values for degrees 0..nmax, shape (nmax+1, len(t)).

    With ``normalized=True`` the rows are divided by their value at 1 (every
    entry then lies in [-1, 1]).
    """
    nmax = _checked_degree(nmax)
    m = _checked_dimension(m)
    x = _checked_argument(t)
    ratios = _ratio_table(nmax, m, x)
    if normalized:
        return ratios
    return ratios * _norm_vector(nmax, m)[:, None]


def gegenbauer(n: int, m: int, t: float) -> float:
    """Ultraspherical polynomial of degree n for S^m at t, normalized at 1 to binom(n+m-2, n)."""
    n = _checked_degree(n)
    m = _checked_dimension(m)
    x = _checked_argument(t)
    return float(_ratio_table(n, m, x)[n, 0] * gegenbauer_norm(n, m))


def ratio_at(l: int, m: int, t: float) -> float:
    """Ultraspherical value at t divided by the value at 1; always in [-1, 1]."""
    l = _checked_degree(l)
    m = _checked_dimension(m)
    x = _checked_argument(t)
    return float(_ratio_table(l, m, x)[l, 0])


def jacobi_norm_at_one(l: int, alpha: float) -> float:
    """binom(l + alpha, l) for real alpha > -1, computed through log-Gamma."""
    l = _checked_degree(l)
    return math.exp(math.lgamma(l + alpha + 1) - math.lgamma(alpha + 1) - math.lgamma(l + 1))


def jacobi_table(lmax: int, alpha: float, beta: float, t) -> np.ndarray:
    """Jacobi values P_l^(alpha, beta) for degrees 0..lmax, shape (lmax+1, len(t))."""
    lmax = _checked_degree(lmax)
    alpha = float(alpha)
    beta = float(beta)
    if alpha <= -1.0 or beta <= -1.0:
        raise ValueError(f"jacobi parameters must exceed -1, got alpha={alpha}, beta={beta}")
    x = _checked_argument(t)
    out = np.empty((lmax + 1, x.size))
    out[0] = 1.0
    if lmax == 0:
        return out
    out[1] = (alpha + 1.0) + (alpha + beta + 2.0) * (x - 1.0) / 2.0
    ab = alpha + beta
    for n in range(2, lmax + 1):
        c0 = 2.0 * n * (n + ab) * (2.0 * n + ab - 2.0)
        c1 = (2.0 * n + ab - 1.0) * (2.0 * n + ab) * (2.0 * n + ab - 2.0)
        c2 = (2.0 * n + ab - 1.0) * (alpha * alpha - beta * beta)
        c3 = 2.0 * (n + alpha - 1.0) * (n + beta - 1.0) * (2.0 * n + ab)
        out[n] = ((c1 * x + c2) * out[n - 1] - c3 * out[n - 2]) / c0
    return out


def jacobi(l: int, alpha: float, beta: float, t: float) -> float:
    """Jacobi polynomial P_l^(alpha, beta) at t, normalized at 1 to binom(l + alpha, l)."""
    l = _checked_degree(l)
    return float(jacobi_table(l, alpha, beta, t)[l, 0])
