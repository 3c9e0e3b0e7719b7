"""Exact certifiers for strict positive definiteness on declared supports.

Each certifier turns one characterization into a decision on the symbolic
coefficient support:

* circle: the symmetrized frequency set must meet every residue class of
  every modulus;
* sphere (m >= 2): the degree set must hold infinitely many even and
  infinitely many odd members;
* circle x sphere: for every tail cutoff gamma and each parity, the set of
  circle frequencies whose section holds a degree >= gamma of that parity
  must meet every residue class.  Two independent implementations are kept:
  one derives the frequency sets term by term
  (``certify_circle_sphere``), the other enumerates sections over a verified
  finite window and promotes the periodic pattern
  (``certify_circle_sphere_gamma_loop``);
* circle x projective space: the same loop without the parity split;
* sphere x sphere: all four parity quadrants of the support must have both
  coordinate projections unbounded;
* ``sufficient_product``: the one-axis-at-a-time sufficient test.  It can
  return SufficientOnly or Inconclusive but never refutes.

The gamma loop only needs to reach the stabilization bound of the support:
past it, no derived set changes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from math import gcd
from typing import Callable, Optional, Union

from .errors import NotApplicableError
from .kernels import SpaceDescriptor
from .supportsets import (
    Parity,
    ProgressionWitness,
    SupportSet1D,
    SupportSet2D,
    Term1D,
    derived_parity_tail_set,
    has_infinitely_many,
    meets_every_progression,
    one,
    prog,
    stabilization_bound,
    term_has_infinite_parity,
    term_has_parity_member,
)

__all__ = [
    "Verdict",
    "TraceEntry",
    "ParityDeficit",
    "QuadrantDeficit",
    "GammaFailure",
    "Certificate",
    "certify_circle",
    "certify_sphere",
    "certify_circle_sphere",
    "certify_circle_sphere_gamma_loop",
    "certify_circle_tph",
    "sufficient_product",
    "certify_two_spheres",
]


class Verdict(str, Enum):
    SPD = "SPD"
    NOT_SPD = "NotSPD"
    SUFFICIENT_ONLY = "SufficientOnly"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class TraceEntry:
    condition: str
    outcome: bool
    gamma: Optional[int] = None


@dataclass(frozen=True)
class ParityDeficit:
    """Only finitely many support members of this parity exist."""

    parity: str


@dataclass(frozen=True)
class QuadrantDeficit:
    """A parity quadrant whose k- or l-projection stays bounded."""

    k_parity: str
    l_parity: str
    axis: str


@dataclass(frozen=True)
class GammaFailure:
    """A tail cutoff and parity at which the derived frequency set fails."""

    gamma: int
    parity: str
    witness: Optional[ProgressionWitness]
    empty: bool = False


Counterexample = Union[ProgressionWitness, ParityDeficit, QuadrantDeficit, GammaFailure]


@dataclass(frozen=True)
class Certificate:
    """Outcome of a certifier run over a declared symbolic support."""

    space: str
    verdict: Verdict
    method: str
    trace: tuple[TraceEntry, ...] = ()
    counterexample: Optional[Counterexample] = None


def _check_dim(m: int, name: str = "m") -> None:
    if m < 2:
        raise ValueError(f"invalid dimension {name}={m}: need {name} >= 2")


def certify_circle(support: SupportSet1D) -> Certificate:
    """Strict positive definiteness on the circle: +/-S meets every class."""
    ok, witness = meets_every_progression(support)
    trace = (TraceEntry("symmetrized frequency set meets every residue class", ok),)
    if ok:
        return Certificate("circle", Verdict.SPD, "circle-residue-classes", trace)
    return Certificate("circle", Verdict.NOT_SPD, "circle-residue-classes", trace, witness)


def certify_sphere(support: SupportSet1D, m: int) -> Certificate:
    """Strict positive definiteness on S^m, m >= 2: infinitely many even and odd degrees."""
    _check_dim(m)
    trace = []
    for parity in ("even", "odd"):
        ok = has_infinitely_many(support, parity)
        trace.append(TraceEntry(f"infinitely many {parity} degrees", ok))
        if not ok:
            return Certificate(
                "sphere", Verdict.NOT_SPD, "sphere-parity-count", tuple(trace), ParityDeficit(parity)
            )
    return Certificate("sphere", Verdict.SPD, "sphere-parity-count", tuple(trace))


def _gamma_upper(support: SupportSet2D, gamma_max: Optional[int]) -> int:
    upper = stabilization_bound(support)
    if gamma_max is not None:
        if gamma_max < 0:
            raise ValueError("gamma_max must be >= 0")
        upper = max(upper, gamma_max)
    return upper


def certify_circle_sphere(
    support: SupportSet2D, m: int, gamma_max: Optional[int] = None
) -> Certificate:
    """Product characterization via term-by-term derived parity tail sets."""
    _check_dim(m)
    upper = _gamma_upper(support, gamma_max)
    trace = []
    for gamma in range(upper + 1):
        for parity in ("odd", "even"):
            derived, _ = derived_parity_tail_set(support, gamma, parity)
            ok, witness = meets_every_progression(derived)
            trace.append(
                TraceEntry(f"derived {parity} tail set meets every residue class", ok, gamma)
            )
            if not ok:
                return Certificate(
                    "circle_sphere",
                    Verdict.NOT_SPD,
                    "product-parity-tail-sets",
                    tuple(trace),
                    GammaFailure(gamma, parity, witness, empty=derived.is_empty),
                )
    return Certificate("circle_sphere", Verdict.SPD, "product-parity-tail-sets", tuple(trace))


def _first_tail_member(term: Term1D, gamma: int) -> int:
    if not term.is_progression:
        return term.base
    if term.base >= gamma:
        return term.base
    steps = (gamma - term.base + term.step - 1) // term.step
    return term.base + steps * term.step


def _section_terms_have_tail(terms: list[Term1D], gamma: int, parity: Parity) -> bool:
    """Does any listed l-term hold a member >= gamma of the parity?

    Decided by listing explicit members: for a progression the first two
    members at or past gamma settle every parity case (consecutive members
    either alternate parity or all share the base's).
    """
    wanted = {"any": (0, 1), "even": (0,), "odd": (1,)}[parity]
    for term in terms:
        if term.is_progression:
            start = _first_tail_member(term, gamma)
            if start % 2 in wanted or (start + term.step) % 2 in wanted:
                return True
        elif term.base >= gamma and term.base % 2 in wanted:
            return True
    return False


def _lcm_of_steps(terms: list[Term1D]) -> int:
    out = 1
    for t in terms:
        if t.is_progression:
            out = out * t.step // gcd(out, t.step)
    return out


def _promote_periodic(axis_terms: list[Term1D], predicate: Callable[[int], bool]) -> SupportSet1D:
    """Evaluate a residue-periodic predicate over an explicit window and
    promote the pattern: singletons below the prefix bound, progressions with
    the step lcm across one period.  Periodicity past the bound is asserted
    over a second period.
    """
    bound = 1 + max((t.base for t in axis_terms), default=0)
    period = _lcm_of_steps(axis_terms)
    flags = [predicate(v) for v in range(bound + 2 * period)]
    for v in range(bound, bound + period):
        if flags[v] != flags[v + period]:
            raise AssertionError(f"window outcome not periodic at {v} (period {period})")
    terms = [one(v) for v in range(bound) if flags[v]]
    terms += [prog(v, period) for v in range(bound, bound + period) if flags[v]]
    return SupportSet1D(tuple(terms))


def _tail_frequency_set(support: SupportSet2D, gamma: int, parity: Parity) -> SupportSet1D:
    """Route taken by the gamma loop: decide each section by member listing,
    then read the frequency set off a verified periodic window."""
    l_ok = [_section_terms_have_tail([lt], gamma, parity) for _, lt in support.terms]
    k_parts = support.k_terms()

    def ok(k: int) -> bool:
        return any(l_ok[i] and k_parts[i].contains(k) for i in range(len(k_parts)))

    return _promote_periodic(k_parts, ok)


def _gamma_loop(
    support: SupportSet2D,
    space: str,
    method: str,
    parities: tuple[Parity, ...],
    gamma_max: Optional[int],
) -> Certificate:
    upper = _gamma_upper(support, gamma_max)
    trace = []
    for gamma in range(upper + 1):
        for parity in parities:
            freq = _tail_frequency_set(support, gamma, parity)
            sub = certify_circle(freq)
            label = "any" if parity == "any" else parity
            trace.append(
                TraceEntry(f"tail frequency set ({label}) certifies on the circle",
                           sub.verdict is Verdict.SPD, gamma)
            )
            if sub.verdict is not Verdict.SPD:
                witness = sub.counterexample
                return Certificate(
                    space,
                    Verdict.NOT_SPD,
                    method,
                    tuple(trace),
                    GammaFailure(gamma, parity, witness, empty=freq.is_empty),
                )
    return Certificate(space, Verdict.SPD, method, tuple(trace))


def certify_circle_sphere_gamma_loop(
    support: SupportSet2D, m: int, gamma_max: Optional[int] = None
) -> Certificate:
    """Product characterization re-derived through explicit section windows.

    Kept implementationally separate from ``certify_circle_sphere`` so the two
    can be cross-checked against each other.
    """
    _check_dim(m)
    return _gamma_loop(support, "circle_sphere", "product-gamma-loop", ("odd", "even"), gamma_max)


def certify_circle_tph(
    support: SupportSet2D, space: SpaceDescriptor, gamma_max: Optional[int] = None
) -> Certificate:
    """Circle x projective-space characterization: the tail loop without parity."""
    if space.kind != "circle_tph":
        raise NotApplicableError(
            f"wrong certifier for space kind {space.kind!r}; "
            "spheres keep the parity split, use the circle_sphere certifiers"
        )
    return _gamma_loop(support, "circle_tph", "tph-tail-sets", ("any",), gamma_max)


def sufficient_product(support: SupportSet2D, m: int, axis: str) -> Certificate:
    """One-axis-at-a-time sufficient test; never refutes.

    circle-outer: collect the frequencies whose section certifies on S^m and
    test that set on the circle.  sphere-outer: dually, collect the degrees
    whose row certifies on the circle and test the parity count.  SufficientOnly
    when the outer test passes, Inconclusive otherwise.
    """
    _check_dim(m)
    if axis not in ("circle-outer", "sphere-outer"):
        raise ValueError(f"axis must be 'circle-outer' or 'sphere-outer', got {axis!r}")

    working = support if axis == "circle-outer" else support.transpose()
    outer_parts = working.k_terms()
    inner_parts = working.l_terms()
    cache: dict[frozenset, bool] = {}

    def inner_ok(v: int) -> bool:
        key = frozenset(i for i, t in enumerate(outer_parts) if t.contains(v))
        if key not in cache:
            section = SupportSet1D(tuple(inner_parts[i] for i in sorted(key)))
            if axis == "circle-outer":
                cache[key] = certify_sphere(section, m).verdict is Verdict.SPD
            else:
                cache[key] = certify_circle(section).verdict is Verdict.SPD
        return cache[key]

    qualifying = _promote_periodic(outer_parts, inner_ok)
    if axis == "circle-outer":
        outer = certify_circle(qualifying)
        method = "sufficient-circle-outer"
        inner_desc = "sections certify on the sphere"
    else:
        outer = certify_sphere(qualifying, m)
        method = "sufficient-sphere-outer"
        inner_desc = "rows certify on the circle"
    trace = (
        TraceEntry(f"qualifying set where {inner_desc}", not qualifying.is_empty),
        TraceEntry("qualifying set passes the outer test", outer.verdict is Verdict.SPD),
    )
    verdict = Verdict.SUFFICIENT_ONLY if outer.verdict is Verdict.SPD else Verdict.INCONCLUSIVE
    return Certificate("circle_sphere", verdict, method, trace)


def certify_two_spheres(support: SupportSet2D, m: int, big_m: int) -> Certificate:
    """S^m x S^M characterization over the four parity quadrants.

    A quadrant passes when the support's restriction to it has unbounded k-
    and l-projections; unboundedness of a projection is read coordinatewise.
    """
    _check_dim(m)
    _check_dim(big_m, "M")
    trace = [TraceEntry("quadrant unboundedness read through coordinate projections", True)]
    for k_parity in ("even", "odd"):
        for l_parity in ("even", "odd"):
            k_unbounded = any(
                term_has_parity_member(lt, l_parity) and term_has_infinite_parity(kt, k_parity)
                for kt, lt in support.terms
            )
            l_unbounded = any(
                term_has_parity_member(kt, k_parity) and term_has_infinite_parity(lt, l_parity)
                for kt, lt in support.terms
            )
            trace.append(
                TraceEntry(
                    f"quadrant ({k_parity} k, {l_parity} l) has both projections unbounded",
                    k_unbounded and l_unbounded,
                )
            )
            if not (k_unbounded and l_unbounded):
                axis = "k" if not k_unbounded else "l"
                return Certificate(
                    "sphere_sphere",
                    Verdict.NOT_SPD,
                    "two-spheres-quadrants",
                    tuple(trace),
                    QuadrantDeficit(k_parity, l_parity, axis),
                )
    return Certificate("sphere_sphere", Verdict.SPD, "two-spheres-quadrants", tuple(trace))
