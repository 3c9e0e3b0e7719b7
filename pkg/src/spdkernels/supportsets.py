"""Symbolic subsets of the nonnegative integers and their decision procedures.

A set is a finite union of terms, each a singleton {v} or a full arithmetic
progression {a, a + n, a + 2n, ...}.  Two-axis sets are finite unions of
products of such terms.  These are exactly the coefficient supports the
certifiers reason about, and all questions asked of them (membership of a
residue class, parity counting, tail extraction) are decided exactly with
integer arithmetic.

The central operation is ``meets_every_progression``: does the symmetrized
set +/-S intersect every residue class j mod n for every modulus n >= 1?
Progressions reduce the question to finitely many moduli (the divisors of the
lcm of their steps): the members of {a + kn : k >= 0} modulo M are precisely
the class of a modulo gcd(n, M), each hit infinitely often.  When coverage
fails, a concrete missed class is produced and re-validated against a brute
scan of the window [-WINDOW, WINDOW] before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Iterator, Literal, Optional

__all__ = [
    "WINDOW",
    "Parity",
    "Term1D",
    "one",
    "prog",
    "SupportSet1D",
    "SupportSet2D",
    "ProgressionWitness",
    "has_infinitely_many",
    "derived_parity_tail_set",
    "stabilization_bound",
    "meets_every_progression",
    "witness_avoids_window",
    "term_has_parity_member",
    "term_has_infinite_parity",
]

Parity = Literal["even", "odd", "any"]

WINDOW = 10_000


def _check_parity(parity: str) -> None:
    if parity not in ("even", "odd", "any"):
        raise ValueError(f"parity must be 'even', 'odd' or 'any', got {parity!r}")


@dataclass(frozen=True)
class Term1D:
    """A singleton {base} (step == 0) or the progression {base, base+step, ...}."""

    base: int
    step: int

    def __post_init__(self) -> None:
        if not isinstance(self.base, int) or not isinstance(self.step, int):
            raise ValueError("term base and step must be integers")
        if self.base < 0:
            raise ValueError(f"term base must be >= 0, got {self.base}")
        if self.step < 0:
            raise ValueError(f"term step must be >= 0, got {self.step}")

    @property
    def is_progression(self) -> bool:
        return self.step >= 1

    def contains(self, v: int) -> bool:
        if not self.is_progression:
            return v == self.base
        return v >= self.base and (v - self.base) % self.step == 0

    def members_upto(self, hi: int) -> Iterator[int]:
        """Members of the term in [0, hi], ascending."""
        if not self.is_progression:
            if self.base <= hi:
                yield self.base
            return
        yield from range(self.base, hi + 1, self.step)


def one(value: int) -> Term1D:
    """Singleton term {value}."""
    return Term1D(value, 0)


def prog(base: int, step: int) -> Term1D:
    """Progression term {base, base + step, base + 2*step, ...}, step >= 1."""
    if step < 1:
        raise ValueError(f"progression step must be >= 1, got {step}")
    return Term1D(base, step)


@dataclass(frozen=True)
class SupportSet1D:
    """Union of Term1D over one index axis."""

    terms: tuple[Term1D, ...] = ()

    def __post_init__(self) -> None:
        if not all(isinstance(t, Term1D) for t in self.terms):
            raise ValueError("SupportSet1D takes Term1D members")

    @classmethod
    def of(cls, *terms: Term1D) -> "SupportSet1D":
        return cls(tuple(terms))

    @property
    def is_empty(self) -> bool:
        return not self.terms

    def contains(self, v: int) -> bool:
        return any(t.contains(v) for t in self.terms)

    def progressions(self) -> list[Term1D]:
        return [t for t in self.terms if t.is_progression]

    def singletons(self) -> list[int]:
        return [t.base for t in self.terms if not t.is_progression]

    def members_upto(self, hi: int) -> set[int]:
        out: set[int] = set()
        for t in self.terms:
            out.update(t.members_upto(hi))
        return out


@dataclass(frozen=True)
class SupportSet2D:
    """Union of products (k-term) x (l-term) over two index axes."""

    terms: tuple[tuple[Term1D, Term1D], ...] = ()

    def __post_init__(self) -> None:
        for pair in self.terms:
            if len(pair) != 2 or not all(isinstance(t, Term1D) for t in pair):
                raise ValueError("SupportSet2D takes (Term1D, Term1D) pairs")

    @classmethod
    def of(cls, *terms: tuple[Term1D, Term1D]) -> "SupportSet2D":
        return cls(tuple(terms))

    @property
    def is_empty(self) -> bool:
        return not self.terms

    def contains(self, k: int, l: int) -> bool:
        return any(kt.contains(k) and lt.contains(l) for kt, lt in self.terms)

    def section(self, k: int) -> SupportSet1D:
        """The l-set {l : (k, l) in S} for a fixed circle frequency k."""
        return SupportSet1D(tuple(lt for kt, lt in self.terms if kt.contains(k)))

    def transpose(self) -> "SupportSet2D":
        return SupportSet2D(tuple((lt, kt) for kt, lt in self.terms))

    def k_terms(self) -> list[Term1D]:
        return [kt for kt, _ in self.terms]

    def l_terms(self) -> list[Term1D]:
        return [lt for _, lt in self.terms]

    def k_projection(self) -> SupportSet1D:
        """The set {k : (k, l) in S for some l}; terms are never empty, so this
        is just the union of the k-parts."""
        return SupportSet1D(tuple(self.k_terms()))


@dataclass(frozen=True)
class ProgressionWitness:
    """A residue class (modulus, residue) entirely missed by the symmetrized set."""

    modulus: int
    residue: int

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ValueError("witness modulus must be >= 1")
        if not 0 <= self.residue < self.modulus:
            raise ValueError("witness residue must lie in [0, modulus)")


def term_has_parity_member(term: Term1D, parity: Parity) -> bool:
    """Does the term contain at least one member of the given parity?"""
    _check_parity(parity)
    if parity == "any":
        return True
    want_even = parity == "even"
    if not term.is_progression:
        return (term.base % 2 == 0) == want_even
    if term.step % 2 == 1:
        return True  # consecutive members alternate parity
    return (term.base % 2 == 0) == want_even


def term_has_infinite_parity(term: Term1D, parity: Parity) -> bool:
    """Does the term contain infinitely many members of the given parity?"""
    _check_parity(parity)
    if not term.is_progression:
        return False
    return term_has_parity_member(term, parity)


def has_infinitely_many(support: SupportSet1D, parity: Parity) -> bool:
    """Whether the union holds infinitely many members of the parity class.

    Singletons never contribute; an odd-step progression meets both parity
    classes infinitely often, an even-step one stays in the class of its base.
    """
    return any(term_has_infinite_parity(t, parity) for t in support.terms)


def _term_contributes_tail(lt: Term1D, gamma: int, parity: Parity) -> bool:
    # A progression contributes independently of gamma: if it has any member
    # of the parity it has unboundedly many.  Singletons must clear gamma.
    if lt.is_progression:
        return term_has_infinite_parity(lt, parity)
    if lt.base < gamma:
        return False
    return parity == "any" or term_has_parity_member(lt, parity)


def stabilization_bound(support: SupportSet2D) -> int:
    """1 + the largest l-axis singleton value (0 when there is none).

    Beyond this bound the derived tail sets no longer depend on gamma, since
    progressions contribute gamma-independently and every singleton has
    dropped out.
    """
    singles = [lt.base for _, lt in support.terms if not lt.is_progression]
    return 1 + max(singles) if singles else 0


def derived_parity_tail_set(
    support: SupportSet2D, gamma: int, parity: Parity
) -> tuple[SupportSet1D, int]:
    """Circle frequencies whose section holds an l >= gamma of the parity.

    Returns the derived set together with the stabilization bound described
    by ``stabilization_bound``.
    """
    if gamma < 0:
        raise ValueError("gamma must be >= 0")
    _check_parity(parity)
    kept = tuple(
        kt for kt, lt in support.terms if _term_contributes_tail(lt, gamma, parity)
    )
    return SupportSet1D(kept), stabilization_bound(support)


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _uncovered_residues(progressions: list[Term1D], d: int) -> list[int]:
    """Residues mod d missed by every symmetrized progression."""
    covered = bytearray(d)
    for t in progressions:
        g = gcd(t.step, d)
        for r in (t.base % g, (-t.base) % g):
            for j in range(r, d, g):
                covered[j] = 1
    return [j for j in range(d) if not covered[j]]


def witness_avoids_window(
    support: SupportSet1D, witness: ProgressionWitness, window: int = WINDOW
) -> bool:
    """Brute scan: no member of +/-S inside [-window, window] lies in the class."""
    n, j = witness.modulus, witness.residue
    for t in support.terms:
        for v in t.members_upto(window):
            if v % n == j or (-v) % n == j:
                return False
    return True


def _search_witness(
    support: SupportSet1D, lcm_steps: int, d: int, j0: int, window: int
) -> ProgressionWitness:
    """Grow the modulus n = d * p (p coprime to the step lcm) until some class
    congruent to j0 mod d also avoids every singleton."""
    singles = support.singletons()
    cap = 2 * len(singles) + lcm_steps + 64
    p = 0
    while p <= cap:
        p += 1
        if gcd(p, lcm_steps) != 1:
            continue
        n = d * p
        banned = set()
        for v in singles:
            banned.add(v % n)
            banned.add((-v) % n)
        for t in range(p):
            j = (j0 + t * d) % n
            if j in banned:
                continue
            w = ProgressionWitness(n, j)
            if witness_avoids_window(support, w, window):
                return w
    raise RuntimeError("witness search exhausted its bound; this should be unreachable")


def meets_every_progression(
    support: SupportSet1D, window: int = WINDOW
) -> tuple[bool, Optional[ProgressionWitness]]:
    """Decide whether +/-S meets every residue class of every modulus.

    Coverage by the progressions only depends on the residue of the modulus'
    gcd with the step lcm L, so checking every divisor of L is exhaustive.
    Singletons cover finitely many classes per modulus and therefore never
    rescue a failed divisor; they only constrain the returned witness, which
    is re-validated by the window scan before being emitted.  A support with
    no progressions always fails.
    """
    progressions = support.progressions()
    lcm_steps = 1
    for t in progressions:
        lcm_steps = lcm_steps * t.step // gcd(lcm_steps, t.step)
    for d in _divisors(lcm_steps):
        uncovered = _uncovered_residues(progressions, d)
        if uncovered:
            return False, _search_witness(support, lcm_steps, d, uncovered[0], window)
    return True, None
