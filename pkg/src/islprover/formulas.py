"""Formulas, sequents, and the well-founded orders driving proof search.

The language has bottom, atoms, conjunction, disjunction, implication and
box; negation is represented as an implication into bottom and never
appears as a node of its own.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional

from .errors import ContractError


# ---------------------------------------------------------------------------
# Formula trees

class Formula:
    __slots__ = ()

    def key(self) -> tuple:
        """Total syntactic order key; used for canonical multiset storage."""
        raise NotImplementedError

    def __repr__(self) -> str:
        from .parsing import render
        return f"<{render(self)}>"


@dataclass(frozen=True, repr=False)
class Bottom(Formula):
    __slots__ = ()

    def key(self) -> tuple:
        return (0,)


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("atom names must be nonempty")

    def key(self) -> tuple:
        return (1, self.name)


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula

    def key(self) -> tuple:
        return (2, self.left.key(), self.right.key())


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula

    def key(self) -> tuple:
        return (3, self.left.key(), self.right.key())


@dataclass(frozen=True, repr=False)
class Imp(Formula):
    left: Formula
    right: Formula

    def key(self) -> tuple:
        return (4, self.left.key(), self.right.key())


@dataclass(frozen=True, repr=False)
class Box(Formula):
    inner: Formula

    def key(self) -> tuple:
        return (5, self.inner.key())


BOT = Bottom()
#: Truth surrogate: the language has no primitive top.
TOP = Imp(BOT, BOT)


def neg(f: Formula) -> Formula:
    return Imp(f, BOT)


def is_boxed(f: Formula) -> bool:
    return isinstance(f, Box)


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, (And, Or, Imp)):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, Box):
        yield from subformulas(f.inner)


def atoms_of(f: Formula) -> frozenset[str]:
    return frozenset(g.name for g in subformulas(f) if isinstance(g, Atom))


@lru_cache(maxsize=None)
def weight(f: Formula) -> int:
    """Dyckhoff weight: conjunction costs 2, disjunction/implication 1, box 1."""
    if isinstance(f, (Atom, Bottom)):
        return 1
    if isinstance(f, Box):
        return weight(f.inner) + 1
    if isinstance(f, And):
        return weight(f.left) + weight(f.right) + 2
    return weight(f.left) + weight(f.right) + 1


@lru_cache(maxsize=None)
def degree(f: Formula) -> int:
    if isinstance(f, Bottom):
        return 0
    if isinstance(f, Atom):
        return 1
    if isinstance(f, Box):
        return degree(f.inner) + 1
    return degree(f.left) + degree(f.right) + 1


def box_occurrences(f: Formula) -> int:
    """Number of box nodes in f, counted with multiplicity."""
    return sum(1 for g in subformulas(f) if isinstance(g, Box))


# ---------------------------------------------------------------------------
# Sequents

@dataclass(frozen=True, repr=False)
class Sequent:
    """Multiset antecedent with at most one succedent formula.

    The antecedent tuple is kept sorted under the syntactic order so that
    equal multisets compare equal and traces are reproducible.
    """

    ant: tuple[Formula, ...]
    suc: Optional[Formula]

    def __repr__(self) -> str:
        from .parsing import render_sequent
        return f"<{render_sequent(self)}>"

    @property
    def side_formulas(self) -> tuple[Formula, ...]:
        return self.ant + ((self.suc,) if self.suc is not None else ())


def sequent(ant: Iterable[Formula], suc: Optional[Formula] = None) -> Sequent:
    return Sequent(tuple(sorted(ant, key=lambda f: f.key())), suc)


def ant_counter(s: Sequent) -> Counter:
    return Counter(s.ant)


def ant_remove(s: Sequent, *fs: Formula) -> list[Formula]:
    """Antecedent as a list with one occurrence of each given formula removed."""
    out = list(s.ant)
    for f in fs:
        out.remove(f)
    return out


def box_count(s: Sequent) -> int:
    """Number of distinct boxed formulas in the antecedent (set semantics)."""
    return len({f for f in s.ant if isinstance(f, Box)})


def sequent_box_occurrences(s: Sequent) -> int:
    return sum(box_occurrences(f) for f in s.side_formulas)


# ---------------------------------------------------------------------------
# Orders

def multiset_less(a: Iterable[Formula], b: Iterable[Formula]) -> bool:
    """Dershowitz-Manna order keyed on weight.

    True iff `a` results from `b` by replacing one or more occurrences with
    zero or more formulas of strictly lower weight.  Any witnessing
    replacement can be normalized to exchange exactly the multiset
    differences, so those decide the order.
    """
    ca, cb = Counter(a), Counter(b)
    removed = cb - ca
    if not removed:
        return False
    bound = max(weight(f) for f in removed)
    return all(weight(f) < bound for f in (ca - cb).elements())


@dataclass(frozen=True)
class SearchOrderContext:
    """Box budget c fixed per proof search; valid only while c >= b(S)."""

    c: int


def sequent_less(s1: Sequent, s2: Sequent, ctx: SearchOrderContext) -> bool:
    """The strict order under which every backward rule application descends."""
    b1, b2 = box_count(s1), box_count(s2)
    if ctx.c < b1 or ctx.c < b2:
        raise ContractError(
            f"search order used outside its budget: c={ctx.c}, b={max(b1, b2)}")
    if ctx.c - b1 < ctx.c - b2:
        return True
    return b1 == b2 and multiset_less(s1.side_formulas, s2.side_formulas)
