"""Finite Kripke models for the logic: frame validation, forcing,
refutation, generated submodels, small-model enumeration, and the
countermodel construction over negative search trees.

Frames carry two relations: the intuitionistic partial order and a modal
relation that is transitive, acyclic on the finite carrier, and a subset of
the order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .errors import ContractError
from .formulas import And, Atom, Bottom, Box, Formula, Imp, Or, Sequent
from .g4 import SearchNode

World = str
Pair = tuple[World, World]


@dataclass(frozen=True)
class Violation:
    condition: str
    witnesses: tuple[World, ...]

    def __str__(self) -> str:
        return f"{self.condition}: {', '.join(self.witnesses)}"


class KripkeModel:
    """Immutable finite model; construct once, then only query."""

    def __init__(
        self,
        worlds: Iterable[World],
        le: Iterable[Pair],
        r: Iterable[Pair],
        val: dict[World, Iterable[str]],
    ):
        self.worlds: frozenset[World] = frozenset(worlds)
        self.le: frozenset[Pair] = frozenset(le)
        self.r: frozenset[Pair] = frozenset(r)
        self.val: dict[World, frozenset[str]] = {
            w: frozenset(val.get(w, ())) for w in self.worlds
        }
        self._force_memo: dict[tuple[World, Formula], bool] = {}
        self._violations: Optional[list[Violation]] = None

    def up(self, w: World) -> list[World]:
        return sorted(v for (u, v) in self.le if u == w)

    def succ(self, w: World) -> list[World]:
        return sorted(v for (u, v) in self.r if u == w)

    def __repr__(self) -> str:
        return f"KripkeModel(worlds={sorted(self.worlds)}, r={sorted(self.r)})"


def validate_model(m: KripkeModel) -> list[Violation]:
    """All frame conditions; empty list iff the model is well-formed."""
    if m._violations is not None:
        return m._violations
    out: list[Violation] = []
    if not m.worlds:
        out.append(Violation("nonempty carrier", ()))
    for (a, b) in m.le | m.r:
        if a not in m.worlds or b not in m.worlds:
            out.append(Violation("relation over unknown world", (a, b)))
            m._violations = out
            return out
    for w in sorted(m.worlds):
        if (w, w) not in m.le:
            out.append(Violation("order reflexivity", (w,)))
    for (a, b) in sorted(m.le):
        for (c, d) in sorted(m.le):
            if b == c and (a, d) not in m.le:
                out.append(Violation("order transitivity", (a, b, d)))
        if a != b and (b, a) in m.le:
            out.append(Violation("order antisymmetry", (a, b)))
    for (a, b) in sorted(m.le):
        for (c, d) in sorted(m.r):
            if b == c and (a, d) not in m.r:
                out.append(Violation("order-then-modal closure", (a, b, d)))
    for w in sorted(m.worlds):
        for v in m.up(w):
            if not m.val[w] <= m.val[v]:
                out.append(Violation("valuation monotonicity", (w, v)))
    for (a, b) in sorted(m.r):
        for (c, d) in sorted(m.r):
            if b == c and (a, d) not in m.r:
                out.append(Violation("modal transitivity", (a, b, d)))
    # converse well-foundedness on a finite carrier: no modal cycle
    for w in sorted(m.worlds):
        seen: set[World] = set()
        frontier = set(m.succ(w))
        while frontier:
            if w in frontier:
                out.append(Violation("modal cycle", (w,)))
                break
            seen |= frontier
            frontier = {v for u in frontier for v in m.succ(u)} - seen
    for (a, b) in sorted(m.r):
        if (a, b) not in m.le:
            out.append(Violation("modal relation within order", (a, b)))
    m._violations = out
    return out


def _require_valid(m: KripkeModel):
    if validate_model(m):
        raise ContractError(f"invalid model: {validate_model(m)[0]}")


def forces(m: KripkeModel, w: World, f: Formula) -> bool:
    _require_valid(m)
    if w not in m.worlds:
        raise ContractError(f"unknown world {w!r}")
    return _forces(m, w, f)


def _forces(m: KripkeModel, w: World, f: Formula) -> bool:
    memo = m._force_memo
    key = (w, f)
    got = memo.get(key)
    if got is not None:
        return got
    if isinstance(f, Bottom):
        res = False
    elif isinstance(f, Atom):
        res = f.name in m.val[w]
    elif isinstance(f, And):
        res = _forces(m, w, f.left) and _forces(m, w, f.right)
    elif isinstance(f, Or):
        res = _forces(m, w, f.left) or _forces(m, w, f.right)
    elif isinstance(f, Imp):
        res = all(not _forces(m, v, f.left) or _forces(m, v, f.right) for v in m.up(w))
    else:
        assert isinstance(f, Box)
        res = all(_forces(m, x, f.inner) for x in m.succ(w))
    memo[key] = res
    return res


def refutes(m: KripkeModel, s: Sequent) -> Optional[World]:
    """First world forcing the whole antecedent but not the succedent."""
    _require_valid(m)
    for w in sorted(m.worlds):
        if all(_forces(m, w, g) for g in s.ant):
            if s.suc is None or not _forces(m, w, s.suc):
                return w
    return None


def generated_submodel(m: KripkeModel, w: World) -> KripkeModel:
    _require_valid(m)
    if w not in m.worlds:
        raise ContractError(f"unknown world {w!r}")
    carrier = {w}
    frontier = [w]
    while frontier:
        u = frontier.pop()
        for v in m.up(u) + m.succ(u):
            if v not in carrier:
                carrier.add(v)
                frontier.append(v)
    return KripkeModel(
        carrier,
        {(a, b) for (a, b) in m.le if a in carrier and b in carrier},
        {(a, b) for (a, b) in m.r if a in carrier and b in carrier},
        {u: m.val[u] for u in carrier},
    )


# ---------------------------------------------------------------------------
# Countermodel construction

def _relabel(m: KripkeModel, prefix: str) -> KripkeModel:
    f = lambda w: prefix + w
    return KripkeModel(
        (f(w) for w in m.worlds),
        ((f(a), f(b)) for (a, b) in m.le),
        ((f(a), f(b)) for (a, b) in m.r),
        {f(w): m.val[w] for w in m.worlds},
    )


def _closure(le: set[Pair], r: set[Pair]) -> tuple[set[Pair], set[Pair]]:
    """Transitive closure of both relations plus the order-then-modal rule."""
    changed = True
    while changed:
        changed = False
        for (a, b) in list(le):
            for (c, d) in list(le):
                if b == c and (a, d) not in le:
                    le.add((a, d))
                    changed = True
        for (a, b) in list(r):
            for (c, d) in list(r):
                if b == c and (a, d) not in r:
                    r.add((a, d))
                    changed = True
        for (a, b) in list(le):
            for (c, d) in list(r):
                if b == c and (a, d) not in r:
                    r.add((a, d))
                    changed = True
    return le, r


def _assemble(root_atoms: frozenset[str], below: list[KripkeModel],
              modal: list[KripkeModel], designated: list[World]) -> tuple[KripkeModel, World]:
    """Fresh root below the given rooted submodels; modal arrows into the
    modal ones; relations completed by closure."""
    w = "w"
    worlds: set[World] = {w}
    le: set[Pair] = {(w, w)}
    r: set[Pair] = set()
    val: dict[World, frozenset[str]] = {w: root_atoms}
    for i, sub in enumerate(below + modal):
        pref = f"{i}."
        sub = _relabel(sub, pref)
        worlds |= sub.worlds
        le |= sub.le
        r |= sub.r
        val.update(sub.val)
        root = pref + designated[i]
        le.add((w, root))
        if i >= len(below):
            r.add((w, root))
    le, r = _closure(le, r)
    return KripkeModel(worlds, le, r, val), w


def countermodel(root: SearchNode) -> tuple[KripkeModel, World]:
    """Construct a model refuting the sequent of a negative search node at
    the returned world, by induction on the search tree."""
    if root.positive:
        raise ContractError("cannot build a countermodel for a provable sequent")
    memo: dict[int, tuple[KripkeModel, World]] = {}

    def go(node: SearchNode) -> tuple[KripkeModel, World]:
        got = memo.get(id(node))
        if got is not None:
            return got
        res = _cm(node)
        memo[id(node)] = res
        return res

    def _cm(node: SearchNode) -> tuple[KripkeModel, World]:
        seq = node.sequent
        root_atoms = frozenset(f.name for f in seq.ant if isinstance(f, Atom))
        if not node.groups:
            m = KripkeModel({"w"}, {("w", "w")}, set(), {"w": root_atoms})
            return m, "w"
        if node.note == "reducible":
            (_, children), = node.groups
            neg = next(c for c in children if not c.positive)
            return go(neg)
        # irreducible: a negative right premise of a two-premise rule carries
        # its countermodel down unchanged
        for ra, children in node.groups:
            if ra.rule in ("LImpImpA", "ImpSL1") and not children[1].positive:
                return go(children[1])
        below: list[KripkeModel] = []
        modal: list[KripkeModel] = []
        designated: list[World] = []
        modal_designated: list[World] = []
        for ra, children in node.groups:
            if ra.rule == "LImpImpA":
                sub, d = go(children[0])
                below.append(generated_submodel(sub, d))
                designated.append(d)
            elif ra.rule == "ImpSL1":
                sub, d = go(children[0])
                modal.append(generated_submodel(sub, d))
                modal_designated.append(d)
            elif ra.rule in ("ROr0", "ROr1"):
                sub, d = go(children[0])
                below.append(generated_submodel(sub, d))
                designated.append(d)
            elif ra.rule == "RSLa":
                sub, d = go(children[0])
                modal.append(generated_submodel(sub, d))
                modal_designated.append(d)
        m, w = _assemble(root_atoms, below, modal, designated + modal_designated)
        return m, w

    m, w = go(root)
    bad = validate_model(m)
    if bad:
        raise ContractError(f"countermodel construction produced an invalid model: {bad[0]}")
    if refutes_at(m, w, root.sequent) is False:
        raise ContractError("countermodel construction failed to refute the sequent")
    return m, w


def refutes_at(m: KripkeModel, w: World, s: Sequent) -> bool:
    _require_valid(m)
    if not all(_forces(m, w, g) for g in s.ant):
        return False
    return s.suc is None or not _forces(m, w, s.suc)


# ---------------------------------------------------------------------------
# Small-model enumeration (semantic oracle)

def _posets(n: int) -> Iterator[frozenset[Pair]]:
    worlds = [f"w{i}" for i in range(n)]
    diag = {(w, w) for w in worlds}
    strict = [(a, b) for a in worlds for b in worlds if a != b]
    for bits in itertools.product((False, True), repeat=len(strict)):
        rel = diag | {p for p, keep in zip(strict, bits) if keep}
        ok = True
        for (a, b) in rel:
            if not ok:
                break
            if a != b and (b, a) in rel:
                ok = False
                break
            for (c, d) in rel:
                if b == c and (a, d) not in rel:
                    ok = False
                    break
        if ok:
            yield frozenset(rel)


def _monotone_valuations(worlds: list[World], le: frozenset[Pair],
                         atoms: tuple[str, ...]) -> Iterator[dict[World, frozenset[str]]]:
    upsets = []
    for bits in itertools.product((False, True), repeat=len(worlds)):
        chosen = {w for w, keep in zip(worlds, bits) if keep}
        if all(v in chosen for w in chosen for (u, v) in le if u == w):
            upsets.append(frozenset(chosen))
    for assignment in itertools.product(upsets, repeat=len(atoms)):
        yield {w: frozenset(a for a, s in zip(atoms, assignment) if w in s) for w in worlds}


def enumerate_models(atoms: Iterable[str], max_worlds: int) -> Iterator[KripkeModel]:
    """All valid models with up to max_worlds labelled worlds; duplicates up
    to isomorphism are emitted."""
    atoms = tuple(sorted(set(atoms)))
    for n in range(1, max_worlds + 1):
        worlds = [f"w{i}" for i in range(n)]
        for le in _posets(n):
            candidates = [(a, b) for (a, b) in sorted(le) if a != b]
            for bits in itertools.product((False, True), repeat=len(candidates)):
                r = frozenset(p for p, keep in zip(candidates, bits) if keep)
                ok = True
                for (a, b) in r:
                    if not ok:
                        break
                    for (c, d) in r:
                        if b == c and (a, d) not in r:
                            ok = False
                            break
                    for (c, d) in le:
                        if d == a and (c, b) not in r:
                            ok = False
                            break
                if not ok:
                    continue
                # acyclicity is implied: r is within a strict partial order
                for val in _monotone_valuations(worlds, le, atoms):
                    m = KripkeModel(worlds, le, r, val)
                    if not validate_model(m):
                        yield m
