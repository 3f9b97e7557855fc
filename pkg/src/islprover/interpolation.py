"""Interpolant extraction from cut-free proofs of split sequents.

The construction walks the proof with a left/right side assigned to every
antecedent occurrence; each rule combines the premise interpolants in the
usual way for single-succedent calculi, and the modal rule boxes the
premise interpolant.  Every result is validated with the decision
procedure before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ContractError, InterpolationError
from .formulas import (
    BOT,
    TOP,
    And,
    Box,
    Formula,
    Imp,
    Or,
    Sequent,
    atoms_of,
    sequent,
)
from .g3 import G3Node, _incoming, node_sequent
from .g4 import decide

LEFT, RIGHT = 0, 1


@dataclass(frozen=True)
class SplitSequent:
    left: tuple[Formula, ...]
    right: tuple[Formula, ...]
    suc: Formula | None

    def whole(self) -> Sequent:
        return sequent(self.left + self.right, self.suc)


def _iand(a: Formula, b: Formula) -> Formula:
    if a == TOP:
        return b
    if b == TOP:
        return a
    return And(a, b)


def _ior(a: Formula, b: Formula) -> Formula:
    if a == BOT:
        return b
    if b == BOT:
        return a
    return Or(a, b)


def _iimp(a: Formula, b: Formula) -> Formula:
    if b == TOP or a == BOT:
        return TOP
    if a == TOP:
        return b
    return Imp(a, b)


def _ibox(a: Formula) -> Formula:
    return TOP if a == TOP else Box(a)


def _interp(n: G3Node, sides: dict[int, int]) -> Formula:
    """Interpolant I with: left part => I and right part, I => succedent."""
    rule = n.rule

    def side_of(f: Formula, want: int) -> bool:
        return any(o.f == f and sides[o.oid] == want for o in n.ant)

    if rule == "At":
        if side_of(n.suc, LEFT):
            return n.suc
        return TOP
    if rule == "LBot":
        if side_of(BOT, LEFT):
            return BOT
        return TOP
    inc = _incoming(n)

    def child_sides(i: int, extra: dict[int, int]) -> dict[int, int]:
        q = n.premises[i]
        out: dict[int, int] = {}
        for (poid, coid) in n.links[i]:
            out[poid] = sides[coid]
        for o in q.ant:
            if o.oid not in out:
                out[o.oid] = extra.get(o.oid, RIGHT)
        return out

    def aux_oids(i: int) -> list[int]:
        q = n.premises[i]
        linked = {poid for (poid, _) in n.links[i]}
        return [o.oid for o in q.ant if o.oid not in linked]

    if rule == "LAnd":
        prin_side = _principal_side(n, sides)
        extra = {oid: prin_side for oid in aux_oids(0)}
        return _interp(n.premises[0], child_sides(0, extra))
    if rule == "RAnd":
        return _iand(_interp(n.premises[0], child_sides(0, {})),
                     _interp(n.premises[1], child_sides(1, {})))
    if rule in ("ROr0", "ROr1"):
        return _interp(n.premises[0], child_sides(0, {}))
    if rule == "LOr":
        prin_side = _principal_side(n, sides)
        i0 = _interp(n.premises[0], child_sides(0, {oid: prin_side for oid in aux_oids(0)}))
        i1 = _interp(n.premises[1], child_sides(1, {oid: prin_side for oid in aux_oids(1)}))
        return _ior(i0, i1) if prin_side == LEFT else _iand(i0, i1)
    if rule == "RImp":
        return _interp(n.premises[0], child_sides(0, {oid: RIGHT for oid in aux_oids(0)}))
    if rule == "LImp":
        prin_oid = n.get_info("prin")
        prin_side = sides[prin_oid]
        if prin_side == RIGHT:
            i0 = _interp(n.premises[0], child_sides(0, {}))
            i1 = _interp(n.premises[1], child_sides(1, {oid: RIGHT for oid in aux_oids(1)}))
            return _iand(i0, i1)
        flipped = {coid: 1 - s for coid, s in sides.items()}
        f0: dict[int, int] = {}
        for (poid, coid) in n.links[0]:
            f0[poid] = flipped[coid]
        i0 = _interp(n.premises[0], f0)
        i1 = _interp(n.premises[1], child_sides(1, {oid: LEFT for oid in aux_oids(1)}))
        return _iimp(i0, i1)
    if rule == "RSL":
        q = n.premises[0]
        lm = {poid: coid for (poid, coid) in n.links[0]}
        child: dict[int, int] = {}
        # unboxed copies inherit the side of their boxed partner
        pool: dict[int, list[Formula]] = {LEFT: [], RIGHT: []}
        for o in n.ant:
            if inc[o.oid] and isinstance(o.f, Box):
                pool[sides[o.oid]].append(o.f.inner)
        diag = n.get_info("diag")
        for o in q.ant:
            if o.oid in lm:
                child[o.oid] = sides[lm[o.oid]]
            elif o.oid == diag:
                child[o.oid] = RIGHT
            elif o.f in pool[LEFT]:
                pool[LEFT].remove(o.f)
                child[o.oid] = LEFT
            else:
                if o.f in pool[RIGHT]:
                    pool[RIGHT].remove(o.f)
                child[o.oid] = RIGHT
        return _ibox(_interp(q, child))
    raise InterpolationError(f"interpolation is defined for cut-free core proofs, not {rule}")


def _principal_side(n: G3Node, sides: dict[int, int]) -> int:
    inc = _incoming(n)
    for o in n.ant:
        if not inc[o.oid]:
            return sides[o.oid]
    raise InterpolationError("principal occurrence not found")


def interpolate(p: G3Node, split: SplitSequent) -> Formula:
    """Craig interpolant for the split endsequent of a cut-free proof.

    Raises InterpolationError if the candidate fails the atom condition or
    either derivability check; a failure indicates a construction bug and
    is never returned silently.
    """
    from collections import Counter

    seq = node_sequent(p)
    if seq != split.whole():
        raise ContractError("split does not cover the proof's endsequent")
    want_left = Counter(split.left)
    sides: dict[int, int] = {}
    for o in p.ant:
        if want_left[o.f] > 0:
            want_left[o.f] -= 1
            sides[o.oid] = LEFT
        else:
            sides[o.oid] = RIGHT
    candidate = _interp(p, sides)

    allowed = set()
    for f in split.left:
        allowed |= atoms_of(f)
    right_atoms = set()
    for f in split.right:
        right_atoms |= atoms_of(f)
    if split.suc is not None:
        right_atoms |= atoms_of(split.suc)
    got = atoms_of(candidate)
    if not got <= (allowed & right_atoms):
        raise InterpolationError(f"atom condition violated: {sorted(got)}")
    if not decide(sequent(split.left, candidate)):
        raise InterpolationError("left half is not derivable")
    if not decide(sequent(split.right + (candidate,), split.suc)):
        raise InterpolationError("right half is not derivable")
    return candidate
