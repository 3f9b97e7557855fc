"""Terminating backward proof search and proof objects for the a-variant
contraction-free calculus.

Rule tags: At, LBot, RAnd, LAnd, ROr0/ROr1, LOr, RImp, LpImp, LAndImp,
LOrImp, LImpImpA, ImpSL1, ImpSL2, RSLa.  The invertible rules are applied
one at a time under a deterministic priority; at irreducible sequents all
instances of the non-invertible rules (LImpImpA, ImpSL1, ROr, RSLa) branch
the search.  Search stops at extended axioms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import ContractError, ProofCheckError
from .formulas import (
    BOT,
    And,
    Atom,
    Bottom,
    Box,
    Formula,
    Imp,
    Or,
    SearchOrderContext,
    Sequent,
    ant_remove,
    sequent,
    sequent_box_occurrences,
    sequent_less,
)

INVERTIBLE_PRIORITY = ("LAnd", "LOr", "LpImp", "LAndImp", "LOrImp", "ImpSL2", "RAnd", "RImp")


def is_extended_axiom(s: Sequent) -> bool:
    return s.suc is not None and s.suc in s.ant


def _boxed_part(ant: Iterable[Formula]) -> list[Box]:
    return [f for f in ant if isinstance(f, Box)]


def _unboxings(ant: Iterable[Formula]) -> list[Formula]:
    return [f.inner for f in ant if isinstance(f, Box)]


def _pi_shape_ok(f: Formula) -> bool:
    """Allowed non-boxed antecedent shapes of an irreducible sequent.

    Implications out of bottom are inert: no rule consumes them and they are
    forced at every world, so they may sit in an irreducible antecedent.
    """
    if isinstance(f, Atom):
        return True
    if isinstance(f, Imp):
        return isinstance(f.left, (Atom, Imp, Box, Bottom))
    return False


def is_irreducible(s: Sequent) -> bool:
    if s.suc is not None and not isinstance(s.suc, (Atom, Bottom, Or, Box)):
        return False
    boxed = set(_boxed_part(s.ant))
    atoms = {f for f in s.ant if isinstance(f, Atom)}
    for f in s.ant:
        if isinstance(f, Box):
            continue
        if not _pi_shape_ok(f):
            return False
        if isinstance(f, Imp) and isinstance(f.left, Atom) and f.left in atoms:
            return False
        if isinstance(f, Imp) and isinstance(f.left, Box) and f.left in boxed:
            return False
    if is_extended_axiom(s):
        return False
    return True


# ---------------------------------------------------------------------------
# Backward rule application

@dataclass(frozen=True)
class RuleApp:
    rule: str
    principal: Optional[Formula]  # left-principal formula where applicable


def _distinct(fs: Iterable[Formula]) -> list[Formula]:
    return list(dict.fromkeys(fs))


def _invertible_instance(s: Sequent, rule: str) -> Optional[tuple[RuleApp, list[Sequent]]]:
    ant, suc = s.ant, s.suc
    if rule == "LAnd":
        for f in ant:
            if isinstance(f, And):
                prem = sequent(ant_remove(s, f) + [f.left, f.right], suc)
                return RuleApp("LAnd", f), [prem]
    elif rule == "LOr":
        for f in ant:
            if isinstance(f, Or):
                rest = ant_remove(s, f)
                return RuleApp("LOr", f), [sequent(rest + [f.left], suc), sequent(rest + [f.right], suc)]
    elif rule == "LpImp":
        atoms = {f for f in ant if isinstance(f, Atom)}
        for f in ant:
            if isinstance(f, Imp) and isinstance(f.left, Atom) and f.left in atoms:
                return RuleApp("LpImp", f), [sequent(ant_remove(s, f) + [f.right], suc)]
    elif rule == "LAndImp":
        for f in ant:
            if isinstance(f, Imp) and isinstance(f.left, And):
                swapped = Imp(f.left.left, Imp(f.left.right, f.right))
                return RuleApp("LAndImp", f), [sequent(ant_remove(s, f) + [swapped], suc)]
    elif rule == "LOrImp":
        for f in ant:
            if isinstance(f, Imp) and isinstance(f.left, Or):
                fs = [Imp(f.left.left, f.right), Imp(f.left.right, f.right)]
                return RuleApp("LOrImp", f), [sequent(ant_remove(s, f) + fs, suc)]
    elif rule == "ImpSL2":
        boxed = set(_boxed_part(ant))
        for f in ant:
            if isinstance(f, Imp) and isinstance(f.left, Box) and f.left in boxed:
                return RuleApp("ImpSL2", f), [sequent(ant_remove(s, f) + [f.right], suc)]
    elif rule == "RAnd":
        if isinstance(suc, And):
            return RuleApp("RAnd", None), [sequent(ant, suc.left), sequent(ant, suc.right)]
    elif rule == "RImp":
        if isinstance(suc, Imp):
            return RuleApp("RImp", None), [sequent(list(ant) + [suc.left], suc.right)]
    else:
        raise ValueError(f"not an invertible rule: {rule}")
    return None


def _noninvertible_instances(s: Sequent) -> list[tuple[RuleApp, list[Sequent]]]:
    out: list[tuple[RuleApp, list[Sequent]]] = []
    ant, suc = s.ant, s.suc
    boxed = set(_boxed_part(ant))
    for f in _distinct(ant):
        if isinstance(f, Imp) and isinstance(f.left, Imp):
            a, b, g = f.left.left, f.left.right, f.right
            rest = ant_remove(s, f)
            out.append((RuleApp("LImpImpA", f),
                        [sequent(rest + [Imp(b, g), a], b), sequent(rest + [g], suc)]))
        elif isinstance(f, Imp) and isinstance(f.left, Box) and f.left not in boxed:
            left = sequent(list(ant) + _unboxings(ant) + [f.left], f.left.inner)
            right = sequent(ant_remove(s, f) + [f.right], suc)
            out.append((RuleApp("ImpSL1", f), [left, right]))
    if isinstance(suc, Or):
        out.append((RuleApp("ROr0", None), [sequent(ant, suc.left)]))
        out.append((RuleApp("ROr1", None), [sequent(ant, suc.right)]))
    if isinstance(suc, Box):
        prem = sequent(list(ant) + _unboxings(ant) + [suc], suc.inner)
        out.append((RuleApp("RSLa", None), [prem]))
    return out


def backward_applications(
    s: Sequent, priority: Sequence[str] = INVERTIBLE_PRIORITY
) -> list[tuple[RuleApp, list[Sequent]]]:
    """Backward instances per the search discipline.

    Axioms and extended axioms get no applications; reducible sequents get
    exactly the one scheduled invertible instance; irreducible sequents get
    every non-invertible instance.
    """
    if BOT in s.ant or is_extended_axiom(s):
        return []
    for rule in priority:
        inst = _invertible_instance(s, rule)
        if inst is not None:
            return [inst]
    assert is_irreducible(s)
    return _noninvertible_instances(s)


# ---------------------------------------------------------------------------
# Proof search tree

@dataclass(eq=False)
class SearchNode:
    sequent: Sequent
    note: str  # "axiom" | "extended_axiom" | "reducible" | "irreducible"
    groups: tuple[tuple[RuleApp, tuple["SearchNode", ...]], ...]
    positive: bool


def search(s: Sequent, priority: Sequence[str] = INVERTIBLE_PRIORITY) -> SearchNode:
    """Build the full marked proof search tree (shared subtrees collapse).

    Every parent/child edge is asserted to descend in the search order under
    the box budget of the root; a violation would falsify termination.
    """
    ctx = SearchOrderContext(sequent_box_occurrences(s))
    cache: dict[Sequent, SearchNode] = {}

    def build(seq: Sequent) -> SearchNode:
        node = cache.get(seq)
        if node is not None:
            return node
        if BOT in seq.ant:
            node = SearchNode(seq, "axiom", (), True)
        elif is_extended_axiom(seq):
            note = "axiom" if isinstance(seq.suc, Atom) else "extended_axiom"
            node = SearchNode(seq, note, (), True)
        else:
            apps = backward_applications(seq, priority)
            for _, prems in apps:
                for p in prems:
                    if not sequent_less(p, seq, ctx):
                        raise ContractError(f"search order violated: {p!r} under {seq!r}")
            if apps and apps[0][0].rule in INVERTIBLE_PRIORITY:
                rule_app, prems = apps[0]
                children = tuple(build(p) for p in prems)
                positive = all(c.positive for c in children)
                node = SearchNode(seq, "reducible", ((rule_app, children),), positive)
            else:
                groups = tuple((ra, tuple(build(p) for p in prems)) for ra, prems in apps)
                positive = any(all(c.positive for c in children) for _, children in groups)
                node = SearchNode(seq, "irreducible", groups, positive)
        cache[seq] = node
        return node

    return build(s)


def decide(s: Sequent, priority: Sequence[str] = INVERTIBLE_PRIORITY) -> bool:
    return search(s, priority).positive


# ---------------------------------------------------------------------------
# Proof objects

@dataclass(frozen=True, eq=False)
class G4Node:
    rule: str
    sequent: Sequent
    premises: tuple["G4Node", ...] = ()


def weaken_g4(p: G4Node, f: Formula) -> G4Node:
    """Height-preserving left weakening (may trade ImpSL1 for ImpSL2)."""
    c = p.sequent
    widened = sequent(list(c.ant) + [f], c.suc)
    rule = p.rule
    if rule in ("At", "LBot"):
        return G4Node(rule, widened)
    if rule == "ImpSL1":
        principal = _g4_principal(p)
        assert isinstance(principal, Imp) and isinstance(principal.left, Box)
        if f == principal.left:
            # side condition now fails; the boxed hypothesis renders the
            # left premise unnecessary
            return G4Node("ImpSL2", widened, (weaken_g4(p.premises[1], f),))
        if isinstance(f, Box):
            left = weaken_g4(weaken_g4(p.premises[0], f.inner), f)
        else:
            left = weaken_g4(p.premises[0], f)
        return G4Node("ImpSL1", widened, (left, weaken_g4(p.premises[1], f)))
    if rule == "RSLa":
        if isinstance(f, Box):
            prem = weaken_g4(weaken_g4(p.premises[0], f.inner), f)
        else:
            prem = weaken_g4(p.premises[0], f)
        return G4Node("RSLa", widened, (prem,))
    return G4Node(rule, widened, tuple(weaken_g4(q, f) for q in p.premises))


def ext_axiom_g4(context: Iterable[Formula], phi: Formula) -> G4Node:
    """Proof of (context, phi => phi), by induction on the weight of phi."""
    ctx = list(context)
    concl = sequent(ctx + [phi], phi)
    if isinstance(phi, Atom):
        return G4Node("At", concl)
    if isinstance(phi, Bottom):
        return G4Node("LBot", concl)
    if isinstance(phi, And):
        a, b = phi.left, phi.right
        halves = []
        for goal, other in ((a, b), (b, a)):
            inner = ext_axiom_g4(ctx + [other], goal)
            halves.append(G4Node("LAnd", sequent(ctx + [phi], goal), (inner,)))
        return G4Node("RAnd", concl, tuple(halves))
    if isinstance(phi, Or):
        a, b = phi.left, phi.right
        branches = []
        for i, side in enumerate((a, b)):
            inner = ext_axiom_g4(ctx, side)
            branches.append(G4Node(f"ROr{i}", sequent(ctx + [side], phi), (inner,)))
        return G4Node("LOr", concl, tuple(branches))
    if isinstance(phi, Imp):
        body = imp_elim_g4(phi.left, phi.right, ext_axiom_g4(ctx, phi.right))
        return G4Node("RImp", concl, (body,))
    assert isinstance(phi, Box)
    inner_ant = list(concl.ant) + _unboxings(concl.ant) + [phi]
    inner_ant.remove(phi.inner)
    prem = ext_axiom_g4(inner_ant, phi.inner)
    return G4Node("RSLa", concl, (prem,))


def imp_elim_g4(f1: Formula, f2: Formula, base: G4Node) -> G4Node:
    """From a proof of (G, f2 => D) build one of (G, f1 -> f2, f1 => D)."""
    g = ant_remove(base.sequent, f2)
    d = base.sequent.suc
    imp = Imp(f1, f2)
    concl = sequent(g + [imp, f1], d)
    if isinstance(f1, Atom):
        return G4Node("LpImp", concl, (weaken_g4(base, f1),))
    if isinstance(f1, Bottom):
        return G4Node("LBot", concl)
    if isinstance(f1, And):
        a, b = f1.left, f1.right
        inner = imp_elim_g4(a, Imp(b, f2), imp_elim_g4(b, f2, base))
        step = G4Node("LAnd", sequent(g + [Imp(a, Imp(b, f2)), f1], d), (inner,))
        return G4Node("LAndImp", concl, (step,))
    if isinstance(f1, Or):
        a, b = f1.left, f1.right
        ia, ib = Imp(a, f2), Imp(b, f2)
        branch_a = imp_elim_g4(a, f2, weaken_g4(base, ib))
        branch_b = imp_elim_g4(b, f2, weaken_g4(base, ia))
        step = G4Node("LOr", sequent(g + [ia, ib, f1], d), (branch_a, branch_b))
        return G4Node("LOrImp", concl, (step,))
    if isinstance(f1, Imp):
        a, b = f1.left, f1.right
        left = imp_elim_g4(a, b, ext_axiom_g4(g + [Imp(b, f2)], b))
        right = weaken_g4(base, f1)
        return G4Node("LImpImpA", concl, (left, right))
    assert isinstance(f1, Box)
    return G4Node("ImpSL2", concl, (weaken_g4(base, f1),))


def extract_proof(root: SearchNode) -> G4Node:
    """Read a checkable proof off a positively marked search tree."""
    if not root.positive:
        raise ContractError("cannot extract a proof from a negative search node")
    memo: dict[int, G4Node] = {}

    def go(node: SearchNode) -> G4Node:
        got = memo.get(id(node))
        if got is not None:
            return got
        seq = node.sequent
        if node.note in ("axiom", "extended_axiom"):
            if BOT in seq.ant:
                proof = G4Node("LBot", seq)
            elif isinstance(seq.suc, Atom) and seq.suc in seq.ant:
                proof = G4Node("At", seq)
            else:
                proof = ext_axiom_g4(ant_remove(seq, seq.suc), seq.suc)
        else:
            chosen = next((ra, cs) for ra, cs in node.groups if all(c.positive for c in cs))
            ra, children = chosen
            proof = G4Node(ra.rule, seq, tuple(go(c) for c in children))
        memo[id(node)] = proof
        return proof

    return go(root)


# ---------------------------------------------------------------------------
# Checking

def _g4_principal(node: G4Node) -> Optional[Formula]:
    """Infer the left-principal formula of a node from its sequents."""
    from collections import Counter
    if node.rule in ("At", "LBot", "RAnd", "RImp", "ROr0", "ROr1", "RSLa"):
        return None
    ref = node.premises[-1].sequent
    removed = Counter(node.sequent.ant) - Counter(ref.ant)
    if len(removed) != 1 or sum(removed.values()) != 1:
        raise ProofCheckError(f"cannot identify the principal formula of {node.rule}", node)
    return next(iter(removed))


def verify_g4(p: G4Node) -> None:
    """Raise ProofCheckError at the first node violating its rule schema."""
    c = p.sequent
    rule = p.rule
    prems = [q.sequent for q in p.premises]

    def need(cond: bool, msg: str):
        if not cond:
            raise ProofCheckError(f"{rule}: {msg}", p)

    if rule == "At":
        need(not prems, "axiom with premises")
        need(isinstance(c.suc, Atom) and c.suc in c.ant, "not an instance of the atomic axiom")
    elif rule == "LBot":
        need(not prems, "axiom with premises")
        need(BOT in c.ant, "bottom is not in the antecedent")
    elif rule == "RAnd":
        need(isinstance(c.suc, And), "succedent is not a conjunction")
        need(len(prems) == 2, "needs two premises")
        need(prems[0] == sequent(c.ant, c.suc.left), "left premise mismatch")
        need(prems[1] == sequent(c.ant, c.suc.right), "right premise mismatch")
    elif rule == "RImp":
        need(isinstance(c.suc, Imp), "succedent is not an implication")
        need(len(prems) == 1, "needs one premise")
        need(prems[0] == sequent(list(c.ant) + [c.suc.left], c.suc.right), "premise mismatch")
    elif rule in ("ROr0", "ROr1"):
        need(isinstance(c.suc, Or), "succedent is not a disjunction")
        need(len(prems) == 1, "needs one premise")
        side = c.suc.left if rule == "ROr0" else c.suc.right
        need(prems[0] == sequent(c.ant, side), "premise mismatch")
    elif rule == "LAnd":
        need(len(prems) == 1, "needs one premise")
        ok = any(
            isinstance(f, And)
            and prems[0] == sequent(ant_remove(c, f) + [f.left, f.right], c.suc)
            for f in _distinct(c.ant))
        need(ok, "no conjunction matches the premise")
    elif rule == "LOr":
        need(len(prems) == 2, "needs two premises")
        ok = any(
            isinstance(f, Or)
            and prems[0] == sequent(ant_remove(c, f) + [f.left], c.suc)
            and prems[1] == sequent(ant_remove(c, f) + [f.right], c.suc)
            for f in _distinct(c.ant))
        need(ok, "no disjunction matches the premises")
    elif rule == "LpImp":
        need(len(prems) == 1, "needs one premise")
        ok = any(
            isinstance(f, Imp) and isinstance(f.left, Atom) and f.left in c.ant
            and prems[0] == sequent(ant_remove(c, f) + [f.right], c.suc)
            for f in _distinct(c.ant))
        need(ok, "no atomic implication matches the premise")
    elif rule == "LAndImp":
        need(len(prems) == 1, "needs one premise")
        ok = any(
            isinstance(f, Imp) and isinstance(f.left, And)
            and prems[0] == sequent(
                ant_remove(c, f) + [Imp(f.left.left, Imp(f.left.right, f.right))], c.suc)
            for f in _distinct(c.ant))
        need(ok, "no conjunctive implication matches the premise")
    elif rule == "LOrImp":
        need(len(prems) == 1, "needs one premise")
        ok = any(
            isinstance(f, Imp) and isinstance(f.left, Or)
            and prems[0] == sequent(
                ant_remove(c, f)
                + [Imp(f.left.left, f.right), Imp(f.left.right, f.right)], c.suc)
            for f in _distinct(c.ant))
        need(ok, "no disjunctive implication matches the premise")
    elif rule == "LImpImpA":
        need(len(prems) == 2, "needs two premises")
        ok = any(
            isinstance(f, Imp) and isinstance(f.left, Imp)
            and prems[0] == sequent(
                ant_remove(c, f) + [Imp(f.left.right, f.right), f.left.left], f.left.right)
            and prems[1] == sequent(ant_remove(c, f) + [f.right], c.suc)
            for f in _distinct(c.ant))
        need(ok, "no nested implication matches the premises")
    elif rule == "ImpSL1":
        need(len(prems) == 2, "needs two premises")
        boxed = set(_boxed_part(c.ant))
        ok = any(
            isinstance(f, Imp) and isinstance(f.left, Box) and f.left not in boxed
            and prems[0] == sequent(list(c.ant) + _unboxings(c.ant) + [f.left], f.left.inner)
            and prems[1] == sequent(ant_remove(c, f) + [f.right], c.suc)
            for f in _distinct(c.ant))
        need(ok, "no boxed implication matches the premises (or the box is already present)")
    elif rule == "ImpSL2":
        need(len(prems) == 1, "needs one premise")
        boxed = set(_boxed_part(c.ant))
        ok = any(
            isinstance(f, Imp) and isinstance(f.left, Box) and f.left in boxed
            and prems[0] == sequent(ant_remove(c, f) + [f.right], c.suc)
            for f in _distinct(c.ant))
        need(ok, "no boxed implication with its box present matches the premise")
    elif rule == "RSLa":
        need(isinstance(c.suc, Box), "succedent is not boxed")
        need(len(prems) == 1, "needs one premise")
        want = sequent(list(c.ant) + _unboxings(c.ant) + [c.suc], c.suc.inner)
        need(prems[0] == want, "premise mismatch")
    else:
        need(False, "unknown rule")
    for q in p.premises:
        verify_g4(q)


def check_g4_proof(p: G4Node) -> bool:
    try:
        verify_g4(p)
        return True
    except ProofCheckError:
        return False
