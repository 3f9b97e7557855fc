"""Explicit proof objects for the structural-rule-free calculus with the
diagonal modal rule, plus Cut and the variant modal rules; checker,
structural transformations, critical-segment analysis, the cut measure,
cut elimination, and the translation from search proofs.

Antecedent occurrences carry identifiers; each node records, per premise,
which premise occurrences are strict ancestors of which conclusion
occurrences.  The diagonal occurrence of a modal inference and the cut
occurrence of a Cut are recorded explicitly.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import ProofCheckError, TransformError
from .formulas import (
    BOT,
    And,
    Atom,
    Bottom,
    Box,
    Formula,
    Imp,
    Or,
    Sequent,
    degree,
    sequent,
)
from .g4 import G4Node

CORE_RULES = ("At", "LBot", "RAnd", "LAnd", "ROr0", "ROr1", "LOr", "RImp", "LImp", "RSL")
PROFILES = {
    "core": CORE_RULES,
    "with_cut": CORE_RULES + ("Cut",),
    "b_variant": tuple(r for r in CORE_RULES if r != "RSL") + ("RSL4",),
    "glc_variant": tuple(r for r in CORE_RULES if r != "RSL") + ("RGL", "LBox"),
}


@dataclass(frozen=True)
class Occ:
    oid: int
    f: Formula


@dataclass(frozen=True, eq=False)
class G3Node:
    rule: str
    ant: tuple[Occ, ...]
    suc: Optional[Formula]
    premises: tuple["G3Node", ...] = ()
    links: tuple[tuple[tuple[int, int], ...], ...] = ()  # per premise: (premise oid, concl oid)
    info: tuple[tuple[str, int], ...] = ()  # "diag" / "prin" / "cut" markers

    def occ(self, oid: int) -> Occ:
        for o in self.ant:
            if o.oid == oid:
                return o
        raise KeyError(oid)

    def get_info(self, key: str) -> int:
        for k, v in self.info:
            if k == key:
                return v
        raise KeyError(key)


def node_sequent(n: G3Node) -> Sequent:
    return sequent((o.f for o in n.ant), n.suc)


def ant_formulas(n: G3Node) -> list[Formula]:
    return [o.f for o in n.ant]


def height(p: G3Node) -> int:
    memo: dict[int, int] = {}

    def h(n: G3Node) -> int:
        got = memo.get(id(n))
        if got is None:
            got = 1 + max((h(q) for q in n.premises), default=0)
            memo[id(n)] = got
        return got

    return h(p)


def iter_nodes(p: G3Node, path: tuple[int, ...] = ()):
    yield path, p
    for i, q in enumerate(p.premises):
        yield from iter_nodes(q, path + (i,))


def has_cut(p: G3Node) -> bool:
    return any(n.rule == "Cut" for _, n in iter_nodes(p))


def node_at(p: G3Node, path: Sequence[int]) -> G3Node:
    for i in path:
        p = p.premises[i]
    return p


# ---------------------------------------------------------------------------
# Node builders: compute a valid instantiation from premise nodes

def _occs(formulas: Iterable[Formula]) -> tuple[Occ, ...]:
    return tuple(Occ(i, f) for i, f in enumerate(formulas))


def _pick(node: G3Node, f: Formula, used: set[int]) -> int:
    for o in node.ant:
        if o.f == f and o.oid not in used:
            used.add(o.oid)
            return o.oid
    raise TransformError(f"no free occurrence of {f!r} in {node_sequent(node)!r}")


def _context_node(rule: str, suc: Optional[Formula], new_parts, premises, info=()) -> G3Node:
    """new_parts: list of (formula, [(premise index, premise oid), ...])."""
    ant = []
    links: list[list[tuple[int, int]]] = [[] for _ in premises]
    for i, (f, sources) in enumerate(new_parts):
        ant.append(Occ(i, f))
        for (pi, poid) in sources:
            links[pi].append((poid, i))
    return G3Node(rule, tuple(ant), suc, tuple(premises),
                  tuple(tuple(l) for l in links), tuple(info))


def _match_contexts(a: G3Node, skip_a: set[int], b: G3Node, skip_b: set[int]):
    """Pair equal-formula context occurrences of two premises."""
    pool: dict[Formula, list[int]] = {}
    for o in b.ant:
        if o.oid not in skip_b:
            pool.setdefault(o.f, []).append(o.oid)
    pairs = []
    for o in a.ant:
        if o.oid in skip_a:
            continue
        cands = pool.get(o.f)
        if not cands:
            raise TransformError(f"contexts disagree at {o.f!r}")
        pairs.append((o, cands.pop()))
    if any(cands for cands in pool.values()):
        raise TransformError("contexts disagree in size")
    return pairs


def b_at(context: Iterable[Formula], p: Atom) -> G3Node:
    return G3Node("At", _occs(list(context) + [p]), p)


def b_lbot(context: Iterable[Formula], suc: Optional[Formula]) -> G3Node:
    context = list(context)
    if BOT not in context:
        context.append(BOT)
    return G3Node("LBot", _occs(context), suc)


def b_rand(p1: G3Node, p2: G3Node) -> G3Node:
    parts = [(o.f, [(0, o.oid), (1, b)]) for o, b in _match_contexts(p1, set(), p2, set())]
    return _context_node("RAnd", And(p1.suc, p2.suc), parts, (p1, p2))


def b_land(p: G3Node, left: Formula, right: Formula) -> G3Node:
    used: set[int] = set()
    _pick(p, left, used)
    _pick(p, right, used)
    parts = [(o.f, [(0, o.oid)]) for o in p.ant if o.oid not in used]
    parts.append((And(left, right), []))
    return _context_node("LAnd", p.suc, parts, (p,))


def b_ror(p: G3Node, i: int, other: Formula) -> G3Node:
    suc = Or(p.suc, other) if i == 0 else Or(other, p.suc)
    parts = [(o.f, [(0, o.oid)]) for o in p.ant]
    return _context_node(f"ROr{i}", suc, parts, (p,))


def b_lor(p1: G3Node, p2: G3Node, left: Formula, right: Formula) -> G3Node:
    if p1.suc != p2.suc:
        raise TransformError("succedents disagree")
    u1: set[int] = set()
    u2: set[int] = set()
    _pick(p1, left, u1)
    _pick(p2, right, u2)
    parts = [(o.f, [(0, o.oid), (1, b)]) for o, b in _match_contexts(p1, u1, p2, u2)]
    parts.append((Or(left, right), []))
    return _context_node("LOr", p1.suc, parts, (p1, p2))


def b_rimp(p: G3Node, phi: Formula) -> G3Node:
    if p.suc is None:
        raise TransformError("premise of the right implication rule needs a succedent")
    used: set[int] = set()
    _pick(p, phi, used)
    parts = [(o.f, [(0, o.oid)]) for o in p.ant if o.oid not in used]
    return _context_node("RImp", Imp(phi, p.suc), parts, (p,))


def b_limp(p1: G3Node, p2: G3Node, principal: Imp) -> G3Node:
    if p1.suc != principal.left:
        raise TransformError("left premise does not conclude the antecedent of the principal")
    u1: set[int] = set()
    u2: set[int] = set()
    prin1 = _pick(p1, principal, u1)
    _pick(p2, principal.right, u2)
    parts = [(o.f, [(0, o.oid), (1, b)]) for o, b in _match_contexts(p1, u1, p2, u2)]
    prin_idx = len(parts)
    parts.append((principal, [(0, prin1)]))
    return _context_node("LImp", p2.suc, parts, (p1, p2), (("prin", prin_idx),))


def b_cut(p1: G3Node, p2: G3Node, cut_oid: Optional[int] = None) -> G3Node:
    if p1.suc is None:
        raise TransformError("left cut premise needs a succedent")
    used: set[int] = set()
    if cut_oid is None:
        cut_oid = _pick(p2, p1.suc, used)
    elif p2.occ(cut_oid).f != p1.suc:
        raise TransformError("designated cut occurrence does not match the cutformula")
    parts = [(o.f, [(0, o.oid)]) for o in p1.ant]
    parts += [(o.f, [(1, o.oid)]) for o in p2.ant if o.oid != cut_oid]
    return _context_node("Cut", p2.suc, parts, (p1, p2), (("cut", cut_oid),))


def _modal_slots(p: G3Node, gamma: list[Formula], extra_unlinked: list[Formula]):
    """Split premise occurrences into unlinked (diagonal + unboxed copies
    and extras) and linked slots; returns (unlinked oids, linked occs)."""
    need_unlinked = Counter(gamma) + Counter(extra_unlinked)
    diag_f = Box(p.suc)
    need_unlinked[diag_f] += 1
    unlinked: list[int] = []
    linked: list[Occ] = []
    diag: Optional[int] = None
    for o in p.ant:
        if o.f == diag_f and diag is None:
            diag = o.oid
            need_unlinked[diag_f] -= 1
            continue
        if need_unlinked[o.f] > 0:
            need_unlinked[o.f] -= 1
            unlinked.append(o.oid)
        else:
            linked.append(o)
    if diag is None or +need_unlinked:
        raise TransformError("premise does not fit the modal rule shape")
    return diag, unlinked, linked


def b_rsl(p: G3Node, gamma: Iterable[Formula], sigma: Iterable[Formula]) -> G3Node:
    """Modal rule: premise (Pi, G, boxed G, diag => suc), conclusion
    (sigma, Pi, boxed G => Box suc); Pi must be box-free."""
    gamma = list(gamma)
    sigma = list(sigma)
    if p.suc is None:
        raise TransformError("modal premise needs a succedent")
    need_boxes = Counter(Box(g) for g in gamma)
    diag, _, linked = _modal_slots(p, gamma, [])
    parts = [(f, []) for f in sigma]
    for o in linked:
        if need_boxes[o.f] > 0:
            need_boxes[o.f] -= 1
        elif isinstance(o.f, Box):
            raise TransformError("boxed context formula outside the boxed zone")
        parts.append((o.f, [(0, o.oid)]))
    if +need_boxes:
        raise TransformError("premise lacks boxed copies for the modal rule")
    return _context_node("RSL", Box(p.suc), parts, (p,), (("diag", diag),))


def b_rsl4(p: G3Node, gamma: Iterable[Formula]) -> G3Node:
    gamma = list(gamma)
    diag, _, linked = _modal_slots(p, gamma, [])
    need_boxes = Counter(Box(g) for g in gamma)
    seen = Counter(o.f for o in linked)
    for f, k in need_boxes.items():
        if seen[f] < k:
            raise TransformError("premise lacks boxed copies for the modal rule")
    parts = [(o.f, [(0, o.oid)]) for o in linked]
    return _context_node("RSL4", Box(p.suc), parts, (p,), (("diag", diag),))


def b_rgl(p: G3Node, gamma: Iterable[Formula], sigma: Iterable[Formula]) -> G3Node:
    gamma = list(gamma)
    diag, unlinked, linked = _modal_slots(p, gamma, [])
    if Counter(o.f for o in linked) != Counter(Box(g) for g in gamma):
        raise TransformError("premise does not fit the Löb rule shape")
    parts = [(f, []) for f in sigma]
    parts += [(o.f, [(0, o.oid)]) for o in linked]
    return _context_node("RGL", Box(p.suc), parts, (p,), (("diag", diag),))


def b_lbox(p: G3Node, phi: Formula) -> G3Node:
    used: set[int] = set()
    box_oid = _pick(p, Box(phi), used)
    parts = [(o.f, [(0, o.oid)]) for o in p.ant if o.oid != box_oid]
    prin_idx = len(parts)
    parts.append((phi, []))
    return _context_node("LBox", p.suc, parts, (p,), (("prin", prin_idx),))


# ---------------------------------------------------------------------------
# Instantiation accessors

def _link_image(n: G3Node, i: int) -> dict[int, int]:
    return {poid: coid for (poid, coid) in n.links[i]}


def _incoming(n: G3Node) -> dict[int, list[tuple[int, int]]]:
    """concl oid -> [(premise index, premise oid)]"""
    out: dict[int, list[tuple[int, int]]] = {o.oid: [] for o in n.ant}
    for i in range(len(n.premises)):
        for (poid, coid) in n.links[i]:
            out[coid].append((i, poid))
    return out


def rsl_split(n: G3Node) -> tuple[list[Formula], list[Formula], list[Formula]]:
    """(pi, gamma, sigma) multisets of a modal node's instantiation."""
    if n.rule not in ("RSL", "RSL4", "RGL"):
        raise TransformError("not a modal node")
    inc = _incoming(n)
    pi, gamma, sigma = [], [], []
    for o in n.ant:
        if not inc[o.oid]:
            sigma.append(o.f)
        elif isinstance(o.f, Box):
            gamma.append(o.f.inner)
        else:
            pi.append(o.f)
    return pi, gamma, sigma


def principal_of(n: G3Node) -> Formula:
    if n.rule in ("LImp", "LBox"):
        return n.occ(n.get_info("prin")).f
    if n.rule in ("LAnd", "LOr"):
        inc = _incoming(n)
        unlinked = [o for o in n.ant if not inc[o.oid]]
        if len(unlinked) != 1:
            raise ProofCheckError(f"{n.rule}: principal formula is ambiguous", n)
        return unlinked[0].f
    raise TransformError(f"no left principal for {n.rule}")


# ---------------------------------------------------------------------------
# Checker

def verify_g3(p: G3Node, profile: str = "core") -> None:
    try:
        allowed = PROFILES[profile]
    except KeyError:
        raise ValueError(f"unknown profile {profile!r}") from None

    def need(cond: bool, msg: str, n: G3Node):
        if not cond:
            raise ProofCheckError(msg, n)

    def visit(n: G3Node):
        need(n.rule in allowed, f"rule {n.rule} not enabled under profile {profile}", n)
        oids = [o.oid for o in n.ant]
        need(len(set(oids)) == len(oids), "duplicate occurrence identifiers", n)
        need(len(n.links) == len(n.premises), "link table size mismatch", n)
        for i, q in enumerate(n.premises):
            qoids = {o.oid for o in q.ant}
            seen_p: set[int] = set()
            seen_c: set[int] = set()
            for (poid, coid) in n.links[i]:
                need(poid in qoids and coid in set(oids), "dangling link", n)
                need(poid not in seen_p and coid not in seen_c, "non-injective links", n)
                seen_p.add(poid)
                seen_c.add(coid)
                need(q.occ(poid).f == n.occ(coid).f, "link connects unequal formulas", n)
        _check_schema(n, need)
        for q in n.premises:
            visit(q)

    visit(p)


def _bijective_context(n: G3Node, i: int, skip_p: set[int], skip_c: set[int], need):
    q = n.premises[i]
    lm = _link_image(n, i)
    dom = {o.oid for o in q.ant} - skip_p
    img = {o.oid for o in n.ant} - skip_c
    need(set(lm) == dom, f"premise {i} context not fully linked", n)
    need(set(lm.values()) == img, f"conclusion context not fully covered from premise {i}", n)


def _check_schema(n: G3Node, need):
    rule, suc = n.rule, n.suc
    fs = Counter(o.f for o in n.ant)
    if rule == "At":
        need(not n.premises, "axiom with premises", n)
        need(isinstance(suc, Atom) and fs[suc] > 0, "not an atomic axiom", n)
        return
    if rule == "LBot":
        need(not n.premises, "axiom with premises", n)
        need(fs[BOT] > 0, "bottom missing", n)
        return
    if rule == "RAnd":
        need(isinstance(suc, And) and len(n.premises) == 2, "malformed", n)
        need(n.premises[0].suc == suc.left and n.premises[1].suc == suc.right,
             "premise succedents mismatch", n)
        _bijective_context(n, 0, set(), set(), need)
        _bijective_context(n, 1, set(), set(), need)
        return
    if rule in ("ROr0", "ROr1"):
        need(isinstance(suc, Or) and len(n.premises) == 1, "malformed", n)
        side = suc.left if rule == "ROr0" else suc.right
        need(n.premises[0].suc == side, "premise succedent mismatch", n)
        _bijective_context(n, 0, set(), set(), need)
        return
    if rule == "RImp":
        need(isinstance(suc, Imp) and len(n.premises) == 1, "malformed", n)
        q = n.premises[0]
        need(q.suc == suc.right, "premise succedent mismatch", n)
        lm = _link_image(n, 0)
        free = [o for o in q.ant if o.oid not in lm]
        need(len(free) == 1 and free[0].f == suc.left, "auxiliary occurrence mismatch", n)
        _bijective_context(n, 0, {free[0].oid}, set(), need)
        return
    if rule == "LAnd":
        need(len(n.premises) == 1, "malformed", n)
        q = n.premises[0]
        need(q.suc == suc, "succedent changed", n)
        prin = principal_of(n)
        need(isinstance(prin, And), "principal is not a conjunction", n)
        lm = _link_image(n, 0)
        free = Counter(o.f for o in q.ant if o.oid not in lm)
        need(free == Counter((prin.left, prin.right)), "auxiliaries mismatch", n)
        prin_oid = next(o.oid for o in n.ant if not _incoming(n)[o.oid])
        _bijective_context(n, 0, {o.oid for o in q.ant if o.oid not in lm}, {prin_oid}, need)
        return
    if rule == "LOr":
        need(len(n.premises) == 2, "malformed", n)
        prin = principal_of(n)
        need(isinstance(prin, Or), "principal is not a disjunction", n)
        prin_oid = next(o.oid for o in n.ant if not _incoming(n)[o.oid])
        for i, side in enumerate((prin.left, prin.right)):
            q = n.premises[i]
            need(q.suc == suc, "succedent changed", n)
            lm = _link_image(n, i)
            free = [o for o in q.ant if o.oid not in lm]
            need(len(free) == 1 and free[0].f == side, "auxiliary mismatch", n)
            _bijective_context(n, i, {free[0].oid}, {prin_oid}, need)
        return
    if rule == "LImp":
        need(len(n.premises) == 2, "malformed", n)
        prin_oid = n.get_info("prin")
        prin = n.occ(prin_oid).f
        need(isinstance(prin, Imp), "principal is not an implication", n)
        q1, q2 = n.premises
        need(q1.suc == prin.left, "left premise succedent mismatch", n)
        need(q2.suc == suc, "right premise succedent mismatch", n)
        lm1 = _link_image(n, 0)
        prin_p = [poid for poid, coid in n.links[0] if coid == prin_oid]
        need(len(prin_p) == 1 and q1.occ(prin_p[0]).f == prin,
             "principal not retained in the left premise", n)
        lm2 = _link_image(n, 1)
        free2 = [o for o in q2.ant if o.oid not in lm2]
        need(len(free2) == 1 and free2[0].f == prin.right, "right auxiliary mismatch", n)
        _bijective_context(n, 0, set(), set(), need)
        _bijective_context(n, 1, {free2[0].oid}, {prin_oid}, need)
        return
    if rule == "Cut":
        need(len(n.premises) == 2, "malformed", n)
        q1, q2 = n.premises
        cut_oid = n.get_info("cut")
        cutf = q2.occ(cut_oid).f
        need(q1.suc == cutf, "cutformula mismatch", n)
        need(q2.suc == suc, "succedent mismatch", n)
        lm1 = _link_image(n, 0)
        lm2 = _link_image(n, 1)
        need(set(lm1) == {o.oid for o in q1.ant}, "left premise not fully linked", n)
        need(set(lm2) == {o.oid for o in q2.ant} - {cut_oid}, "right premise link mismatch", n)
        need(sorted(list(lm1.values()) + list(lm2.values())) == sorted(o.oid for o in n.ant),
             "conclusion not partitioned by the premises", n)
        return
    if rule in ("RSL", "RSL4", "RGL"):
        need(len(n.premises) == 1 and isinstance(suc, Box), "malformed", n)
        q = n.premises[0]
        need(q.suc == suc.inner, "premise succedent mismatch", n)
        diag = n.get_info("diag")
        need(q.occ(diag).f == suc, "diagonal occurrence mismatch", n)
        lm = _link_image(n, 0)
        need(diag not in lm, "diagonal must not be linked", n)
        inc = _incoming(n)
        unlinked_p = Counter(o.f for o in q.ant if o.oid not in lm and o.oid != diag)
        linked_c = [n.occ(c) for c in lm.values()]
        sigma = [o for o in n.ant if not inc[o.oid]]
        if rule == "RSL":
            gamma_boxes = Counter(o.f for o in linked_c if isinstance(o.f, Box))
            need(Counter(Box(f) for f in unlinked_p.elements()) == gamma_boxes,
                 "unboxed copies do not match the boxed zone", n)
            need(all(isinstance(o.f, Box) for o in sigma), "introduced formulas must be boxed", n)
        elif rule == "RSL4":
            need(not sigma, "this modal rule introduces nothing", n)
            have = Counter(o.f for o in linked_c)
            for f, k in Counter(Box(g) for g in unlinked_p.elements()).items():
                need(have[f] >= k, "missing boxed copies", n)
        else:  # RGL
            need(Counter(o.f for o in linked_c) == Counter(Box(f) for f in unlinked_p.elements()),
                 "premise must be exactly the boxed zone with its copies", n)
        return
    if rule == "LBox":
        need(len(n.premises) == 1, "malformed", n)
        q = n.premises[0]
        need(q.suc == suc, "succedent changed", n)
        prin_oid = n.get_info("prin")
        prin = n.occ(prin_oid).f
        lm = _link_image(n, 0)
        free = [o for o in q.ant if o.oid not in lm]
        need(len(free) == 1 and free[0].f == Box(prin), "premise box mismatch", n)
        _bijective_context(n, 0, {free[0].oid}, {prin_oid}, need)
        return
    need(False, f"unknown rule {rule}", n)


def check_g3_proof(p: G3Node, profile: str = "core") -> bool:
    try:
        verify_g3(p, profile)
        return True
    except ProofCheckError:
        return False


# ---------------------------------------------------------------------------
# Structural transformations (height-preserving)

def weaken(p: G3Node, f: Formula) -> G3Node:
    """Proof of the same sequent with f added on the left; height preserved.

    A boxed f crossing a modal inference is absorbed into the introduced
    zone; everywhere else f is threaded through the context.  Cut nodes are
    threaded through the right premise.
    """
    rule = p.rule
    if rule in ("At", "LBot"):
        return G3Node(rule, p.ant + (Occ(_fresh_oid(p), f),), p.suc)
    if rule == "RSL":
        pi, gamma, sigma = rsl_split(p)
        if isinstance(f, Box):
            return b_rsl(p.premises[0], gamma, sigma + [f])
        return b_rsl(weaken(p.premises[0], f), gamma, sigma)
    if rule == "RSL4":
        return b_rsl4(weaken(p.premises[0], f), rsl_split(p)[1])
    if rule == "RGL":
        pi, gamma, sigma = rsl_split(p)
        return b_rgl(p.premises[0], gamma, sigma + [f])
    if rule == "Cut":
        q2 = weaken(p.premises[1], f)
        return b_cut(p.premises[0], q2, _find_cut_occ(p, q2))
    if rule == "LAnd":
        prin = principal_of(p)
        return b_land(weaken(p.premises[0], f), prin.left, prin.right)
    if rule == "LOr":
        prin = principal_of(p)
        return b_lor(weaken(p.premises[0], f), weaken(p.premises[1], f), prin.left, prin.right)
    if rule == "LImp":
        prin = principal_of(p)
        return b_limp(weaken(p.premises[0], f), weaken(p.premises[1], f), prin)
    if rule == "LBox":
        return b_lbox(weaken(p.premises[0], f), principal_of(p))
    if rule == "RAnd":
        return b_rand(weaken(p.premises[0], f), weaken(p.premises[1], f))
    if rule in ("ROr0", "ROr1"):
        assert isinstance(p.suc, Or)
        other = p.suc.right if rule == "ROr0" else p.suc.left
        return b_ror(weaken(p.premises[0], f), int(rule[-1]), other)
    if rule == "RImp":
        assert isinstance(p.suc, Imp)
        return b_rimp(weaken(p.premises[0], f), p.suc.left)
    raise TransformError(f"cannot weaken across {rule}")


def _fresh_oid(p: G3Node) -> int:
    return max((o.oid for o in p.ant), default=-1) + 1


def _find_cut_occ(old: G3Node, new_q2: G3Node) -> int:
    """Re-locate the cutformula occurrence after rebuilding a premise."""
    cutf = old.premises[0].suc
    for o in new_q2.ant:
        if o.f == cutf:
            return o.oid
    raise TransformError("lost the cut occurrence")


def weaken_many(p: G3Node, fs: Iterable[Formula]) -> G3Node:
    for f in fs:
        p = weaken(p, f)
    return p


def falsum(p: G3Node, new_suc: Optional[Formula]) -> G3Node:
    """From a proof of (G => bottom) one of (G => new_suc); height preserved."""
    if p.suc != BOT:
        raise TransformError("falsum transformation needs a bottom succedent")

    def go(n: G3Node) -> G3Node:
        rule = n.rule
        if rule == "LBot":
            return G3Node("LBot", n.ant, new_suc)
        if rule == "LAnd":
            prin = principal_of(n)
            return b_land(go(n.premises[0]), prin.left, prin.right)
        if rule == "LOr":
            prin = principal_of(n)
            return b_lor(go(n.premises[0]), go(n.premises[1]), prin.left, prin.right)
        if rule == "LImp":
            prin = principal_of(n)
            return b_limp(n.premises[0], go(n.premises[1]), prin)
        if rule == "LBox":
            return b_lbox(go(n.premises[0]), principal_of(n))
        if rule == "Cut":
            q2 = go(n.premises[1])
            return b_cut(n.premises[0], q2, _find_cut_occ(n, q2))
        raise TransformError(f"succedent bottom cannot come from {rule}")

    return go(p)


def invert_rimp(p: G3Node) -> G3Node:
    """(G => a -> b)  to  (G, a => b)."""
    if not isinstance(p.suc, Imp):
        raise TransformError("succedent is not an implication")
    a, b = p.suc.left, p.suc.right

    def go(n: G3Node) -> G3Node:
        rule = n.rule
        if rule == "RImp":
            return n.premises[0]
        if rule == "LBot":
            return b_lbot([o.f for o in n.ant] + [a], b)
        if rule == "LAnd":
            prin = principal_of(n)
            return b_land(go(n.premises[0]), prin.left, prin.right)
        if rule == "LOr":
            prin = principal_of(n)
            return b_lor(go(n.premises[0]), go(n.premises[1]), prin.left, prin.right)
        if rule == "LImp":
            prin = principal_of(n)
            return b_limp(weaken(n.premises[0], a), go(n.premises[1]), prin)
        if rule == "LBox":
            return b_lbox(go(n.premises[0]), principal_of(n))
        if rule == "Cut":
            q2 = go(n.premises[1])
            return b_cut(n.premises[0], q2, _find_cut_occ(n, q2))
        raise TransformError(f"an implication succedent cannot come from {rule}")

    return go(p)


def invert_rand(p: G3Node, i: int) -> G3Node:
    """(G => a0 & a1)  to  (G => a_i)."""
    if not isinstance(p.suc, And):
        raise TransformError("succedent is not a conjunction")

    def go(n: G3Node) -> G3Node:
        rule = n.rule
        if rule == "RAnd":
            return n.premises[i]
        if rule == "LBot":
            side = p.suc.left if i == 0 else p.suc.right
            return b_lbot([o.f for o in n.ant], side)
        if rule == "LAnd":
            prin = principal_of(n)
            return b_land(go(n.premises[0]), prin.left, prin.right)
        if rule == "LOr":
            prin = principal_of(n)
            return b_lor(go(n.premises[0]), go(n.premises[1]), prin.left, prin.right)
        if rule == "LImp":
            prin = principal_of(n)
            return b_limp(n.premises[0], go(n.premises[1]), prin)
        if rule == "LBox":
            return b_lbox(go(n.premises[0]), principal_of(n))
        if rule == "Cut":
            q2 = go(n.premises[1])
            return b_cut(n.premises[0], q2, _find_cut_occ(n, q2))
        raise TransformError(f"a conjunction succedent cannot come from {rule}")

    return go(p)


def _replace_in_context(n: G3Node, f: Formula, repl: list[Formula], rec) -> G3Node:
    """Rebuild n with one context occurrence of f replaced by repl, applying
    rec to every premise (all premises of the core rules keep the context)."""
    rule = n.rule
    if rule in ("At", "LBot"):
        fs = [o.f for o in n.ant]
        fs.remove(f)
        fs += repl
        return G3Node(rule, _occs(fs), n.suc)
    if rule == "RSL":
        pi, gamma, sigma = rsl_split(n)
        q = rec(n.premises[0])
        gamma2 = list(gamma)
        for g in repl:
            if isinstance(g, Box):
                q = weaken(q, g.inner)
                gamma2.append(g.inner)
        return b_rsl(q, gamma2, sigma)
    if rule == "RSL4":
        return b_rsl4(rec(n.premises[0]), rsl_split(n)[1])
    if rule == "RGL":
        pi, gamma, sigma = rsl_split(n)
        sigma2 = list(sigma)
        sigma2.remove(f)
        sigma2 += repl
        return b_rgl(n.premises[0], gamma, sigma2)
    if rule == "Cut":
        lhs_has = any(o.f == f for o in n.premises[0].ant)
        if lhs_has:
            q1 = rec(n.premises[0])
            return b_cut(q1, n.premises[1], n.get_info("cut"))
        q2 = rec(n.premises[1])
        return b_cut(n.premises[0], q2, _find_cut_occ(n, q2))
    if rule == "LAnd":
        prin = principal_of(n)
        return b_land(rec(n.premises[0]), prin.left, prin.right)
    if rule == "LOr":
        prin = principal_of(n)
        return b_lor(rec(n.premises[0]), rec(n.premises[1]), prin.left, prin.right)
    if rule == "LImp":
        prin = principal_of(n)
        return b_limp(rec(n.premises[0]), rec(n.premises[1]), prin)
    if rule == "LBox":
        return b_lbox(rec(n.premises[0]), principal_of(n))
    if rule == "RAnd":
        return b_rand(rec(n.premises[0]), rec(n.premises[1]))
    if rule in ("ROr0", "ROr1"):
        other = n.suc.right if rule == "ROr0" else n.suc.left
        return b_ror(rec(n.premises[0]), int(rule[-1]), other)
    if rule == "RImp":
        return b_rimp(rec(n.premises[0]), n.suc.left)
    raise TransformError(f"cannot transform across {rule}")


def invert_land(p: G3Node, f: And) -> G3Node:
    """(G, a & b => D)  to  (G, a, b => D)."""

    def go(n: G3Node) -> G3Node:
        if n.rule == "LAnd" and principal_of(n) == f:
            return n.premises[0]
        return _replace_in_context(n, f, [f.left, f.right], go)

    return go(p)


def invert_lor(p: G3Node, f: Or, i: int) -> G3Node:
    """(G, a | b => D)  to  (G, side_i => D)."""
    side = f.left if i == 0 else f.right

    def go(n: G3Node) -> G3Node:
        if n.rule == "LOr" and principal_of(n) == f:
            return n.premises[i]
        return _replace_in_context(n, f, [side], go)

    return go(p)


def invert_limp(p: G3Node, f: Imp) -> G3Node:
    """(G, a -> b => D)  to  (G, b => D)."""

    def go(n: G3Node) -> G3Node:
        if n.rule == "LImp" and principal_of(n) == f:
            return n.premises[1]
        return _replace_in_context(n, f, [f.right], go)

    return go(p)


def contract(p: G3Node, f: Formula) -> G3Node:
    """(G, f, f => D)  to  (G, f => D); cut-free input, height preserved."""
    if Counter(o.f for o in p.ant)[f] < 2:
        raise TransformError(f"need two occurrences of {f!r} to contract")
    rule = p.rule
    if rule in ("At", "LBot"):
        fs = [o.f for o in p.ant]
        fs.remove(f)
        return G3Node(rule, _occs(fs), p.suc)
    if rule == "Cut":
        raise TransformError("contraction requires a cut-free proof")
    if rule == "RSL":
        pi, gamma, sigma = rsl_split(p)
        if f in sigma:
            sigma2 = list(sigma)
            sigma2.remove(f)
            return b_rsl(p.premises[0], gamma, sigma2)
        if isinstance(f, Box):
            # neither copy introduced, so both carry unboxed partners
            q = contract(contract(p.premises[0], f), f.inner)
            gamma2 = list(gamma)
            gamma2.remove(f.inner)
            return b_rsl(q, gamma2, sigma)
        return b_rsl(contract(p.premises[0], f), gamma, sigma)
    if rule in ("LAnd", "LOr", "LImp") and principal_of(p) == f:
        if rule == "LAnd":
            assert isinstance(f, And)
            q = invert_land(p.premises[0], f)
            q = contract(q, f.left)
            q = contract(q, f.right)
            return b_land(q, f.left, f.right)
        if rule == "LOr":
            assert isinstance(f, Or)
            qa = contract(invert_lor(p.premises[0], f, 0), f.left)
            qb = contract(invert_lor(p.premises[1], f, 1), f.right)
            return b_lor(qa, qb, f.left, f.right)
        assert isinstance(f, Imp)
        qa = contract(p.premises[0], f)
        qb = contract(invert_limp(p.premises[1], f), f.right)
        return b_limp(qa, qb, f)
    return _replace_in_context(p, f, [], lambda q: contract(q, f))


def contract_to(p: G3Node, target: Iterable[Formula]) -> G3Node:
    """Contract duplicates until the antecedent equals the target multiset."""
    want = Counter(target)
    while True:
        have = Counter(o.f for o in p.ant)
        if have == want:
            return p
        excess = have - want
        if +(want - have) or not +excess or any(want[f] < 1 for f in excess):
            raise TransformError("contract_to: target is not reachable by contraction")
        p = contract(p, next(iter(excess)))


def ext_axiom_g3(context: Iterable[Formula], phi: Formula) -> G3Node:
    """Proof of (context, phi => phi), by induction on the degree of phi."""
    ctx = list(context)
    if isinstance(phi, Atom):
        return b_at(ctx, phi)
    if isinstance(phi, Bottom):
        return b_lbot(ctx + [BOT], BOT)
    if isinstance(phi, And):
        a, b = phi.left, phi.right
        return b_rand(b_land(ext_axiom_g3(ctx + [b], a), a, b),
                      b_land(ext_axiom_g3(ctx + [a], b), a, b))
    if isinstance(phi, Or):
        a, b = phi.left, phi.right
        return b_lor(b_ror(ext_axiom_g3(ctx, a), 0, b),
                     b_ror(ext_axiom_g3(ctx, b), 1, a), a, b)
    if isinstance(phi, Imp):
        a, b = phi.left, phi.right
        body = b_limp(ext_axiom_g3(ctx + [phi], a), ext_axiom_g3(ctx + [a], b), phi)
        return b_rimp(body, a)
    assert isinstance(phi, Box)
    g = phi.inner
    pi = [x for x in ctx if not isinstance(x, Box)]
    sigma = [x for x in ctx if isinstance(x, Box)]
    prem = ext_axiom_g3(pi + [phi, phi], g)
    return b_rsl(prem, [g], sigma)


# ---------------------------------------------------------------------------
# Grades and strong weakening

def grade(p: G3Node, path: Sequence[int]) -> int:
    """Number of modal inferences below the node at `path` on its branch."""
    g = 0
    n = p
    for i in path:
        if n.rule == "RSL":
            g += 1
        n = n.premises[i]
    return g


def _translate(p: G3Node, chi: Formula, down: bool) -> G3Node:
    """Grade-dependent weakening translation; a pure surgery that keeps
    every existing occurrence identifier, so that diagonal markers and
    ancestor links survive unchanged."""
    boxed_chi = isinstance(chi, Box)
    box_chi = Box(chi)

    def additions(g: int) -> list[Formula]:
        if down:
            if boxed_chi:
                return [box_chi, chi] if g > 0 else [box_chi]
            return [box_chi] + [chi] * g
        if boxed_chi and g > 0:
            return []
        return [chi]

    def tr(n: G3Node, g: int) -> G3Node:
        if n.rule == "Cut" or n.rule in ("RSL4", "RGL", "LBox"):
            raise TransformError(
                f"strong weakening is defined on cut-free core proofs, not {n.rule}")
        add_c = additions(g)
        oid = _fresh_oid(n)
        new_c = []
        for f in add_c:
            new_c.append(Occ(oid, f))
            oid += 1
        ant = n.ant + tuple(new_c)
        if not n.premises:
            return G3Node(n.rule, ant, n.suc)
        g2 = g + (1 if n.rule == "RSL" else 0)
        premises = tuple(tr(q, g2) for q in n.premises)
        links = []
        for i, q2 in enumerate(premises):
            add_p = additions(g2)
            # the fresh premise occurrences sit at the tail, in order
            tail = q2.ant[len(q2.ant) - len(add_p):] if add_p else ()
            pairs = list(n.links[i])
            if n.rule == "RSL":
                # premise gains the unboxed partner: link only matching tails
                by_f: dict[Formula, list[int]] = {}
                for o in tail:
                    by_f.setdefault(o.f, []).append(o.oid)
                for c in new_c:
                    # a boxed-zone or parametric copy, if the premise has one
                    cands = by_f.get(c.f)
                    if cands and not (boxed_chi and c.f == chi):
                        pairs.append((cands.pop(0), c.oid))
            else:
                for c, o in zip(new_c, tail):
                    if o.f != c.f:
                        raise TransformError("translation misaligned")
                    pairs.append((o.oid, c.oid))
            links.append(tuple(pairs))
        return G3Node(n.rule, ant, n.suc, premises, tuple(links), n.info)

    return tr(p, 0)


def strong_weaken_down(p: G3Node, chi: Formula) -> G3Node:
    """Endsequent gains Box(chi); every sequent gains its grade-dependent
    copies so that critical segments stay intact; height preserved."""
    return _translate(p, chi, down=True)


def strong_weaken_up(p: G3Node, chi: Formula) -> G3Node:
    """Endsequent gains chi; sequents above modal inferences stay unchanged
    when chi is boxed; height preserved."""
    return _translate(p, chi, down=False)


def strong_weaken_down_many(p: G3Node, thetas: Iterable[Formula]) -> G3Node:
    for chi in thetas:
        p = strong_weaken_down(p, chi)
    return p


def strong_weaken_up_many(p: G3Node, thetas: Iterable[Formula]) -> G3Node:
    for chi in thetas:
        p = strong_weaken_up(p, chi)
    return p


# ---------------------------------------------------------------------------
# Critical inferences and the cut measure

def critical_inferences(p: G3Node, boxed: Optional[Formula] = None,
                        over: Sequence[int] = ()) -> list[tuple[tuple[int, ...], int]]:
    """Critical modal inferences over the node at `over`: (path, conclusion
    occurrence) per inference, following strict-ancestor links upward from
    the diagonal of the first modal inference introducing the succedent.
    When given, `boxed` must be that node's succedent."""
    if over:
        prefix = tuple(over)
        sub = node_at(p, prefix)
        return [(prefix + path, oid) for path, oid in critical_inferences(sub, boxed)]
    if boxed is not None and p.suc != boxed:
        raise TransformError("tracked formula must be the succedent there")
    out: list[tuple[tuple[int, ...], int]] = []

    def suc_walk(n: G3Node, path: tuple[int, ...]):
        rule = n.rule
        if rule in ("At", "LBot", "RAnd", "ROr0", "ROr1", "RImp", "RSL4", "RGL"):
            return
        if rule == "RSL":
            ant_walk(n.premises[0], n.get_info("diag"), path + (0,))
            return
        if rule == "LAnd":
            suc_walk(n.premises[0], path + (0,))
        elif rule == "LOr":
            suc_walk(n.premises[0], path + (0,))
            suc_walk(n.premises[1], path + (1,))
        elif rule in ("LImp", "Cut"):
            suc_walk(n.premises[1], path + (1,))
        elif rule == "LBox":
            suc_walk(n.premises[0], path + (0,))
        else:
            raise TransformError(f"unknown rule {rule}")

    def ant_walk(n: G3Node, oid: int, path: tuple[int, ...]):
        if not n.premises:
            return
        if n.rule == "RSL":
            if any(coid == oid for (_, coid) in n.links[0]):
                out.append((path, oid))
            return
        for i in range(len(n.premises)):
            for (poid, coid) in n.links[i]:
                if coid == oid:
                    ant_walk(n.premises[i], poid, path + (i,))

    suc_walk(p, ())
    return out


@dataclass(frozen=True, order=True)
class CutMeasure:
    degree: int
    width: int
    level: int


def cut_measure(n: G3Node) -> CutMeasure:
    if n.rule != "Cut":
        raise TransformError("not a cut node")
    cutf = n.premises[0].suc
    return CutMeasure(degree(cutf), len(critical_inferences(n.premises[0])),
                      height(n.premises[0]) + height(n.premises[1]))


def dwl(p: G3Node) -> CutMeasure:
    """Lexicographic measure of a whole proof; (0, 0, 0) when cut-free."""
    cuts = [cut_measure(n) for _, n in iter_nodes(p) if n.rule == "Cut"]
    if not cuts:
        return CutMeasure(0, 0, 0)
    cd = max(c.degree for c in cuts)
    maximal = [c for c in cuts if c.degree == cd]
    cw = max(c.width for c in maximal)
    widest = [c for c in maximal if c.width == cw]
    cl = max(c.level for c in widest)
    return CutMeasure(cd, cw, cl)


def prune(p: G3Node, oids: Iterable[int]) -> G3Node:
    """Remove the given occurrences together with their strict ancestors;
    valid whenever none of them is principal in a modal inference."""

    def go(n: G3Node, dead: set[int]) -> G3Node:
        if not dead:
            return n
        new_premises = []
        new_links = []
        for i, q in enumerate(n.premises):
            up = {poid for (poid, coid) in n.links[i] if coid in dead}
            if n.rule == "RSL" and up:
                raise TransformError("prune reached a critical inference")
            new_premises.append(go(q, up))
            new_links.append(tuple((a, b) for (a, b) in n.links[i] if b not in dead))
        ant = tuple(o for o in n.ant if o.oid not in dead)
        return G3Node(n.rule, ant, n.suc, tuple(new_premises), tuple(new_links), n.info)

    return go(p, set(oids))


def _formula_bijection(old: tuple[Occ, ...], new: tuple[Occ, ...],
                       force: Optional[dict[int, int]] = None) -> dict[int, int]:
    taken = set((force or {}).values())
    pool: dict[Formula, list[int]] = {}
    for o in new:
        if o.oid not in taken:
            pool.setdefault(o.f, []).append(o.oid)
    m = dict(force or {})
    for o in old:
        if o.oid in m:
            continue
        cands = pool.get(o.f)
        if not cands:
            raise TransformError("replacement changes the sequent")
        m[o.oid] = cands.pop(0)
    return m


def replace_at(root: G3Node, path: Sequence[int], new_node: G3Node,
               occ_map: Optional[dict[int, int]] = None) -> G3Node:
    """Swap the subtree at `path` for a new proof of the same sequent."""
    if not path:
        return new_node
    i = path[0]
    child = root.premises[i]
    new_child = replace_at(child, path[1:], new_node, occ_map)
    links = list(root.links)
    info = root.info
    if len(path) == 1:
        m = _formula_bijection(child.ant, new_child.ant, occ_map)
        links[i] = tuple((m[po], co) for (po, co) in links[i])
        # markers referring into the swapped premise must follow the map
        info = tuple((k, m[v]) if (k == "cut" and i == 1) or (k == "diag" and i == 0) else (k, v)
                     for (k, v) in info)
    premises = list(root.premises)
    premises[i] = new_child
    return G3Node(root.rule, root.ant, root.suc, tuple(premises), tuple(links), info)


# ---------------------------------------------------------------------------
# Cut elimination

def _preimage(n: G3Node, i: int, coid: int) -> int:
    for (poid, c) in n.links[i]:
        if c == coid:
            return poid
    raise TransformError("occurrence has no ancestor in that premise")


def _first_occ(n: G3Node, f: Formula) -> int:
    for o in n.ant:
        if o.f == f:
            return o.oid
    raise TransformError(f"no occurrence of {f!r}")


def _sigma_occ(n: G3Node, f: Formula) -> int:
    """An introduced occurrence of f in a modal conclusion."""
    inc = _incoming(n)
    for o in n.ant:
        if o.f == f and not inc[o.oid]:
            return o.oid
    raise TransformError("no introduced occurrence found")


class _Elim:
    """Recursive topmost-cut elimination; every recursive step handles a
    strictly smaller cut in the (degree, width, level) order, which is
    asserted per step."""

    def __init__(self):
        self.steps: list[CutMeasure] = []

    def run(self, d1: G3Node, d2: G3Node, cut_oid: int,
            parent: Optional[CutMeasure] = None) -> G3Node:
        cutf = d2.occ(cut_oid).f
        if d1.suc != cutf:
            raise TransformError("cutformula mismatch")
        m = CutMeasure(degree(cutf), len(critical_inferences(d1)),
                       height(d1) + height(d2))
        if parent is not None and not m < parent:
            raise TransformError(f"cut reduction did not shrink: {m} under {parent}")
        self.steps.append(m)
        goal_ant = [o.f for o in d1.ant] + [o.f for o in d2.ant if o.oid != cut_oid]
        goal = sequent(goal_ant, d2.suc)
        out = self._dispatch(d1, d2, cut_oid, cutf, m, goal_ant)
        if node_sequent(out) != goal:
            raise TransformError(f"cut elimination changed the endsequent: "
                                 f"{node_sequent(out)!r} != {goal!r}")
        return out

    def _dispatch(self, d1, d2, cut_oid, cutf, m, goal_ant):
        d2_rest = [o.f for o in d2.ant if o.oid != cut_oid]
        # 1: axioms
        if d1.rule == "LBot":
            return b_lbot(goal_ant, d2.suc)
        if d2.rule == "LBot":
            if BOT in d2_rest:
                return b_lbot(goal_ant, d2.suc)
            return weaken_many(falsum(d1, d2.suc), d2_rest)
        if d1.rule == "At":
            return weaken_many(d2, _minus_one(d1, cutf))
        if d2.rule == "At":
            if d2.suc in d2_rest:
                ctx = list(goal_ant)
                ctx.remove(d2.suc)
                return b_at(ctx, d2.suc)
            return weaken_many(d1, d2_rest)
        # 2a: cutformula parametric in the left premise
        if d1.rule == "LAnd":
            prin = principal_of(d1)
            return b_land(self.run(d1.premises[0], d2, cut_oid, m), prin.left, prin.right)
        if d1.rule == "LOr":
            prin = principal_of(d1)
            return b_lor(self.run(d1.premises[0], d2, cut_oid, m),
                         self.run(d1.premises[1], d2, cut_oid, m), prin.left, prin.right)
        if d1.rule == "LImp":
            prin = principal_of(d1)
            return b_limp(weaken_many(d1.premises[0], d2_rest),
                          self.run(d1.premises[1], d2, cut_oid, m), prin)
        # 2b: cut occurrence parametric in the right premise
        if d2.rule in ("RAnd", "ROr0", "ROr1", "RImp"):
            return self._push_right(d1, d2, cut_oid, m)
        if d2.rule in ("LAnd", "LOr", "LImp") and not self._occ_principal(d2, cut_oid):
            return self._push_right(d1, d2, cut_oid, m)
        if d2.rule == "RSL" and not self._occ_principal(d2, cut_oid):
            return self._push_modal(d1, d2, cut_oid, m)
        # 3: principal on both sides
        if isinstance(cutf, And):
            if d1.rule != "RAnd":
                raise TransformError(f"unexpected left rule {d1.rule} for a conjunction cut")
            q = d2.premises[0]
            e1 = self.run(d1.premises[1], q, _free_aux(d2, 0, cutf.right), m)
            e2 = self.run(d1.premises[0], e1, _first_occ(e1, cutf.left), m)
            return contract_to(e2, Counter(goal_ant).elements())
        if isinstance(cutf, Or):
            if d1.rule not in ("ROr0", "ROr1"):
                raise TransformError(f"unexpected left rule {d1.rule} for a disjunction cut")
            i = int(d1.rule[-1])
            side = cutf.left if i == 0 else cutf.right
            q = d2.premises[i]
            return self.run(d1.premises[0], q, _free_aux(d2, i, side), m)
        if isinstance(cutf, Imp):
            if d1.rule != "RImp":
                raise TransformError(f"unexpected left rule {d1.rule} for an implication cut")
            q1, q2 = d2.premises
            ec = self.run(d1, q1, _preimage(d2, 0, cut_oid), m)
            eb = self.run(ec, d1.premises[0], _first_occ(d1.premises[0], cutf.left), m)
            ea = self.run(eb, q2, _free_aux(d2, 1, cutf.right), m)
            return contract_to(ea, Counter(goal_ant).elements())
        if isinstance(cutf, Box):
            if d1.rule != "RSL" or d2.rule != "RSL":
                raise TransformError("boxed cutformula must be introduced by the modal rule")
            if m.width == 0:
                return self._boxed_width0(d1, d2, cut_oid, m, goal_ant)
            return self._boxed_widthpos(d1, d2, cut_oid, m, goal_ant)
        raise TransformError(f"unhandled cut configuration: {d1.rule} / {d2.rule}")

    def _occ_principal(self, n: G3Node, oid: int) -> bool:
        if n.rule in ("LAnd", "LOr"):
            return not _incoming(n)[oid]
        if n.rule == "LImp":
            return n.get_info("prin") == oid
        if n.rule == "RSL":
            # principal: the boxed zone; introduced and parametric
            # occurrences are not
            return bool(_incoming(n)[oid]) and isinstance(n.occ(oid).f, Box)
        return False

    def _push_right(self, d1, d2, cut_oid, m):
        rule = d2.rule
        if rule == "RAnd":
            return b_rand(self.run(d1, d2.premises[0], _preimage(d2, 0, cut_oid), m),
                          self.run(d1, d2.premises[1], _preimage(d2, 1, cut_oid), m))
        if rule in ("ROr0", "ROr1"):
            other = d2.suc.right if rule == "ROr0" else d2.suc.left
            return b_ror(self.run(d1, d2.premises[0], _preimage(d2, 0, cut_oid), m),
                         int(rule[-1]), other)
        if rule == "RImp":
            return b_rimp(self.run(d1, d2.premises[0], _preimage(d2, 0, cut_oid), m),
                          d2.suc.left)
        if rule == "LAnd":
            prin = principal_of(d2)
            return b_land(self.run(d1, d2.premises[0], _preimage(d2, 0, cut_oid), m),
                          prin.left, prin.right)
        if rule == "LOr":
            prin = principal_of(d2)
            return b_lor(self.run(d1, d2.premises[0], _preimage(d2, 0, cut_oid), m),
                         self.run(d1, d2.premises[1], _preimage(d2, 1, cut_oid), m),
                         prin.left, prin.right)
        if rule == "LImp":
            prin = principal_of(d2)
            return b_limp(self.run(d1, d2.premises[0], _preimage(d2, 0, cut_oid), m),
                          self.run(d1, d2.premises[1], _preimage(d2, 1, cut_oid), m), prin)
        raise TransformError(f"cannot push a cut over {rule}")

    def _push_modal(self, d1, d2, cut_oid, m):
        cutf = d2.occ(cut_oid).f
        pi, gamma, sigma = rsl_split(d2)
        inc = _incoming(d2)
        if not inc[cut_oid]:
            # the cut occurrence was introduced: drop it and weaken
            sigma2 = list(sigma)
            sigma2.remove(cutf)
            rebuilt = b_rsl(d2.premises[0], gamma, sigma2)
            return weaken_many(rebuilt, [o.f for o in d1.ant])
        # parametric non-boxed occurrence
        e = self.run(d1, d2.premises[0], _preimage(d2, 0, cut_oid), m)
        extra = [o.f.inner for o in d1.ant if isinstance(o.f, Box)]
        e = weaken_many(e, extra)
        return b_rsl(e, gamma + extra, sigma)

    def _boxed_width0(self, d1, d2, cut_oid, m, goal_ant):
        cutf = d1.suc
        d1p = d1.premises[0]
        diag1 = d1.get_info("diag")
        pi1, gamma1, sigma1 = rsl_split(d1)
        pi2, gamma2, sigma2 = rsl_split(d2)
        d3 = prune(d1p, [diag1])
        d1bar = _drop_sigma(d1)
        q2 = d2.premises[0]
        e3 = self.run(d1bar, q2, _preimage(d2, 0, cut_oid), m)
        e2 = self.run(d3, e3, _first_occ(e3, cutf.inner), m)
        gamma2b = list(gamma2)
        gamma2b.remove(cutf.inner)
        gamma_all = gamma1 + gamma2b
        target = pi1 + pi2 + gamma_all + [Box(g) for g in gamma_all] + [d2.suc]
        mid = contract_to(e2, target)
        return b_rsl(mid, gamma_all, sigma1 + sigma2)

    def _boxed_widthpos(self, d1, d2, cut_oid, m, goal_ant):
        cutf = d1.suc
        d1p = d1.premises[0]
        diag1 = d1.get_info("diag")
        pi1, gamma1, sigma1 = rsl_split(d1)
        crits = critical_inferences(d1)
        path0, oid0 = crits[0]
        r_node = node_at(d1, path0)
        chi = r_node.suc.inner
        pi_r, gamma_r, sigma_r = rsl_split(r_node)
        d1bar = _drop_sigma(d1)

        def surgery(base: G3Node, d4: Optional[G3Node]) -> G3Node:
            """Replace the subproof above the chosen critical inference so
            that the tracked box is introduced there instead of principal."""
            entries = [e for e in critical_inferences(base) if e[0] == path0]
            if not entries:
                raise TransformError("lost the critical segment")
            oid_t = entries[0][1]
            rt = node_at(base, path0)
            pit, gammat, sigmat = rsl_split(rt)
            qt = rt.premises[0]
            if d4 is None:
                s4 = [o.f for o in qt.ant]
                for f in (cutf, cutf.inner):
                    s4.remove(f)
                ctx = list(s4)
                ctx.remove(chi)
                repl_prem = ext_axiom_g3(ctx, chi)
            else:
                repl_prem = d4
            gammat2 = list(gammat)
            gammat2.remove(cutf.inner)
            rnew = b_rsl(repl_prem, gammat2, sigmat + [cutf])
            if node_sequent(rnew) != node_sequent(rt):
                raise TransformError("critical-segment surgery changed the sequent")
            occ_map = _formula_bijection(rt.ant, rnew.ant, {oid_t: _sigma_occ(rnew, cutf)})
            new_base = replace_at(base, path0, rnew, occ_map)
            if len(critical_inferences(new_base)) != m.width - 1:
                raise TransformError("critical-segment surgery did not lower the width")
            return new_base

        d1o = surgery(strong_weaken_down(d1bar, chi), None)
        e3 = self.run(d1o, d1p, diag1, m)
        d3o = r_node.premises[0]
        pre3 = _preimage(r_node, 0, oid0)
        e4 = self.run(d1o, d3o, pre3, m)
        e2 = self.run(e3, e4, _first_occ(e4, cutf.inner), m)
        gamma_r2 = list(gamma_r)
        gamma_r2.remove(cutf.inner)
        target = (pi1 + pi_r + gamma1 + [Box(g) for g in gamma1]
                  + gamma_r2 + [Box(g) for g in gamma_r2] + [r_node.suc])
        mid = contract_to(e2, target)
        gamma1_n = [g for g in gamma1 if not isinstance(g, Box)]
        d4 = weaken_many(mid, gamma1_n)
        translated = strong_weaken_up_many(strong_weaken_down_many(d1bar, gamma1), pi1)
        d1v = surgery(translated, d4)
        e5 = self.run(d1v, d2, cut_oid, m)
        d2_rest = [o.f for o in d2.ant if o.oid != cut_oid]
        mid2 = contract_to(e5, pi1 + [Box(g) for g in gamma1] + d2_rest)
        return weaken_many(mid2, sigma1)


def _minus_one(n: G3Node, f: Formula) -> list[Formula]:
    fs = [o.f for o in n.ant]
    fs.remove(f)
    return fs


def _drop_sigma(n: G3Node) -> G3Node:
    """A modal conclusion without its introduced zone; pure surgery, so the
    diagonal marker and all ancestor links survive."""
    inc = _incoming(n)
    ant = tuple(o for o in n.ant if inc[o.oid])
    return G3Node(n.rule, ant, n.suc, n.premises, n.links, n.info)


def _free_aux(n: G3Node, i: int, f: Formula) -> int:
    """The auxiliary (unlinked) occurrence of f in premise i."""
    lm = _link_image(n, i)
    for o in n.premises[i].ant:
        if o.f == f and o.oid not in lm:
            return o.oid
    raise TransformError(f"no auxiliary occurrence of {f!r}")


def _topmost_cut(p: G3Node) -> Optional[tuple[tuple[int, ...], G3Node]]:
    for path, n in iter_nodes(p):
        if n.rule == "Cut" and not has_cut(n.premises[0]) and not has_cut(n.premises[1]):
            return path, n
    return None


def reduce_topmost_cut(p: G3Node, steps: Optional[list[CutMeasure]] = None) -> G3Node:
    """Eliminate the first topmost cut entirely, by the case analysis that
    replaces it with strictly smaller cuts until none remain."""
    found = _topmost_cut(p)
    if found is None:
        raise TransformError("no cut with cut-free subproofs")
    path, n = found
    engine = _Elim()
    repl = engine.run(n.premises[0], n.premises[1], n.get_info("cut"))
    if steps is not None:
        steps.extend(engine.steps)
    return replace_at(p, path, repl)


def eliminate_cuts(p: G3Node, steps: Optional[list[CutMeasure]] = None) -> G3Node:
    """Cut-free proof of the same endsequent."""
    while has_cut(p):
        p = reduce_topmost_cut(p, steps)
    return p


# ---------------------------------------------------------------------------
# Translation from search proofs

def _curry_lemma(prin: Imp) -> G3Node:
    """({(a & b) -> g} => a -> (b -> g))."""
    shape = prin.left
    a, b, g = shape.left, shape.right, prin.right
    left = b_rand(ext_axiom_g3([prin, b], a), ext_axiom_g3([prin, a], b))
    body = b_limp(left, ext_axiom_g3([a, b], g), prin)
    return b_rimp(b_rimp(body, b), a)


def _or_half_lemma(prin: Imp, i: int) -> G3Node:
    """({(a | b) -> g} => side_i -> g)."""
    shape = prin.left
    side = shape.left if i == 0 else shape.right
    other = shape.right if i == 0 else shape.left
    left = b_ror(ext_axiom_g3([prin], side), i, other)
    body = b_limp(left, ext_axiom_g3([side], prin.right), prin)
    return b_rimp(body, side)


def _imp_imp_lemma(prin: Imp) -> G3Node:
    """({(a -> b) -> g} => b -> g)."""
    shape = prin.left
    a, b, g = shape.left, shape.right, prin.right
    left = b_rimp(ext_axiom_g3([prin, a], b), a)
    body = b_limp(left, ext_axiom_g3([b], g), prin)
    return b_rimp(body, b)


def g4_to_g3(p: G4Node) -> G3Node:
    """Compile a search-calculus proof into the diagonal-rule calculus with
    Cut; shared rules copy, the contraction-free implication rules compile
    through small cut lemmas, the modal rules map directly."""
    from .g4 import _g4_principal

    seq = p.sequent
    rule = p.rule
    if rule == "At":
        ctx = list(seq.ant)
        ctx.remove(seq.suc)
        return b_at(ctx, seq.suc)
    if rule == "LBot":
        return b_lbot(list(seq.ant), seq.suc)
    if rule == "RAnd":
        return b_rand(g4_to_g3(p.premises[0]), g4_to_g3(p.premises[1]))
    if rule == "LAnd":
        prin = _g4_principal(p)
        return b_land(g4_to_g3(p.premises[0]), prin.left, prin.right)
    if rule in ("ROr0", "ROr1"):
        i = int(rule[-1])
        other = seq.suc.right if i == 0 else seq.suc.left
        return b_ror(g4_to_g3(p.premises[0]), i, other)
    if rule == "LOr":
        prin = _g4_principal(p)
        return b_lor(g4_to_g3(p.premises[0]), g4_to_g3(p.premises[1]),
                     prin.left, prin.right)
    if rule == "RImp":
        return b_rimp(g4_to_g3(p.premises[0]), seq.suc.left)
    if rule == "LpImp":
        prin = _g4_principal(p)
        at_ctx = list(seq.ant)
        at_ctx.remove(prin.left)
        left = b_at(at_ctx, prin.left)
        return b_limp(left, g4_to_g3(p.premises[0]), prin)
    if rule == "LAndImp":
        prin = _g4_principal(p)
        return b_cut(_curry_lemma(prin), g4_to_g3(p.premises[0]))
    if rule == "LOrImp":
        prin = _g4_principal(p)
        body = g4_to_g3(p.premises[0])
        i0, i1 = Imp(prin.left.left, prin.right), Imp(prin.left.right, prin.right)
        packed = b_land(body, i0, i1)
        lemma = b_rand(_or_half_lemma(prin, 0), _or_half_lemma(prin, 1))
        return b_cut(lemma, packed)
    if rule == "LImpImpA":
        prin = _g4_principal(p)
        a = prin.left.left
        cut_a = b_cut(_imp_imp_lemma(prin), g4_to_g3(p.premises[0]))
        e3 = b_rimp(cut_a, a)
        return b_limp(e3, g4_to_g3(p.premises[1]), prin)
    if rule == "ImpSL1":
        prin = _g4_principal(p)
        gamma = [f.inner for f in seq.ant if isinstance(f, Box)]
        left = b_rsl(g4_to_g3(p.premises[0]), gamma, [])
        return b_limp(left, g4_to_g3(p.premises[1]), prin)
    if rule == "ImpSL2":
        prin = _g4_principal(p)
        ctx = list(seq.ant)
        ctx.remove(prin.left)
        left = ext_axiom_g3(ctx, prin.left)
        return b_limp(left, g4_to_g3(p.premises[0]), prin)
    if rule == "RSLa":
        gamma = [f.inner for f in seq.ant if isinstance(f, Box)]
        return b_rsl(g4_to_g3(p.premises[0]), gamma, [])
    raise TransformError(f"unknown search-calculus rule {rule}")


def invert(p: G3Node, which: str, formula: Optional[Formula] = None,
           i: int = 0, suc: Optional[Formula] = None) -> G3Node:
    """Named inversion dispatcher.

    Kinds: "LAnd" (needs formula), "LOr" (formula, i), "LImp" (formula;
    covers every left-implication shape), "RAnd" (i), "RImp", "Falsum"
    (optional new succedent).
    """
    if which == "LAnd":
        if not isinstance(formula, And):
            raise TransformError("LAnd inversion needs a conjunction")
        return invert_land(p, formula)
    if which == "LOr":
        if not isinstance(formula, Or):
            raise TransformError("LOr inversion needs a disjunction")
        return invert_lor(p, formula, i)
    if which == "LImp":
        if not isinstance(formula, Imp):
            raise TransformError("LImp inversion needs an implication")
        return invert_limp(p, formula)
    if which == "RAnd":
        return invert_rand(p, i)
    if which == "RImp":
        return invert_rimp(p)
    if which == "Falsum":
        return falsum(p, suc)
    raise TransformError(f"unknown inversion kind {which!r}")
