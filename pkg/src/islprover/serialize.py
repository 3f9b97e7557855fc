"""File formats: proof JSON (both calculi), model JSON, and DOT export.

Proof files are JSON trees with fields ``rule``, ``sequent`` (rendered
text) and ``premises``; files for the explicit-occurrence calculus carry a
``calculus`` tag plus per-node occurrence lists and ancestor-link maps.
Model files list worlds, both relations, and the valuation; reflexive
order pairs may be omitted on input.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import ParseError
from .g3 import G3Node, Occ, node_sequent
from .g4 import G4Node
from .parsing import parse_formula, parse_sequent, render, render_sequent
from .semantics import KripkeModel


def _dump(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# Search-calculus proofs

def g4_to_json(p: G4Node) -> dict:
    return {
        "calculus": "g4",
        "rule": p.rule,
        "sequent": render_sequent(p.sequent),
        "premises": [g4_to_json(q) for q in p.premises],
    }


def g4_from_json(d: dict) -> G4Node:
    if d.get("calculus", "g4") != "g4":
        raise ParseError("expected a search-calculus proof", 0, 0)
    return G4Node(d["rule"], parse_sequent(d["sequent"]),
                  tuple(g4_from_json(q) for q in d["premises"]))


def dump_g4(p: G4Node) -> str:
    return _dump(g4_to_json(p))


def load_g4(text: str) -> G4Node:
    return g4_from_json(json.loads(text))


# ---------------------------------------------------------------------------
# Explicit-occurrence proofs

def g3_to_json(p: G3Node) -> dict:
    return {
        "calculus": "g3",
        "rule": p.rule,
        "sequent": render_sequent(node_sequent(p)),
        "ant": [[o.oid, render(o.f)] for o in p.ant],
        "suc": render(p.suc) if p.suc is not None else None,
        "links": [sorted(list(pairs)) for pairs in p.links],
        "info": sorted([k, v] for (k, v) in p.info),
        "premises": [g3_to_json(q) for q in p.premises],
    }


def g3_from_json(d: dict) -> G3Node:
    if d.get("calculus", "g3") != "g3":
        raise ParseError("expected an explicit-occurrence proof", 0, 0)
    ant = tuple(Occ(int(oid), parse_formula(text)) for oid, text in d["ant"])
    suc = parse_formula(d["suc"]) if d["suc"] is not None else None
    premises = tuple(g3_from_json(q) for q in d["premises"])
    links = tuple(tuple((int(a), int(b)) for a, b in pairs) for pairs in d["links"])
    info = tuple((str(k), int(v)) for k, v in d["info"])
    return G3Node(d["rule"], ant, suc, premises, links, info)


def dump_g3(p: G3Node) -> str:
    return _dump(g3_to_json(p))


def load_g3(text: str) -> G3Node:
    return g3_from_json(json.loads(text))


def load_proof(text: str):
    d = json.loads(text)
    if d.get("calculus") == "g3":
        return g3_from_json(d)
    return g4_from_json(d)


# ---------------------------------------------------------------------------
# Models

def model_to_json(m: KripkeModel) -> dict:
    return {
        "worlds": sorted(m.worlds),
        "le": sorted([a, b] for (a, b) in m.le),
        "r": sorted([a, b] for (a, b) in m.r),
        "val": {w: sorted(m.val[w]) for w in sorted(m.worlds)},
    }


def dump_model(m: KripkeModel) -> str:
    return _dump(model_to_json(m))


def load_model(text: str) -> KripkeModel:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed model file: {e.msg}", e.pos, e.pos + 1) from None
    try:
        worlds = [str(w) for w in d["worlds"]]
        le = {(str(a), str(b)) for a, b in d.get("le", [])}
        r = {(str(a), str(b)) for a, b in d.get("r", [])}
        val = {str(w): [str(a) for a in atoms] for w, atoms in d.get("val", {}).items()}
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"malformed model file: {e}", 0, 0) from None
    le |= {(w, w) for w in worlds}  # reflexive pairs may be omitted
    return KripkeModel(worlds, le, r, val)


# ---------------------------------------------------------------------------
# DOT export

def _quote(s: str) -> str:
    return '"' + s.replace('"', '\\"') + '"'


def model_to_dot(m: KripkeModel, designated: str | None = None) -> str:
    lines = ["digraph model {", "  rankdir=BT;"]
    for w in sorted(m.worlds):
        label = w + ("\\n" + ",".join(sorted(m.val[w])) if m.val[w] else "")
        shape = ' shape=doublecircle' if w == designated else ""
        lines.append(f"  {_quote(w)} [label={_quote(label)}{shape}];")
    for (a, b) in sorted(m.le):
        if a != b and (a, b) not in m.r:
            lines.append(f"  {_quote(a)} -> {_quote(b)} [style=dashed];")
    for (a, b) in sorted(m.r):
        lines.append(f"  {_quote(a)} -> {_quote(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def proof_to_dot(p) -> str:
    lines = ["digraph proof {", "  rankdir=BT;", "  node [shape=box];"]
    counter = [0]

    def visit(n) -> str:
        me = f"n{counter[0]}"
        counter[0] += 1
        if isinstance(n, G4Node):
            label = f"{render_sequent(n.sequent)}\\n[{n.rule}]"
        else:
            label = f"{render_sequent(node_sequent(n))}\\n[{n.rule}]"
        lines.append(f"  {me} [label={_quote(label)}];")
        for q in n.premises:
            lines.append(f"  {visit(q)} -> {me};")
        return me

    visit(p)
    lines.append("}")
    return "\n".join(lines) + "\n"
