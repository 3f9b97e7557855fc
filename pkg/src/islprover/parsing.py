"""Text front end: formulas, sequents, split sequents, and rendering.

ASCII syntax: ``false``, ``~``, ``&``, ``|``, ``->``, ``[]``; sequents use
``,`` and ``=>``, split sequents additionally ``;``.  Unicode operators are
accepted as aliases on input but never emitted.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .errors import ParseError
from .formulas import BOT, And, Atom, Box, Bottom, Formula, Imp, Or, Sequent, sequent


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int


_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
    | (?P<op>=>|->|\[\]|[~&|(),;]|⇒|→|∧|∨|¬|□|⊥)
    """,
    re.VERBOSE,
)

_ALIASES = {"⇒": "=>", "→": "->", "∧": "&", "∨": "|", "¬": "~", "□": "[]", "⊥": "false"}


@dataclass(frozen=True)
class _Token:
    kind: str  # "name", "op", "end"
    text: str
    start: int
    end: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, pos + 1)
        if m.lastgroup != "ws":
            value = m.group()
            value = _ALIASES.get(value, value)
            kind = "name" if m.lastgroup == "name" and value != "false" else "op"
            if value == "false":
                kind = "op"
            tokens.append(_Token(kind, value, m.start(), m.end()))
        pos = m.end()
    tokens.append(_Token("end", "", len(text), len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.peek()
        if tok.text != text:
            got = tok.text or "end of input"
            raise ParseError(f"expected {text!r}, found {got!r}", tok.start, tok.end)
        return self.next()

    # precedence: ~ [] > & > | > ->  with -> right-associative
    def formula(self) -> Formula:
        left = self.disjunction()
        if self.peek().text == "->":
            self.next()
            return Imp(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek().text == "|":
            self.next()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.peek().text == "&":
            self.next()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.text == "~":
            self.next()
            return Imp(self.unary(), BOT)
        if tok.text == "[]":
            self.next()
            return Box(self.unary())
        if tok.text == "false":
            self.next()
            return BOT
        if tok.kind == "name":
            self.next()
            return Atom(tok.text)
        if tok.text == "(":
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        got = tok.text or "end of input"
        raise ParseError(f"expected a formula, found {got!r}", tok.start, tok.end)

    def formula_list(self, stop: tuple[str, ...]) -> list[Formula]:
        if self.peek().text in stop:
            return []
        out = [self.formula()]
        while self.peek().text == ",":
            self.next()
            out.append(self.formula())
        return out

    def end(self):
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"trailing input {tok.text!r}", tok.start, tok.end)


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    p.end()
    return f


def parse_sequent(text: str) -> Sequent:
    p = _Parser(text)
    ant = p.formula_list(stop=("=>",))
    p.expect("=>")
    suc: Optional[Formula] = None
    if p.peek().kind != "end":
        suc = p.formula()
        tok = p.peek()
        if tok.text == ",":
            raise ParseError("at most one succedent formula is allowed", tok.start, tok.end)
    p.end()
    return sequent(ant, suc)


def parse_split_sequent(text: str) -> tuple[tuple[Formula, ...], tuple[Formula, ...], Optional[Formula]]:
    """Parse ``Γ1 ; Γ2 => Δ`` into (left part, right part, succedent)."""
    p = _Parser(text)
    left = p.formula_list(stop=(";",))
    p.expect(";")
    right = p.formula_list(stop=("=>",))
    p.expect("=>")
    suc: Optional[Formula] = None
    if p.peek().kind != "end":
        suc = p.formula()
        tok = p.peek()
        if tok.text == ",":
            raise ParseError("at most one succedent formula is allowed", tok.start, tok.end)
    p.end()
    return tuple(left), tuple(right), suc


# ---------------------------------------------------------------------------
# Rendering (minimal parentheses; parse(render(x)) == x)

_IMP, _OR, _AND, _UNARY, _ATOM = 1, 2, 3, 4, 5


def _render(f: Formula, need: int) -> str:
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Box):
        text, level = "[]" + _render(f.inner, _UNARY), _UNARY
    elif isinstance(f, And):
        text, level = f"{_render(f.left, _AND)} & {_render(f.right, _UNARY)}", _AND
    elif isinstance(f, Or):
        text, level = f"{_render(f.left, _OR)} | {_render(f.right, _AND)}", _OR
    else:
        assert isinstance(f, Imp)
        text, level = f"{_render(f.left, _OR)} -> {_render(f.right, _IMP)}", _IMP
    return f"({text})" if level < need else text


def render(f: Formula) -> str:
    return _render(f, _IMP)


def render_sequent(s: Sequent) -> str:
    left = ", ".join(render(f) for f in s.ant)
    right = f" {render(s.suc)}" if s.suc is not None else ""
    return f"{left} =>{right}" if left else f"=>{right}"
