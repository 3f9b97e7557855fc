"""Measures and orders, checked against spec values and a brute-force
replacement-search oracle for the multiset order."""

from collections import Counter
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from islprover import (
    BOT,
    And,
    Atom,
    Box,
    ContractError,
    Imp,
    Or,
    SearchOrderContext,
    box_count,
    degree,
    multiset_less,
    parse_sequent,
    sequent_less,
    weight,
)

p, q, r = Atom("p"), Atom("q"), Atom("r")


formulas = st.recursive(
    st.one_of(st.just(BOT), st.sampled_from([p, q])),
    lambda sub: st.one_of(
        st.tuples(sub, sub).map(lambda t: And(*t)),
        st.tuples(sub, sub).map(lambda t: Or(*t)),
        st.tuples(sub, sub).map(lambda t: Imp(*t)),
        sub.map(Box),
    ),
    max_leaves=6,
)


def test_weight_examples():
    assert weight(p) == 1
    assert weight(BOT) == 1
    assert weight(Box(p)) == 2
    assert weight(And(p, q)) == 4
    assert weight(Or(p, q)) == 3
    assert weight(Imp(p, q)) == 3


def test_degree_examples():
    assert degree(BOT) == 0
    assert degree(p) == 1
    assert degree(Box(And(p, q))) == 4


@given(formulas)
def test_weight_dominates_immediate_subformulas(f):
    assert weight(f) >= 1
    if isinstance(f, (And, Or, Imp)):
        assert weight(f) > weight(f.left)
        assert weight(f) > weight(f.right)
    elif isinstance(f, Box):
        assert weight(f) > weight(f.inner)


def brute_multiset_less(a, b):
    """Search over replacement maps: remove a nonempty part of b, add only
    formulas of strictly lower weight than something removed."""
    a, b = list(a), list(b)
    for k in range(1, len(b) + 1):
        for removed_idx in combinations(range(len(b)), k):
            removed = [b[i] for i in removed_idx]
            rest = Counter(b[i] for i in range(len(b)) if i not in removed_idx)
            if rest - Counter(a) != Counter():
                continue
            added = Counter(a) - rest
            if all(any(weight(y) < weight(x) for x in removed)
                   for y in added.elements()):
                return True
    return False


def test_multiset_less_examples():
    assert not multiset_less([p], [p])
    assert multiset_less([], [p])
    assert multiset_less([p, q], [And(p, q)])


@settings(max_examples=200)
@given(st.lists(formulas, max_size=3), st.lists(formulas, max_size=3))
def test_multiset_less_matches_brute_force(a, b):
    assert multiset_less(a, b) == brute_multiset_less(a, b)


@settings(max_examples=100)
@given(st.lists(formulas, max_size=3), st.lists(formulas, max_size=3),
       st.lists(formulas, max_size=3))
def test_multiset_less_strict_order(a, b, c):
    assert not multiset_less(a, a)
    if multiset_less(a, b) and multiset_less(b, c):
        assert multiset_less(a, c)


def test_box_count():
    assert box_count(parse_sequent("[]p, []p, q => r")) == 1
    assert box_count(parse_sequent("p => []q")) == 0
    assert box_count(parse_sequent("[]p, []q =>")) == 2


def test_sequent_less_examples():
    ctx = SearchOrderContext(2)
    s1 = parse_sequent("[]p, []q =>")
    s2 = parse_sequent("[]p =>")
    assert sequent_less(s1, s2, ctx)
    ctx0 = SearchOrderContext(0)
    assert sequent_less(parse_sequent("p =>"), parse_sequent("p & q =>"), ctx0)
    s = parse_sequent("p =>")
    assert not sequent_less(s, s, ctx0)


def test_sequent_less_contract_error():
    with pytest.raises(ContractError):
        sequent_less(parse_sequent("[]p =>"), parse_sequent("=>"), SearchOrderContext(0))
