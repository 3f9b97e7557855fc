import pytest

from islprover import (
    ContractError,
    SplitSequent,
    TOP,
    decide,
    eliminate_cuts,
    extract_proof,
    g4_to_g3,
    interpolate,
    parse_split_sequent,
    search,
    sequent,
)
from islprover.formulas import atoms_of


def proof_of(split: SplitSequent):
    return eliminate_cuts(g4_to_g3(extract_proof(search(split.whole()))))


def split_of(text: str) -> SplitSequent:
    left, right, suc = parse_split_sequent(text)
    return SplitSequent(left, right, suc)


def check(split: SplitSequent):
    candidate = interpolate(proof_of(split), split)
    allowed = set()
    for f in split.left:
        allowed |= atoms_of(f)
    other = set()
    for f in split.right:
        other |= atoms_of(f)
    if split.suc is not None:
        other |= atoms_of(split.suc)
    assert atoms_of(candidate) <= (allowed & other)
    assert decide(sequent(split.left, candidate))
    assert decide(sequent(split.right + (candidate,), split.suc))
    return candidate


def test_spec_examples():
    one = check(split_of("p ; p -> q => q"))
    assert atoms_of(one) <= {"p"}
    empty_left = check(split_of("; p, q => p & q"))
    assert empty_left == TOP
    modal = check(split_of("[](p -> q) ; []p => []q"))
    assert atoms_of(modal) <= {"p", "q"}


def test_more_splits():
    for text in [
        "p & q ; q -> r => r",
        "p -> q, p ; => q",
        "; []p, []p -> q => q",
        "[]p ; => [][]p",
        "p ; => p | (q -> q)",
        "p, p -> []q ; []q -> r => r",
        "false ; => q",
    ]:
        check(split_of(text))


def test_split_must_cover():
    split = split_of("p ; => q")
    proof = proof_of(split_of("p ; p -> q => q"))
    with pytest.raises(ContractError):
        interpolate(proof, split)
