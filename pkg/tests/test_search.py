import random

from hypothesis import given, settings
from hypothesis import strategies as st
import pytest

from islprover import (
    Atom,
    Box,
    ContractError,
    Imp,
    backward_applications,
    decide,
    extract_proof,
    is_extended_axiom,
    is_irreducible,
    parse_formula,
    parse_sequent,
    search,
    sequent,
    verify_g4,
    check_g4_proof,
)
from islprover.g4 import G4Node, INVERTIBLE_PRIORITY, weaken_g4, ext_axiom_g4
from islprover.serialize import dump_g4, load_g4

p, q = Atom("p"), Atom("q")


def seq(text):
    return parse_sequent(text)


def test_is_irreducible_examples():
    assert not is_irreducible(seq("p, p -> q => r"))
    assert not is_irreducible(seq("p & q => r"))
    assert is_irreducible(seq("p, []q -> r => s"))
    # the strengthened clause: box present next to its implication
    assert not is_irreducible(seq("[]q, []q -> r => s"))


def test_is_extended_axiom():
    assert is_extended_axiom(seq("p & q => p & q"))
    assert not is_extended_axiom(seq("p => q"))
    assert is_extended_axiom(seq("[]p, q => []p"))


def test_backward_applications_modal_right():
    s = seq("[]p => []q")
    apps = backward_applications(s)
    assert len(apps) == 1
    ra, prems = apps[0]
    assert ra.rule == "RSLa"
    assert prems == [seq("[]p, p, []q => q")]


def test_backward_applications_nested_implication():
    s = seq("(p -> q) -> r => s")
    apps = backward_applications(s)
    assert len(apps) == 1
    ra, prems = apps[0]
    assert ra.rule == "LImpImpA"
    assert prems == [seq("q -> r, p => q"), seq("r => s")]


def test_backward_applications_box_implication_with_box():
    s = seq("[]p, []p -> q => r")
    apps = backward_applications(s)
    assert len(apps) == 1
    ra, prems = apps[0]
    assert ra.rule == "ImpSL2"
    assert prems == [seq("[]p, q => r")]


def test_search_examples():
    assert search(seq("=> ([]p -> p) -> p")).positive
    root = search(seq("=> p"))
    assert not root.positive and root.groups == ()
    assert not search(seq("=> []p -> p")).positive


def test_decide_axioms():
    assert decide(seq("=> p -> []p"))
    assert decide(seq("=> [](([]p) -> p) -> []p"))
    assert decide(seq("=> [](p -> q) -> ([]p -> []q)"))


def test_extract_proof_shapes():
    pf = extract_proof(search(seq("p & q => p & q")))
    verify_g4(pf)
    assert pf.rule == "RAnd"
    assert {child.rule for child in pf.premises} == {"LAnd"}
    pf = extract_proof(search(seq("p => p")))
    assert pf.rule == "At" and not pf.premises
    pf = extract_proof(search(seq("=> ([]p -> p) -> p")))
    assert pf.rule == "RImp"
    verify_g4(pf)


def test_extract_requires_positive():
    with pytest.raises(ContractError):
        extract_proof(search(seq("=> p")))


def test_checker_rejects_bad_impsl1():
    # side condition: the box must be absent from the antecedent
    concl = seq("[]p, []p -> q => r")
    left = seq("[]p, p, []p, []p -> q => p")
    right = seq("[]p, q => r")
    bad = G4Node("ImpSL1", concl, (
        G4Node("At", left), G4Node("LBot", right)))
    assert not check_g4_proof(bad)


def test_checker_accepts_weakened_proofs():
    pf = extract_proof(search(seq("p, p -> q => q")))
    for f in [Box(p), Imp(p, q), parse_formula("false")]:
        w = weaken_g4(pf, f)
        verify_g4(w)


def test_ext_axiom_g4_all_shapes():
    for text in ["p", "false", "p & q", "p | q", "p -> q", "[]p", "[](p -> []q)",
                 "(p -> q) -> p", "false -> q", "p & q -> p"]:
        f = parse_formula(text)
        pf = ext_axiom_g4([Box(q), p], f)
        verify_g4(pf)
        assert pf.sequent == sequent([Box(q), p, f], f)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([
    "p, p -> q => q", "=> p | (p -> false)", "p & q => q", "=> [](p -> p)",
    "[]p => [][]p", "=> (p -> q) | p", "p | q => q | p",
]), st.sampled_from(["p", "q", "[]p", "p -> q", "false", "p & []q"]))
def test_weakening_admissible_extensionally(text, extra):
    s = seq(text)
    f = parse_formula(extra)
    if decide(s):
        assert decide(sequent(list(s.ant) + [f], s.suc))


def test_marking_insensitive_to_priority():
    rng = random.Random(7)
    sequents = ["=> ([]p -> p) -> p", "p | q, p -> q => q", "=> []p -> p",
                "(p -> q) -> q, q -> p => p", "=> [](p & q) -> []p"]
    for text in sequents:
        s = seq(text)
        base = decide(s)
        for _ in range(5):
            priority = list(INVERTIBLE_PRIORITY)
            rng.shuffle(priority)
            assert decide(s, priority) == base


def test_json_round_trip_bit_exact():
    pf = extract_proof(search(seq("p & q, q -> r => r & q")))
    text = dump_g4(pf)
    again = load_g4(text)
    verify_g4(again)
    assert dump_g4(again) == text
