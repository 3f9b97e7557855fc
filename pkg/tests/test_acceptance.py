"""Acceptance criteria, one test per criterion, each printing a PASS line.

The corpus is the seed-1 run of the fuzz generator: 1000 sequents over two
atoms with formula weight at most 12.
"""

import random
import time

import pytest

from islprover import (
    BOT,
    TOP,
    Box,
    FuzzConfig,
    SearchOrderContext,
    SplitSequent,
    corpus,
    countermodel,
    decide,
    eliminate_cuts,
    enumerate_models,
    extract_proof,
    g4_to_g3,
    height,
    interpolate,
    invert,
    node_sequent,
    parse_formula,
    parse_sequent,
    refutes,
    search,
    sequent,
    sequent_less,
    strong_weaken_down,
    validate_model,
    verify_g3,
    verify_g4,
    weaken,
)
from islprover.formulas import And, Imp, sequent_box_occurrences
from islprover.g3 import b_lbot, b_rimp, b_rsl, contract, has_cut
from islprover.g4 import INVERTIBLE_PRIORITY
from islprover.generate import gen_formula
from islprover.semantics import refutes_at

CONFIG = FuzzConfig(seed=1, count=1000, max_weight=12, atoms=2)


@pytest.fixture(scope="module")
def corpus_seqs():
    return list(corpus(CONFIG))


@pytest.fixture(scope="module")
def roots(corpus_seqs):
    return [search(s) for s in corpus_seqs]


@pytest.fixture(scope="module")
def positive_pipeline(corpus_seqs, roots):
    """Cut-free explicit proofs for every provable corpus sequent."""
    out = {}
    for i, root in enumerate(roots):
        if root.positive:
            proof = extract_proof(root)
            verify_g4(proof)
            g3 = g4_to_g3(proof)
            verify_g3(g3, "with_cut")
            cutfree = eliminate_cuts(g3)
            verify_g3(cutfree, "core")
            assert node_sequent(cutfree) == corpus_seqs[i]
            assert not has_cut(cutfree)
            out[i] = cutfree
    return out


def test_criterion_1_axiom_suite():
    axioms = [
        "=> ([]p -> p) -> p",
        "=> p -> []p",
        "=> [](([]p) -> p) -> []p",
        "=> [](p -> q) -> ([]p -> []q)",
        "=> []p -> [][]p",
    ]
    for text in axioms:
        start = time.perf_counter()
        assert decide(parse_sequent(text)), text
        assert time.perf_counter() - start < 1.0, f"{text} exceeded one second"
    print("ACCEPTANCE 1 PASS: axiom suite decided provable, each under a second")


def test_criterion_2_non_theorems():
    non_theorems = [
        "=> []p -> p",
        "=> p | (p -> false)",
        "=> []false",
        "=> ((p -> q) -> p) -> p",
    ]
    for text in non_theorems:
        s = parse_sequent(text)
        root = search(s)
        assert not root.positive, text
        model, world = countermodel(root)
        assert validate_model(model) == [], text
        assert refutes_at(model, world, s), text
        assert len(model.worlds) <= 5, f"{text}: {len(model.worlds)} worlds"
    print("ACCEPTANCE 2 PASS: non-theorems refuted by small valid countermodels")


def test_criterion_3_termination_witness(corpus_seqs, roots):
    checked = 0
    for s, root in zip(corpus_seqs, roots):
        ctx = SearchOrderContext(sequent_box_occurrences(s))
        seen = set()
        stack = [root]
        while stack:
            node = stack.pop()
            if id(node) in seen:
                continue
            seen.add(id(node))
            for _, children in node.groups:
                for child in children:
                    assert sequent_less(child.sequent, node.sequent, ctx)
                    checked += 1
                    stack.append(child)
    assert checked > 0
    print(f"ACCEPTANCE 3 PASS: {checked} search edges descend in the order")


def test_criterion_4_soundness_cross_check(corpus_seqs, roots):
    start = time.perf_counter()
    for s, root in zip(corpus_seqs, roots):
        if not root.positive:
            model, world = countermodel(root)
            assert validate_model(model) == []
            assert refutes_at(model, world, s)
    positives = [(i, s) for i, (s, root) in enumerate(zip(corpus_seqs, roots))
                 if root.positive]
    assert positives
    models = 0
    for model in enumerate_models(["p", "q"], 3):
        models += 1
        for i, s in positives:
            w = refutes(model, s)
            assert w is None, f"[{i}] {s!r} refuted at {w} in {model!r}"
    elapsed = time.perf_counter() - start
    assert elapsed < 600, f"soundness cross-check took {elapsed:.0f}s"
    print(f"ACCEPTANCE 4 PASS: {len(positives)} provables unrefuted by {models} small "
          f"models; countermodels refute the rest ({elapsed:.0f}s)")


def test_criterion_5_cut_elimination_pipeline(positive_pipeline):
    # dwl-shrinking of every reduction step is asserted inside the engine,
    # which ran for every entry in the fixture
    assert len(positive_pipeline) >= 200
    print(f"ACCEPTANCE 5 PASS: {len(positive_pipeline)} provable sequents through "
          f"translation and cut elimination, all reductions dwl-decreasing")


def test_criterion_6_structural_lemmas(positive_pipeline):
    rng = random.Random(2024)
    pool = list(positive_pipeline.values())
    assert pool
    done = 0
    i = 0
    while done < 500:
        base = pool[i % len(pool)]
        i += 1
        f = gen_formula(rng, rng.randint(1, 6), 2)
        w1 = weaken(base, f)
        verify_g3(w1, "core")
        assert height(w1) == height(base)
        doubled = weaken(w1, f)
        back = contract(doubled, f)
        verify_g3(back, "core")
        assert height(back) <= height(doubled)
        seq = node_sequent(base)
        if isinstance(seq.suc, Imp):
            inv = invert(base, "RImp")
            verify_g3(inv, "core")
            assert height(inv) <= height(base)
        for g in seq.ant:
            if isinstance(g, Imp):
                inv = invert(base, "LImp", formula=g)
                verify_g3(inv, "core")
                assert height(inv) <= height(base)
                break
            if isinstance(g, And):
                inv = invert(base, "LAnd", formula=g)
                verify_g3(inv, "core")
                assert height(inv) <= height(base)
                break
        done += 1

    # the worked double-box example, boxed and non-boxed weakening formula
    bT, bbT = Box(TOP), Box(Box(TOP))
    leaf = b_rimp(b_lbot([bT, bbT, bT, BOT], BOT), BOT)
    segment = b_rsl(b_rsl(leaf, [bT], []), [], [])
    for chi_text, expected in [
        ("[]r", ["[][]r => [][](false -> false)",
                 "[]r, [][]r, [][](false -> false) => [](false -> false)",
                 "[]r, [](false -> false), [](false -> false), [][]r, "
                 "[][](false -> false) => false -> false"]),
        ("r", ["[]r => [][](false -> false)",
               "r, []r, [][](false -> false) => [](false -> false)",
               "r, r, []r, [](false -> false), [](false -> false), "
               "[][](false -> false) => false -> false"]),
    ]:
        out = strong_weaken_down(segment, parse_formula(chi_text))
        verify_g3(out, "core")
        assert height(out) == height(segment)
        node = out
        for want in expected:
            assert node_sequent(node) == parse_sequent(want)
            node = node.premises[0] if node.premises else node
    print("ACCEPTANCE 6 PASS: 500 weaken/contract/inversion runs height-safe; "
          "worked weakening displays reproduced")


def test_criterion_7_interpolation(corpus_seqs, positive_pipeline):
    rng = random.Random(7)
    done = 0
    for i, proof in positive_pipeline.items():
        s = corpus_seqs[i]
        for _ in range(2):
            if done >= 120:
                break
            left, right = [], []
            for f in s.ant:
                (left if rng.random() < 0.5 else right).append(f)
            split = SplitSequent(tuple(left), tuple(right), s.suc)
            candidate = interpolate(proof, split)
            assert decide(sequent(split.left, candidate))
            assert decide(sequent(split.right + (candidate,), split.suc))
            done += 1
        if done >= 120:
            break
    assert done >= 100
    print(f"ACCEPTANCE 7 PASS: {done} split sequents interpolated and validated")


def test_criterion_8_equivalence(corpus_seqs, roots, positive_pipeline):
    for i, (s, root) in enumerate(zip(corpus_seqs, roots)):
        if root.positive:
            proof = positive_pipeline[i]
            assert not has_cut(proof)
            assert node_sequent(proof) == s
        else:
            assert i not in positive_pipeline
    print("ACCEPTANCE 8 PASS: search verdicts coincide with cut-free proof existence")


def test_criterion_9_marking_robustness(corpus_seqs, roots):
    rng = random.Random(99)
    verdicts = [root.positive for root in roots]
    for trial in range(5):
        priority = list(INVERTIBLE_PRIORITY)
        rng.shuffle(priority)
        for s, expected in zip(corpus_seqs, verdicts):
            assert search(s, priority).positive == expected
    print("ACCEPTANCE 9 PASS: verdicts stable under 5 shuffled rule priorities")
