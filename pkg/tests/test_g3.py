import pytest

from islprover import (
    Atom,
    BOT,
    TOP,
    Box,
    Imp,
    check_g3_proof,
    contract,
    critical_inferences,
    decide,
    dwl,
    eliminate_cuts,
    ext_axiom_g3,
    extract_proof,
    g4_to_g3,
    grade,
    height,
    invert,
    node_sequent,
    parse_formula,
    parse_sequent,
    reduce_topmost_cut,
    search,
    sequent,
    strong_weaken_down,
    strong_weaken_up,
    verify_g3,
    weaken,
)
from islprover.errors import TransformError
from islprover.g3 import (
    CutMeasure,
    G3Node,
    Occ,
    b_at,
    b_cut,
    b_lbot,
    b_lbox,
    b_lor,
    b_rand,
    b_rgl,
    b_rimp,
    b_rsl,
    b_rsl4,
    cut_measure,
    falsum,
    has_cut,
    node_at,
    prune,
    rsl_split,
)

p, q, r = Atom("p"), Atom("q"), Atom("r")


def pipeline(text):
    s = parse_sequent(text)
    return eliminate_cuts(g4_to_g3(extract_proof(search(s))))


def minimal_segment():
    """The two stacked modal inferences over a doubly boxed formula,
    instantiated at the provable truth surrogate."""
    bT, bbT = Box(TOP), Box(Box(TOP))
    leaf = b_rimp(b_lbot([bT, bbT, bT, BOT], BOT), BOT)  # ([]T,[][]T,[]T => T)
    inner = b_rsl(leaf, [bT], [])                        # ([][]T => []T)
    return b_rsl(inner, [], [])                          # (=> [][]T)


def test_minimal_segment_checks():
    proof = minimal_segment()
    verify_g3(proof, "core")
    assert node_sequent(proof) == parse_sequent("=> [][](false -> false)")


def test_checker_rejects_boxed_parametric_context():
    # a boxed formula sitting outside the boxed zone of a modal inference
    prem = b_at([Box(q), Box(p)], p)
    bad = G3Node("RSL", (Occ(0, Box(q)),), Box(p), (prem,),
                 (((0, 0),),), (("diag", 1),))
    assert not check_g3_proof(bad, "core")


def test_checker_profiles():
    axiom = b_at([p], p)
    cut = b_cut(axiom, b_at([p, q], q))
    assert not check_g3_proof(cut, "core")
    assert check_g3_proof(cut, "with_cut")


def test_height():
    assert height(b_at([], p)) == 1
    assert height(b_rimp(b_at([p], p), p)) == 2
    two = b_rand(b_at([q], p), b_at([p], q))
    assert height(two) == 2


def test_weaken_examples():
    base = b_at([], p)
    out = weaken(base, q)
    verify_g3(out, "core")
    assert node_sequent(out) == parse_sequent("q, p => p")
    assert height(out) == height(base)

    proof = minimal_segment()
    boxed = weaken(proof, Box(r))
    verify_g3(boxed, "core")
    # a boxed weakening formula enters at the last inference only
    assert boxed.premises[0] is proof.premises[0]
    assert node_sequent(boxed) == parse_sequent("[]r => [][](false -> false)")

    plain = weaken(proof, r)
    verify_g3(plain, "core")
    assert r in [o.f for o in plain.premises[0].ant]
    assert height(plain) == height(proof)


def test_contract_and_inversions():
    proof = ext_axiom_g3([p], p)
    doubled = weaken(proof, p)
    out = contract(doubled, p)
    verify_g3(out, "core")
    assert node_sequent(out) == parse_sequent("p, p => p")
    assert height(out) <= height(doubled)

    imp_proof = pipeline("=> p -> (q -> p)")
    inv = invert(imp_proof, "RImp")
    verify_g3(inv, "core")
    assert node_sequent(inv) == parse_sequent("p => q -> p")
    assert height(inv) <= height(imp_proof)

    land_proof = pipeline("p & q => q")
    inv = invert(land_proof, "LAnd", formula=parse_formula("p & q"))
    verify_g3(inv, "core")
    assert node_sequent(inv) == parse_sequent("p, q => q")

    limp_proof = pipeline("p -> q, q -> r, p => r")
    inv = invert(limp_proof, "LImp", formula=parse_formula("p -> q"))
    verify_g3(inv, "core")
    assert node_sequent(inv) == parse_sequent("q, q -> r, p => r")


def test_falsum_rule():
    base = pipeline("p, p -> false => false")
    out = falsum(base, parse_formula("q & r"))
    verify_g3(out, "core")
    assert node_sequent(out) == parse_sequent("p, p -> false => q & r")
    assert height(out) <= height(base)
    out = falsum(base, None)
    assert node_sequent(out) == parse_sequent("p, p -> false =>")


def test_grades():
    proof = minimal_segment()
    assert grade(proof, ()) == 0
    assert grade(proof, (0,)) == 1
    assert grade(proof, (0, 0)) == 2


def test_grades_branching():
    # a non-modal two-premise rule preserves the grade in both branches
    proof = pipeline("[]p | []q => [](p | q)")
    found = False
    for path, node in _iter(proof):
        if node.rule == "LOr":
            g = grade(proof, path)
            assert grade(proof, path + (0,)) == g
            assert grade(proof, path + (1,)) == g
            found = True
    assert found


def _iter(n, path=()):
    yield path, n
    for i, child in enumerate(n.premises):
        yield from _iter(child, path + (i,))


def test_strong_weaken_down_displays():
    proof = minimal_segment()
    for chi_text, expected in [
        ("[]r", ["[][]r => [][](false -> false)",
                 "[]r, [][]r, [][](false -> false) => [](false -> false)",
                 "[]r, [](false -> false), [](false -> false), [][]r, [][](false -> false) => false -> false"]),
        ("r", ["[]r => [][](false -> false)",
               "r, []r, [][](false -> false) => [](false -> false)",
               "r, r, []r, [](false -> false), [](false -> false), [][](false -> false) => false -> false"]),
    ]:
        chi = parse_formula(chi_text)
        out = strong_weaken_down(proof, chi)
        verify_g3(out, "core")
        assert height(out) == height(proof)
        branch = [str(node_sequent(node))[1:-1] for node, _ in
                  [(out, None), (out.premises[0], None), (out.premises[0].premises[0], None)]]
        assert branch == [str(parse_sequent(e))[1:-1] for e in expected]


def test_strong_weaken_up():
    proof = minimal_segment()
    chi = parse_formula("[]r")
    out = strong_weaken_up(proof, chi)
    verify_g3(out, "core")
    assert height(out) == height(proof)
    assert node_sequent(out) == parse_sequent("[]r => [][](false -> false)")
    # sequents above the first modal inference are untouched for boxed chi
    assert node_sequent(out.premises[0]) == node_sequent(proof.premises[0])

    plain = strong_weaken_up(proof, r)
    verify_g3(plain, "core")
    assert node_sequent(plain) == parse_sequent("r => [][](false -> false)")
    assert r in [o.f for o in plain.premises[0].ant]


def test_critical_inferences_minimal():
    proof = minimal_segment()
    crits = critical_inferences(proof)
    assert len(crits) == 1
    path, oid = crits[0]
    assert path == (0,)
    node = node_at(proof, path)
    assert node.rule == "RSL" and node.occ(oid).f == Box(Box(TOP))


def test_critical_inferences_zero_width():
    proof = ext_axiom_g3([], Box(q))
    assert critical_inferences(proof) == []


def test_critical_inferences_fork_example():
    # disjunctive antecedent: the left branch makes the box principal (one
    # critical inference); the right branch reintroduces it instead
    bT = Box(TOP)
    phi = Imp(q, bT)
    box_phi = Box(phi)
    left_top = b_rimp(b_lbot([p, q, phi, box_phi, bT, BOT], BOT), BOT)
    left = b_rimp(b_rsl(left_top, [phi], []), q)      # box principal
    right_top = b_rimp(b_lbot([p, q, bT, BOT], BOT), BOT)
    right = b_rimp(b_rsl(right_top, [], [box_phi]), q)  # box introduced
    body = b_lor(left, right, p, p)
    root = b_rsl(body, [], [])
    verify_g3(root, "core")
    assert node_sequent(root) == sequent([parse_formula("p | p")], box_phi)
    crits = critical_inferences(root)
    assert [c[0] for c in crits] == [(0, 0, 0)]


def test_dwl_examples():
    cutfree = pipeline("p, p -> q => q")
    assert dwl(cutfree) == CutMeasure(0, 0, 0)
    atom_cut = b_cut(b_at([p], p), b_at([p, p], p))
    assert cut_measure(atom_cut) == CutMeasure(1, 0, 2)
    proof = minimal_segment()
    prem2 = ext_axiom_g3([Box(TOP), Box(Box(Box(TOP)))], Box(Box(TOP)))
    d2 = b_rsl(prem2, [Box(TOP)], [])
    boxed_cut = b_cut(proof, d2)
    m = cut_measure(boxed_cut)
    assert m.degree == 3 and m.width == 1
    assert dwl(boxed_cut) == m


def test_prune_lemma():
    proof = ext_axiom_g3([], Box(q))
    diag = proof.get_info("diag")
    pruned = prune(proof.premises[0], [diag])
    verify_g3(pruned, "core")
    assert node_sequent(pruned) == parse_sequent("q, []q => q")


def test_reduce_and_eliminate():
    cutfree = pipeline("p & q => q & p")
    assert eliminate_cuts(cutfree) is cutfree
    with pytest.raises(TransformError):
        reduce_topmost_cut(cutfree)

    atom_cut = b_cut(ext_axiom_g3([], p), ext_axiom_g3([p], p))
    steps = []
    out = reduce_topmost_cut(atom_cut, steps)
    verify_g3(out, "core")
    assert not has_cut(out)
    assert node_sequent(out) == parse_sequent("p, p => p")
    assert len(steps) == 1

    boxed = b_cut(ext_axiom_g3([], Box(q)),
                  b_rsl(ext_axiom_g3([q, Box(Box(q))], Box(q)), [q], []))
    verify_g3(boxed, "with_cut")
    out = eliminate_cuts(boxed)
    verify_g3(out, "core")
    assert node_sequent(out) == node_sequent(boxed)


def test_reduction_steps_shrink():
    s = parse_sequent("(p -> q) -> r, p -> q => r")
    g3 = g4_to_g3(extract_proof(search(s)))
    steps = []
    out = eliminate_cuts(g3, steps)
    verify_g3(out, "core")
    assert steps, "expected at least one reduction"


def test_g4_to_g3_shared_rules_copy():
    s = parse_sequent("p & q => q & p")
    g3 = g4_to_g3(extract_proof(search(s)))
    assert not has_cut(g3)
    verify_g3(g3, "core")


def test_g4_to_g3_lpimp_compiles_cut_free():
    s = parse_sequent("p, p -> q => q")
    g3 = g4_to_g3(extract_proof(search(s)))
    verify_g3(g3, "with_cut")
    assert g3.rule == "LImp"
    assert not has_cut(g3)


def test_g4_to_g3_modal_rule_direct():
    s = parse_sequent("[]p => [][]p")
    g4 = extract_proof(search(s))
    g3 = g4_to_g3(g4)
    verify_g3(g3, "core")
    # find the modal node translating the right-box step: nothing introduced
    for path, node in _iter(g3):
        if node.rule == "RSL":
            assert rsl_split(node)[2] == []
    assert node_sequent(g3) == s


def test_variant_profiles():
    # the unrestricted-context modal rule accepts boxed parametric formulas
    node = b_rsl4(b_at([Box(r), Box(p), Box(p)], p), [p])
    assert node_sequent(node) == parse_sequent("[]r, []p => []p")
    verify_g3(node, "b_variant")
    assert not check_g3_proof(node, "core")
    assert decide(node_sequent(node))

    gl = b_rgl(b_at([Box(p), Box(p)], p), [p], [q])
    assert node_sequent(gl) == parse_sequent("q, []p => []p")
    verify_g3(gl, "glc_variant")
    assert not check_g3_proof(gl, "core")
    assert decide(node_sequent(gl))

    ext_gl = b_rgl(b_at([Box(p), Box(p)], p), [p], [])
    lbox = b_lbox(ext_gl, p)
    assert node_sequent(lbox) == parse_sequent("p => []p")
    verify_g3(lbox, "glc_variant")
    assert not check_g3_proof(lbox, "with_cut")
    assert decide(node_sequent(lbox))


def test_g3_json_round_trip():
    from islprover.serialize import dump_g3, load_g3
    proof = pipeline("(p -> q) -> r, p -> q => r")
    text = dump_g3(proof)
    again = load_g3(text)
    verify_g3(again, "core")
    assert dump_g3(again) == text


def test_random_boxed_cuts_eliminate():
    # drives the boxed cases of the reduction, including positive width
    import random
    from islprover.generate import gen_formula

    rng = random.Random(5)
    done = 0
    attempts = 0
    while done < 20 and attempts < 400:
        attempts += 1
        f = gen_formula(rng, rng.randint(1, 5), 2)
        cutf = Box(f)
        g1 = [gen_formula(rng, rng.randint(1, 4), 2) for _ in range(rng.randint(0, 1))]
        g2 = [gen_formula(rng, rng.randint(1, 4), 2) for _ in range(rng.randint(0, 1))]
        suc = gen_formula(rng, rng.randint(1, 4), 2)
        s1 = sequent(g1, cutf)
        s2 = sequent(g2 + [cutf], suc)
        r1, r2 = search(s1), search(s2)
        if not (r1.positive and r2.positive):
            continue
        d1 = eliminate_cuts(g4_to_g3(extract_proof(r1)))
        d2 = eliminate_cuts(g4_to_g3(extract_proof(r2)))
        cut = b_cut(d1, d2)
        out = eliminate_cuts(cut)
        verify_g3(out, "core")
        assert node_sequent(out) == node_sequent(cut)
        assert not has_cut(out)
        done += 1
    assert done >= 20


def test_width_positive_cut_eliminates():
    bT = Box(TOP)
    leaf = b_rimp(b_lbot([bT, Box(bT), bT, BOT], BOT), BOT)
    d1 = b_rsl(b_rsl(leaf, [bT], []), [], [])      # (=> [][]T), width 1
    assert len(critical_inferences(d1)) == 1
    prem = ext_axiom_g3([bT, Box(Box(bT))], Box(bT))
    d2 = b_rsl(prem, [bT], [])                     # ([][]T => [][][]T)
    cut = b_cut(d1, d2)
    assert cut_measure(cut).width == 1
    steps = []
    out = eliminate_cuts(cut, steps)
    verify_g3(out, "core")
    assert node_sequent(out) == node_sequent(cut)
    assert any(s.width == 1 for s in steps)
    assert all(s.degree < 3 or s.width <= 1 for s in steps)


def test_strong_weakening_sweep():
    import random
    from islprover import FuzzConfig, corpus, search, extract_proof
    from islprover import strong_weaken_down, strong_weaken_up
    from islprover.generate import gen_formula

    rng = random.Random(31)
    done = 0
    for s in corpus(FuzzConfig(seed=4, count=120, max_weight=9, atoms=2)):
        root = search(s)
        if not root.positive:
            continue
        proof = eliminate_cuts(g4_to_g3(extract_proof(root)))
        for chi in (gen_formula(rng, rng.randint(1, 4), 2),
                    Box(gen_formula(rng, rng.randint(1, 3), 2))):
            down = strong_weaken_down(proof, chi)
            verify_g3(down, "core")
            assert height(down) == height(proof)
            assert node_sequent(down) == sequent(list(s.ant) + [Box(chi)], s.suc)
            up = strong_weaken_up(proof, chi)
            verify_g3(up, "core")
            assert height(up) == height(proof)
            assert node_sequent(up) == sequent(list(s.ant) + [chi], s.suc)
        done += 1
    assert done >= 40
