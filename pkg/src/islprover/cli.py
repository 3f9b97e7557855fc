"""Command-line surface: prove, check-model, cut-elim, interpolate, fuzz.

Exit codes: 0 success/provable, 1 not provable, 2 usage/IO/parse errors,
3 internal discrepancy found by the fuzz harness.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from .errors import IslError, ParseError, ProofCheckError
from .formulas import Sequent
from .g3 import dwl, eliminate_cuts, g4_to_g3, has_cut, node_sequent, verify_g3
from .g4 import extract_proof, search, verify_g4
from .generate import FuzzConfig, corpus
from .interpolation import SplitSequent, interpolate
from .parsing import parse_sequent, parse_split_sequent, render, render_sequent
from .semantics import countermodel, enumerate_models, refutes, refutes_at, validate_model
from . import serialize


def _write(path: str, text: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def cmd_prove(args) -> int:
    s = parse_sequent(args.sequent)
    root = search(s)
    if root.positive:
        print("provable")
        if args.proof or args.dot:
            proof = extract_proof(root)
            verify_g4(proof)
            if args.proof:
                _write(args.proof, serialize.dump_g4(proof))
            if args.dot:
                _write(args.dot, serialize.proof_to_dot(proof))
        return 0
    print("not provable")
    if args.countermodel or args.dot:
        model, world = countermodel(root)
        if args.countermodel:
            _write(args.countermodel, serialize.dump_model(model))
        if args.dot:
            _write(args.dot, serialize.model_to_dot(model, world))
        print(f"countermodel with {len(model.worlds)} worlds refutes at {world}")
    return 1


def cmd_check_model(args) -> int:
    with open(args.model, encoding="utf-8") as fh:
        model = serialize.load_model(fh.read())
    violations = validate_model(model)
    if violations:
        for v in violations:
            print(f"violation of {v}")
        return 1
    s = parse_sequent(args.sequent)
    w = refutes(model, s)
    if w is None:
        print("valid in model")
    else:
        print(f"refuted at {w}")
    return 0


def cmd_cut_elim(args) -> int:
    with open(args.proof, encoding="utf-8") as fh:
        proof = serialize.load_g3(fh.read())
    try:
        verify_g3(proof, args.calculus_profile)
    except ProofCheckError as e:
        print(f"input proof is not valid: {e.message}", file=sys.stderr)
        return 2
    print(f"input dwl: {dwl(proof)}")
    steps = []
    out = eliminate_cuts(proof, steps)
    cutfree_profile = "core" if args.calculus_profile == "with_cut" else args.calculus_profile
    verify_g3(out, cutfree_profile)
    assert node_sequent(out) == node_sequent(proof)
    _write(args.out, serialize.dump_g3(out))
    print(f"reductions: {len(steps)}")
    for i, m in enumerate(steps):
        print(f"  [{i}] degree={m.degree} width={m.width} level={m.level}")
    print(f"cut-free proof of {render_sequent(node_sequent(out))} written to {args.out}")
    return 0


def cmd_interpolate(args) -> int:
    left, right, suc = parse_split_sequent(args.sequent)
    split = SplitSequent(left, right, suc)
    whole = split.whole()
    root = search(whole)
    if not root.positive:
        print("not provable")
        return 1
    proof = eliminate_cuts(g4_to_g3(extract_proof(root)))
    candidate = interpolate(proof, split)
    print(render(candidate))
    return 0


def _fuzz_atoms(n: int) -> list[str]:
    return list("pqrstuvw"[:max(1, n)])


def cmd_fuzz(args) -> int:
    config = FuzzConfig(seed=args.seed, count=args.count, max_weight=args.max_weight,
                        atoms=args.atoms, max_model_worlds=args.max_model_worlds)
    sequents = list(corpus(config))
    verdicts: list[bool] = []
    failures: list[str] = []

    def fail(i: int, s: Sequent, why: str):
        failures.append(f"[{i:04d}] {render_sequent(s)}: {why}")

    for i, s in enumerate(sequents):
        verdict = False
        try:
            root = search(s)
            verdict = root.positive
            if root.positive:
                proof = extract_proof(root)
                verify_g4(proof)
                g3 = g4_to_g3(proof)
                verify_g3(g3, "with_cut")
                cutfree = eliminate_cuts(g3)
                verify_g3(cutfree, "core")
                if node_sequent(cutfree) != s or has_cut(cutfree):
                    fail(i, s, "cut elimination changed the endsequent")
            else:
                model, world = countermodel(root)
                if validate_model(model):
                    fail(i, s, "countermodel violates a frame condition")
                elif not refutes_at(model, world, s):
                    fail(i, s, "countermodel does not refute")
        except IslError as e:
            fail(i, s, f"{type(e).__name__}: {e}")
        verdicts.append(verdict)
        print(f"[{i:04d}] {'provable' if verdict else 'refuted'} {render_sequent(s)}")

    # semantic cross-check: no small model may refute a provable sequent
    positives = [(i, s) for i, s in enumerate(sequents) if verdicts[i]]
    for model in enumerate_models(_fuzz_atoms(config.atoms), config.max_model_worlds):
        for i, s in positives:
            w = refutes(model, s)
            if w is not None:
                fail(i, s, f"refuted at {w} in a {len(model.worlds)}-world model")

    print(f"checked {len(sequents)} sequents: "
          f"{sum(verdicts)} provable, {len(verdicts) - sum(verdicts)} refuted")
    if failures:
        for line in failures:
            print(f"DISCREPANCY {line}")
        return 3
    print("no discrepancies")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="islprover",
                                 description="Decision procedure and proof toolkit "
                                             "for intuitionistic strong Löb logic")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prove", help="decide a sequent; optionally emit proof/countermodel")
    p.add_argument("sequent")
    p.add_argument("--proof", metavar="FILE", help="write a checked proof as JSON")
    p.add_argument("--countermodel", metavar="FILE", help="write a refuting model as JSON")
    p.add_argument("--dot", metavar="FILE", help="write a DOT rendering of the artifact")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("check-model", help="validate a model file and evaluate a sequent in it")
    p.add_argument("model")
    p.add_argument("sequent")
    p.set_defaults(func=cmd_check_model)

    p = sub.add_parser("cut-elim", help="eliminate cuts from a proof file")
    p.add_argument("proof")
    p.add_argument("out")
    p.add_argument("--calculus-profile", default="with_cut",
                   choices=("core", "with_cut", "b_variant", "glc_variant"))
    p.set_defaults(func=cmd_cut_elim)

    p = sub.add_parser("interpolate", help="interpolant for a split sequent 'G1 ; G2 => D'")
    p.add_argument("sequent")
    p.set_defaults(func=cmd_interpolate)

    p = sub.add_parser("fuzz", help="cross-check prover, models, and cut elimination")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--max-weight", type=int, default=12)
    p.add_argument("--atoms", type=int, default=2)
    p.add_argument("--max-model-worlds", type=int, default=3)
    p.set_defaults(func=cmd_fuzz)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, OSError, IslError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
