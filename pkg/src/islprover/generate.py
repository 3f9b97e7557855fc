"""Seed-deterministic formula and sequent generation for the fuzz harness."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator

from .formulas import BOT, And, Atom, Box, Formula, Imp, Or, Sequent, sequent, subformulas


@dataclass(frozen=True)
class FuzzConfig:
    seed: int = 1
    count: int = 100
    max_weight: int = 12
    atoms: int = 2
    max_model_worlds: int = 3

    def __post_init__(self):
        if self.count < 1 or self.max_weight < 1:
            raise ValueError("count and max_weight must be positive")


_ATOM_NAMES = "pqrstuvw"


def gen_formula(rng: random.Random, budget: int, atoms: int) -> Formula:
    """Weight-bounded sampling with fixed constructor probabilities."""
    names = _ATOM_NAMES[:max(1, atoms)]
    if budget <= 1:
        return BOT if rng.random() < 0.08 else Atom(rng.choice(names))
    roll = rng.random()
    if roll < 0.16:
        return BOT if rng.random() < 0.1 else Atom(rng.choice(names))
    if roll < 0.40:
        return Box(gen_formula(rng, budget - 1, atoms))
    if roll < 0.62:
        k = rng.randint(1, budget - 2) if budget > 2 else 1
        return Imp(gen_formula(rng, k, atoms), gen_formula(rng, budget - 1 - k, atoms))
    if roll < 0.82:
        k = rng.randint(1, budget - 2) if budget > 2 else 1
        return Or(gen_formula(rng, k, atoms), gen_formula(rng, budget - 1 - k, atoms))
    if budget <= 3:
        return Atom(rng.choice(names))
    k = rng.randint(1, budget - 3)
    return And(gen_formula(rng, k, atoms), gen_formula(rng, budget - 2 - k, atoms))


def gen_sequent(rng: random.Random, max_weight: int, atoms: int) -> Sequent:
    n_ant = rng.choice((0, 1, 1, 2, 2, 3))
    ant = [gen_formula(rng, rng.randint(1, max_weight), atoms) for _ in range(n_ant)]
    roll = rng.random()
    if roll < 0.10:
        suc = None
    elif ant and roll < 0.45:
        # bias toward provability: reuse a subformula from the antecedent
        host = rng.choice(ant)
        suc = rng.choice(list(subformulas(host)))
    else:
        suc = gen_formula(rng, rng.randint(1, max_weight), atoms)
    return sequent(ant, suc)


def corpus(config: FuzzConfig) -> Iterator[Sequent]:
    rng = random.Random(config.seed)
    for _ in range(config.count):
        yield gen_sequent(rng, config.max_weight, config.atoms)
