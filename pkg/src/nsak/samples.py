"""Seeded random instances shared by the self-test, the acceptance suite and scripts/."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Callable

from .reals import two_pow
from .witnesses import Functional2


def random_rational(rng: random.Random, max_den: int = 10_000, lo: Fraction = Fraction(0),
                    hi: Fraction = Fraction(1)) -> Fraction:
    d = rng.randint(1, max_den)
    a, b = lo * d, hi * d
    return Fraction(rng.randint(int(a) if a == int(a) else int(a) + 1, int(b)), d)


def random_tree(rng: random.Random, depth: int, keep: float = 0.7) -> set[tuple[int, ...]]:
    """A prefix-closed binary tree with at least one node at ``depth``.

    Random pruning from the root, except along one random branch.
    """
    branch = tuple(rng.randint(0, 1) for _ in range(depth))
    tree = {()}
    frontier = [()]
    for n in range(depth):
        nxt = []
        for s in frontier:
            for b in (0, 1):
                child = s + (b,)
                if child == branch[: n + 1] or rng.random() < keep / (1 + n / 4):
                    tree.add(child)
                    nxt.append(child)
        frontier = nxt
    return tree


def random_determined_functional(rng: random.Random, max_modulus: int = 8,
                                 max_value: int = 8) -> tuple[Functional2, int]:
    """G reading only f(0..m-1) with m <= max_modulus; returns (G, m)."""
    m = rng.randint(0, max_modulus)
    table = {s: rng.randint(0, max_value) for s in itertools.product((0, 1), repeat=m)}

    def run(f):
        key = tuple(min(f(i), 1) for i in range(m))
        return table[key]
    return Functional2(run, f"G[m={m}]"), m


def raw_sequence(rng: random.Random) -> Callable[[int], Fraction]:
    """An arbitrary rational sequence: convergent, erratic or converging with late jumps."""
    kind = rng.randrange(3)
    target = random_rational(rng, 1000, Fraction(-2), Fraction(2))
    if kind == 0:
        noise = {}

        def seq(k):
            if k not in noise:
                noise[k] = Fraction(rng.randint(-3, 3), 4) * two_pow(-k - 2)
            return target + noise[k]
        return seq
    if kind == 1:
        vals = {}

        def seq(k):
            if k not in vals:
                vals[k] = random_rational(rng, 50, Fraction(-3), Fraction(3))
            return vals[k]
        return seq
    jump = rng.randint(2, 60)
    return lambda k: target if k < jump else target + 1
