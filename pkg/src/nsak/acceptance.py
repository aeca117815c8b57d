"""The ten acceptance criteria as callables returning (ok, detail).

Shared by tests/test_acceptance.py and scripts/run_acceptance.py.  Each
criterion carries its own time limit; a run over the limit fails.
"""
from __future__ import annotations

import io
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import majorizability as mj
from .audit import run_mutations
from .kernel import load_library
from .reals import hat, rat, real_eq_upto, real_lt_witness, two_pow
from .samples import random_determined_functional, random_rational, random_tree, raw_sequence
from .witnesses import (
    Cover, Functional2, binary_digits, counterexample_pair, cover_is_correct, ct_diagonal,
    digit_error_bound, find_cover, partial_sum, standard_part, standard_part_bound, wkl_path, y0,
    MACHINE_TABLE,
)


@dataclass(frozen=True)
class Outcome:
    number: int
    name: str
    ok: bool
    seconds: float
    limit: float
    detail: str

    @property
    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status} criterion {self.number} {self.name}: {self.detail} ({self.seconds:.2f}s, limit {self.limit:g}s)"


def library_and_mutations(seed: int):
    lib = load_library()
    outcomes = run_mutations()
    rejected = sum(o.rejected for o in outcomes)
    ok = len(lib) >= 7 and len(outcomes) >= 20 and rejected == len(outcomes)
    return ok, f"{len(lib)} scripts checked, {rejected}/{len(outcomes)} mutations rejected"


def discontinuity(seed: int):
    bad = []
    for N in range(1, 65):
        p = counterexample_pair(N)
        Y = y0(N)
        if p.agreement != N or (Y(p.f0), Y(p.g0)) != (1, 0):
            bad.append(N)
    return not bad, f"N=1..64, failures={bad or 'none'}"


def standard_part_map(seed: int, count: int = 1000):
    rng = random.Random(seed)
    xs = [random_rational(rng) for _ in range(count)]
    worst = {}
    for N in (64, 256, 1024):
        bound = standard_part_bound(N)
        err_max = Fraction(0)
        for x in xs:
            sp = standard_part(rat(x), N)
            if any(d not in (0, 1) for d in sp.digits):
                return False, f"non-binary digit at x={x}, N={N}"
            err = abs(sp.u(N) - x)
            if err > bound:
                return False, f"|u-x|={float(err):.3g} > {float(bound):.3g} at x={x}, N={N}"
            err_max = max(err_max, err)
        worst[N] = float(err_max * N)
    shown = ", ".join(f"N={N}: max N*err={v:.3f}" for N, v in worst.items())
    return True, f"{count} rationals, {shown} (limit 4)"


def binary_approximation(seed: int, count: int = 1000):
    rng = random.Random(seed)
    n, N = 16, 2 ** 10
    bound = digit_error_bound(n, N)
    for _ in range(count):
        x = random_rational(rng)
        err = abs(x - partial_sum(binary_digits(rat(x), n, N)))
        if err > bound:
            return False, f"error {err} > {bound} at x={x}"
    return True, f"{count} rationals, n={n}, N={N}"


def majorizability_suite(seed: int):
    results = mj.model_suite(Bs=(1, 2), depth=2)
    failed = [r.line() for r in results if not r.ok]
    skipped = sum(r.skipped for r in results)
    passed = len(results) - skipped - len(failed)
    return not failed, f"{passed} exhaustive checks passed, {skipped} skipped by the size guard" + (
        f", failed: {failed[0]}" if failed else "")


def hbu_covers(seed: int, count: int = 100):
    cover = find_cover(Functional2(lambda f: f(0) + 1), 16)
    if cover is None or cover.N != 2:
        return False, f"f(0)+1 gave {cover and cover.N}"
    rng = random.Random(seed)
    for i in range(count):
        G, m = random_determined_functional(rng, max_modulus=8)
        c = find_cover(G, 16)
        if not isinstance(c, Cover) or not cover_is_correct(c):
            return False, f"trial {i} (modulus {m}) has no correct cover"
    return True, f"f(0)+1 -> N=2; {count} random covers verified"


def wkl_paths(seed: int, count: int = 100, depth: int = 20):
    rng = random.Random(seed)
    for i in range(count):
        T = random_tree(rng, depth)
        path = wkl_path(T, depth)
        if not all(tuple(path(j) for j in range(k)) in T for k in range(depth + 1)):
            return False, f"tree {i}: path leaves the tree"
    return True, f"{count} trees of depth {depth}"


def ct_diagonal_check(seed: int, N: int = 1000):
    d = ct_diagonal(N)
    defined = d.defined()
    ok = len(MACHINE_TABLE) >= 16 and defined and all(d.f0[e] != d.values[e] for e in defined)
    return bool(ok), f"{len(MACHINE_TABLE)} machines, {len(defined)} defined on their own index, all differ"


def reals_discipline(seed: int, count: int = 1000, K: int = 141):
    rng = random.Random(seed)
    pairs = 0
    for i in range(count):
        x = hat(raw_sequence(rng))
        qs = [x(k) for k in range(K + 1)]
        # suffix extremes cover every pair (n, n+j) with n+j <= K at once
        hi = lo = qs[K]
        for n in range(K - 1, -1, -1):
            if not (hi - qs[n] < two_pow(-n) and qs[n] - lo < two_pow(-n)):
                return False, f"input {i}: fast convergence fails at n={n}"
            hi, lo = max(hi, qs[n]), min(lo, qs[n])
        pairs += K * (K + 1) // 2
        for _ in range(20):
            n, j = rng.randrange(200), rng.randrange(200)
            if j and not abs(x(n) - x(n + j)) < two_pow(-n):
                return False, f"input {i}: random pair ({n}, {n + j}) fails"
    refuted = 0
    for _ in range(count):
        a = rat(random_rational(rng, 100, Fraction(-2), Fraction(2)))
        b = rat(random_rational(rng, 100, Fraction(-2), Fraction(2)))
        e = real_eq_upto(a, b, 40)
        if e.status == "distinct":
            refuted += 1
            if not abs(a(e.n) - b(e.n)) > two_pow(1 - e.n):
                return False, "eq refutation does not re-verify"
        lt = real_lt_witness(a, b, 40)
        if lt.status == "lt" and not (a(lt.n) + two_pow(1 - lt.n) < b(lt.n)):
            return False, "lt witness does not re-verify"
    return True, f"{count} inputs, {pairs} ordered pairs checked, {refuted} refutations re-verified"


def determinism(seed: int):
    from .cli import main

    outs = []
    for _ in range(2):
        buf = io.StringIO()
        code = main(["--format", "line", "--seed", str(seed), "selftest"], buf)
        outs.append((code, buf.getvalue()))
    same = outs[0] == outs[1]
    return same and outs[0][0] == 0, f"{len(outs[0][1].splitlines())} records, identical={same}"


CRITERIA: list[tuple[int, str, float, Callable]] = [
    (1, "proof library", 10, library_and_mutations),
    (2, "discontinuity witness", 1, discontinuity),
    (3, "standard part", 30, standard_part_map),
    (4, "binary approximation", 10, binary_approximation),
    (5, "majorizability models", 60, majorizability_suite),
    (6, "hbu covers", 30, hbu_covers),
    (7, "wkl paths", 5, wkl_paths),
    (8, "ct diagonal", 5, ct_diagonal_check),
    (9, "reals discipline", 30, reals_discipline),
    (10, "selftest determinism", 60, determinism),
]


def run_criterion(number: int, seed: int = 0) -> Outcome:
    num, name, limit, fn = next(c for c in CRITERIA if c[0] == number)
    start = time.perf_counter()
    ok, detail = fn(seed)
    seconds = time.perf_counter() - start
    return Outcome(num, name, ok and seconds < limit, seconds, limit, detail)
