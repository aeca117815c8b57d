"""Strong majorizability: finite-model decision, sampled verdicts over N, majorants."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Callable, Optional

from . import binding
from .evaluator import FiniteModel, ModelSizeError, eval_finite_model
from .prelude import PRELUDE
from .syntax import (
    App, Arrow, BASE, Base, Formula, FiniteType, Fst, Implies, And, Lam, Pair, Prod,
    Quant, Rec, Rel, Snd, Term, Var, apply, print_type, TYPE1, TYPE2,
)


# ------------------------------------------------------------ the formula

def unfold_maj(x: Term, y: Term, t: FiniteType, literal: bool = False) -> Formula:
    """One layer of ``x <=*[t] y``.

    At arrow types: forall u forall v (v <=* u -> x v <=* y u & y v <=* y u).
    With ``literal`` the argument placement printed in the source is used
    instead: x u <=* y v & y u <=* y v.
    """
    if isinstance(t, Base):
        return Rel("le", BASE, x, y)
    if isinstance(t, Prod):
        return And(Rel("maj", t.left, App(Fst(), x), App(Fst(), y)),
                   Rel("maj", t.right, App(Snd(), x), App(Snd(), y)))
    avoid = binding.term_free(x) | binding.term_free(y)
    u = binding.fresh("u", avoid)
    v = binding.fresh("v", avoid | {u})
    U, V = Var(u), Var(v)
    if literal:
        U, V = V, U
    clauses = And(Rel("maj", t.cod, App(x, V), App(y, U)),
                  Rel("maj", t.cod, App(y, V), App(y, U)))
    return Quant("forall", u, t.dom, Quant("forall", v, t.dom,
                 Implies(Rel("maj", t.dom, Var(v), Var(u)), clauses)))


# ------------------------------------------------------- finite models

class MajModel:
    """Exact <=* on a finite model, memoized."""

    def __init__(self, B: int, cap: int = 200_000, literal: bool = False):
        self.model = FiniteModel(B, cap)
        self.B = B
        self.literal = literal
        self._memo: dict = {}
        self._pairs: dict = {}

    def pairs(self, t: FiniteType) -> list:
        """All (u, v) index pairs of type-t elements with v <=* u."""
        if t not in self._pairs:
            elems = self.model.elements(t)
            self._pairs[t] = [(i, j) for i, u in enumerate(elems) for j, v in enumerate(elems)
                              if self.leq(v, u, t)]
        return self._pairs[t]

    def leq(self, x, y, t: FiniteType) -> bool:
        if isinstance(t, Base):
            return x <= y
        if isinstance(t, Prod):
            return self.leq(x[0], y[0], t.left) and self.leq(x[1], y[1], t.right)
        key = (t, x, y)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._arrow(x, y, t)
            self._memo[key] = hit
        return hit

    def _arrow(self, x, y, t: Arrow) -> bool:
        for iu, iv in self.pairs(t.dom):
            if self.literal:
                iu, iv = iv, iu
            # x(v) <=* y(u) and y(v) <=* y(u)
            if not self.leq(y[iv], y[iu], t.cod) or not self.leq(x[iv], y[iu], t.cod):
                return False
        return True

    def counterexample(self, x, y, t: FiniteType):
        """A violated clause as (u, v) elements, or None."""
        if isinstance(t, Base):
            return None if x <= y else (x, y)
        if isinstance(t, Prod):
            return self.counterexample(x[0], y[0], t.left) or self.counterexample(x[1], y[1], t.right)
        elems = self.model.elements(t.dom)
        for iu, iv in self.pairs(t.dom):
            a, b = (iv, iu) if self.literal else (iu, iv)
            if not (self.leq(x[b], y[a], t.cod) and self.leq(y[b], y[a], t.cod)):
                return (elems[iu], elems[iv])
        return None

    def monotone(self, x, t: FiniteType) -> bool:
        """Independent single-clause form: v <=* u implies x v <=* x u."""
        if isinstance(t, Base):
            return True
        if isinstance(t, Prod):
            return self.monotone(x[0], t.left) and self.monotone(x[1], t.right)
        return all(self.leq(x[iv], x[iu], t.cod) for iu, iv in self.pairs(t.dom))


def leq_star_model(x, y, t: FiniteType, B: int, literal: bool = False) -> bool:
    return MajModel(B, literal=literal).leq(x, y, t)


def is_monotone_model(x, t: FiniteType, B: int) -> bool:
    return MajModel(B).monotone(x, t)


def types_up_to_depth(depth: int) -> list[FiniteType]:
    layers = [BASE]
    for _ in range(depth):
        new = [BASE]
        for a in layers:
            for b in layers:
                new.append(Arrow(a, b))
                new.append(Prod(a, b))
        layers = list(dict.fromkeys(new))
    return layers


@dataclass
class SuiteResult:
    name: str
    type: FiniteType
    B: int
    checked: int
    ok: bool
    skipped: bool = False
    detail: str = ""

    def line(self) -> str:
        status = "SKIP" if self.skipped else ("PASS" if self.ok else "FAIL")
        return (f"check={self.name} type={print_type(self.type)} B={self.B} "
                f"checked={self.checked} status={status}{' ' + self.detail if self.detail else ''}")


def check_reflexivity_iff_monotone(mm: MajModel, t: FiniteType) -> SuiteResult:
    elems = mm.model.elements(t)
    bad = [x for x in elems if mm.leq(x, x, t) != mm.monotone(x, t)]
    return SuiteResult("reflexivity-iff-monotone", t, mm.B, len(elems), not bad,
                       detail=f"witness={bad[0]}" if bad else "")


def check_right_monotone(mm: MajModel, t: FiniteType, pair_cap: int = 600_000) -> SuiteResult:
    elems = mm.model.elements(t)
    if len(elems) ** 2 > pair_cap:
        return SuiteResult("right-monotone", t, mm.B, 0, True, skipped=True,
                           detail=f"pairs={len(elems) ** 2}>cap")
    # pairs with a monotone right side satisfy the implication outright
    for y in (y for y in elems if not mm.monotone(y, t)):
        for x in elems:
            if mm.leq(x, y, t):
                return SuiteResult("right-monotone", t, mm.B, len(elems) ** 2, False,
                                   detail=f"witness=({x},{y})")
    return SuiteResult("right-monotone", t, mm.B, len(elems) ** 2, True)


def check_maj(mm: MajModel, t: FiniteType) -> SuiteResult:
    """Every element has a majorant: tried with the top element, then by search."""
    elems = mm.model.elements(t)
    top = mm.model.top(t)
    for x in elems:
        if mm.leq(x, top, t):
            continue
        if not any(mm.leq(x, y, t) for y in elems):
            return SuiteResult("maj", t, mm.B, len(elems), False, detail=f"witness={x}")
    return SuiteResult("maj", t, mm.B, len(elems), True)


def model_suite(Bs=(1, 2), depth: int = 2, cap: int = 20_000, pair_cap: int = 600_000,
                checks=("reflexivity-iff-monotone", "right-monotone", "maj")) -> list[SuiteResult]:
    results = []
    for B in Bs:
        mm = MajModel(B, cap)
        for t in types_up_to_depth(depth):
            try:
                mm.model.elements(t)
            except ModelSizeError:
                for name in checks:
                    results.append(SuiteResult(name, t, B, 0, True, skipped=True,
                                               detail=f"size={mm.model.size(t)}>cap"))
                continue
            for name in checks:
                if name == "reflexivity-iff-monotone":
                    results.append(check_reflexivity_iff_monotone(mm, t))
                elif name == "right-monotone":
                    results.append(check_right_monotone(mm, t, pair_cap))
                elif name == "maj":
                    results.append(check_maj(mm, t))
                elif name == "transitivity":
                    results.append(probe_transitivity(mm, t))
    return results


def probe_transitivity(mm: MajModel, t: FiniteType, cap: int = 200) -> SuiteResult:
    """Report whether <=* is transitive on the model; nothing is presumed."""
    elems = mm.model.elements(t)
    if len(elems) > cap:
        return SuiteResult("transitivity", t, mm.B, 0, True, skipped=True, detail=f"size={len(elems)}>cap")
    up = {x: [y for y in elems if mm.leq(x, y, t)] for x in elems}
    for x in elems:
        for y in up[x]:
            for z in up[y]:
                if not mm.leq(x, z, t):
                    return SuiteResult("transitivity", t, mm.B, len(elems), False,
                                       detail=f"witness=({x},{y},{z})")
    return SuiteResult("transitivity", t, mm.B, len(elems), True)


# ------------------------------------------------------- sampled over N

@dataclass(frozen=True)
class MajVerdict:
    status: str                      # holds | fails | holds_on_samples
    counterexample: Any = None
    count: int = 0


class LazySeq:
    """A deterministic pseudo-random sequence generated on demand."""

    def __init__(self, gen: Callable[[int, Optional[int]], int], seed: int):
        self.rng = random.Random(seed)
        self.gen = gen
        self.values: list[int] = []

    def __call__(self, n: int) -> int:
        while len(self.values) <= n:
            prev = self.values[-1] if self.values else None
            self.values.append(self.gen(len(self.values), prev, self.rng))
        return self.values[n]

    def __repr__(self):
        return f"<{', '.join(map(str, self.values[:8]))}{', ...' if self.values else ''}>"


def _sample_pairs_type1(n_samples: int, rng: random.Random):
    # small pairs in order first, then random ones
    small = [(u, v) for u in range(8) for v in range(u + 1)]
    yield from small[:n_samples]
    for _ in range(max(0, n_samples - len(small))):
        u = rng.randrange(0, 1 << rng.randrange(1, 20))
        yield u, rng.randrange(0, u + 1)


def _sample_pairs_type2(n_samples: int, rng: random.Random):
    for i in range(n_samples):
        seed = rng.randrange(1 << 30)
        scale = 1 + (i % 7)
        u = LazySeq(lambda k, p, r: (p or 0) + r.randrange(0, scale + 1), seed)
        v_inner = random.Random(seed ^ 0x5A5A)
        v = LazySeq(lambda k, p, r, u=u: r.randrange(0, u(k) + 1), v_inner.randrange(1 << 30))
        yield u, v


def leq_star_sampled(x, y, t: FiniteType, n_samples: int = 1000, seed: int = 0) -> MajVerdict:
    """Test the <=* clauses on sampled argument pairs; only refutations are conclusive.

    Arguments are ints at type 0 and host callables at types 1 and 2.
    """
    if isinstance(t, Base):
        return MajVerdict("holds") if x <= y else MajVerdict("fails", (x, y))
    rng = random.Random(seed)
    if t == TYPE1:
        pairs = _sample_pairs_type1(n_samples, rng)
    elif t == TYPE2:
        pairs = _sample_pairs_type2(n_samples, rng)
    else:
        raise ValueError(f"sampling supports types 0, 1 and 2, not {print_type(t)}")
    count = 0
    for u, v in pairs:
        count += 1
        yu = y(u)
        if not (x(v) <= yu and y(v) <= yu):
            return MajVerdict("fails", (u, v), count)
    return MajVerdict("holds_on_samples", count=count)


# ------------------------------------------------------------ majorants

def max_term(t: FiniteType) -> Term:
    """Closed term of type t -> t -> t computing the hereditary pointwise maximum."""
    if isinstance(t, Base):
        return PRELUDE["max"]
    a, b = Var("a"), Var("b")
    if isinstance(t, Prod):
        body = Pair(apply(max_term(t.left), App(Fst(), a), App(Fst(), b)),
                    apply(max_term(t.right), App(Snd(), a), App(Snd(), b)))
        return Lam("a", t, Lam("b", t, body))
    z = Var("z")
    body = Lam("z", t.dom, apply(max_term(t.cod), App(a, z), App(b, z)))
    return Lam("a", t, Lam("b", t, body))


def rec_majorant(t: FiniteType) -> Term:
    """Rec*[t] = lam n b s. Rec[t] n b (lam k r. max_t r (s k r))."""
    n, b, s, k, r = (Var(c) for c in "nbskr")
    step = Lam("k", BASE, Lam("r", t, apply(max_term(t), r, apply(s, k, r))))
    body = apply(Rec(t), n, b, step)
    return Lam("n", BASE, Lam("b", t, Lam("s", Arrow(BASE, Arrow(t, t)), body)))


def majorant(t: Term) -> Term:
    """Howard-style syntactic majorant: every constructor is replaced by a monotone one."""
    if isinstance(t, Rec):
        return rec_majorant(t.rtype)
    if isinstance(t, Lam):
        return Lam(t.var, t.vtype, majorant(t.body))
    if isinstance(t, App):
        return App(majorant(t.fn), majorant(t.arg))
    if isinstance(t, Pair):
        return Pair(majorant(t.left), majorant(t.right))
    return t


@dataclass(frozen=True)
class MajorantCertificate:
    type: FiniteType
    B: int
    majorizes: bool
    monotone: bool
    skipped: bool = False

    @property
    def ok(self) -> bool:
        return self.skipped or (self.majorizes and self.monotone)


def certify_majorant(term: Term, t: FiniteType, Bs=(1, 2), cap: int = 200_000) -> list[MajorantCertificate]:
    star = majorant(term)
    out = []
    for B in Bs:
        mm = MajModel(B, cap)
        try:
            mm.model.elements(t)
            x = eval_finite_model(term, B, model=mm.model)
            y = eval_finite_model(star, B, model=mm.model)
        except ModelSizeError:
            out.append(MajorantCertificate(t, B, False, False, skipped=True))
            continue
        out.append(MajorantCertificate(t, B, mm.leq(x, y, t), mm.monotone(y, t)))
    return out
