"""Independent audits of checked proof scripts.

Arithmetic lemmas are hypotheses of the kernel; here they are spot-checked
by sampling over the standard numbers.  The mutation suite perturbs one
justification at a time and expects the kernel to reject every variant.
"""
from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from typing import Iterator, Optional

from .checker import desugar_monotone, unfold_relation
from .evaluator import Fuel, FuelExhausted, evaluate
from .kernel import KernelError, Script, _STEP_RE, check_script, library_files, parse_script
from .majorizability import leq_star_sampled
from .syntax import (
    And, Arrow, BASE, Base, BQuant, Eq, Falsum, Formula, Implies, Or, Quant, Rel, St,
    print_type,
)

TYPE1 = Arrow(BASE, BASE)
TYPE2 = Arrow(TYPE1, BASE)


# ------------------------------------------------------------- sampling

class _Domain:
    """Deterministic sample sets per type."""

    def __init__(self, rng: random.Random, size: int):
        self.nat = list(range(8)) + [rng.randrange(8, 40) for _ in range(4)]
        self.rng = rng
        self.size = size
        self._cache: dict = {}

    def values(self, t) -> list:
        if isinstance(t, Base):
            return self.nat
        if t not in self._cache:
            self._cache[t] = self._make(t)
        return self._cache[t]

    def _make(self, t) -> list:
        rng = self.rng
        if t == TYPE1:
            fs = [lambda n, c=c: c for c in range(3)]
            fs += [lambda n: n, lambda n: n % 2, lambda n: 1 if n < 5 else 0]
            for _ in range(self.size):
                head = [rng.randrange(0, 1 + rng.choice((1, 3, 9))) for _ in range(14)]
                tail = rng.randrange(0, 3)
                fs.append(lambda n, h=head, c=tail: h[n] if n < len(h) else c)
            return fs
        if t == TYPE2:
            Ys = [lambda f, c=c: c for c in range(3)]
            Ys += [lambda f, k=k: f(k) for k in range(4)]
            Ys += [lambda f, k=k: max(f(i) for i in range(k + 1)) for k in range(4)]
            Ys += [lambda f: f(f(0)), lambda f: f(0) + f(1)]
            return Ys
        raise ValueError(f"no sampler for type {print_type(t)}")


@dataclass(frozen=True)
class LemmaVerdict:
    script: str
    lemma: str
    status: str              # holds_on_samples | fails | unsupported
    detail: str = ""
    checked: int = 0
    skipped: int = 0


def _holds(f: Formula, env: dict, dom: _Domain, fuel: int) -> bool:
    if isinstance(f, Falsum):
        return False
    if isinstance(f, Eq):
        return evaluate(f.lhs, env, Fuel(fuel)) == evaluate(f.rhs, env, Fuel(fuel))
    if isinstance(f, St):
        raise ValueError("st is not meaningful in a sampled standard model")
    if isinstance(f, And):
        return _holds(f.left, env, dom, fuel) and _holds(f.right, env, dom, fuel)
    if isinstance(f, Or):
        return _holds(f.left, env, dom, fuel) or _holds(f.right, env, dom, fuel)
    if isinstance(f, Implies):
        return not _holds(f.left, env, dom, fuel) or _holds(f.right, env, dom, fuel)
    if isinstance(f, BQuant):
        n = evaluate(f.bound, env, Fuel(fuel))
        test = (_holds(f.body, {**env, f.var: i}, dom, fuel) for i in range(n + 1))
        return all(test) if f.kind == "forall" else any(test)
    if isinstance(f, Quant):
        if f.kind not in ("forall", "exists"):
            return _holds(desugar_monotone(f), env, dom, fuel)
        test = (_holds(f.body, {**env, f.var: v}, dom, fuel) for v in dom.values(f.vtype))
        return all(test) if f.kind == "forall" else any(test)
    if isinstance(f, Rel):
        if f.kind == "maj" and f.rtype in (BASE, TYPE1, TYPE2):
            x, y = evaluate(f.lhs, env, Fuel(fuel)), evaluate(f.rhs, env, Fuel(fuel))
            # type-1 samples stay on the small ordered pairs; unary arithmetic is slow
            n = 36 if f.rtype == TYPE1 else 60
            return leq_star_sampled(x, y, f.rtype, n_samples=n).status != "fails"
        if isinstance(f.rtype, Base):
            a, b = evaluate(f.lhs, env, Fuel(fuel)), evaluate(f.rhs, env, Fuel(fuel))
            return a <= b if f.kind == "le" else a == b
        return _holds(unfold_relation(f), env, dom, fuel)
    raise TypeError(f"cannot sample {f!r}")


def _prefix(f: Formula):
    binders = []
    while isinstance(f, Quant) and f.kind == "forall":
        binders.append((f.var, f.vtype))
        f = f.body
    return binders, f


def spot_check_lemmas(script: Script, points: int = 600, seed: int = 0,
                      fuel: int = 20_000) -> list[LemmaVerdict]:
    """Sample every declared lemma at up to ``points`` instances of its universal prefix.

    Declared constants range over 0..8.  An instance whose evaluation runs out
    of fuel is skipped and counted; a lemma with no evaluable instance is
    reported as unsupported.
    """
    out = []
    for name, f in sorted(script.lemmas.items()):
        rng = random.Random(f"{seed}:{script.name}:{name}")
        dom = _Domain(rng, 12)
        binders, matrix = _prefix(f)
        pools = [[(c, k) for k in range(9)] for c in script.consts]
        per = max(3, int(round(points ** (1 / max(1, len(binders))))))
        for var, t in binders:
            vals = dom.values(t)
            if len(vals) > per:
                vals = vals[: per // 2] + rng.sample(vals[per // 2:], per - per // 2)
            pools.append([(var, v) for v in vals])
        checked = skipped = 0
        bad = None
        try:
            for combo in itertools.product(*pools):
                env = dict(combo)
                try:
                    ok = _holds(matrix, env, dom, fuel)
                except FuelExhausted:
                    skipped += 1
                    continue
                checked += 1
                if not ok:
                    bad = env
                    break
        except ValueError as exc:
            out.append(LemmaVerdict(script.name, name, "unsupported", str(exc)))
            continue
        if bad is not None:
            shown = {k: (v if isinstance(v, int) else "<fn>") for k, v in bad.items()}
            out.append(LemmaVerdict(script.name, name, "fails", f"at {shown}", checked, skipped))
        elif checked == 0:
            out.append(LemmaVerdict(script.name, name, "unsupported", "no instance evaluated", 0, skipped))
        else:
            out.append(LemmaVerdict(script.name, name, "holds_on_samples", "", checked, skipped))
    return out


def spot_check_library(points: int = 600, seed: int = 0) -> list[LemmaVerdict]:
    out = []
    for path in library_files():
        out += spot_check_lemmas(parse_script(path.read_text()), points, seed)
    return out


# ------------------------------------------------------------ mutations

@dataclass(frozen=True)
class Mutation:
    script: str
    step: int
    original: str
    mutated: str
    text: str


def _mutate_just(rule: str, args: str, step: int, earlier: list[int], script: Script) -> Optional[str]:
    """One deterministic perturbation of a justification, or None."""
    parts = [a.strip() for a in re.split(r";", args)] if args else []
    def other(n: int, avoid=()) -> Optional[int]:
        cands = [m for m in reversed(earlier) if m != n and m not in avoid]
        return cands[0] if cands else None

    if rule == "mp" and "," in args:
        i, j = (int(x) for x in args.split(","))
        k = other(j, (i,))
        return None if k is None else f"mp({i}, {k})"
    if rule in ("forall_e", "exists_i") and len(parts) == 2:
        term = "S 0" if parts[1] in ("0",) else "0"
        return f"{rule}({parts[0]}; {term})"
    if rule == "axiom":
        ident = parts[0]
        if ident.endswith("^st"):
            return f"axiom({'; '.join([ident[:-3]] + parts[1:])})"
        alt = [t for t in script.theory if t != ident]
        return f"axiom({'; '.join([alt[0]] + parts[1:])})" if alt else None
    if rule == "imp_i":
        a, b = (int(x) for x in parts[0].split(".."))
        return f"imp_i({a}..{b - 1})" if b - 1 >= a else f"imp_i({a + 1}..{b})"
    if rule == "lemma":
        alt = sorted(n for n in script.lemmas if n != parts[0])
        return f"lemma({alt[0] if alt else 'MISSING'})"
    if rule == "eq_subst" and len(parts) == 3:
        return f"eq_subst({parts[1]}; {parts[0]}; {parts[2]})"
    if rule in ("and_e", "falsum_e", "unfold", "forall_i", "exists_e", "or_e", "and_i", "ia_st"):
        head = int(parts[0].split(",")[0]) if parts else None
        k = other(head) if head is not None else None
        if k is None:
            return None
        rest = args[len(parts[0].split(",")[0]):] if rule in ("and_i", "ia_st") else args[len(parts[0]):]
        return f"{rule}({k}{rest})"
    if rule == "eq_refl":
        return f"unfold({earlier[-1]})" if earlier else None
    if rule == "eval_leaf":
        return "eq_refl"
    return None


def mutations(text: str) -> Iterator[Mutation]:
    """Every single-justification mutation of a script, one per step."""
    script = parse_script(text)
    lines = text.splitlines()
    earlier: list[int] = []
    for idx, raw in enumerate(lines):
        body = raw.split("#", 1)[0].rstrip()
        m = _STEP_RE.match(body)
        if not m:
            continue
        number, formula, rule, args = m.groups()
        number = int(number)
        if rule != "assume":
            just = _mutate_just(rule, args or "", number, earlier, script)
            if just is not None:
                original = f"{rule}({args})" if args is not None else rule
                new_line = f"{number} |{formula}| {just}"
                new_text = "\n".join(lines[:idx] + [new_line] + lines[idx + 1:])
                yield Mutation(script.name, number, original, just, new_text)
        earlier.append(number)


@dataclass(frozen=True)
class MutationOutcome:
    mutation: Mutation
    rejected: bool
    reason: str


def run_mutations(names=("L2", "L3", "L5")) -> list[MutationOutcome]:
    out = []
    for path in library_files():
        if path.stem.split("_")[0] not in names:
            continue
        for mut in mutations(path.read_text()):
            try:
                check_script(mut.text)
            except KernelError as exc:
                out.append(MutationOutcome(mut, True, str(exc)[:160]))
            else:
                out.append(MutationOutcome(mut, False, "accepted"))
    return out
