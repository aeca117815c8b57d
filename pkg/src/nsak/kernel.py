"""Proof-script checker: dependency-tracking natural deduction over the schema catalog.

Every step carries the set of open assumptions it depends on; introduction
rules discharge them.  Formulas are compared after canonicalization: sugar
relations, st-quantifiers, monotone and bounded quantifiers are unfolded,
falsum becomes 0 = 1 and all terms are normalized, then compared up to
renaming of bound variables.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from . import binding
from .checker import (
    TypeCheckError, check_formula, desugar_monotone, infer_type, is_internal, relativize,
)
from .evaluator import Fuel, FuelExhausted, UnboundedQuantifier, eval_bounded, normalize
from .majorizability import unfold_maj
from .prelude import PRELUDE, show
from .schemas import CATALOG, DG_AXIOMS, Instantiation, SideConditionError, instantiate
from .syntax import (
    And, App, BASE, BQuant, Base, Eq, Falsum, FiniteType, Formula, Implies, Meta, NumLit,
    Or, ParseError, Quant, Rel, St, Succ, Term, Var, Zero, apply, parse, print_ast,
)

LIBRARY_DIR = Path(__file__).parent / "library"
LEAF_SCALES = range(1, 9)
DEFAULT_KERNEL_FUEL = 5_000_000

_ZERO_EQ_ONE = Eq(Zero(), NumLit(1))
_SUB = PRELUDE["sub"]


class KernelError(Exception):
    def __init__(self, step, rule: str, message: str):
        self.step = step
        self.rule = rule
        super().__init__(f"step {step} ({rule}): {message}")


# ---------------------------------------------------------- canonical forms

class Canonicalizer:
    def __init__(self, fuel: Fuel):
        self.fuel = fuel
        self._memo: dict[Formula, Formula] = {}

    def term(self, t: Term) -> Term:
        return normalize(t, self.fuel)

    def __call__(self, f: Formula) -> Formula:
        out = self._memo.get(f)
        if out is None:
            out = self._canon(f)
            self._memo[f] = out
        return out

    def _canon(self, f: Formula) -> Formula:
        if isinstance(f, Falsum):
            return _ZERO_EQ_ONE
        if isinstance(f, Eq):
            return Eq(self.term(f.lhs), self.term(f.rhs))
        if isinstance(f, St):
            return St(f.stype, self.term(f.term))
        if isinstance(f, Rel):
            if f.kind == "maj":
                return self(unfold_maj(f.lhs, f.rhs, f.rtype))
            if isinstance(f.rtype, Base):
                if f.kind == "le":
                    return Eq(self.term(apply(_SUB, f.lhs, f.rhs)), Zero())
                return Eq(self.term(f.lhs), self.term(f.rhs))
            from .checker import unfold_relation
            return self(unfold_relation(f))
        if isinstance(f, (And, Or, Implies)):
            return type(f)(self(f.left), self(f.right))
        if isinstance(f, Quant):
            body = self(f.body)
            guard = St(f.vtype, Var(f.var))
            if f.kind == "forall":
                return Quant("forall", f.var, f.vtype, body)
            if f.kind == "exists":
                return Quant("exists", f.var, f.vtype, body)
            if f.kind == "forall-st":
                return Quant("forall", f.var, f.vtype, Implies(guard, body))
            if f.kind == "exists-st":
                return Quant("exists", f.var, f.vtype, And(guard, body))
            return self(desugar_monotone(f))
        if isinstance(f, BQuant):
            var, body = f.var, f.body
            if var in binding.term_free(f.bound):
                var = binding.fresh(var, binding.term_free(f.bound) | binding.formula_free(body))
                body = binding.subst_formula(body, {f.var: Var(var)})
            guard = Eq(self.term(apply(_SUB, Var(var), f.bound)), Zero())
            inner = self(body)
            if f.kind == "forall":
                return Quant("forall", var, BASE, Implies(guard, inner))
            return Quant("exists", var, BASE, And(guard, inner))
        if isinstance(f, Meta):
            raise TypeError(f"unexpanded placeholder @{f.name}")
        raise TypeError(f"not a formula: {f!r}")


def _numeral_value(t: Term) -> Optional[int]:
    if isinstance(t, Zero):
        return 0
    if isinstance(t, NumLit):
        return t.n
    return None


# --------------------------------------------------------------- scripts

@dataclass(frozen=True)
class Step:
    number: int
    formula: Formula
    rule: str
    args: tuple
    line: int


@dataclass
class Script:
    name: str
    theory: tuple
    consts: dict
    vars: dict
    defs: dict
    preds: dict
    lemmas: dict
    steps: list
    source: str = ""

    @property
    def types(self) -> dict:
        return {**self.consts, **self.vars}


_STEP_RE = re.compile(r"^\s*(\d+)\s*\|(.*)\|\s*([A-Za-z_]+)\s*(?:\((.*)\))?\s*$")


def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    tail = "".join(cur).strip()
    if tail or parts:
        parts.append(tail)
    return parts


def _typed_names(text: str) -> dict:
    out = {}
    for item in _split_top(text, ","):
        if not item:
            continue
        name, _, ty = item.partition(":")
        out[name.strip()] = parse("type", ty.strip())
    return out


def parse_script(text: str) -> Script:
    """Read a proof script (see the library directory for the format)."""
    name, theory = "", ()
    consts, vars_, defs, preds, lemmas, steps = {}, {}, dict(PRELUDE), {}, {}, []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        try:
            m = _STEP_RE.match(line)
            if m:
                number, body, rule, args = m.groups()
                f = parse("formula", body.strip(), defs, allow_meta=True)
                if preds and binding._meta_names(f):
                    f = binding.subst_formula(f, {}, preds)
                steps.append(Step(int(number), f, rule, tuple(_split_args(args)), lineno))
                continue
            key, _, rest = line.partition(":")
            key = key.strip()
            if key == "name":
                name = rest.strip()
            elif key == "theory":
                theory = tuple(x.strip() for x in rest.split(",") if x.strip())
            elif key == "const":
                consts.update(_typed_names(rest))
            elif key == "var":
                vars_.update(_typed_names(rest))
            elif line.startswith("def "):
                dname, _, body = line[4:].partition(":=")
                defs[dname.strip()] = parse("term", body.strip(), defs)
            elif line.startswith("pred "):
                pname, _, body = line[5:].partition(":=")
                preds[pname.strip()] = parse("abstraction", body.strip(), defs)
            elif line.startswith("lemma "):
                lname, _, body = line[6:].partition(":=")
                lemmas[lname.strip()] = parse("formula", body.strip(), defs)
            else:
                raise KernelError("-", "header", f"line {lineno}: cannot read {line.strip()!r}")
        except ParseError as exc:
            raise KernelError(f"line {lineno}", "parse", str(exc)) from None
    return Script(name, theory, consts, vars_, defs, preds, lemmas, steps, text)


def _split_args(args: Optional[str]) -> list[str]:
    if args is None or not args.strip():
        return []
    return _split_top(args, ";" if ";" in args else ",")


# ------------------------------------------------------------- checking

@dataclass(frozen=True)
class Leaf:
    step: int
    formula: Formula
    scaled: bool        # depends on declared constants, checked at N = 1..8 only


@dataclass(frozen=True)
class CheckedTheorem:
    name: str
    conclusion: Formula
    hypotheses: tuple           # undischarged assumptions
    lemmas: tuple               # (name, formula) internal arithmetic facts used
    leaves: tuple               # Leaf records the conclusion depends on
    axioms: tuple               # schema ids used, ^st marks relativized instances
    theory: tuple
    audit: tuple

    @property
    def sequent(self) -> str:
        hyps = [show(h) for h in self.hypotheses]
        hyps += [f"{n}" for n, _ in self.lemmas]
        hyps += [f"leaf[{leaf.step}]" for leaf in self.leaves]
        return f"{', '.join(hyps) or '.'} |- {show(self.conclusion)}"

    @property
    def dg_only(self) -> bool:
        return all(a.split("^")[0] in DG_AXIOMS and "^" not in a for a in self.axioms)


@dataclass
class _Line:
    step: Step
    canon: Formula
    deps: frozenset


class Kernel:
    def __init__(self, script: Script, fuel: int = DEFAULT_KERNEL_FUEL):
        self.s = script
        self.types = script.types
        self.canon = Canonicalizer(Fuel(fuel))
        self.lines: dict[int, _Line] = {}
        self.audit: list[str] = []
        self.leaves: dict[int, Leaf] = {}
        self.cur: Optional[Step] = None

    # helpers -----------------------------------------------------------
    def fail(self, msg: str):
        raise KernelError(self.cur.number, self.cur.rule, msg)

    def get(self, ref: str) -> _Line:
        try:
            n = int(ref)
        except ValueError:
            self.fail(f"expected a step number, got {ref!r}")
        if n not in self.lines:
            self.fail(f"step {n} is not available")
        return self.lines[n]

    def rng(self, ref: str) -> tuple[_Line, _Line]:
        a, sep, b = ref.partition("..")
        if not sep:
            self.fail(f"expected a range a..b, got {ref!r}")
        first, last = self.get(a.strip()), self.get(b.strip())
        if first.step.rule != "assume":
            self.fail(f"step {first.step.number} is not an assumption")
        return first, last

    def same(self, a: Formula, b: Formula) -> bool:
        return binding.alpha_eq(a, b)

    def expect(self, got: Formula, want: Formula, what: str):
        if not self.same(got, want):
            self.fail(f"{what} does not match: expected {print_ast(want)}, found {print_ast(got)}")

    def term(self, text: str) -> Term:
        try:
            t = parse("term", text, self.s.defs)
        except ParseError as exc:
            self.fail(f"bad term {text!r}: {exc}")
        return t

    def typed(self, t: Term) -> FiniteType:
        try:
            return infer_type(t, self.types)
        except TypeCheckError as exc:
            self.fail(f"ill-typed term {print_ast(t)}: {exc}")

    def quant(self, line: _Line, kind: str) -> Quant:
        q = line.canon
        if not (isinstance(q, Quant) and q.kind == kind):
            self.fail(f"step {line.step.number} is not a {kind} formula: {print_ast(q)}")
        return q

    def inst(self, q: Quant, t: Term) -> Formula:
        return self.canon(binding.subst_formula(q.body, {q.var: t}))

    def hyp_free(self, deps: Iterable) -> set[str]:
        out = set()
        for d in deps:
            if isinstance(d, int):
                out |= binding.formula_free(self.lines[d].canon)
        return out

    def eigen(self, name: str, vtype: FiniteType, forbidden: set[str], where: str):
        if name not in self.s.vars:
            self.fail(f"eigenvariable {name} is not declared")
        if self.s.vars[name] != vtype:
            self.fail(f"eigenvariable {name} has the wrong type")
        if name in forbidden:
            self.fail(f"eigenvariable {name} occurs free in {where}")

    # main loop -----------------------------------------------------------
    def run(self) -> CheckedTheorem:
        if not self.s.steps:
            raise KernelError("-", "script", "no steps")
        for step in self.s.steps:
            self.cur = step
            if step.number in self.lines:
                self.fail("duplicate step number")
            try:
                check_formula(step.formula, self.types)
            except TypeCheckError as exc:
                self.fail(f"ill-typed formula: {exc}")
            handler = getattr(self, f"rule_{step.rule}", None)
            if handler is None:
                self.fail("unknown rule")
            try:
                canon = self.canon(step.formula)
                deps = handler(step, canon)
            except FuelExhausted as exc:
                self.fail(str(exc))
            self.lines[step.number] = _Line(step, canon, frozenset(deps))
            self.audit.append(f"{step.number} {step.rule} ok")
        last = self.lines[self.s.steps[-1].number]
        hyps = tuple(self.lines[d].step.formula for d in sorted(x for x in last.deps if isinstance(x, int)))
        lemmas = tuple((n, self.s.lemmas[n]) for kind, n in sorted(
            (d for d in last.deps if isinstance(d, tuple) and d[0] == "lemma")))
        leaves = tuple(self.leaves[n] for kind, n in sorted(
            (d for d in last.deps if isinstance(d, tuple) and d[0] == "leaf")))
        axioms = tuple(sorted({n for kind, n in (d for d in last.deps if isinstance(d, tuple))
                               if kind == "axiom"}))
        return CheckedTheorem(self.s.name, last.step.formula, hyps, lemmas, leaves, axioms,
                              self.s.theory, tuple(self.audit))

    # rules ---------------------------------------------------------------
    def rule_assume(self, step, canon):
        return {step.number}

    def rule_axiom(self, step, canon):
        if not step.args:
            self.fail("missing schema id")
        ident = step.args[0]
        if ident not in self.s.theory:
            self.fail(f"{ident} is not part of the declared theory")
        base, _, mark = ident.partition("^")
        if base not in CATALOG:
            self.fail(f"unknown schema {base}")
        if mark not in ("", "st"):
            self.fail(f"unknown marker ^{mark}")
        spec = CATALOG[base]
        kw = {}
        for arg in step.args[1:]:
            k, sep, v = arg.partition("=")
            if not sep:
                self.fail(f"expected key=value, got {arg!r}")
            kw[k.strip()] = v.strip()
        types = ()
        if "type" in kw:
            types = tuple(parse("type", t.strip()) for t in _split_top(kw.pop("type"), ","))
        formulas = []
        for name in spec.formulas:
            if name not in kw:
                self.fail(f"{base} needs {name}=...")
            text = kw.pop(name)
            if text.startswith("@"):
                if text[1:] not in self.s.preds:
                    self.fail(f"unknown predicate {text}")
                formulas.append(self.s.preds[text[1:]])
            else:
                formulas.append(parse("abstraction", text, self.s.defs))
        terms = []
        for name in spec.terms:
            if name not in kw:
                self.fail(f"{base} needs {name}=...")
            terms.append(self.term(kw.pop(name)))
        if kw:
            self.fail(f"unexpected arguments {sorted(kw)}")
        try:
            f = instantiate(Instantiation(base, tuple(formulas), types, tuple(terms)), self.types)
        except (SideConditionError, TypeCheckError, ValueError) as exc:
            self.fail(f"side condition: {exc}")
        if mark == "st":
            f = relativize(f)
        self.expect(canon, self.canon(f), "axiom instance")
        return {("axiom", ident)}

    def rule_lemma(self, step, canon):
        if len(step.args) != 1 or step.args[0] not in self.s.lemmas:
            self.fail("unknown lemma")
        name = step.args[0]
        f = self.s.lemmas[name]
        if not is_internal(f):
            self.fail(f"lemma {name} is not internal")
        extra = binding.formula_free(f) - set(self.s.consts)
        if extra:
            self.fail(f"lemma {name} has free variables {sorted(extra)}")
        self.expect(canon, self.canon(f), "lemma")
        return {("lemma", name)}

    def rule_mp(self, step, canon):
        a, b = (self.get(x) for x in self._n(step, 2))
        for imp, ant in ((a, b), (b, a)):
            if isinstance(imp.canon, Implies) and self.same(imp.canon.left, ant.canon):
                self.expect(canon, imp.canon.right, "consequent")
                return imp.deps | ant.deps
        self.fail("no implication whose antecedent matches the other premise")

    def rule_and_i(self, step, canon):
        a, b = (self.get(x) for x in self._n(step, 2))
        self.expect(canon, And(a.canon, b.canon), "conjunction")
        return a.deps | b.deps

    def rule_and_e(self, step, canon):
        (a,) = (self.get(x) for x in self._n(step, 1))
        if not isinstance(a.canon, And):
            self.fail("premise is not a conjunction")
        if not (self.same(canon, a.canon.left) or self.same(canon, a.canon.right)):
            self.fail("conclusion is neither conjunct")
        return a.deps

    def rule_or_i(self, step, canon):
        (a,) = (self.get(x) for x in self._n(step, 1))
        if not isinstance(canon, Or):
            self.fail("conclusion is not a disjunction")
        if not (self.same(canon.left, a.canon) or self.same(canon.right, a.canon)):
            self.fail("premise is neither disjunct")
        return a.deps

    def rule_or_e(self, step, canon):
        if len(step.args) != 3:
            self.fail("expected or_e(i; a..b; c..d)")
        d = self.get(step.args[0])
        if not isinstance(d.canon, Or):
            self.fail("premise is not a disjunction")
        a1, b1 = self.rng(step.args[1])
        a2, b2 = self.rng(step.args[2])
        self.expect(a1.canon, d.canon.left, "left case assumption")
        self.expect(a2.canon, d.canon.right, "right case assumption")
        self.expect(b1.canon, canon, "left case conclusion")
        self.expect(b2.canon, canon, "right case conclusion")
        return d.deps | (b1.deps - {a1.step.number}) | (b2.deps - {a2.step.number})

    def rule_imp_i(self, step, canon):
        if len(step.args) != 1:
            self.fail("expected imp_i(a..b)")
        a, b = self.rng(step.args[0])
        self.expect(canon, Implies(a.canon, b.canon), "implication")
        return b.deps - {a.step.number}

    def rule_forall_i(self, step, canon):
        if len(step.args) != 2:
            self.fail("expected forall_i(i; var)")
        a = self.get(step.args[0])
        y = step.args[1].strip()
        if not (isinstance(canon, Quant) and canon.kind == "forall"):
            self.fail("conclusion is not universal")
        self.eigen(y, canon.vtype, self.hyp_free(a.deps) | binding.formula_free(canon), "an open assumption or the conclusion")
        self.expect(a.canon, self.inst(canon, Var(y)), "premise")
        return a.deps

    def rule_forall_e(self, step, canon):
        if len(step.args) != 2:
            self.fail("expected forall_e(i; term)")
        a = self.get(step.args[0])
        q = self.quant(a, "forall")
        t = self.term(step.args[1])
        if self.typed(t) != q.vtype:
            self.fail(f"term {print_ast(t)} does not have type {print_ast(q.vtype)}")
        self.expect(canon, self.inst(q, t), "instance")
        return a.deps

    def rule_exists_i(self, step, canon):
        if len(step.args) != 2:
            self.fail("expected exists_i(i; term)")
        a = self.get(step.args[0])
        if not (isinstance(canon, Quant) and canon.kind == "exists"):
            self.fail("conclusion is not existential")
        t = self.term(step.args[1])
        if self.typed(t) != canon.vtype:
            self.fail(f"witness {print_ast(t)} does not have type {print_ast(canon.vtype)}")
        self.expect(a.canon, self.inst(canon, t), "premise")
        return a.deps

    def rule_exists_e(self, step, canon):
        if len(step.args) != 3:
            self.fail("expected exists_e(i; a..b; var)")
        e = self.get(step.args[0])
        q = self.quant(e, "exists")
        a, b = self.rng(step.args[1])
        y = step.args[2].strip()
        rest = b.deps - {a.step.number}
        forbidden = (self.hyp_free(rest | e.deps) | binding.formula_free(canon)
                     | binding.formula_free(e.canon))
        self.eigen(y, q.vtype, forbidden, "the conclusion, the premise or an open assumption")
        self.expect(a.canon, self.inst(q, Var(y)), "case assumption")
        self.expect(b.canon, canon, "case conclusion")
        return e.deps | rest

    def rule_falsum_e(self, step, canon):
        (a,) = (self.get(x) for x in self._n(step, 1))
        f = a.canon
        if isinstance(f, Eq):
            x, y = _numeral_value(f.lhs), _numeral_value(f.rhs)
            if x is not None and y is not None and x != y:
                return a.deps
        self.fail(f"premise is not absurd: {print_ast(f)}")

    def rule_eq_refl(self, step, canon):
        if not (isinstance(canon, Eq) and binding.alpha_eq_term(canon.lhs, canon.rhs)):
            self.fail("sides are not convertible")
        return set()

    def rule_eq_subst(self, step, canon):
        if len(step.args) != 3:
            self.fail("expected eq_subst(i; j; w:type. A)")
        e, p = self.get(step.args[0]), self.get(step.args[1])
        if not isinstance(e.canon, Eq):
            self.fail("first premise is not an equation")
        var, _, motive = step.args[2].partition(".")
        try:
            params, body = parse("abstraction", f"[{var.strip()}] {motive.strip()}", self.s.defs)
        except ParseError as exc:
            self.fail(f"bad motive: {exc}")
        (w, wt), = params
        try:
            check_formula(body, {**self.types, w: wt})
        except TypeCheckError as exc:
            self.fail(f"ill-typed motive: {exc}")
        s, t = e.canon.lhs, e.canon.rhs
        for a, b in ((s, t), (t, s)):
            before = self.canon(binding.subst_formula(body, {w: a}))
            after = self.canon(binding.subst_formula(body, {w: b}))
            if self.same(p.canon, before) and self.same(canon, after):
                return e.deps | p.deps
        self.fail("motive does not connect the premise and the conclusion")

    def rule_unfold(self, step, canon):
        (a,) = (self.get(x) for x in self._n(step, 1))
        self.expect(canon, a.canon, "unfolded formula")
        return a.deps

    def rule_ia_st(self, step, canon):
        if "IA_ST" not in self.s.theory:
            self.fail("IA_ST is not part of the declared theory")
        base, ind = (self.get(x) for x in self._n(step, 2))
        ok = (isinstance(canon, Quant) and canon.kind == "forall" and canon.vtype == BASE
              and isinstance(canon.body, Implies) and canon.body.left == St(BASE, Var(canon.var)))
        if not ok:
            self.fail("conclusion is not of the form forall-st n:0. Phi(n)")
        n, phi = canon.var, canon.body.right
        self.expect(base.canon, self.canon(binding.subst_formula(phi, {n: Zero()})), "base case")
        step_f = Quant("forall", n, BASE, Implies(St(BASE, Var(n)), Implies(
            phi, binding.subst_formula(phi, {n: App(Succ(), Var(n))}))))
        self.expect(ind.canon, self.canon(step_f), "induction step")
        return base.deps | ind.deps | {("axiom", "IA_ST")}

    def rule_eval_leaf(self, step, canon):
        budget = int(step.args[0]) if step.args else 100_000
        f = step.formula
        if not is_internal(f):
            self.fail("leaf is not internal")
        free = binding.formula_free(f)
        if free - set(self.s.consts):
            self.fail(f"leaf has free variables {sorted(free - set(self.s.consts))}")
        if any(self.s.consts[c] != BASE for c in free):
            self.fail("leaf constants must have type 0")
        scales = [dict.fromkeys(free, k) for k in LEAF_SCALES] if free else [{}]
        for env in scales:
            try:
                ok = eval_bounded(f, env, budget)
            except UnboundedQuantifier as exc:
                self.fail(f"leaf is not bounded: {exc}")
            except FuelExhausted:
                self.fail(f"leaf exceeded budget {budget}")
            if not ok:
                self.fail(f"leaf is false at {env or 'closed'}")
        self.leaves[step.number] = Leaf(step.number, f, bool(free))
        return {("leaf", step.number)}

    def _n(self, step, k: int) -> list[str]:
        if len(step.args) != k:
            self.fail(f"expected {k} premises")
        return list(step.args)


def check_script(text: str, fuel: int = DEFAULT_KERNEL_FUEL) -> CheckedTheorem:
    return Kernel(parse_script(text), fuel).run()


def check_file(path, fuel: int = DEFAULT_KERNEL_FUEL) -> CheckedTheorem:
    return check_script(Path(path).read_text(), fuel)


def library_files() -> list[Path]:
    return sorted(LIBRARY_DIR.glob("*.prf"))


def load_library(fuel: int = DEFAULT_KERNEL_FUEL) -> dict[str, CheckedTheorem]:
    return {p.stem: check_file(p, fuel) for p in library_files()}
