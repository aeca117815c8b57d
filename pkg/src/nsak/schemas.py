"""Axiom schemas and named principles: templates, instantiation, side conditions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence

from . import binding
from .checker import (
    TypeCheckError, check_formula, desugar_monotone, infer_type, is_internal, relativize,
    unfold_equality,
)
from .evaluator import ModelSizeError, evaluate
from .majorizability import MajModel
from .prelude import PRELUDE
from .syntax import (
    Arrow, BASE, BQuant, Base, Eq, Falsum, FiniteType, Formula, Implies, And, Or,
    Meta, Prod, Quant, Rel, St, Term, Var, parse, print_ast, print_type,
)

Abstraction = tuple  # ((name, type), ...), body


class SideConditionError(ValueError):
    def __init__(self, condition: str, offending=None):
        self.condition = condition
        self.offending = offending
        where = f": {print_ast(offending)}" if offending is not None else ""
        super().__init__(f"{condition}{where}")


@dataclass(frozen=True)
class Instantiation:
    schema: str
    formula_args: tuple = ()     # abstractions ((params), body), in the order of SchemaSpec.formulas
    type_args: tuple = ()
    term_args: tuple = ()


@dataclass(frozen=True)
class SchemaSpec:
    id: str
    description: str
    side_conditions: tuple
    formulas: tuple = ()         # placeholder names
    types: tuple = ()            # names of type holes
    terms: tuple = ()            # names of term variables replaced by term arguments
    build: Callable = None       # (types, terms) -> template text
    dg: bool = False
    transfer: bool = False
    internal_args: tuple = ()    # placeholders that must be internal
    closed_args: tuple = ()      # placeholders that must be parameter-free
    qf_args: tuple = ()          # placeholders that must be quantifier-free
    default_types: tuple = ()

    def summary(self) -> str:
        return f"{self.id}: {self.description} [{'; '.join(self.side_conditions)}]"


def _p(t: FiniteType) -> str:
    return f"({print_type(t)})"


def _cont(Y: str) -> str:
    return (f"forall f:1. f <=[1] one1 -> exists n:0. forall g:1. g <=[1] one1 -> "
            f"bar f n = bar g n -> {Y} f = {Y} g")


_TJ = "((exists n:0. f n = 0) -> phi f = 0) & (phi f = 0 -> exists n:0. f n = 0)"
_INFINITE = "forall n:0. exists b:1. b <=[1] one1 & forall m <= n. T (bar b m) = 1"


def _qf_ac(types, terms):
    *doms, cod = types
    xs = [f"x{i}" for i in range(len(doms))]
    binders = "".join(f"forall {x}:{_p(s)}. " for x, s in zip(xs, doms))
    ftype = cod
    for s in reversed(doms):
        ftype = Arrow(s, ftype)
    applied = " ".join(["F"] + xs)
    args = ", ".join(xs)
    return (f"({binders}exists y:{_p(cod)}. @phi({args}, y)) -> "
            f"exists F:{_p(ftype)}. {binders}@phi({args}, {applied})")


_SPECS: list[SchemaSpec] = [
    SchemaSpec("ST_A", "equal objects share standardness", ("any type",), types=("s",),
               build=lambda T, _: f"forall x:{_p(T[0])}. forall y:{_p(T[0])}. x =[{print_type(T[0])}] y -> (st[{print_type(T[0])}](x) -> st[{print_type(T[0])}](y))",
               dg=True, default_types=(BASE,)),
    SchemaSpec("ST_B", "standardness is downward closed under <=*", ("any type",), types=("s",),
               build=lambda T, _: f"forall y:{_p(T[0])}. forall x:{_p(T[0])}. st[{print_type(T[0])}](y) -> (x <=*[{print_type(T[0])}] y -> st[{print_type(T[0])}](x))",
               dg=True, default_types=(BASE,)),
    SchemaSpec("ST_C", "closed terms are standard", ("closed term t",), terms=("t",), dg=True),
    SchemaSpec("ST_D", "standard functions map standard arguments to standard values", ("any types",),
               types=("s", "t"),
               build=lambda T, _: (f"forall z:{_p(Arrow(T[0], T[1]))}. forall x:{_p(T[0])}. "
                                   f"st[{print_type(Arrow(T[0], T[1]))}](z) -> (st[{print_type(T[0])}](x) -> "
                                   f"st[{print_type(T[1])}](z x))"),
               dg=True, default_types=(BASE, BASE)),
    SchemaSpec("IA_ST", "external induction", ("any Phi", "closed abstraction over n:0"), formulas=("phi",),
               build=lambda T, _: "@phi(0) & (forall-st n:0. @phi(n) -> @phi(S n)) -> forall-st n:0. @phi(n)",
               dg=True, closed_args=("phi",)),
    SchemaSpec("mAC", "monotone choice", ("any Phi",), formulas=("phi",), types=("s", "t"),
               build=lambda T, _: (f"(forall~st x:{_p(T[0])}. exists~st y:{_p(T[1])}. @phi(x, y)) -> "
                                   f"exists~st f:{_p(Arrow(T[0], T[1]))}. forall~st x:{_p(T[0])}. "
                                   f"exists y:{_p(T[1])}. y <=*[{print_type(T[1])}] f x & @phi(x, y)"),
               dg=True, default_types=(BASE, BASE)),
    SchemaSpec("R", "realization", ("any Phi",), formulas=("phi",), types=("s", "t"),
               build=lambda T, _: (f"(forall x:{_p(T[0])}. exists-st y:{_p(T[1])}. @phi(x, y)) -> "
                                   f"exists~st z:{_p(T[1])}. forall x:{_p(T[0])}. "
                                   f"exists y:{_p(T[1])}. y <=*[{print_type(T[1])}] z & @phi(x, y)"),
               dg=True, default_types=(BASE, BASE)),
    SchemaSpec("I", "idealisation", ("internal phi",), formulas=("phi",), types=("s", "t"),
               build=lambda T, _: (f"(forall~st z:{_p(T[1])}. exists x:{_p(T[0])}. forall y:{_p(T[1])}. "
                                   f"y <=*[{print_type(T[1])}] z -> @phi(x, y)) -> "
                                   f"exists x:{_p(T[0])}. forall-st y:{_p(T[1])}. @phi(x, y)"),
               dg=True, internal_args=("phi",), default_types=(BASE, BASE)),
    SchemaSpec("IP", "independence of premises", ("internal phi", "any Psi"), formulas=("phi", "psi"),
               types=("s", "t"),
               build=lambda T, _: (f"((forall~st x:{_p(T[0])}. @phi(x)) -> exists~st y:{_p(T[1])}. @psi(y)) -> "
                                   f"exists~st z:{_p(T[1])}. ((forall~st x:{_p(T[0])}. @phi(x)) -> "
                                   f"exists y:{_p(T[1])}. y <=*[{print_type(T[1])}] y & "
                                   f"(y <=*[{print_type(T[1])}] z & @psi(y)))"),
               dg=True, internal_args=("phi",), default_types=(BASE, BASE)),
    SchemaSpec("M", "nonstandard Markov principle", ("internal phi", "internal psi"), formulas=("phi", "psi"),
               types=("s",),
               build=lambda T, _: (f"((forall~st x:{_p(T[0])}. @phi(x)) -> @psi()) -> "
                                   f"exists~st y:{_p(T[0])}. ((forall x:{_p(T[0])}. "
                                   f"x <=*[{print_type(T[0])}] y -> @phi(x)) -> @psi())"),
               dg=True, internal_args=("phi", "psi"), default_types=(BASE,)),
    SchemaSpec("MAJ", "every standard object has a standard majorant", ("any type",), types=("s",),
               build=lambda T, _: f"forall-st x:{_p(T[0])}. exists-st y:{_p(T[0])}. x <=*[{print_type(T[0])}] y",
               dg=True, default_types=(BASE,)),
    SchemaSpec("E", "extensionality at an arrow type", ("arrow type",), types=("s",),
               build=lambda T, _: (f"forall phi:{_p(T[0])}. forall x:{_p(T[0].dom)}. forall y:{_p(T[0].dom)}. "
                                   f"x =[{print_type(T[0].dom)}] y -> phi x =[{print_type(T[0].cod)}] phi y"),
               dg=True, default_types=(Arrow(Arrow(BASE, BASE), BASE),)),
    SchemaSpec("MP", "Markov's principle", ("none",),
               build=lambda T, _: "forall f:1. (((exists n:0. f n = 0) -> false) -> false) -> exists n:0. f n = 0"),
    SchemaSpec("PF_TP_E", "parameter-free transfer, existential form",
               ("internal phi", "all free variables shown"), formulas=("phi",), transfer=True,
               internal_args=("phi",), closed_args=("phi",)),
    SchemaSpec("PF_TP_A", "parameter-free transfer, universal form",
               ("internal phi", "all free variables shown"), formulas=("phi",), transfer=True,
               internal_args=("phi",), closed_args=("phi",)),
    SchemaSpec("PI01_TRANS", "transfer for universal number statements", ("none",), transfer=True,
               build=lambda T, _: "forall-st f:1. (forall-st n:0. f n = 0) -> forall n:0. f n = 0"),
    SchemaSpec("E2_EXISTS", "the Turing jump functional exists", ("none",),
               build=lambda T, _: f"exists phi:2. forall f:1. {_TJ}"),
    SchemaSpec("TJ_ST", "a standard jump functional on standard inputs", ("none",),
               build=lambda T, _: f"exists-st phi:2. forall-st f:1. {_TJ}"),
    SchemaSpec("ACA0", "arithmetical comprehension for functions", ("none",),
               build=lambda T, _: ("forall f:0->0->0. f <=[0->0->0] (lam a:0. lam b:0. 1) -> "
                                   "exists g:1. g <=[1] one1 & forall n:0. "
                                   "((exists m:0. f n m = 0) -> g n = 0) & (g n = 0 -> exists m:0. f n m = 0)")),
    SchemaSpec("WT", "weak transfer for binary sequences", ("none",), transfer=True,
               build=lambda T, _: ("forall-st Y:2. (exists f:1. f <=[1] one1 & Y f = 0) -> "
                                   "exists-st f:1. f <=[1] one1 & Y f = 0")),
    SchemaSpec("FAN", "fan theorem", ("none",),
               build=lambda T, _: ("forall T:1. T <=[1] one1 -> (forall a:1. a <=[1] one1 -> "
                                   "exists m:0. T (bar a m) = 0) -> exists n:0. forall b:1. "
                                   "b <=[1] one1 -> T (bar b n) = 0")),
    SchemaSpec("WKL", "weak Koenig lemma", ("none",),
               build=lambda T, _: (f"forall T:1. T <=[1] one1 -> ({_INFINITE}) -> "
                                   "exists b:1. b <=[1] one1 & forall m:0. T (bar b m) = 1")),
    SchemaSpec("UWKL", "uniform weak Koenig lemma", ("none",),
               build=lambda T, _: (f"exists P:1->1. forall T:1. T <=[1] one1 -> ({_INFINITE}) -> "
                                   "forall m:0. T (bar (P T) m) = 1")),
    SchemaSpec("HBU_C", "Heine-Borel for the canonical cover of Cantor space", ("none",),
               build=lambda T, _: ("forall G:2. exists w:0->1. exists k:0. forall a:1. a <=[1] one1 -> "
                                   "exists i <= k. bar a (G (w i)) = bar (w i) (G (w i))")),
    SchemaSpec("MUC", "intuitionistic fan functional", ("none",),
               build=lambda T, _: ("exists O:2->0. forall Y:2. forall f:1. forall g:1. f <=[1] one1 -> "
                                   "g <=[1] one1 -> bar f (O Y) = bar g (O Y) -> Y f = Y g")),
    SchemaSpec("SE", "strong extensionality", ("none",),
               build=lambda T, _: ("forall Y:2. forall f:1. forall g:1. (Y f = Y g -> false) -> "
                                   "exists n:0. f n = g n -> false")),
    SchemaSpec("CONT_C", "epsilon-delta continuity of Y on Cantor space", ("term Y of type 2",), terms=("Y",),
               build=lambda T, _: _cont("Y")),
    SchemaSpec("BCT_C", "all type-2 functionals are continuous on Cantor space", ("none",),
               build=lambda T, _: f"forall Y:2. {_cont('Y')}"),
    SchemaSpec("WC_N", "weak continuity for numbers", ("any A",), formulas=("A",),
               build=lambda T, _: ("(forall a:1. exists n:0. @A(a, n)) -> forall a:1. exists n:0. exists m:0. "
                                   "forall b:1. bar a m = bar b m -> @A(b, n)")),
    SchemaSpec("WC_N0", "weak continuity for numbers, quantifier-free matrix", ("quantifier-free A",),
               formulas=("A",), qf_args=("A",),
               build=lambda T, _: ("(forall a:1. exists n:0. @A(a, n)) -> forall a:1. exists n:0. exists m:0. "
                                   "forall b:1. bar a m = bar b m -> @A(b, n)")),
    SchemaSpec("CCT_C", "continuous functionals are continuous relative to st", ("none",), transfer=True),
    SchemaSpec("KS0", "special case of Kripke's scheme", ("none",),
               build=lambda T, _: ("forall a:0->0->0. a <=[0->0->0] (lam p:0. lam q:0. 1) -> "
                                   "exists b:0->0->0. b <=[0->0->0] (lam p:0. lam q:0. 1) & forall m:0. "
                                   "((forall k:0. a k m = 0) -> exists n:0. b n m = 0) & "
                                   "((exists n:0. b n m = 0) -> forall k:0. a k m = 0)")),
    SchemaSpec("CT", "Church's thesis for a step function run e n s (0 = running, S m = output m)",
               ("term run of type 0->0->0->0",), terms=("run",),
               build=lambda T, _: ("forall f:1. exists e:0. forall n:0. forall m:0. "
                                   "((exists s:0. run e n s = S m) -> f n = m) & "
                                   "(f n = m -> exists s:0. run e n s = S m)")),
    SchemaSpec("QF_AC", "quantifier-free choice", ("quantifier-free phi",), formulas=("phi",),
               types=("s...", "t"), build=_qf_ac, qf_args=("phi",),
               default_types=(Arrow(Arrow(BASE, BASE), BASE), BASE)),
    SchemaSpec("SIMPLER", "a standard sign test on real codes", ("none",),
               build=lambda T, _: ("exists-st P:1->0. forall x:1. "
                                   "(P x = 0 -> forall-st k:0. qle (x k) (qrec k) = 0) & "
                                   "(P x = 1 -> forall-st k:0. qle (qnrec k) (x k) = 0)")),
    SchemaSpec("GAFOT", "nonstandard continuity of Y on Cantor space", ("term Y of type 2",), terms=("Y",),
               build=lambda T, _: ("forall-st f:1. f <=[1] one1 -> forall g:1. g <=[1] one1 -> "
                                   "f ~[1] g -> Y f = Y g")),
    SchemaSpec("NEAR_STD", "Y takes standard values on standard inputs", ("term Y of type 2",), terms=("Y",),
               build=lambda T, _: "forall-st f:1. exists-st n:0. Y f = n"),
    SchemaSpec("NS", "the declared constant N exceeds every standard number", ("constant N:0 declared",),
               build=lambda T, _: "forall-st z:0. S z <=[0] N"),
]

CATALOG: dict[str, SchemaSpec] = {s.id: s for s in _SPECS}
DG_AXIOMS = frozenset(s.id for s in _SPECS if s.dg)
TRANSFER_FAMILY = frozenset(s.id for s in _SPECS if s.transfer)

TERM_TYPES = {"Y": Arrow(Arrow(BASE, BASE), BASE),
              "run": Arrow(BASE, Arrow(BASE, Arrow(BASE, BASE)))}


def catalog() -> list[tuple[str, str, tuple]]:
    return [(s.id, s.description, s.side_conditions) for s in _SPECS]


def _parse_template(text: str) -> Formula:
    return parse("formula", text, PRELUDE, allow_meta=True)


def _free_meta_names(f: Formula) -> set[str]:
    out = set()

    def visit(g):
        if isinstance(g, Meta):
            out.add(g.name)
        elif isinstance(g, (And, Or, Implies)):
            visit(g.left)
            visit(g.right)
        elif isinstance(g, (Quant, BQuant)):
            visit(g.body)
    visit(f)
    return out


def is_quantifier_free(f: Formula) -> bool:
    if isinstance(f, (Falsum, Eq)):
        return True
    if isinstance(f, Rel):
        return isinstance(f.rtype, Base)
    if isinstance(f, (And, Or, Implies)):
        return is_quantifier_free(f.left) and is_quantifier_free(f.right)
    return False


def _check_args(spec: SchemaSpec, metas: Mapping[str, Abstraction]):
    for name in spec.internal_args:
        params, body = metas[name]
        if not is_internal(body):
            raise SideConditionError(f"{spec.id}: internal {name} required", body)
    for name in spec.closed_args:
        params, body = metas[name]
        extra = binding.formula_free(body) - {p for p, _ in params}
        if extra:
            raise SideConditionError(
                f"{spec.id}: {name} must be parameter-free, found free {', '.join(sorted(extra))}", body)
    for name in spec.qf_args:
        params, body = metas[name]
        if not is_quantifier_free(body):
            raise SideConditionError(f"{spec.id}: quantifier-free {name} required", body)


def _pf_tp(spec: SchemaSpec, phi: Abstraction) -> Formula:
    params, body = phi
    if not params:
        raise SideConditionError(f"{spec.id}: phi needs at least one shown variable")
    call = Meta("phi", tuple(Var(p) for p, _ in params))
    inner_kind, outer_kind = (("exists", "exists-st") if spec.id == "PF_TP_E" else ("forall-st", "forall"))
    lhs, rhs = call, call
    for p, t in reversed(params):
        lhs = Quant(inner_kind, p, t, lhs)
        rhs = Quant(outer_kind, p, t, rhs)
    return Implies(lhs, rhs)


def _cct() -> Formula:
    cont = _parse_template(_cont("Y"))
    return Quant("forall-st", "Y", TERM_TYPES["Y"], Implies(cont, relativize(cont)))


def template(spec_id: str, type_args: Sequence[FiniteType] = (), term_args: Sequence[Term] = ()) -> Formula:
    """The schema with placeholders still in place."""
    spec = CATALOG[spec_id]
    types = tuple(type_args) or spec.default_types
    if spec.id == "E" and not isinstance(types[0], Arrow):
        raise SideConditionError("E: an arrow type is required", None)
    if spec.id == "CCT_C":
        return _cct()
    if spec.id in ("PF_TP_E", "PF_TP_A"):
        raise ValueError("PF-TP templates depend on the shown variables; use instantiate")
    if spec.id == "ST_C":
        raise ValueError("ST_C needs its closed term; use instantiate")
    return _parse_template(spec.build(types, term_args))


def instantiate(inst: Instantiation, ctx: Optional[Mapping[str, FiniteType]] = None,
                desugar: bool = True) -> Formula:
    """Instantiate a schema; free parameters of the arguments are universally closed.

    ``ctx`` types those parameters.  The parameter-free and closed side
    conditions reject parameters instead.
    """
    if inst.schema not in CATALOG:
        raise KeyError(f"unknown schema {inst.schema!r}")
    spec = CATALOG[inst.schema]
    ctx = dict(ctx or {})
    if len(inst.formula_args) != len(spec.formulas):
        raise SideConditionError(
            f"{spec.id}: expects {len(spec.formulas)} formula arguments, got {len(inst.formula_args)}")
    metas = dict(zip(spec.formulas, inst.formula_args))
    _check_args(spec, metas)

    if spec.id == "ST_C":
        if len(inst.term_args) != 1:
            raise SideConditionError("ST_C: exactly one closed term required")
        t = inst.term_args[0]
        if binding.term_free(t):
            raise SideConditionError("ST_C: closed term required", t)
        result = St(infer_type(t, {}), t)
    elif spec.id in ("PF_TP_E", "PF_TP_A"):
        result = binding.subst_formula(_pf_tp(spec, metas["phi"]), {}, metas)
    else:
        if len(inst.term_args) != len(spec.terms):
            raise SideConditionError(f"{spec.id}: expects {len(spec.terms)} term arguments")
        tmpl = template(spec.id, inst.type_args, inst.term_args)
        result = binding.subst_formula(tmpl, dict(zip(spec.terms, inst.term_args)), metas)
        for name, term in zip(spec.terms, inst.term_args):
            expected = TERM_TYPES.get(name)
            if expected is not None:
                found = infer_type(term, ctx)
                if found != expected:
                    raise TypeCheckError(
                        f"{spec.id}: term {name} must have type {print_type(expected)}, found {print_type(found)}")
    leftover = _free_meta_names(result)
    if leftover:
        raise SideConditionError(f"{spec.id}: missing formula arguments {sorted(leftover)}")

    params = sorted(binding.formula_free(result) - ({"N"} if spec.id == "NS" else set()))
    if params:
        if spec.id == "IA_ST":
            raise SideConditionError("IA_ST: open instance, close Phi first", result)
        missing = [p for p in params if p not in ctx]
        if missing:
            raise SideConditionError(f"{spec.id}: untyped parameters {', '.join(missing)}")
        for p in reversed(params):
            result = Quant("forall", p, ctx[p], result)
    check_formula(result, {"N": BASE} if spec.id == "NS" else {})
    if desugar:
        result = desugar_monotone(unfold_equality(result))
    return result


def parse_abstraction(text: str, defs=None) -> Abstraction:
    return parse("abstraction", text, {**PRELUDE, **(defs or {})})


# ------------------------------------------------------- model checking

@dataclass(frozen=True)
class ModelVerdict:
    status: str                  # valid | countermodel | inconclusive
    environment: tuple = ()
    reason: str = ""


class _Budget(Exception):
    pass


def threshold(k: int) -> str:
    return f"threshold({k})"


def model_check_instance(formula: Formula, B: int = 2, budget: int = 200_000, st: str = "all",
                         cap: int = 5_000) -> ModelVerdict:
    """Decide a closed formula in the full finite type structure over {0..B}.

    st is interpreted as everything ("all") or as the elements <=* the
    hereditary constant-k element ("threshold(k)").
    """
    mm = MajModel(B, cap)
    model = mm.model
    k = None
    if st != "all":
        if not (st.startswith("threshold(") and st.endswith(")")):
            raise ValueError(f"unknown st interpretation {st!r}")
        k = int(st[len("threshold("):-1])
    steps = [0]

    def const_elem(t):
        if isinstance(t, Base):
            return min(k, B)
        if isinstance(t, Prod):
            return (const_elem(t.left), const_elem(t.right))
        return tuple(const_elem(t.cod) for _ in model.elements(t.dom))

    def is_st(elem, t):
        return True if k is None else mm.leq(elem, const_elem(t), t)

    def tick():
        steps[0] += 1
        if steps[0] > budget:
            raise _Budget()

    def term_val(t, env, types):
        host = {name: model.reflect(v, types[name]) for name, v in env.items()}
        ty = infer_type(t, types)
        return model.reify(evaluate(t, host, None, bound=B), ty)

    def holds(f, env, types) -> bool:
        tick()
        if isinstance(f, Falsum):
            return False
        if isinstance(f, Eq):
            return term_val(f.lhs, env, types) == term_val(f.rhs, env, types)
        if isinstance(f, St):
            return is_st(term_val(f.term, env, types), f.stype)
        if isinstance(f, Rel):
            if not isinstance(f.rtype, Base):
                if f.kind == "maj":
                    return mm.leq(term_val(f.lhs, env, types), term_val(f.rhs, env, types), f.rtype)
                return holds(unfold_equality(f), env, types)
            a, b = term_val(f.lhs, env, types), term_val(f.rhs, env, types)
            return a <= b if f.kind in ("le", "maj") else a == b
        if isinstance(f, And):
            return holds(f.left, env, types) and holds(f.right, env, types)
        if isinstance(f, Or):
            return holds(f.left, env, types) or holds(f.right, env, types)
        if isinstance(f, Implies):
            return (not holds(f.left, env, types)) or holds(f.right, env, types)
        if isinstance(f, BQuant):
            n = term_val(f.bound, env, types)
            rng = (holds(f.body, {**env, f.var: i}, {**types, f.var: BASE}) for i in range(n + 1))
            return all(rng) if f.kind == "forall" else any(rng)
        if isinstance(f, Quant):
            elems = model.elements(f.vtype)
            inner = {**types, f.var: f.vtype}
            guard = f.kind.endswith("st")
            mono = "~" in f.kind
            def ok(e):
                return (not guard or is_st(e, f.vtype)) and (not mono or mm.monotone(e, f.vtype))
            cands = (e for e in elems if ok(e))
            if f.kind.startswith("forall"):
                return all(holds(f.body, {**env, f.var: e}, inner) for e in cands)
            return any(holds(f.body, {**env, f.var: e}, inner) for e in cands)
        raise TypeError(f"cannot model-check {f!r}")

    def search(f, env, types):
        """Falsifying assignment for leading universal quantifiers."""
        if isinstance(f, Quant) and f.kind.startswith("forall"):
            inner = {**types, f.var: f.vtype}
            for e in model.elements(f.vtype):
                if f.kind.endswith("st") and not is_st(e, f.vtype):
                    continue
                if "~" in f.kind and not mm.monotone(e, f.vtype):
                    continue
                found = search(f.body, {**env, f.var: e}, inner)
                if found is not None:
                    return found
            return None
        return None if holds(f, env, types) else env

    try:
        if holds(formula, {}, {}):
            return ModelVerdict("valid")
        env = search(formula, {}, {}) or {}
        return ModelVerdict("countermodel", tuple(sorted(env.items())))
    except _Budget:
        return ModelVerdict("inconclusive", reason=f"budget {budget} exceeded")
    except ModelSizeError as exc:
        return ModelVerdict("inconclusive", reason=str(exc))
