"""Type inference, formula well-formedness, classification and relativization."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from . import binding
from .syntax import (
    App, Arrow, BASE, BQuant, Base, Eq, Falsum, FiniteType, Formula, Fst, Implies,
    And, Or, Lam, Meta, NumLit, Pair, Prod, Quant, Rec, Rel, Snd, St, Succ, Term,
    Var, Zero, print_ast, print_type,
)

Context = Mapping[str, FiniteType]


class TypeCheckError(Exception):
    def __init__(self, message: str, path: tuple = ()):
        self.path = path
        where = f" at {'/'.join(map(str, path))}" if path else ""
        super().__init__(f"{message}{where}")


def rec_type(t: FiniteType) -> FiniteType:
    """Rec[t] : 0 -> t -> (0 -> t -> t) -> t"""
    return Arrow(BASE, Arrow(t, Arrow(Arrow(BASE, Arrow(t, t)), t)))


def infer_type(term: Term, ctx: Context, path: tuple = ()) -> FiniteType:
    if isinstance(term, Var):
        if term.name not in ctx:
            raise TypeCheckError(f"unbound variable {term.name}", path)
        return ctx[term.name]
    if isinstance(term, (Zero, NumLit)):
        return BASE
    if isinstance(term, Succ):
        return Arrow(BASE, BASE)
    if isinstance(term, Rec):
        return rec_type(term.rtype)
    if isinstance(term, Lam):
        inner = dict(ctx)
        inner[term.var] = term.vtype
        return Arrow(term.vtype, infer_type(term.body, inner, path + ("body",)))
    if isinstance(term, Pair):
        return Prod(infer_type(term.left, ctx, path + ("left",)),
                    infer_type(term.right, ctx, path + ("right",)))
    if isinstance(term, (Fst, Snd)):
        raise TypeCheckError("projection must be applied to a pair", path)
    if isinstance(term, App):
        if isinstance(term.fn, (Fst, Snd)):
            pt = infer_type(term.arg, ctx, path + ("arg",))
            if not isinstance(pt, Prod):
                raise TypeCheckError(
                    f"type mismatch: expected a product, found {print_type(pt)}", path + ("arg",))
            return pt.left if isinstance(term.fn, Fst) else pt.right
        ft = infer_type(term.fn, ctx, path + ("fn",))
        if not isinstance(ft, Arrow):
            raise TypeCheckError(
                f"type mismatch: expected a function, found {print_type(ft)}", path + ("fn",))
        at = infer_type(term.arg, ctx, path + ("arg",))
        if at != ft.dom:
            raise TypeCheckError(
                f"type mismatch: expected {print_type(ft.dom)}, found {print_type(at)}", path + ("arg",))
        return ft.cod
    raise TypeCheckError(f"not a term: {term!r}", path)


def check_term(term: Term, expected: FiniteType, ctx: Context, path: tuple = ()) -> None:
    found = infer_type(term, ctx, path)
    if found != expected:
        raise TypeCheckError(
            f"type mismatch: expected {print_type(expected)}, found {print_type(found)} "
            f"for {print_ast(term)}", path)


def check_formula(f: Formula, ctx: Context, path: tuple = ()) -> None:
    """Raise TypeCheckError unless ``f`` is well formed in ``ctx``."""
    if isinstance(f, Falsum):
        return
    if isinstance(f, Eq):
        check_term(f.lhs, BASE, ctx, path + ("lhs",))
        check_term(f.rhs, BASE, ctx, path + ("rhs",))
    elif isinstance(f, Rel):
        check_term(f.lhs, f.rtype, ctx, path + ("lhs",))
        check_term(f.rhs, f.rtype, ctx, path + ("rhs",))
    elif isinstance(f, St):
        check_term(f.term, f.stype, ctx, path + ("st",))
    elif isinstance(f, (And, Or, Implies)):
        check_formula(f.left, ctx, path + ("left",))
        check_formula(f.right, ctx, path + ("right",))
    elif isinstance(f, Quant):
        check_formula(f.body, {**ctx, f.var: f.vtype}, path + (f.var,))
    elif isinstance(f, BQuant):
        check_term(f.bound, BASE, ctx, path + ("bound",))
        check_formula(f.body, {**ctx, f.var: BASE}, path + (f.var,))
    elif isinstance(f, Meta):
        raise TypeCheckError(f"uninstantiated placeholder @{f.name}", path)
    else:
        raise TypeCheckError(f"not a formula: {f!r}", path)


# ------------------------------------------------------- classification

def is_internal(f: Formula) -> bool:
    if isinstance(f, (Falsum, Eq)):
        return True
    if isinstance(f, St):
        return False
    if isinstance(f, Rel):
        return f.kind != "approx" or isinstance(f.rtype, Base)
    if isinstance(f, (And, Or, Implies)):
        return is_internal(f.left) and is_internal(f.right)
    if isinstance(f, Quant):
        return f.kind in ("forall", "exists") and is_internal(f.body)
    if isinstance(f, BQuant):
        return is_internal(f.body)
    if isinstance(f, Meta):
        return True
    raise TypeError(f"not a formula: {f!r}")


def _has_arrow(t: FiniteType) -> bool:
    if isinstance(t, Arrow):
        return True
    if isinstance(t, Prod):
        return _has_arrow(t.left) or _has_arrow(t.right)
    return False


def has_unbounded_quantifier(f: Formula) -> bool:
    if isinstance(f, Quant):
        return True
    if isinstance(f, Rel):
        # relations unfold componentwise at products, so only arrows add quantifiers
        return _has_arrow(f.rtype)
    if isinstance(f, (And, Or, Implies)):
        return has_unbounded_quantifier(f.left) or has_unbounded_quantifier(f.right)
    if isinstance(f, BQuant):
        return has_unbounded_quantifier(f.body)
    return False


def free_vars(ast, ctx: Optional[Context] = None) -> dict[str, Optional[FiniteType]]:
    """Free variables with their types, from ``ctx`` or from atomic position."""
    names = binding.free_names(ast)
    ctx = ctx or {}
    found: dict[str, Optional[FiniteType]] = {n: ctx.get(n) for n in names}

    def visit(f, bound):
        if isinstance(f, Eq):
            for side in (f.lhs, f.rhs):
                if isinstance(side, Var) and side.name not in bound and found.get(side.name) is None:
                    found[side.name] = BASE
        elif isinstance(f, Rel):
            for side in (f.lhs, f.rhs):
                if isinstance(side, Var) and side.name not in bound and found.get(side.name) is None:
                    found[side.name] = f.rtype
        elif isinstance(f, St):
            if isinstance(f.term, Var) and f.term.name not in bound and found.get(f.term.name) is None:
                found[f.term.name] = f.stype
        elif isinstance(f, (And, Or, Implies)):
            visit(f.left, bound)
            visit(f.right, bound)
        elif isinstance(f, (Quant, BQuant)):
            visit(f.body, bound | {f.var})

    visit(ast, frozenset())
    return found


@dataclass(frozen=True)
class ClassifiedFormula:
    formula: Formula
    internal: bool
    free: frozenset
    closed: bool


def classify(f: Formula, ctx: Optional[Context] = None) -> ClassifiedFormula:
    fv = free_vars(f, ctx)
    return ClassifiedFormula(f, is_internal(f), frozenset(fv.items()), not fv)


# ------------------------------------------------- defined relations

def _fresh_for(terms, base="z", extra=()):
    avoid = set(extra)
    for t in terms:
        avoid |= binding.term_free(t)
    return binding.fresh(base, avoid)


def _pointwise(kind: str, x: Term, y: Term, t: FiniteType, standard: bool, avoid) -> Formula:
    if isinstance(t, Base):
        return Eq(x, y) if kind == "eq" else Rel("le", BASE, x, y)
    if isinstance(t, Prod):
        return And(_pointwise(kind, App(Fst(), x), App(Fst(), y), t.left, standard, avoid),
                   _pointwise(kind, App(Snd(), x), App(Snd(), y), t.right, standard, avoid))
    z = _fresh_for((x, y), "z", avoid)
    body = _pointwise(kind, App(x, Var(z)), App(y, Var(z)), t.cod, standard, set(avoid) | {z})
    return Quant("forall-st" if standard else "forall", z, t.dom, body)


def unfold_relation(f: Rel) -> Formula:
    """One defined relation unfolded into primitive notions.

    ``=`` and ``<=`` become pointwise statements over all arguments,
    ``~`` the same with standard arguments, ``<=*`` one layer of the
    majorizability clauses.  At type 0 the atom itself is returned.
    """
    if f.kind == "maj":
        from .majorizability import unfold_maj
        return unfold_maj(f.lhs, f.rhs, f.rtype)
    if isinstance(f.rtype, Base):
        return Eq(f.lhs, f.rhs) if f.kind in ("eq", "approx") else f
    kind = "le" if f.kind == "le" else "eq"
    return _pointwise(kind, f.lhs, f.rhs, f.rtype, f.kind == "approx", ())


def unfold_equality(f: Formula) -> Formula:
    """Replace every =, <=, ~ sugar node by its definition (<=* is kept)."""
    if isinstance(f, Rel):
        if f.kind == "maj":
            return f
        out = unfold_relation(f)
        return out if out == f else unfold_equality(out)
    return _map_subformulas(f, unfold_equality)


def _map_subformulas(f: Formula, fn) -> Formula:
    if isinstance(f, (And, Or, Implies)):
        return type(f)(fn(f.left), fn(f.right))
    if isinstance(f, Quant):
        return Quant(f.kind, f.var, f.vtype, fn(f.body))
    if isinstance(f, BQuant):
        return BQuant(f.kind, f.var, f.bound, fn(f.body))
    return f


_RELATIVIZED = {"forall": "forall-st", "exists": "exists-st"}


def relativize(f: Formula) -> Formula:
    """A^st: every unbounded quantifier (also inside defined relations) ranges over standard objects."""
    if isinstance(f, Quant):
        return Quant(_RELATIVIZED.get(f.kind, f.kind), f.var, f.vtype, relativize(f.body))
    if isinstance(f, BQuant):
        return BQuant(f.kind, f.var, f.bound, relativize(f.body))
    if isinstance(f, (And, Or, Implies)):
        return type(f)(relativize(f.left), relativize(f.right))
    if isinstance(f, Rel) and not isinstance(f.rtype, Base):
        if f.kind == "eq":
            return Rel("approx", f.rtype, f.lhs, f.rhs)
        if f.kind == "approx":
            return f
        return relativize(unfold_relation(f))
    return f


def desugar_monotone(f: Formula) -> Formula:
    """Expand monotone-standard quantifiers into st- and <=*-guarded ones."""
    if isinstance(f, Quant):
        body = desugar_monotone(f.body)
        x = Var(f.var)
        if f.kind == "forall~st":
            return Quant("forall-st", f.var, f.vtype, Implies(Rel("maj", f.vtype, x, x), body))
        if f.kind == "exists~st":
            return Quant("exists-st", f.var, f.vtype, And(Rel("maj", f.vtype, x, x), body))
        return Quant(f.kind, f.var, f.vtype, body)
    return _map_subformulas(f, desugar_monotone)
