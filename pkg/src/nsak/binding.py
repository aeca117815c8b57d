"""Binding structure: free variables, capture-avoiding substitution, alpha-equivalence."""
from __future__ import annotations

import itertools
import re
from typing import Iterable, Mapping

from .syntax import (
    App, BQuant, Eq, Falsum, Formula, Implies, And, Or, Lam, Meta, Pair, Quant,
    Rel, St, Term, Var,
)


def term_free(t: Term) -> set[str]:
    out: set[str] = set()
    stack = [(t, frozenset())]
    while stack:
        t, bound = stack.pop()
        if isinstance(t, Var):
            if t.name not in bound:
                out.add(t.name)
        elif isinstance(t, Lam):
            stack.append((t.body, bound | {t.var}))
        elif isinstance(t, App):
            stack.append((t.fn, bound))
            stack.append((t.arg, bound))
        elif isinstance(t, Pair):
            stack.append((t.left, bound))
            stack.append((t.right, bound))
    return out


def formula_free(f: Formula) -> set[str]:
    if isinstance(f, Falsum):
        return set()
    if isinstance(f, (Eq, Rel)):
        return term_free(f.lhs) | term_free(f.rhs)
    if isinstance(f, St):
        return term_free(f.term)
    if isinstance(f, (And, Or, Implies)):
        return formula_free(f.left) | formula_free(f.right)
    if isinstance(f, Quant):
        return formula_free(f.body) - {f.var}
    if isinstance(f, BQuant):
        return term_free(f.bound) | (formula_free(f.body) - {f.var})
    if isinstance(f, Meta):
        return set().union(*(term_free(a) for a in f.args)) if f.args else set()
    raise TypeError(f"not a formula: {f!r}")


def free_names(ast) -> set[str]:
    if isinstance(ast, (Falsum, Eq, Rel, St, And, Or, Implies, Quant, BQuant, Meta)):
        return formula_free(ast)
    return term_free(ast)


_SUFFIX = re.compile(r"^(.*?)(_\d+)?$")


def fresh(base: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    if base not in avoid:
        return base
    stem = _SUFFIX.match(base).group(1) or "v"
    for i in itertools.count(1):
        cand = f"{stem}_{i}"
        if cand not in avoid:
            return cand


def subst_term(t: Term, sub: Mapping[str, Term]) -> Term:
    """Simultaneous capture-avoiding substitution of terms for variables."""
    if not sub:
        return t
    if isinstance(t, Var):
        return sub.get(t.name, t)
    if isinstance(t, App):
        return App(subst_term(t.fn, sub), subst_term(t.arg, sub))
    if isinstance(t, Pair):
        return Pair(subst_term(t.left, sub), subst_term(t.right, sub))
    if isinstance(t, Lam):
        inner = {k: v for k, v in sub.items() if k != t.var}
        if not inner:
            return t
        body_free = term_free(t.body)
        inner = {k: v for k, v in inner.items() if k in body_free}
        if not inner:
            return t
        incoming = set().union(*(term_free(v) for v in inner.values()))
        var, body = t.var, t.body
        if var in incoming:
            new = fresh(var, incoming | body_free | set(inner))
            body = subst_term(body, {var: Var(new)})
            var = new
        return Lam(var, t.vtype, subst_term(body, inner))
    return t


def _rebind(var: str, body_free: set[str], inner: Mapping, extra: set[str]):
    incoming = set(extra)
    for v in inner.values():
        incoming |= term_free(v)
    if var in incoming:
        return fresh(var, incoming | body_free | set(inner))
    return var


def _meta_names(f: Formula) -> set[str]:
    if isinstance(f, Meta):
        return {f.name}
    if isinstance(f, (And, Or, Implies)):
        return _meta_names(f.left) | _meta_names(f.right)
    if isinstance(f, (Quant, BQuant)):
        return _meta_names(f.body)
    return set()


def subst_formula(f: Formula, sub: Mapping[str, Term], metas: Mapping | None = None) -> Formula:
    """Capture-avoiding substitution; ``metas`` instantiates ``@name`` placeholders.

    ``metas[name]`` is ``(params, body)``: a formula abstraction.
    """
    if not sub and not metas:
        return f
    metas = metas or {}
    if isinstance(f, Falsum):
        return f
    if isinstance(f, Eq):
        return Eq(subst_term(f.lhs, sub), subst_term(f.rhs, sub))
    if isinstance(f, Rel):
        return Rel(f.kind, f.rtype, subst_term(f.lhs, sub), subst_term(f.rhs, sub))
    if isinstance(f, St):
        return St(f.stype, subst_term(f.term, sub))
    if isinstance(f, (And, Or, Implies)):
        return type(f)(subst_formula(f.left, sub, metas), subst_formula(f.right, sub, metas))
    if isinstance(f, Meta):
        args = tuple(subst_term(a, sub) for a in f.args)
        if f.name not in metas:
            return Meta(f.name, args)
        params, body = metas[f.name]
        if len(params) != len(args):
            raise ValueError(f"placeholder @{f.name} expects {len(params)} arguments, got {len(args)}")
        return subst_formula(body, {p: a for (p, _), a in zip(params, args)})
    if isinstance(f, (Quant, BQuant)):
        inner = {k: v for k, v in sub.items() if k != f.var}
        body_free = formula_free(f.body)
        # free variables of instantiated placeholders must not be captured either
        meta_free = set()
        for name in _meta_names(f.body) & set(metas):
            params, body = metas[name]
            meta_free |= formula_free(body) - {p for p, _ in params}
        var = _rebind(f.var, body_free, inner, meta_free)
        body = f.body
        if var != f.var:
            body = subst_formula(body, {f.var: Var(var)})
        body = subst_formula(body, inner, metas)
        if isinstance(f, Quant):
            return Quant(f.kind, var, f.vtype, body)
        return BQuant(f.kind, var, subst_term(f.bound, sub), body)
    raise TypeError(f"not a formula: {f!r}")


def alpha_eq_term(a: Term, b: Term, env_a=None, env_b=None, depth=0) -> bool:
    env_a = env_a or {}
    env_b = env_b or {}
    if isinstance(a, Var) and isinstance(b, Var):
        ia, ib = env_a.get(a.name), env_b.get(b.name)
        if ia is None and ib is None:
            return a.name == b.name
        return ia == ib
    if type(a) is not type(b):
        return False
    if isinstance(a, Lam):
        return a.vtype == b.vtype and alpha_eq_term(
            a.body, b.body, {**env_a, a.var: depth}, {**env_b, b.var: depth}, depth + 1)
    if isinstance(a, App):
        return (alpha_eq_term(a.fn, b.fn, env_a, env_b, depth)
                and alpha_eq_term(a.arg, b.arg, env_a, env_b, depth))
    if isinstance(a, Pair):
        return (alpha_eq_term(a.left, b.left, env_a, env_b, depth)
                and alpha_eq_term(a.right, b.right, env_a, env_b, depth))
    return a == b


def alpha_eq(a: Formula, b: Formula, env_a=None, env_b=None, depth=0) -> bool:
    """Alpha-equivalence of formulas (terms compared up to bound renaming)."""
    env_a = env_a or {}
    env_b = env_b or {}
    if type(a) is not type(b):
        return False
    if isinstance(a, Falsum):
        return True
    if isinstance(a, Eq):
        return (alpha_eq_term(a.lhs, b.lhs, env_a, env_b, depth)
                and alpha_eq_term(a.rhs, b.rhs, env_a, env_b, depth))
    if isinstance(a, Rel):
        return (a.kind == b.kind and a.rtype == b.rtype
                and alpha_eq_term(a.lhs, b.lhs, env_a, env_b, depth)
                and alpha_eq_term(a.rhs, b.rhs, env_a, env_b, depth))
    if isinstance(a, St):
        return a.stype == b.stype and alpha_eq_term(a.term, b.term, env_a, env_b, depth)
    if isinstance(a, (And, Or, Implies)):
        return (alpha_eq(a.left, b.left, env_a, env_b, depth)
                and alpha_eq(a.right, b.right, env_a, env_b, depth))
    if isinstance(a, Quant):
        return (a.kind == b.kind and a.vtype == b.vtype
                and alpha_eq(a.body, b.body, {**env_a, a.var: depth}, {**env_b, b.var: depth}, depth + 1))
    if isinstance(a, BQuant):
        return (a.kind == b.kind and alpha_eq_term(a.bound, b.bound, env_a, env_b, depth)
                and alpha_eq(a.body, b.body, {**env_a, a.var: depth}, {**env_b, b.var: depth}, depth + 1))
    if isinstance(a, Meta):
        return a.name == b.name and len(a.args) == len(b.args) and all(
            alpha_eq_term(x, y, env_a, env_b, depth) for x, y in zip(a.args, b.args))
    raise TypeError(f"not a formula: {a!r}")
