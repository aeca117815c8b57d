"""Normalization of T terms, evaluation against host oracles, finite models."""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Optional

from . import binding
from .checker import infer_type
from .syntax import (
    App, Arrow, BQuant, Base, Eq, Falsum, FiniteType, Formula, Fst, Implies,
    And, Or, Lam, NumLit, Pair, Prod, Quant, Rec, Rel, Snd, St, Succ, Term, Var,
    Zero, numeral, print_ast, spine, apply,
)

DEFAULT_FUEL = 10**6


def default_fuel() -> int:
    return int(os.environ.get("NSAK_FUEL", DEFAULT_FUEL))


class FuelExhausted(Exception):
    def __init__(self, steps: int):
        self.steps = steps
        super().__init__(f"fuel exhausted after {steps} steps")


class ModelSizeError(Exception):
    pass


@dataclass
class Fuel:
    max_steps: int = field(default_factory=default_fuel)
    used: int = 0

    def __post_init__(self):
        if self.max_steps <= 0:
            raise ValueError("fuel must be positive")

    def tick(self, n: int = 1):
        self.used += n
        if self.used > self.max_steps:
            raise FuelExhausted(self.used)


def _fuel(fuel) -> Fuel:
    if fuel is None:
        return Fuel()
    if isinstance(fuel, Fuel):
        return fuel
    return Fuel(int(fuel))


# ---------------------------------------------------------- normalization

def _num_value(t: Term) -> Optional[int]:
    if isinstance(t, Zero):
        return 0
    if isinstance(t, NumLit):
        return t.n
    return None


def _whnf(t: Term, fuel: Fuel) -> Term:
    while True:
        head, args = spine(t)
        if isinstance(head, Lam) and args:
            fuel.tick()
            body = binding.subst_term(head.body, {head.var: args[0]})
            t = apply(body, *args[1:])
            continue
        if isinstance(head, Rec) and len(args) >= 3:
            n = _whnf(args[0], fuel)
            k = _num_value(n)
            if k is not None:
                t = apply(_iterate(head, k, args[1], args[2], fuel), *args[3:])
                continue
            if isinstance(n, App) and isinstance(n.fn, Succ):
                fuel.tick()
                m = n.arg
                t = apply(args[2], m, apply(head, m, args[1], args[2]), *args[3:])
                continue
            return apply(head, n, *args[1:])
        if isinstance(head, (Fst, Snd)) and args:
            p = _whnf(args[0], fuel)
            if isinstance(p, Pair):
                fuel.tick()
                t = apply(p.left if isinstance(head, Fst) else p.right, *args[1:])
                continue
            return apply(head, p, *args[1:])
        if isinstance(head, Succ) and len(args) == 1:
            m = _whnf(args[0], fuel)
            k = _num_value(m)
            if k is not None:
                fuel.tick()
                return NumLit(k + 1)
            return App(head, m)
        return t


def _iterate(rec: Rec, k: int, base: Term, step: Term, fuel: Fuel) -> Term:
    # Rec k b s unfolds to s (k-1) (... (s 0 b)); iterating from the bottom
    # reaches the same normal form without deep recursion.
    fuel.tick()
    r = base
    for i in range(k):
        fuel.tick()
        r = _normalize(apply(step, numeral(i), r), fuel)
    return r


def _normalize(t: Term, fuel: Fuel) -> Term:
    t = _whnf(t, fuel)
    if isinstance(t, Lam):
        return Lam(t.var, t.vtype, _normalize(t.body, fuel))
    if isinstance(t, Pair):
        return Pair(_normalize(t.left, fuel), _normalize(t.right, fuel))
    head, args = spine(t)
    if not args:
        return t
    return apply(head, *(_normalize(a, fuel) for a in args))


def normalize(term: Term, fuel=None) -> Term:
    """Normal form of ``term``; free variables are inert."""
    return _normalize(term, _fuel(fuel))


def eval_nat(term: Term, fuel=None) -> int:
    """Numeric value of a closed type-0 term."""
    return int(evaluate(term, {}, fuel))


# ----------------------------------------------------- semantic evaluation

class Oracle:
    """A host function made callable from T terms, with memo and query log."""

    def __init__(self, fn: Callable, name: str = "oracle"):
        self.fn = fn
        self.name = name
        self.memo: dict = {}
        self.log: list = []

    def __call__(self, arg):
        key = arg if isinstance(arg, (int, tuple)) else id(arg)
        if key not in self.memo:
            self.log.append(arg)
            self.memo[key] = self.fn(arg)
        return self.memo[key]

    @property
    def support(self) -> set:
        return {a for a in self.log if isinstance(a, int)}


def _curry_rec(fuel: Fuel):
    def rec(n):
        def with_base(b):
            def with_step(s):
                r = b
                for k in range(n):
                    fuel.tick()
                    r = s(k)(r)
                return r
            return with_step
        return with_base
    return rec


def evaluate(term: Term, env: Mapping[str, Any], fuel=None, bound: Optional[int] = None):
    """Denotation of ``term`` as a host value.

    Type 0 denotes an int, arrows denote callables, products tuples.
    With ``bound`` set, the successor saturates at ``bound`` (finite models).
    """
    fuel = _fuel(fuel)
    rec = _curry_rec(fuel)

    if bound is None:
        succ = lambda x: x + 1
        lit = lambda n: n
    else:
        succ = lambda x: min(x + 1, bound)
        lit = lambda n: min(n, bound)

    def ev(t, env):
        fuel.tick()
        if isinstance(t, Var):
            try:
                return env[t.name]
            except KeyError:
                raise NameError(f"unbound variable {t.name}") from None
        if isinstance(t, Zero):
            return 0
        if isinstance(t, NumLit):
            return lit(t.n)
        if isinstance(t, Succ):
            return succ
        if isinstance(t, Rec):
            return rec
        if isinstance(t, Fst):
            return lambda p: p[0]
        if isinstance(t, Snd):
            return lambda p: p[1]
        if isinstance(t, Pair):
            return (ev(t.left, env), ev(t.right, env))
        if isinstance(t, Lam):
            var, body = t.var, t.body
            return lambda v: ev(body, {**env, var: v})
        if isinstance(t, App):
            return ev(t.fn, env)(ev(t.arg, env))
        raise TypeError(f"not a term: {t!r}")

    return ev(term, env)


def apply_functional(term: Term, *args, fuel=None):
    """Apply a closed functional term to host arguments (ints, callables, tuples)."""
    wrapped = [Oracle(a) if callable(a) and not isinstance(a, Oracle) else a for a in args]
    value = evaluate(term, {}, fuel)
    for a in wrapped:
        value = value(a)
    return value


# ------------------------------------------------------- bounded formulas

class UnboundedQuantifier(Exception):
    pass


def eval_bounded(f: Formula, env: Mapping[str, Any] = None, fuel=None) -> bool:
    """Truth of an internal formula whose quantifiers are all bounded."""
    fuel = _fuel(fuel)
    env = dict(env or {})

    def val(t, env):
        return evaluate(t, env, fuel)

    def ev(f, env):
        if isinstance(f, Falsum):
            return False
        if isinstance(f, Eq):
            return val(f.lhs, env) == val(f.rhs, env)
        if isinstance(f, Rel):
            if not isinstance(f.rtype, Base):
                raise UnboundedQuantifier(f"relation at type {f.rtype} is not bounded")
            a, b = val(f.lhs, env), val(f.rhs, env)
            return a <= b if f.kind in ("le", "maj") else a == b
        if isinstance(f, And):
            return ev(f.left, env) and ev(f.right, env)
        if isinstance(f, Or):
            return ev(f.left, env) or ev(f.right, env)
        if isinstance(f, Implies):
            return (not ev(f.left, env)) or ev(f.right, env)
        if isinstance(f, BQuant):
            n = val(f.bound, env)
            rng = (ev(f.body, {**env, f.var: i}) for i in range(n + 1))
            return all(rng) if f.kind == "forall" else any(rng)
        if isinstance(f, (Quant, St)):
            raise UnboundedQuantifier(f"cannot decide {print_ast(f)} by evaluation")
        raise TypeError(f"not a formula: {f!r}")

    return ev(f, env)


# ----------------------------------------------------------- finite models

DEFAULT_MODEL_CAP = 200_000


def model_size(t: FiniteType, B: int) -> int:
    if isinstance(t, Base):
        return B + 1
    if isinstance(t, Arrow):
        dom = model_size(t.dom, B)
        cod = model_size(t.cod, B)
        # avoid building astronomically large integers
        if dom > 64 and cod > 1:
            return 10**30
        return cod ** dom
    return model_size(t.left, B) * model_size(t.right, B)


class FiniteModel:
    """Full type structure over the base domain {0..B}.

    Arrow elements are tuples indexed by the enumeration of the domain;
    product elements are pairs.
    """

    def __init__(self, B: int, cap: int = DEFAULT_MODEL_CAP):
        if B < 0:
            raise ValueError("B must be non-negative")
        self.B = B
        self.cap = cap
        self._enum: dict = {}
        self._index: dict = {}

    def size(self, t: FiniteType) -> int:
        return model_size(t, self.B)

    def elements(self, t: FiniteType) -> list:
        if t not in self._enum:
            n = self.size(t)
            if n > self.cap:
                raise ModelSizeError(f"model of type {print_ast(t)} at B={self.B} has {n} elements (cap {self.cap})")
            if isinstance(t, Base):
                elems = list(range(self.B + 1))
            elif isinstance(t, Arrow):
                dom_n = len(self.elements(t.dom))
                elems = list(itertools.product(self.elements(t.cod), repeat=dom_n))
            else:
                elems = list(itertools.product(self.elements(t.left), self.elements(t.right)))
            self._enum[t] = elems
        return self._enum[t]

    def index(self, t: FiniteType, elem) -> int:
        if t not in self._index:
            self._index[t] = {e: i for i, e in enumerate(self.elements(t))}
        return self._index[t][elem]

    def app(self, t: Arrow, fn, arg):
        return fn[self.index(t.dom, arg)]

    def reflect(self, elem, t: FiniteType):
        """Model element to host value."""
        if isinstance(t, Base):
            return elem
        if isinstance(t, Prod):
            return (self.reflect(elem[0], t.left), self.reflect(elem[1], t.right))
        return lambda v: self.reflect(elem[self.index(t.dom, self.reify(v, t.dom))], t.cod)

    def reify(self, value, t: FiniteType):
        """Host value to model element (tabulation)."""
        if isinstance(t, Base):
            return value
        if isinstance(t, Prod):
            return (self.reify(value[0], t.left), self.reify(value[1], t.right))
        return tuple(self.reify(value(self.reflect(d, t.dom)), t.cod) for d in self.elements(t.dom))

    def top(self, t: FiniteType):
        """The hereditarily maximal constant element."""
        if isinstance(t, Base):
            return self.B
        if isinstance(t, Prod):
            return (self.top(t.left), self.top(t.right))
        return tuple(self.top(t.cod) for _ in self.elements(t.dom))


def enumerate_model(t: FiniteType, B: int, cap: int = DEFAULT_MODEL_CAP) -> list:
    return FiniteModel(B, cap).elements(t)


def eval_finite_model(term: Term, B: int, env: Mapping[str, Any] = None,
                      types: Mapping[str, FiniteType] = None, model: FiniteModel = None,
                      fuel=None):
    """Denotation of ``term`` in the finite model with saturating successor.

    ``env`` maps free variables to model elements and ``types`` gives their types.
    """
    model = model or FiniteModel(B)
    env = env or {}
    types = dict(types or {})
    host = {k: model.reflect(v, types[k]) for k, v in env.items()}
    t = infer_type(term, types)
    return model.reify(evaluate(term, host, fuel, bound=B), t)
