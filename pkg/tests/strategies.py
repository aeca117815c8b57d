"""Hypothesis generators for types, terms and formulas."""
from hypothesis import strategies as st

from nsak.syntax import (
    And, App, Arrow, BASE, BQuant, Eq, Falsum, Fst, Implies, Lam, NumLit, Or, Pair, Prod,
    Quant, QUANT_KINDS, Rec, Rel, Snd, St, Succ, Var, Zero,
)

NAMES = st.sampled_from(["x", "y", "z", "f", "g", "n", "k1", "a_b", "x'"])

types = st.recursive(
    st.just(BASE),
    lambda inner: st.one_of(st.builds(Arrow, inner, inner), st.builds(Prod, inner, inner)),
    max_leaves=5,
)

_atoms = st.one_of(
    st.builds(Var, NAMES),
    st.just(Zero()),
    st.just(Succ()),
    st.just(Fst()),
    st.just(Snd()),
    st.builds(NumLit, st.integers(1, 500)),
    st.builds(Rec, types),
)

terms = st.recursive(
    _atoms,
    lambda inner: st.one_of(
        st.builds(App, inner, inner),
        st.builds(Lam, NAMES, types, inner),
        st.builds(Pair, inner, inner),
    ),
    max_leaves=8,
)

_atomic_formulas = st.one_of(
    st.just(Falsum()),
    st.builds(Eq, terms, terms),
    st.builds(St, types, terms),
    st.builds(Rel, st.sampled_from(["eq", "le", "approx", "maj"]), types, terms, terms),
)

formulas = st.recursive(
    _atomic_formulas,
    lambda inner: st.one_of(
        st.builds(And, inner, inner),
        st.builds(Or, inner, inner),
        st.builds(Implies, inner, inner),
        st.builds(Quant, st.sampled_from(QUANT_KINDS), NAMES, types, inner),
        st.builds(BQuant, st.sampled_from(["forall", "exists"]), NAMES, terms, inner),
    ),
    max_leaves=6,
)
