import pytest
from hypothesis import given, settings, strategies as st

from nsak.checker import infer_type
from nsak.evaluator import (
    FuelExhausted, ModelSizeError, Oracle, UnboundedQuantifier, apply_functional, enumerate_model,
    eval_bounded, eval_finite_model, eval_nat, model_size, normalize,
)
from nsak.prelude import PRELUDE
from nsak.syntax import Arrow, BASE, App, NumLit, Zero, apply, numeral, parse, print_ast
from nsak import witnesses

T1 = Arrow(BASE, BASE)


def term(text):
    return parse("term", text, PRELUDE)


def test_recursor_base_case():
    t = parse("term", "Rec[0] 0 b s")
    assert normalize(t) == parse("term", "b")


def test_addition_normalizes_to_numeral():
    assert normalize(term("add 2 3")) == NumLit(5)
    assert eval_nat(term("add 2 3")) == 5


def test_beta():
    assert normalize(term("(lam x:0. x) 7")) == NumLit(7)


def test_eval_nat_small():
    assert eval_nat(Zero()) == 0
    assert eval_nat(term("S (S 0)")) == 2


def test_projections():
    assert eval_nat(term("snd <3, fst <4, 5>>")) == 4


def test_fuel_exhaustion_reports_steps():
    with pytest.raises(FuelExhausted) as info:
        eval_nat(term("mul 40 40"), fuel=100)
    assert info.value.steps == 101


def test_apply_functional_oracle():
    assert apply_functional(term("lam f:0->0. f 3"), lambda n: n * n) == 9
    assert apply_functional(term("lam f:0->0. 4"), lambda n: 1 / 0) == 4


def test_oracle_memo_and_support():
    calls = []
    o = Oracle(lambda n: calls.append(n) or n)
    apply_functional(term("lam f:0->0. add (f 2) (f 2)"), o)
    assert calls == [2]
    assert o.support == {2}


def test_y0_term_matches_witness():
    N = 5
    y0_term = term(f"lam f:0->0. Rec[0] (S (S {N})) 1 (lam k:0. lam r:0. mul r (sg (f k)))")
    ones = lambda n: 1
    late = lambda n: 1 if n < N + 2 else 0
    early = lambda n: 1 if n < N else 0
    for f in (ones, late, early):
        assert apply_functional(y0_term, f) == witnesses.y0(N)(f)


def test_enumerate_model_sizes():
    assert enumerate_model(BASE, 1) == [0, 1]
    assert len(enumerate_model(T1, 1)) == 4
    assert len(enumerate_model(Arrow(T1, BASE), 1)) == 16


def test_size_guard():
    with pytest.raises(ModelSizeError):
        enumerate_model(Arrow(T1, BASE), 2, cap=1000)
    assert model_size(Arrow(T1, BASE), 2) == 3 ** 27


def test_finite_model_saturates():
    assert eval_finite_model(term("S 3"), 3) == 3
    assert eval_finite_model(term("add 1 1"), 3) == 2
    assert eval_finite_model(term("lam x:0. 0"), 2) == (0, 0, 0)


def test_eval_bounded():
    assert eval_bounded(parse("formula", "forall n <= 3. n = n"))
    assert not eval_bounded(parse("formula", "0 = S 0"))
    f0 = "lam n:0. 1"
    Z = "lam f:0->0. lam n:0. sg (f n)"
    assert eval_bounded(parse("formula", f"forall n <= 8. ({Z}) ({f0}) n = 1", PRELUDE))
    with pytest.raises(UnboundedQuantifier):
        eval_bounded(parse("formula", "forall n:0. n = n"))


# arithmetic expressions with an independent host oracle
OPS = {"add": lambda a, b: a + b, "sub": lambda a, b: max(a - b, 0), "max": max, "min": min,
       "mul": lambda a, b: a * b}

exprs = st.recursive(
    st.integers(0, 9).map(lambda n: (numeral(n), n)),
    lambda inner: st.tuples(st.sampled_from(sorted(OPS)), inner, inner).map(
        lambda t: (apply(PRELUDE[t[0]], t[1][0], t[2][0]), OPS[t[0]](t[1][1], t[2][1]))),
    max_leaves=4,
)


@settings(max_examples=150, deadline=None)
@given(exprs)
def test_eval_matches_host_arithmetic(e):
    t, value = e
    assert eval_nat(t) == value
    assert normalize(t) == numeral(value)


@settings(max_examples=60, deadline=None)
@given(exprs)
def test_agreement_with_finite_model_when_no_saturation(e):
    t, value = e
    assert eval_finite_model(t, 6600) == value


@settings(max_examples=100, deadline=None)
@given(exprs, st.sampled_from(sorted(OPS)))
def test_subject_reduction(e, op):
    t = App(PRELUDE[op], e[0])
    before = infer_type(t, {})
    assert infer_type(normalize(t), {}) == before == T1


def test_normalization_deterministic():
    t = term("lam x:0. add x (mul 2 3)")
    assert normalize(t) == normalize(t)
    assert print_ast(normalize(term("add 2"))) == print_ast(normalize(term("add 2")))
