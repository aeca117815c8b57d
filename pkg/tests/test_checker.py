import pytest
from hypothesis import given, settings

from nsak.checker import (
    TypeCheckError, check_formula, classify, desugar_monotone, free_vars, has_unbounded_quantifier,
    infer_type, is_internal, relativize, unfold_equality,
)
from nsak.prelude import PRELUDE
from nsak.syntax import Arrow, BASE, parse, print_ast
from strategies import formulas

T1 = Arrow(BASE, BASE)


def F(text):
    return parse("formula", text)


def test_infer_lambda():
    assert infer_type(parse("term", "lam f:0->0. f 0"), {}) == Arrow(T1, BASE)


def test_recursor_type():
    t = parse("term", "Rec[0->0]")
    assert print_ast(infer_type(t, {})) == "0->(0->0)->(0->(0->0)->0->0)->0->0"


def test_addition_kernel_has_type_zero():
    t = parse("term", "Rec[0] n 0 (lam k:0. lam r:0. S r)")
    assert infer_type(t, {"n": BASE}) == BASE


def test_self_application_rejected():
    with pytest.raises(TypeCheckError):
        infer_type(parse("term", "lam x:0. x x"), {})


def test_unbound_variable_rejected():
    with pytest.raises(TypeCheckError):
        infer_type(parse("term", "y"), {})


def test_pairs_and_projections():
    t = parse("term", "lam p:0*(0->0). snd p (fst p)")
    assert print_ast(infer_type(t, {})) == "0*(0->0)->0"


def test_formula_type_errors_name_the_position():
    with pytest.raises(TypeCheckError) as info:
        check_formula(F("f = 0"), {"f": T1})
    assert "0->0" in str(info.value)


def test_is_internal_examples():
    assert is_internal(F("forall x:0. x = x"))
    assert not is_internal(F("st[0](y)"))
    assert not is_internal(F("forall~st x:0->0. x = x"))
    assert not is_internal(F("f ~[0->0] g"))


def test_relativize_examples():
    assert print_ast(relativize(F("forall x:0. x = x"))) == "forall-st x:0. x = x"
    assert relativize(F("x = y")) == F("x = y")
    assert relativize(F("forall n <= t. n = n")) == F("forall n <= t. n = n")


def test_unfold_equality_examples():
    assert print_ast(unfold_equality(F("x =[0->0] y"))) == "forall z:0. x z = y z"
    assert print_ast(unfold_equality(F("x ~[0->0] y"))) == "forall-st z:0. x z = y z"
    assert unfold_equality(F("x =[0] y")) == F("x = y")


def test_unfold_at_type_two_avoids_capture():
    out = print_ast(unfold_equality(F("z =[(0->0)->0] y")))
    assert out == "forall z_1:0->0. z z_1 = y z_1"


def test_free_vars_examples():
    assert free_vars(parse("term", "lam x:0. x")) == {}
    assert free_vars(F("x = y")) == {"x": BASE, "y": BASE}
    assert free_vars(F("forall x:0. x = y")) == {"y": BASE}


def test_classify():
    c = classify(F("forall x:0. x = x"))
    assert c.internal and c.closed


def test_desugar_monotone():
    out = print_ast(desugar_monotone(F("forall~st x:0->0. x = x")))
    assert out == "forall-st x:0->0. x <=*[0->0] x -> x = x"
    out = print_ast(desugar_monotone(F("exists~st x:0. x = x")))
    assert out == "exists-st x:0. x <=*[0] x & x = x"


def test_prelude_terms_are_typed():
    for name, term in PRELUDE.items():
        infer_type(term, {})


@settings(max_examples=300, deadline=None)
@given(formulas)
def test_relativize_idempotent(f):
    once = relativize(f)
    assert relativize(once) == once


@settings(max_examples=300, deadline=None)
@given(formulas)
def test_relativized_formulas_are_external(f):
    if has_unbounded_quantifier(f):
        assert not is_internal(relativize(f))


@settings(max_examples=200, deadline=None)
@given(formulas)
def test_infer_deterministic(f):
    assert classify(f) == classify(f)
