import pytest
from hypothesis import given, settings

from nsak.syntax import (
    Arrow, BASE, App, Eq, Lam, NumLit, ParseError, Quant, Var, Zero, Rec, Succ,
    parse, print_ast, numeral, arrows, type_depth, Falsum, Implies, Not,
)
from strategies import formulas, terms, types


def test_parse_type_arrow():
    assert parse("type", "0->0") == Arrow(BASE, BASE)


def test_arrow_is_right_associative():
    assert parse("type", "0->0->0") == Arrow(BASE, Arrow(BASE, BASE))
    assert parse("type", "(0->0)->0") == Arrow(Arrow(BASE, BASE), BASE)


def test_parse_lambda():
    assert parse("term", "lam f:0->0. f 0") == Lam("f", Arrow(BASE, BASE), App(Var("f"), Zero()))


def test_parse_standard_quantifier():
    assert parse("formula", "forall-st x:0. x = x") == Quant("forall-st", "x", BASE, Eq(Var("x"), Var("x")))


def test_application_left_associative():
    assert parse("term", "f a b") == App(App(Var("f"), Var("a")), Var("b"))


def test_recursor_and_successor_constants():
    t = parse("term", "Rec[0] 0 (lam k:0. lam r:0. S r)")
    assert t.fn.fn == Rec(BASE)
    assert parse("term", "S 0") == App(Succ(), Zero())


def test_print_examples():
    assert print_ast(Arrow(BASE, BASE)) == "0->0"
    assert print_ast(NumLit(3)) == "3"
    f = parse("formula", "forall~st x:0->0. x = x")
    assert print_ast(f).startswith("forall~st x:0->0.")


def test_numeral_helper():
    assert numeral(0) == Zero()
    assert numeral(4) == NumLit(4)
    with pytest.raises(ValueError):
        NumLit(0)


def test_types_helpers():
    assert arrows(BASE, BASE, BASE) == parse("type", "0->0->0")
    assert type_depth(parse("type", "(0->0)->0")) == 2


def test_negation_is_implication_to_false():
    assert Not(Eq(Zero(), Zero())) == Implies(Eq(Zero(), Zero()), Falsum())


def test_parse_error_reports_position_and_expectations():
    with pytest.raises(ParseError) as info:
        parse("formula", "forall x:0.\n  x = ")
    err = info.value
    assert err.line == 2
    assert err.col >= 5
    assert err.expected


def test_unknown_character():
    with pytest.raises(ParseError):
        parse("term", "x $ y")


@settings(max_examples=300, deadline=None)
@given(types)
def test_type_round_trip(t):
    assert parse("type", print_ast(t)) == t


@settings(max_examples=400, deadline=None)
@given(terms)
def test_term_round_trip(t):
    assert parse("term", print_ast(t)) == t


@settings(max_examples=400, deadline=None)
@given(formulas)
def test_formula_round_trip(f):
    assert parse("formula", print_ast(f)) == f


@settings(max_examples=200, deadline=None)
@given(formulas, formulas)
def test_printer_is_injective(a, b):
    if a != b:
        assert print_ast(a) != print_ast(b)
