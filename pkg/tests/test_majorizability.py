import pytest

from nsak.majorizability import (
    MajModel, certify_majorant, leq_star_model, leq_star_sampled, majorant, model_suite,
    is_monotone_model, probe_transitivity, types_up_to_depth, unfold_maj,
)
from nsak.evaluator import enumerate_model
from nsak.prelude import PRELUDE
from nsak.syntax import Arrow, BASE, Prod, Succ, Zero, Var, parse, print_ast

T1 = Arrow(BASE, BASE)
T2 = Arrow(T1, BASE)


def test_base_case():
    assert leq_star_model(2, 3, BASE, 3)
    assert not leq_star_model(3, 2, BASE, 3)


def test_identity_below_constant_two():
    assert leq_star_model((0, 1, 2), (2, 2, 2), T1, 2)


def test_decreasing_right_side_fails():
    # y(0)=1, y(1)=0: the y(v) <=* y(u) clause fails at u=1, v=0
    for x in enumerate_model(T1, 1):
        assert not leq_star_model(x, (1, 0), T1, 1)


def test_monotone_examples():
    for B in (1, 2):
        for t in (BASE, T1, Prod(BASE, T1)):
            mm = MajModel(B)
            top = mm.model.top(t)
            assert is_monotone_model(top, t, B)
    assert not is_monotone_model((2, 1, 0), T1, 2)
    assert all(is_monotone_model(b, BASE, 2) for b in range(3))


def test_counterexample_is_recheckable():
    mm = MajModel(2)
    x, y = (2, 2, 2), (0, 1, 2)
    u, v = mm.counterexample(x, y, T1)
    assert v <= u
    assert not (x[v] <= y[u] and y[v] <= y[u])
    assert mm.counterexample(y, x, T1) is None


def test_sampled_examples():
    assert leq_star_sampled(lambda n: n, lambda n: n + 1, T1, 1000).status == "holds_on_samples"
    v = leq_star_sampled(lambda n: 2 * n, lambda n: n, T1, 1000)
    assert v.status == "fails" and v.counterexample == (1, 1)
    assert leq_star_sampled(lambda n: 0, lambda n: 0, T1, 1000).status == "holds_on_samples"
    assert leq_star_sampled(2, 3, BASE).status == "holds"


def test_sampled_type_two():
    Y = lambda f: f(0) + f(1)
    Z = lambda f: 2 * max(f(0), f(1))
    assert leq_star_sampled(Y, Z, T2, 300).status == "holds_on_samples"
    assert leq_star_sampled(Z, Y, T2, 300).status == "fails"


def test_sampled_type_three_rejected():
    with pytest.raises(ValueError):
        leq_star_sampled(None, None, Arrow(T2, BASE))


def test_sampled_agrees_with_model_on_small_tables():
    # host functions from type-1 tables at B=2, extended constantly
    mm = MajModel(2)
    elems = enumerate_model(T1, 2)
    for x in elems[:9]:
        for y in elems:
            if mm.leq(x, y, T1):
                fx = lambda n, x=x: x[min(n, 2)]
                fy = lambda n, y=y: y[min(n, 2)]
                assert leq_star_sampled(fx, fy, T1, 36).status != "fails"


def test_majorant_examples():
    assert majorant(Zero()) == Zero()
    assert majorant(Succ()) == Succ()
    for t, ty in ((Succ(), T1), (PRELUDE["add"], Arrow(BASE, T1)), (PRELUDE["sub"], Arrow(BASE, T1))):
        assert all(c.ok for c in certify_majorant(t, ty))


def test_rec_majorant_certified():
    rec = parse("term", "Rec[0]")
    ty = Arrow(BASE, Arrow(BASE, Arrow(Arrow(BASE, T1), BASE)))
    certs = certify_majorant(rec, ty, Bs=(1,))
    assert all(c.ok for c in certs)


def test_unfold_maj_shape():
    f = unfold_maj(Var("x"), Var("y"), T1)
    assert print_ast(f).startswith("forall")
    assert print_ast(unfold_maj(Var("x"), Var("y"), BASE)) == "x <=[0] y"


def test_types_up_to_depth():
    assert types_up_to_depth(0) == [BASE]
    assert T2 in types_up_to_depth(2)


def test_suite_depth_one_both_bounds():
    results = model_suite(Bs=(1, 2), depth=1)
    assert results and all(r.ok and not r.skipped for r in results)


def test_transitivity_is_reported_not_presumed():
    r = probe_transitivity(MajModel(1), T1)
    assert r.name == "transitivity" and isinstance(r.ok, bool)
