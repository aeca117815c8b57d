from pathlib import Path

import pytest

from nsak import binding
from nsak.checker import is_internal, relativize
from nsak.prelude import PRELUDE, show
from nsak.schemas import (
    CATALOG, DG_AXIOMS, TRANSFER_FAMILY, Instantiation, SideConditionError, catalog, instantiate,
    is_quantifier_free, model_check_instance, parse_abstraction, template, threshold,
)
from nsak.checker import free_vars
from nsak.syntax import Arrow, BASE, Implies, Falsum, parse

GOLDEN = Path(__file__).parent / "golden"
T1 = Arrow(BASE, BASE)


def inst(ident, phis=(), types=(), terms=()):
    return instantiate(Instantiation(ident, tuple(parse_abstraction(p) for p in phis),
                                     tuple(parse("type", t) for t in types),
                                     tuple(parse("term", t, PRELUDE) for t in terms)))


def test_catalog_size_and_entries():
    ids = [c[0] for c in catalog()]
    assert len(ids) >= 30
    assert len(set(ids)) == len(ids)
    conds = {i: c for i, _, c in catalog()}
    assert "internal phi" in conds["I"]
    assert "any Phi" in conds["IA_ST"]


def test_catalog_is_stable():
    assert catalog() == catalog()


def test_no_excluded_middle():
    assert not any("LEM" in i or "EM" == i for i in CATALOG)


def test_dg_and_transfer_are_disjoint():
    assert DG_AXIOMS and TRANSFER_FAMILY
    assert not DG_AXIOMS & TRANSFER_FAMILY


def test_pf_tp_existential():
    assert show(inst("PF_TP_E", ["[x:0] x = x"])) == "(exists x:0. x = x) -> (exists-st x:0. x = x)"


def test_pf_tp_rejects_parameters():
    with pytest.raises(SideConditionError) as info:
        inst("PF_TP_E", ["[x:0] x = y"])
    assert "parameter-free" in str(info.value)


def test_idealisation_requires_internal():
    with pytest.raises(SideConditionError) as info:
        inst("I", ["[x:0, y:0] st[0](x)"])
    assert "internal phi required" in str(info.value)


def test_idealisation_golden():
    got = show(inst("I", ["[x:0, y:0] x = y"]))
    assert got == (GOLDEN / "I_eq.txt").read_text().strip()


def test_extensionality_golden():
    got = show(inst("E", types=["(0->0)->0"]))
    assert got == (GOLDEN / "E_type2.txt").read_text().strip()


def test_extensionality_needs_arrow_type():
    with pytest.raises(SideConditionError):
        inst("E", types=["0"])


def test_wc_n0_requires_quantifier_free():
    with pytest.raises(SideConditionError):
        inst("WC_N0", ["[a:0->0, n:0] forall m:0. a m = n"])


def test_quantifier_free_predicate():
    assert is_quantifier_free(parse("formula", "x = 0 & (y = 1 -> false)"))
    assert not is_quantifier_free(parse("formula", "forall x:0. x = x"))


def test_every_schema_instantiates_closed():
    args = {
        "IA_ST": (["[n:0] n = n"], (), ()),
        "mAC": (["[x:0, y:0] x = y"], (), ()),
        "R": (["[x:0, y:0] x = y"], (), ()),
        "I": (["[x:0, y:0] x = y"], (), ()),
        "IP": (["[y:0] y = 0", "[y:0] y = 0"], (), ()),
        "M": (["[x:0] x = 0", "[] 0 = 0"], (), ()),
        "PF_TP_E": (["[x:0] x = x"], (), ()),
        "PF_TP_A": (["[x:0] x = x"], (), ()),
        "WC_N": (["[a:0->0, n:0] a 0 = n"], (), ()),
        "WC_N0": (["[a:0->0, n:0] a 0 = n"], (), ()),
        "QF_AC": (["[x0:(0->0)->0, y:0] x0 (lam n:0. y) = y"], (), ()),
        "ST_C": ((), (), ["one1"]),
        "CT": ((), (), ["lam e:0. lam n:0. lam s:0. 0"]),
        "CONT_C": ((), (), ["lam f:0->0. f 0"]),
        "GAFOT": ((), (), ["lam f:0->0. f 0"]),
        "NEAR_STD": ((), (), ["lam f:0->0. f 0"]),
    }
    seen = []
    for ident in CATALOG:
        if ident == "NS":
            f = instantiate(Instantiation("NS"), {"N": BASE})
        else:
            phis, types, terms = args.get(ident, ((), (), ()))
            f = inst(ident, phis, types, terms)
        free = set(free_vars(f)) - {"N"}
        assert not free, (ident, free)
        seen.append(f)
    assert len(seen) == len(CATALOG)


def test_instantiate_injective_up_to_alpha():
    phis = ["[x:0, y:0] x = y", "[x:0, y:0] y = x", "[x:0, y:0] x = 0", "[x:0, y:0] S x = y"]
    outs = [inst("I", [p]) for p in phis]
    for i in range(len(outs)):
        for j in range(i + 1, len(outs)):
            assert not binding.alpha_eq(outs[i], outs[j])


def test_transfer_conclusion_is_external():
    assert not is_internal(inst("PF_TP_E", ["[x:0] x = x"]))


def test_ia_st_rejects_open_instances():
    with pytest.raises((SideConditionError, ValueError)):
        inst("IA_ST", ["[n:0] n = m"])


def test_template_has_placeholders():
    assert "@" in show(template("I"))


# ------------------------------------------------------------ model checks

def test_maj_valid_at_b2():
    assert model_check_instance(inst("MAJ", types=["0"]), B=2, st="all").status == "valid"


def test_standardness_downward_closed_at_threshold():
    f = inst("ST_B", types=["0->0"])
    assert model_check_instance(f, B=2, st=threshold(1)).status == "valid"


def test_jump_obstruction_countermodel():
    # with the inner quantifier over all f, a standard jump functional is impossible
    xihu = parse("formula", "exists-st phi:(0->0)->0. forall f:0->0. "
                 "((exists-st n:0. f n = 0) -> phi f = 0) & (phi f = 0 -> exists-st n:0. f n = 0)")
    assert model_check_instance(xihu, B=1, st=threshold(0)).status == "countermodel"
    assert model_check_instance(Implies(xihu, Falsum()), B=1, st=threshold(0)).status == "valid"
    # the fully relativized form survives in the same model
    rel = relativize(inst("E2_EXISTS"))
    assert model_check_instance(rel, B=1, st=threshold(0)).status == "valid"


def test_countermodel_environment():
    v = model_check_instance(parse("formula", "forall x:0. x = 0"), B=1)
    assert v.status == "countermodel" and v.environment == (("x", 1),)


def test_budget_gives_inconclusive():
    f = inst("MAJ", types=["0->0"])
    assert model_check_instance(f, B=2, budget=10).status == "inconclusive"
