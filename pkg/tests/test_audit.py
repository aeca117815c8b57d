from nsak.audit import mutations, run_mutations, spot_check_lemmas
from nsak.kernel import library_files, parse_script


def test_mutation_suite_is_rejected_in_full():
    outcomes = run_mutations()
    assert len(outcomes) >= 20
    accepted = [o.mutation for o in outcomes if not o.rejected]
    assert not accepted, [(m.script, m.step, m.mutated) for m in accepted]
    assert {o.mutation.script for o in outcomes} == {"L2", "L3", "L5"}


def test_each_mutation_changes_exactly_one_line():
    path = next(p for p in library_files() if p.stem.startswith("L2"))
    text = path.read_text()
    for mut in mutations(text):
        diff = [a for a, b in zip(text.splitlines(), mut.text.splitlines()) if a != b]
        assert len(diff) == 1
        assert mut.original != mut.mutated


def test_library_lemmas_hold_on_samples():
    for path in library_files():
        for v in spot_check_lemmas(parse_script(path.read_text()), points=200):
            assert v.status == "holds_on_samples", v
            assert v.checked > 0


def test_false_lemma_is_caught():
    text = "\n".join([
        "name: bad",
        "theory:",
        "lemma WRONG := forall a:0. forall b:0. a <=[0] b",
        "lemma WRONG1 := forall f:0->0. f <=*[0->0] one1",
        "1 | 0 = 0 | eq_refl",
    ])
    verdicts = {v.lemma: v for v in spot_check_lemmas(parse_script(text))}
    assert verdicts["WRONG"].status == "fails"
    assert verdicts["WRONG1"].status == "fails"


def test_lemma_with_constants_is_sampled_over_them():
    text = "\n".join([
        "name: c",
        "theory:",
        "const: N:0",
        "lemma LT := forall a:0. a <=[0] add a N",
        "lemma NOT := forall a:0. add a N <=[0] a",
        "1 | 0 = 0 | eq_refl",
    ])
    verdicts = {v.lemma: v.status for v in spot_check_lemmas(parse_script(text))}
    assert verdicts == {"LT": "holds_on_samples", "NOT": "fails"}
