import io
import shlex

import pytest

from nsak.cli import RunConfig, main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def records(text):
    return [dict(item.split("=", 1) for item in shlex.split(line)) for line in text.splitlines()]


def test_prove_library():
    code, out = run("prove", "library")
    assert code == 0
    assert out.count("PASS") == 7


def test_discontinuity_demo():
    code, out = run("--format", "line", "demo", "discontinuity", "--N", "8")
    assert code == 0
    rec = records(out)[0]
    assert (rec["AGREEMENT"], rec["Y0_F0"], rec["Y0_G0"]) == ("8", "1", "0")


def test_majorizability_example():
    code, out = run("maj", "--B", "2", "--type", "0->0", "--exhaustive", "reflexivity-iff-monotone")
    assert code == 0 and out.startswith("PASS")


def test_eval_and_parse():
    assert run("eval", "add 2 3") == (0, "eval: value=5\n")
    code, out = run("parse", "term", "lam x:0. S x")
    assert code == 0 and "lam x:0. S x" in out


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["demo", "nothing"],
    ["eval", "add 2"],
    ["parse", "term", "lam x:0."],
    ["--B", "notanumber", "selftest"],
])
def test_usage_errors_exit_two(argv):
    assert run(*argv)[0] == 2


def test_rejected_proof_exits_one(tmp_path):
    bad = tmp_path / "bad.prf"
    bad.write_text("name: bad\ntheory:\n1 | 0 = S 0 | eq_refl\n")
    code, out = run("prove", str(bad))
    assert code == 1 and "FAIL" in out


def test_axiom_instantiation():
    code, out = run("axiom", "list")
    assert code == 0 and "MAJ" in out
    code, _ = run("axiom", "inst", "MAJ", "--type", "0")
    assert code == 0


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("NSAK_N", "4")
    monkeypatch.setenv("NSAK_FORMAT", "line")
    assert RunConfig.from_env().N == 4
    code, out = run("demo", "discontinuity")
    assert code == 0 and records(out)[0]["AGREEMENT"] == "4"
    code, out = run("demo", "discontinuity", "--N", "6")
    assert records(out)[0]["AGREEMENT"] == "6"


def test_selftest_is_byte_identical():
    first = run("--format", "line", "--seed", "3", "selftest")
    second = run("--format", "line", "--seed", "3", "selftest")
    assert first[0] == 0
    assert first == second
    assert all(line.startswith("RECORD=") for line in first[1].splitlines())
