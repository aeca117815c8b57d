"""One PASS/FAIL line per acceptance criterion, printed past output capture."""
import pytest

from nsak.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"c{c[0]}" for c in CRITERIA])
def test_criterion(number, capsys):
    outcome = run_criterion(number)
    with capsys.disabled():
        print("\n" + outcome.line)
    assert outcome.ok, outcome.line
