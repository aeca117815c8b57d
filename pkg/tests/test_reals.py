import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nsak.reals import (
    FinSeq, approx, fast_converging_at, hat, parse_real_literal, rat, rat_decode, rat_encode,
    real_eq_upto, real_lt_witness, seq_concat, seq_decode, seq_encode, seq_trunc, two_pow,
)
from nsak.samples import raw_sequence

THIRD = Fraction(1, 3)


def third_truncations(k):
    # floor(2^(k+1) / 3) / 2^(k+1): within 2^-(k+1) of 1/3, from below
    d = 2 ** (k + 1)
    return Fraction(d // 3, d)


def test_constant_sequence_is_kept():
    x = hat(lambda k: THIRD)
    assert all(x(k) == THIRD for k in range(40))


def test_valid_code_is_unchanged():
    x = hat(third_truncations)
    assert all(x(k) == third_truncations(k) for k in range(80))


def test_alternating_sequence_freezes_at_zero():
    x = hat(lambda k: k % 2)
    assert [x(k) for k in range(12)] == [0] * 12
    assert approx(x, 9) == 0


def test_late_jump_freezes_before_the_jump():
    x = hat(lambda k: Fraction(0) if k < 5 else Fraction(1))
    assert x(4) == 0 and x(5) == 0 and x(50) == 0


def test_approx_of_constants():
    assert approx(rat(0), 17) == 0
    assert approx(rat(THIRD), 5) == THIRD


@pytest.mark.parametrize("seed", range(20))
def test_hat_output_converges_fast(seed):
    rng = random.Random(seed)
    x = hat(raw_sequence(rng))
    for _ in range(300):
        n, i = rng.randrange(0, 60), rng.randrange(0, 60)
        assert fast_converging_at(x, n, i)


def test_equality_verdicts():
    assert real_eq_upto(rat(THIRD), rat(THIRD), 30).status == "consistent_up_to"
    v = real_eq_upto(rat(THIRD), hat(third_truncations), 64)
    assert (v.status, v.n) == ("consistent_up_to", 64)
    v = real_eq_upto(rat(0), rat(1), 64)
    assert (v.status, v.n) == ("distinct", 2)


def test_distinct_witness_reverifies_and_is_symmetric():
    rng = random.Random(5)
    for _ in range(200):
        x = rat(Fraction(rng.randint(-50, 50), rng.randint(1, 50)))
        y = rat(Fraction(rng.randint(-50, 50), rng.randint(1, 50)))
        a, b = real_eq_upto(x, y, 40), real_eq_upto(y, x, 40)
        assert a == b
        if a.status == "distinct":
            assert abs(x(a.n) - y(a.n)) > two_pow(1 - a.n)


def test_lt_verdicts():
    v = real_lt_witness(rat(0), rat(1), 10)
    assert (v.status, v.n) == ("lt", 2)
    assert real_lt_witness(rat(THIRD), rat(THIRD), 200).status == "unresolved"
    x, y = rat(THIRD), rat(THIRD + two_pow(-10))
    v = real_lt_witness(x, y, 20)
    assert (v.status, v.n) == ("lt", 12)
    assert x(v.n) + two_pow(1 - v.n) < y(v.n)


def test_sequence_code_goldens():
    # c(<>) = 0 and c(s*<x>) = 1 + pair(c(s), x) with pair(a, b) = (a+b)(a+b+1)/2 + b
    assert seq_encode([]) == 0
    assert seq_encode([5]) == 21
    assert seq_encode([1, 2]) == 18
    assert seq_decode(18) == (1, 2)


def test_finite_sequence_operations():
    assert seq_concat(FinSeq((1, 2)), FinSeq((3,))) == FinSeq((1, 2, 3))
    assert len(FinSeq()) == 0
    assert seq_trunc(FinSeq((7, 8, 9)), 2) == FinSeq((7, 8))
    assert seq_trunc(lambda n: n * n, 4) == FinSeq((0, 1, 4, 9))
    with pytest.raises(IndexError):
        seq_trunc(FinSeq((1,)), 2)


# the code roughly doubles in bit length per element, so long lists are out of reach
@given(st.lists(st.integers(0, 1000), max_size=12))
def test_sequence_round_trip(xs):
    assert seq_decode(seq_encode(xs)) == tuple(xs)
    assert FinSeq.from_code(FinSeq(tuple(xs)).code).elements == tuple(xs)


@given(st.lists(st.integers(0, 9), max_size=10), st.lists(st.integers(0, 9), max_size=10))
def test_concatenation_lengths_and_indices(s, t):
    c = seq_concat(FinSeq(tuple(s)), FinSeq(tuple(t)))
    assert len(c) == len(s) + len(t)
    assert all(c[i] == s[i] for i in range(len(s)))
    assert all(c[len(s) + j] == t[j] for j in range(len(t)))


@given(st.fractions())
def test_rational_code_round_trip(q):
    assert rat_decode(rat_encode(q)) == q


def test_real_literals(tmp_path):
    assert parse_real_literal("rat(-3/4)")(9) == Fraction(-3, 4)
    (tmp_path / "q.txt").write_text("# third\n0\n1/4\n5/16\n")
    x = parse_real_literal("cauchy(q.txt)", tmp_path)
    assert [x(k) for k in range(5)] == [0, Fraction(1, 4), Fraction(5, 16), Fraction(5, 16), Fraction(5, 16)]
    with pytest.raises(ValueError):
        parse_real_literal("float(0.3)")
