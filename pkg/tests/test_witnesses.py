import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nsak.reals import rat, two_pow
from nsak.samples import random_determined_functional, random_rational, random_tree
from nsak.witnesses import (
    DEFAULT_MACHINES, MACHINE_TABLE, CapExceeded, Cover, Functional2, Insufficient, NotATree,
    NotNDetermined, aca_refuter, binary_digits, binary_strings,
    const_stream, counterexample_pair, cover_is_correct, ct_diagonal, digit_error_bound,
    find_cover, functional_standard_part, hbu_cover, is_binary_tree, kripke_gamma,
    partial_sum, phi_sign, prefix_stream, standard_part, standard_part_bound, sup_on_cantor,
    wkl_path, y0, z_transform,
)


def take(f, n):
    return [f(i) for i in range(n)]


def expansion(x: Fraction, n: int) -> list[int]:
    # exact binary digits of x in [0, 1), or all ones for x = 1
    if x == 1:
        return [1] * n
    return [math.floor(x * 2 ** (k + 1)) % 2 for k in range(n)]


# discontinuity ---------------------------------------------------------

def test_y0_cases():
    assert y0(5)(const_stream(1)) == 1
    assert y0(5)(prefix_stream([0], 1)) == 0
    N = 5
    late = lambda n: 1 if n < N + 2 else 0
    Y = y0(N)
    assert Y(late) == 1
    assert Y.last_support == frozenset(range(N + 2))


def test_pair_at_eight():
    p = counterexample_pair(8)
    assert p.agreement == 8
    assert (y0(8)(p.f0), y0(8)(p.g0)) == (1, 0)


def test_pair_at_one():
    p = counterexample_pair(1)
    assert take(p.g0, 4) == [1, 0, 0, 0]


@pytest.mark.parametrize("N", range(1, 65))
def test_pair_agrees_exactly_n_places_and_is_separated(N):
    p = counterexample_pair(N)
    assert p.agreement == N
    assert p.f0(N) != p.g0(N)
    assert {y0(N)(p.f0), y0(N)(p.g0)} == {0, 1}


def test_support_suffices():
    rng = random.Random(3)
    funcs = [y0(4)] + [random_determined_functional(rng)[0] for _ in range(20)]
    for Y in funcs:
        for _ in range(20):
            f = prefix_stream([rng.randint(0, 1) for _ in range(12)])
            value, support = Y.call_logged(f)
            g = lambda n: f(n) if n in support else rng.randint(0, 5)
            assert Y(g) == value


def test_z_transform():
    f = lambda n: 5 if n % 2 else 0
    assert take(z_transform(f), 4) == [0, 1, 0, 1]
    assert take(z_transform(const_stream(0)), 5) == [0] * 5


@given(st.lists(st.integers(0, 4), min_size=1, max_size=20))
def test_z_transform_preserves_bounded_zeros(values):
    f = prefix_stream(values, 3)
    z = z_transform(f)
    for k in range(len(values) + 2):
        assert any(f(n) == 0 for n in range(k + 1)) == any(z(n) == 0 for n in range(k + 1))
        assert z(k) <= 1


# binary expansions ----------------------------------------------------

def test_phi_sign_examples():
    phi = phi_sign(8)
    assert phi(rat(-1)) == 0
    assert phi(rat(1)) == 1
    assert phi(rat(0)) == 0


@given(st.fractions(min_value=-2, max_value=2), st.integers(1, 64))
def test_phi_sign_guarantees(q, N):
    value = phi_sign(N)(rat(q))
    if value == 0:
        assert q <= Fraction(1, N) + two_pow(-N)
    else:
        assert q > Fraction(1, N) - two_pow(-N)


def test_digit_examples():
    assert binary_digits(rat(0), 6, 1024) == [0] * 6
    assert binary_digits(rat(Fraction(7, 10)), 4, 2 ** 10) == [1, 0, 1, 1]
    assert binary_digits(rat(1), 4, 2 ** 10) == [1, 1, 1, 1]


def test_digits_match_exact_expansion_outside_the_slack_band():
    rng = random.Random(11)
    N, n = 2 ** 10, 16
    slack = 2 * (Fraction(1, N) + two_pow(-N))
    for _ in range(300):
        x = random_rational(rng)
        bits = binary_digits(rat(x), n, N)
        assert abs(x - partial_sum(bits)) <= digit_error_bound(n, N)
        oracle = expansion(x, n)
        if bits != oracle:
            k = next(i for i in range(n) if bits[i] != oracle[i])
            midpoint = partial_sum(oracle[:k]) + two_pow(-(k + 1))
            assert abs(x - midpoint) <= slack


# standard part --------------------------------------------------------

def test_standard_part_of_zero():
    sp = standard_part(rat(0), 16)
    assert sp.value == 0 and all(sp.u(k) == 0 for k in range(20))


def test_standard_part_of_point_three():
    x = Fraction(3, 10)
    sp = standard_part(rat(x), 1024)
    assert abs(sp.value - x) <= Fraction(4, 1024)
    assert sp.u(len(sp.digits) + 5) == sp.value


def test_standard_part_guard_branch():
    sp = standard_part(rat(2), 16)
    assert not sp.in_band and sp.value == 0


def test_standard_part_bound_carries_the_cap_term():
    assert standard_part_bound(64) == Fraction(4, 64) + two_pow(-60)
    assert standard_part_bound(32) == Fraction(4, 32)


@pytest.mark.parametrize("N", [64, 256, 1024])
def test_standard_part_accuracy(N):
    rng = random.Random(N)
    for _ in range(100):
        x = random_rational(rng)
        sp = standard_part(rat(x), N)
        assert all(d in (0, 1) for d in sp.digits)
        assert abs(sp.value - x) <= standard_part_bound(N)


def test_functional_standard_part_examples():
    Y = Functional2(lambda f: f(0) * 3 + 1, "first")
    s = functional_standard_part(Y, 4, n0=99)
    for sigma in binary_strings(6):
        f = prefix_stream(sigma)
        assert s(f) == Y(f)
        assert s.last_support <= frozenset(range(4))
    assert s(prefix_stream([2, 0])) == 99
    big = functional_standard_part(y0(9), 4, n0=0)
    ones = const_stream(1)
    assert big(ones) == 0 and y0(9)(ones) == 1


# trees ----------------------------------------------------------------

def test_wkl_examples():
    full = {s for d in range(6) for s in binary_strings(d)}
    assert take(wkl_path(full, 5), 8) == [0] * 8
    T = {(), (1,), (1, 1), (1, 1, 1)}
    assert take(wkl_path(T, 3), 6) == [1, 1, 1, 0, 0, 0]
    assert take(wkl_path(set(), 3), 3) == [0, 0, 0]
    with pytest.raises(NotATree):
        wkl_path({(), (0, 1)}, 2)
    assert not is_binary_tree({(), (2,)})


@pytest.mark.parametrize("seed", range(25))
def test_wkl_path_prefixes_lie_in_random_trees(seed):
    T = random_tree(random.Random(seed), 20)
    path = wkl_path(T, 20)
    assert all(tuple(take(path, k)) in T for k in range(21))


# covers ---------------------------------------------------------------

def test_constant_radius_cover():
    cover = hbu_cover(Functional2(lambda f: 3), 3)
    assert isinstance(cover, Cover)
    assert len(cover.leaves) == 8 and {r for _, r in cover.leaves} == {3}
    assert cover_is_correct(cover)


def test_first_value_cover():
    G = Functional2(lambda f: f(0) + 1)
    out = hbu_cover(G, 1)
    assert isinstance(out, Insufficient) and out.leaf == (1,) and out.value == 2
    assert isinstance(hbu_cover(G, 2), Cover)
    assert find_cover(G, 16).N == 2


def test_empty_prefix_cover():
    cover = hbu_cover(Functional2(lambda f: 0), 0)
    assert cover.cylinders() == [()]
    assert cover_is_correct(cover)
    assert find_cover(Functional2(lambda f: 0), 8).N == 0


def test_cover_not_found_and_cap():
    assert find_cover(Functional2(lambda f: 9), 8) is None
    with pytest.raises(CapExceeded):
        hbu_cover(Functional2(lambda f: 0), 21)


@pytest.mark.parametrize("seed", range(20))
def test_random_determined_covers_are_correct(seed):
    G, m = random_determined_functional(random.Random(seed))
    cover = find_cover(G, 16)
    assert cover is not None
    assert cover_is_correct(cover)


def test_sup_on_cantor_examples():
    assert sup_on_cantor(Functional2(lambda f: f(0) + f(1)), 2) == 2
    assert sup_on_cantor(Functional2(lambda f: 7), 3) == 7
    assert sup_on_cantor(y0(4), 6) == 1
    with pytest.raises(NotNDetermined):
        sup_on_cantor(y0(4), 3)


# machines -------------------------------------------------------------

def test_machine_table_is_large_enough_and_monotone():
    assert len(MACHINE_TABLE) >= 16
    for e in range(len(MACHINE_TABLE)):
        for n in range(4):
            assert DEFAULT_MACHINES(e, n, 0) is None
            seen = None
            for s in range(60):
                v = DEFAULT_MACHINES(e, n, s)
                if seen is not None:
                    assert v == seen
                seen = v if v is not None else seen


def test_diagonal_examples():
    zero, loop = MACHINE_TABLE.index("zero"), MACHINE_TABLE.index("loop")
    d = ct_diagonal(1000)
    assert d.f0[zero] == 1 and d.values[zero] == 0
    assert d.f0[loop] == 0 and d.values[loop] is None
    assert set(ct_diagonal(0).f0) == {0}


def test_diagonal_differs_wherever_defined():
    d = ct_diagonal(1000)
    assert d.defined()
    decided = [e for e in d.defined() if d.values[e] in (0, 1)]
    assert decided and all(d.f0[e] != d.values[e] for e in decided)
    assert d.disagreements()


def test_aca_refuter():
    f = aca_refuter(lambda n: n)
    assert f(2, 3) == 0 and f(2, 2) == 1
    for n in range(10):
        assert next(m for m in range(50) if f(n, m) == 0) == n + 1


def test_kripke_gamma_examples():
    k = kripke_gamma(lambda k, m: 0, lambda k, m: 0 if k == 0 else 1, 6)
    assert [(k.g0(m), k.h0(m), k.gamma(m)) for m in range(3)] == [(6, 0, 0)] * 3
    k = kripke_gamma(lambda k, m: 1 if k == 0 else 0, lambda k, m: 1, 6)
    assert [(k.g0(m), k.h0(m), k.gamma(m)) for m in range(3)] == [(0, 6, 1)] * 3
    k = kripke_gamma(lambda k, m: 1 if k >= 2 else 0, lambda k, m: 0 if k >= 2 else 1, 6)
    assert (k.g0(0), k.h0(0), k.gamma(0)) == (2, 2, 1)
