"""The concrete functionals and sequences built at a finite nonstandardness scale N."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .reals import RealCode, two_pow

Stream = Callable[[int], int]


class QueryLog:
    """Wraps a stream and records which indices were inspected."""

    def __init__(self, f: Stream):
        self.f = f
        self.queries: list[int] = []

    def __call__(self, n: int) -> int:
        self.queries.append(n)
        return self.f(n)

    @property
    def support(self) -> frozenset:
        return frozenset(self.queries)


@dataclass
class Functional2:
    """A type-2 functional on host streams with a per-call query log."""
    fn: Callable[[Stream], int]
    name: str = "Y"
    last_support: frozenset = field(default=frozenset(), repr=False)

    def __call__(self, f: Stream) -> int:
        log = QueryLog(f)
        value = self.fn(log)
        self.last_support = log.support
        return value

    def call_logged(self, f: Stream) -> tuple[int, frozenset]:
        value = self(f)
        return value, self.last_support


def const_stream(c: int) -> Stream:
    return lambda n: c


def prefix_stream(prefix: Sequence[int], tail: int = 0) -> Stream:
    prefix = tuple(prefix)
    return lambda n: prefix[n] if n < len(prefix) else tail


# ------------------------------------------------------- discontinuity

def y0(N: int) -> Functional2:
    """0 if f has a zero at some n <= N+1, else 1."""
    if N < 1:
        raise ValueError("N must be at least 1")

    def run(f):
        return 0 if any(f(n) == 0 for n in range(N + 2)) else 1
    return Functional2(run, f"Y0[{N}]")


@dataclass(frozen=True)
class CounterexamplePair:
    f0: Stream
    g0: Stream
    agreement: int


def agreement_length(f: Stream, g: Stream, limit: int) -> int:
    n = 0
    while n < limit and f(n) == g(n):
        n += 1
    return n


def counterexample_pair(N: int) -> CounterexamplePair:
    """f0 = 11..., g0 = N ones followed by zeros."""
    if N < 1:
        raise ValueError("N must be at least 1")
    f0 = const_stream(1)
    g0 = lambda n: 1 if n < N else 0
    return CounterexamplePair(f0, g0, agreement_length(f0, g0, N + 2))


def z_transform(f: Stream) -> Stream:
    return lambda n: 0 if f(n) == 0 else 1


# ---------------------------------------------------- binary expansions

def phi_sign(N: int) -> Callable[[RealCode], int]:
    """Phi(x) = 0 iff [x](N) <= 1/N."""
    if N < 1:
        raise ValueError("N must be at least 1")
    cut = Fraction(1, N)
    return lambda x: 0 if x(N) <= cut else 1


def _digits_from_approx(q: Fraction, n_digits: int, N: int) -> list[int]:
    # Phi(x - c) only needs [x](N) - c, so one approximation serves every digit.
    # With q = a/b and midpoint c = mid/2^(k+1), the test q - c <= 1/N is
    # N * (a * 2^(k+1) - b * mid) <= b * 2^(k+1), kept in integers.
    a, b = q.numerator, q.denominator
    bits, m = [], 0                 # current lower end is m / 2^k
    for k in range(n_digits):
        scale = 1 << (k + 1)
        mid = 2 * m + 1
        bit = 0 if N * (a * scale - b * mid) <= b * scale else 1
        bits.append(bit)
        m = mid if bit else 2 * m
    return bits


def binary_digits(x: RealCode, n_digits: int, N: int) -> list[int]:
    """Digit k is Phi(x - (2^-(k+1) + sum_{i<k} b_i 2^-(i+1)))."""
    if N < 1:
        raise ValueError("N must be at least 1")
    return _digits_from_approx(x(N), n_digits, N)


def partial_sum(bits: Sequence[int]) -> Fraction:
    n = len(bits)
    return Fraction(sum(b << (n - 1 - i) for i, b in enumerate(bits)), 1 << n)


def digit_error_bound(n_digits: int, N: int) -> Fraction:
    return two_pow(-n_digits) + 2 * (Fraction(1, N) + two_pow(-N))


@dataclass
class StandardPart:
    x: RealCode
    N: int
    guard_index: int
    guard_value: Fraction
    in_band: bool
    digits: list[int]           # v(x, N) up to the last nonzero position
    u: RealCode

    def v(self, n: int) -> int:
        return self.digits[n] if n < len(self.digits) else 0

    @property
    def value(self) -> Fraction:
        """The limit of u, reached at index len(digits) - 1."""
        return partial_sum(self.digits)


def w_transform(alpha: Stream) -> RealCode:
    """w(alpha)(n) = sum_{i<=n} alpha(i) / 2^(i+1)."""
    def program(n: int) -> Fraction:
        return Fraction(sum(alpha(i) << (n - i) for i in range(n + 1)), 1 << (n + 1))
    return RealCode(program, "w")


def standard_part(x: RealCode, N: int, cap_exp: int = 60) -> StandardPart:
    """u(x, N) = w(v(x, N)) with v the N+1 binary digits, or zeros outside the guard band."""
    guard_index = 2 ** min(N, cap_exp)
    g = x(guard_index)
    lo, hi = -Fraction(1, N), 1 + Fraction(1, N)
    in_band = lo <= g <= hi
    digits = _digits_from_approx(x(N), N + 1, N) if in_band else []
    prefix = tuple(digits)
    u = w_transform(prefix_stream(prefix))
    return StandardPart(x, N, guard_index, g, in_band, digits, u)


def standard_part_bound(N: int, cap_exp: int = 60) -> Fraction:
    """The accuracy guarantee 4/N, plus the guard-index term when 2^N is capped."""
    extra = two_pow(-cap_exp) if N > cap_exp else Fraction(0)
    return Fraction(4, N) + extra


def functional_standard_part(Y: Functional2, N: int, n0: int) -> Functional2:
    """s(Y, N)(f) = Y(fbar N * 00...) if fbar N is binary, else n0."""
    def run(f):
        prefix = [f(i) for i in range(N)]
        if any(b > 1 for b in prefix):
            return n0
        return Y(prefix_stream(prefix))
    return Functional2(run, f"s({Y.name},{N})")


# ----------------------------------------------------------- trees, WKL

def is_binary_tree(T) -> bool:
    nodes = {tuple(s) for s in T}
    for s in nodes:
        if any(b not in (0, 1) for b in s):
            return False
        if s and s[:-1] not in nodes:
            return False
    return True


class NotATree(ValueError):
    pass


def wkl_path(T, N: int) -> Stream:
    """sigma * 0^omega for the left-most sigma in T of maximal length <= N."""
    nodes = {tuple(s) for s in T}
    if not is_binary_tree(nodes):
        raise NotATree("input is not a prefix-closed set of binary sequences")
    short = [s for s in nodes if len(s) <= N]
    if not short:
        return const_stream(0)
    depth = max(map(len, short))
    sigma = min(s for s in short if len(s) == depth)
    return prefix_stream(sigma)


def binary_strings(n: int):
    return itertools.product((0, 1), repeat=n)


# ----------------------------------------------------------- HBU covers

@dataclass(frozen=True)
class Cover:
    N: int
    leaves: tuple            # (sigma, radius) with cylinder [beta_sigma bar radius]

    def cylinders(self) -> list[tuple[int, ...]]:
        return [tuple(s[:r]) if r <= len(s) else tuple(s) + (0,) * (r - len(s))
                for s, r in self.leaves]

    def covers(self, f: Stream, depth: int) -> bool:
        """f lies in some returned cylinder (checked on its first ``depth`` values)."""
        prefix = tuple(f(i) for i in range(depth))
        return any(len(c) <= depth and prefix[:len(c)] == c for c in self.cylinders())


@dataclass(frozen=True)
class Insufficient:
    N: int
    leaf: tuple
    value: int


class CapExceeded(ValueError):
    pass


def hbu_cover(G: Functional2, N: int, cap: int = 20):
    if N > cap:
        raise CapExceeded(f"N={N} exceeds the cap {cap}")
    leaves = []
    for sigma in binary_strings(N):
        r = G(prefix_stream(sigma))
        if r > N:
            return Insufficient(N, sigma, r)
        leaves.append((sigma, r))
    return Cover(N, tuple(leaves))


def cover_is_correct(cover: Cover) -> bool:
    """Every sigma * 0^omega with sigma of length N+2 lies in a returned cylinder."""
    depth = cover.N + 2
    return all(cover.covers(prefix_stream(s), depth) for s in binary_strings(depth))


def find_cover(G: Functional2, N_max: int, cap: int = 20) -> Optional[Cover]:
    """Try N = 0, 1, 2, 4, 8, ... up to N_max; None if no tested N works."""
    candidates = [0] + [2 ** k for k in range(0, N_max.bit_length() + 1) if 2 ** k <= N_max]
    for N in dict.fromkeys(candidates):
        result = hbu_cover(G, N, cap)
        if isinstance(result, Cover):
            return result
    return None


class NotNDetermined(ValueError):
    pass


def sup_on_cantor(Y: Functional2, N: int) -> int:
    best = None
    for sigma in binary_strings(N):
        value, support = Y.call_logged(prefix_stream(sigma))
        outside = [n for n in support if n >= N]
        if outside:
            raise NotNDetermined(f"{Y.name} queried index {min(outside)} >= N={N}")
        best = value if best is None else max(best, value)
    return best


# -------------------------------------------------- machines, diagonal

# instructions: ("inc", r, next) | ("dec", r, next_if_positive, next_if_zero) | ("halt",)
# input and output live in register 0
MACHINES: dict[str, list[tuple]] = {
    "zero": [("dec", 0, 0, 1), ("halt",)],
    "loop": [("dec", 1, 0, 0)],
    "identity": [("halt",)],
    "one": [("dec", 0, 0, 1), ("inc", 0, 2), ("halt",)],
    "succ": [("inc", 0, 1), ("halt",)],
    "pred": [("dec", 0, 1, 1), ("halt",)],
    "two": [("dec", 0, 0, 1), ("inc", 0, 2), ("inc", 0, 3), ("halt",)],
    "sg": [("dec", 0, 1, 3), ("dec", 0, 1, 2), ("inc", 0, 3), ("halt",)],
    "sgbar": [("dec", 0, 1, 3), ("dec", 0, 1, 4), ("halt",), ("inc", 0, 2), ("halt",)],
    # parity: r0 mod 2, moving pairs away
    "parity": [("dec", 0, 1, 4), ("dec", 0, 0, 2), ("inc", 0, 3), ("halt",), ("halt",)],
    # halts with 0 on even input, diverges on odd input
    "even-or-loop": [("dec", 0, 1, 3), ("dec", 0, 0, 2), ("dec", 1, 2, 2), ("halt",)],
    "double": [("dec", 0, 1, 3), ("inc", 1, 2), ("inc", 1, 0),
               ("dec", 1, 4, 5), ("inc", 0, 3), ("halt",)],
    "half": [("dec", 0, 1, 3), ("dec", 0, 2, 3), ("inc", 1, 0),
             ("dec", 1, 4, 5), ("inc", 0, 3), ("halt",)],
    "minus3": [("dec", 0, 1, 3), ("dec", 0, 2, 3), ("dec", 0, 3, 3), ("halt",)],
    # output 0 after a quadratic amount of work
    "slow-zero": [("dec", 0, 1, 5), ("inc", 1, 2), ("inc", 2, 3), ("dec", 2, 3, 0),
                  ("halt",), ("dec", 1, 5, 4)],
    # output 0 for inputs above 5, diverge otherwise
    "big-or-loop": [("dec", 0, 1, 7), ("dec", 0, 2, 7), ("dec", 0, 3, 7), ("dec", 0, 4, 7),
                    ("dec", 0, 5, 7), ("dec", 0, 6, 7), ("dec", 0, 6, 8), ("dec", 1, 7, 7),
                    ("halt",)],
    "triple-plus-one": [("dec", 0, 1, 4), ("inc", 1, 2), ("inc", 1, 3), ("inc", 1, 0),
                        ("inc", 0, 5), ("dec", 1, 6, 7), ("inc", 0, 5), ("halt",)],
}
MACHINE_TABLE: list[str] = list(MACHINES)


def run_machine(program: Sequence[tuple], n: int, s: int) -> Optional[int]:
    """Output of the machine on input n if it halts within s steps, else None.

    Every instruction, including halt, costs one step, so s = 0 never halts.
    """
    regs = {0: n}
    pc = 0
    for _ in range(s):
        if pc >= len(program):
            return regs.get(0, 0)
        ins = program[pc]
        if ins[0] == "halt":
            return regs.get(0, 0)
        if ins[0] == "inc":
            regs[ins[1]] = regs.get(ins[1], 0) + 1
            pc = ins[2]
        else:
            if regs.get(ins[1], 0) > 0:
                regs[ins[1]] -= 1
                pc = ins[2]
            else:
                pc = ins[3]
    return None


@dataclass(frozen=True)
class MachineStep:
    table: tuple

    def __call__(self, e: int, n: int, s: int) -> Optional[int]:
        if not 0 <= e < len(self.table):
            return None
        return run_machine(MACHINES[self.table[e]], n, s)


DEFAULT_MACHINES = MachineStep(tuple(MACHINE_TABLE))


@dataclass(frozen=True)
class Diagonal:
    N: int
    f0: tuple                    # f0(e) for every index of the table
    values: tuple                # machine e's output on e within N steps, or None

    def disagreements(self) -> list[int]:
        return [e for e, v in enumerate(self.values) if v is not None and v != self.f0[e]]

    def defined(self) -> list[int]:
        return [e for e, v in enumerate(self.values) if v is not None]


def ct_diagonal(N: int, machines: MachineStep = DEFAULT_MACHINES) -> Diagonal:
    """f0(e) = 1 iff machine e halts on input e within N steps with output 0."""
    values = tuple(machines(e, e, N) for e in range(len(machines.table)))
    f0 = tuple(1 if v == 0 else 0 for v in values)
    return Diagonal(N, f0, values)


# --------------------------------------------------- ACA0 and Kripke

def aca_refuter(h0: Stream) -> Callable[[int, int], int]:
    """f0(n, m) = 0 iff m > h0(n)."""
    return lambda n, m: 0 if m > h0(n) else 1


@dataclass(frozen=True)
class KripkeGamma:
    N: int
    g0: Stream
    h0: Stream
    gamma: Stream


def kripke_gamma(alpha: Callable[[int, int], int], beta: Callable[[int, int], int], N: int) -> KripkeGamma:
    if N < 1:
        raise ValueError("N must be at least 1")

    def least(pred, m):
        return next((k for k in range(N + 1) if pred(k, m)), N)

    g0 = lambda m: least(lambda k, m: alpha(k, m) != 0, m)
    h0 = lambda m: least(lambda k, m: beta(k, m) == 0, m)
    gamma = lambda m: 0 if g0(m) > h0(m) else 1
    return KripkeGamma(N, g0, h0, gamma)
