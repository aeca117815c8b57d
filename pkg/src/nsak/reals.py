"""Exact rationals, real codes as fast-converging Cauchy sequences, sequence codes."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Sequence, Union

Rational = Fraction


def two_pow(e: int) -> Fraction:
    return Fraction(2) ** e


class RealCode:
    """A real given by its approximation program k -> q_k (memoized)."""

    def __init__(self, program: Callable[[int], Fraction], name: str = "x"):
        self._program = program
        self._memo: dict[int, Fraction] = {}
        self.name = name

    def __call__(self, k: int) -> Fraction:
        q = self._memo.get(k)
        if q is None:
            q = Fraction(self._program(k))
            self._memo[k] = q
        return q

    def __repr__(self):
        return f"RealCode({self.name})"

    def __sub__(self, other: Union["RealCode", Fraction, int]) -> "RealCode":
        if isinstance(other, RealCode):
            return RealCode(lambda k: self(k + 1) - other(k + 1), f"({self.name} - {other.name})")
        c = Fraction(other)
        return RealCode(lambda k: self(k) - c, f"({self.name} - {c})")

    def __add__(self, other: Union["RealCode", Fraction, int]) -> "RealCode":
        if isinstance(other, RealCode):
            return RealCode(lambda k: self(k + 1) + other(k + 1), f"({self.name} + {other.name})")
        c = Fraction(other)
        return RealCode(lambda k: self(k) + c, f"({self.name} + {c})")


def rat(q) -> RealCode:
    q = Fraction(q)
    return RealCode(lambda k: q, str(q))


def approx(x: RealCode, k: int) -> Fraction:
    """[x](k)"""
    return x(k)


def hat(raw: Callable[[int], Fraction]) -> RealCode:
    """Totalize a rational sequence into a fast-converging code.

    The output follows ``raw`` while every pair of earlier indices m < m'
    satisfies |raw(m) - raw(m')| < 2^-m; from the first violation on it
    freezes at the last good value.
    """
    state = {"checked": 0, "lo": None, "hi": None, "cut": None, "vals": []}

    def scan(n: int):
        vals = state["vals"]
        while state["cut"] is None and state["checked"] <= n:
            i = state["checked"]
            q = Fraction(raw(i))
            if i > 0 and not (state["lo"] < q < state["hi"]):
                state["cut"] = i
                break
            vals.append(q)
            eps = two_pow(-i)
            lo, hi = q - eps, q + eps
            state["lo"] = lo if state["lo"] is None else max(state["lo"], lo)
            state["hi"] = hi if state["hi"] is None else min(state["hi"], hi)
            state["checked"] = i + 1

    def program(n: int) -> Fraction:
        scan(n)
        vals = state["vals"]
        return vals[n] if n < len(vals) else vals[-1]

    return RealCode(program, "hat")


def fast_converging_at(x: RealCode, n: int, i: int) -> bool:
    return abs(x(n) - x(n + i)) < two_pow(-n) or i == 0


@dataclass(frozen=True)
class EqVerdict:
    status: str          # consistent_up_to | distinct
    n: int


def real_eq_upto(x: RealCode, y: RealCode, K: int) -> EqVerdict:
    for n in range(K + 1):
        if abs(x(n) - y(n)) > two_pow(1 - n):
            return EqVerdict("distinct", n)
    return EqVerdict("consistent_up_to", K)


@dataclass(frozen=True)
class LtVerdict:
    status: str          # lt | unresolved
    n: int = -1


def real_lt_witness(x: RealCode, y: RealCode, K: int) -> LtVerdict:
    for n in range(K + 1):
        if x(n) + two_pow(1 - n) < y(n):
            return LtVerdict("lt", n)
    return LtVerdict("unresolved")


_RAT = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    m = _RAT.match(text)
    if not m:
        raise ValueError(f"not a rational: {text!r}")
    return Fraction(int(m.group(1)), int(m.group(2) or 1))


def parse_real_literal(text: str, base_dir: Path = Path(".")) -> RealCode:
    """``rat(p/q)`` or ``cauchy(file)`` with one rational per line."""
    text = text.strip()
    m = re.fullmatch(r"rat\((.*)\)", text)
    if m:
        return rat(parse_rational(m.group(1)))
    m = re.fullmatch(r"cauchy\((.*)\)", text)
    if m:
        lines = (base_dir / m.group(1).strip()).read_text().splitlines()
        qs = [parse_rational(line) for line in lines if line.strip() and not line.lstrip().startswith("#")]
        if not qs:
            raise ValueError("empty Cauchy file")
        return hat(lambda k: qs[min(k, len(qs) - 1)])
    raise ValueError(f"unknown real literal {text!r}")


# ------------------------------------------------------ rational codes
# the rational code pair(pair(a, b), d) stands for (a - b) / (d + 1)

def cantor_pair(a: int, b: int) -> int:
    return (a + b) * (a + b + 1) // 2 + b


def cantor_unpair(z: int) -> tuple[int, int]:
    w = (math.isqrt(8 * z + 1) - 1) // 2
    b = z - w * (w + 1) // 2
    return w - b, b


def rat_encode(q: Fraction) -> int:
    q = Fraction(q)
    a, b = (q.numerator, 0) if q >= 0 else (0, -q.numerator)
    return cantor_pair(cantor_pair(a, b), q.denominator - 1)


def rat_decode(code: int) -> Fraction:
    ab, d = cantor_unpair(code)
    a, b = cantor_unpair(ab)
    return Fraction(a - b, d + 1)


# ---------------------------------------------------- finite sequences

def seq_encode(s: Iterable[int]) -> int:
    code = 0
    for x in s:
        code = 1 + cantor_pair(code, x)
    return code


def seq_decode(code: int) -> tuple[int, ...]:
    out = []
    while code:
        code, x = cantor_unpair(code - 1)
        out.append(x)
    return tuple(reversed(out))


@dataclass(frozen=True)
class FinSeq:
    elements: tuple[int, ...] = ()

    @property
    def code(self) -> int:
        return seq_encode(self.elements)

    @classmethod
    def from_code(cls, code: int) -> "FinSeq":
        return cls(seq_decode(code))

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def __mul__(self, other: "FinSeq") -> "FinSeq":
        return seq_concat(self, other)

    def extend(self, tail: Callable[[int], int] = lambda n: 0) -> Callable[[int], int]:
        """The stream s * tail."""
        s = self.elements
        return lambda n: s[n] if n < len(s) else tail(n - len(s))


def seq_concat(s: FinSeq, t: FinSeq) -> FinSeq:
    """(s*t)(i) = s(i) for i < |s| and t(j - |s|) after that."""
    return FinSeq(tuple(s.elements) + tuple(t.elements))


def seq_trunc(s: Union[FinSeq, Sequence[int], Callable[[int], int]], N: int) -> FinSeq:
    """The initial segment of length N of a finite sequence or a stream."""
    if callable(s) and not isinstance(s, FinSeq):
        return FinSeq(tuple(s(i) for i in range(N)))
    elems = tuple(s.elements if isinstance(s, FinSeq) else s)
    if N > len(elems):
        raise IndexError(f"cannot truncate a sequence of length {len(elems)} to {N}")
    return FinSeq(elems[:N])
