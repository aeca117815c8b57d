"""Finite types, System T terms and external formulas: AST, parser, printer.

Concrete syntax is plain ASCII::

    type    0 | t -> t | t * t
    term    x | lam x:t. e | e e | 0 | S | Rec[t] | <e, e> | fst | snd | 17
    formula false | e = e | st[t](e) | A & B | A | B | A -> B
            | forall x:t. A | exists-st x:t. A | forall~st x:t. A | ...
            | forall n <= e. A | exists n <= e. A

Defined relations are kept as sugar nodes and written ``e =[t] e``,
``e <=[t] e``, ``e ~[t] e`` (approximate equality) and ``e <=*[t] e``
(strong majorizability).  Schema templates may also contain placeholders
``@phi(e, ...)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union


# ---------------------------------------------------------------- types

@dataclass(frozen=True)
class Base:
    pass


@dataclass(frozen=True)
class Arrow:
    dom: "FiniteType"
    cod: "FiniteType"


@dataclass(frozen=True)
class Prod:
    left: "FiniteType"
    right: "FiniteType"


FiniteType = Union[Base, Arrow, Prod]

BASE = Base()
TYPE1 = Arrow(BASE, BASE)
TYPE2 = Arrow(TYPE1, BASE)


def arrows(*types: FiniteType) -> FiniteType:
    """``arrows(a, b, c)`` is ``a -> b -> c``."""
    result = types[-1]
    for t in reversed(types[:-1]):
        result = Arrow(t, result)
    return result


def type_depth(t: FiniteType) -> int:
    if isinstance(t, Base):
        return 0
    if isinstance(t, Arrow):
        return 1 + max(type_depth(t.dom), type_depth(t.cod))
    return 1 + max(type_depth(t.left), type_depth(t.right))


def arg_types(t: FiniteType) -> tuple[list[FiniteType], FiniteType]:
    """Split ``t1 -> ... -> tk -> r`` into ``([t1..tk], r)``."""
    args = []
    while isinstance(t, Arrow):
        args.append(t.dom)
        t = t.cod
    return args, t


# ---------------------------------------------------------------- terms

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Lam:
    var: str
    vtype: FiniteType
    body: "Term"


@dataclass(frozen=True)
class App:
    fn: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class Succ:
    pass


@dataclass(frozen=True)
class Rec:
    rtype: FiniteType


@dataclass(frozen=True)
class Pair:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Fst:
    pass


@dataclass(frozen=True)
class Snd:
    pass


@dataclass(frozen=True)
class NumLit:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("NumLit holds positive numerals; use Zero() for 0")


Term = Union[Var, Lam, App, Zero, Succ, Rec, Pair, Fst, Snd, NumLit]

ZERO = Zero()
SUCC = Succ()


def numeral(n: int) -> Term:
    return ZERO if n == 0 else NumLit(n)


def apply(fn: Term, *args: Term) -> Term:
    for a in args:
        fn = App(fn, a)
    return fn


def spine(t: Term) -> tuple[Term, list[Term]]:
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


# ------------------------------------------------------------- formulas

@dataclass(frozen=True)
class Falsum:
    pass


@dataclass(frozen=True)
class Eq:
    """Primitive equality at type 0."""
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class St:
    stype: FiniteType
    term: Term


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Quant:
    """Typed quantifier; ``kind`` is one of QUANT_KINDS."""
    kind: str
    var: str
    vtype: FiniteType
    body: "Formula"


@dataclass(frozen=True)
class BQuant:
    """Bounded number quantifier ``forall n <= bound`` / ``exists n <= bound``."""
    kind: str
    var: str
    bound: Term
    body: "Formula"


@dataclass(frozen=True)
class Rel:
    """Defined relation at a finite type: eq, le, approx or maj."""
    kind: str
    rtype: FiniteType
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Meta:
    """Schematic formula placeholder used by axiom templates."""
    name: str
    args: tuple


Formula = Union[Falsum, Eq, St, And, Or, Implies, Quant, BQuant, Rel, Meta]

FALSUM = Falsum()

QUANT_KINDS = ("forall", "exists", "forall-st", "exists-st", "forall~st", "exists~st")
REL_TOKENS = {"eq": "=", "le": "<=", "approx": "~", "maj": "<=*"}
REL_KINDS = {v: k for k, v in REL_TOKENS.items()}


def Forall(var, vtype, body):
    return Quant("forall", var, vtype, body)


def Exists(var, vtype, body):
    return Quant("exists", var, vtype, body)


def ForallSt(var, vtype, body):
    return Quant("forall-st", var, vtype, body)


def ExistsSt(var, vtype, body):
    return Quant("exists-st", var, vtype, body)


def ForallMonSt(var, vtype, body):
    return Quant("forall~st", var, vtype, body)


def ExistsMonSt(var, vtype, body):
    return Quant("exists~st", var, vtype, body)


def Not(a: Formula) -> Formula:
    return Implies(a, FALSUM)


AST = Union[FiniteType, Term, Formula]


# ------------------------------------------------------------- tokenizer

class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int, expected: Sequence[str] = ()):
        self.line = line
        self.col = col
        self.expected = sorted(set(expected))
        exp = f"; expected one of {', '.join(self.expected)}" if self.expected else ""
        super().__init__(f"{line}:{col}: {message}{exp}")


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<quant>(?:forall|exists)(?:-st|~st)?(?![A-Za-z0-9_']))
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym><=\*|<=|->|[<>,.:()\[\]=&|~*@])
    """,
    re.VERBOSE,
)

KEYWORDS = {"lam", "S", "Rec", "fst", "snd", "false", "st"}


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            tokens.append(Token(kind, chunk, line, pos - line_start + 1))
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# ---------------------------------------------------------------- parser

class Parser:
    def __init__(self, text: str, defs: Optional[Mapping[str, Term]] = None,
                 allow_meta: bool = False):
        self.toks = tokenize(text)
        self.i = 0
        self.defs = defs or {}
        self.allow_meta = allow_meta
        self.bound: list[str] = []

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, *texts: str) -> bool:
        return self.tok.text in texts and self.tok.kind != "eof"

    def error(self, msg: str, expected: Sequence[str] = ()) -> ParseError:
        return ParseError(msg, self.tok.line, self.tok.col, expected)

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind == "eof":
            raise self.error(f"unexpected {self.tok.text or 'end of input'!r}", [repr(text)])
        t = self.tok
        self.i += 1
        return t

    def ident(self) -> str:
        if self.tok.kind != "ident" or self.tok.text in KEYWORDS:
            raise self.error(f"unexpected {self.tok.text or 'end of input'!r}", ["identifier"])
        name = self.tok.text
        self.i += 1
        return name

    def finish(self):
        if self.tok.kind != "eof":
            raise self.error(f"trailing input {self.tok.text!r}", ["end of input"])

    # types
    def type_(self) -> FiniteType:
        left = self.type_prod()
        if self.at("->"):
            self.i += 1
            return Arrow(left, self.type_())
        return left

    def type_prod(self) -> FiniteType:
        t = self.type_atom()
        while self.at("*"):
            self.i += 1
            t = Prod(t, self.type_atom())
        return t

    def type_atom(self) -> FiniteType:
        if self.tok.kind == "num" and self.tok.text == "0":
            self.i += 1
            return BASE
        if self.tok.kind == "num" and self.tok.text in ("1", "2"):
            # "1" and "2" abbreviate 0->0 and (0->0)->0
            n = self.tok.text
            self.i += 1
            return TYPE1 if n == "1" else TYPE2
        if self.at("("):
            self.i += 1
            t = self.type_()
            self.expect(")")
            return t
        raise self.error(f"unexpected {self.tok.text or 'end of input'!r}", ["'0'", "'('"])

    # terms
    def starts_term_atom(self) -> bool:
        t = self.tok
        if t.kind == "num":
            return True
        if t.kind == "ident":
            return t.text not in ("lam", "false", "st")
        return t.kind == "sym" and t.text in ("<", "(")

    def term(self) -> Term:
        if self.at("lam"):
            self.i += 1
            var = self.ident()
            self.expect(":")
            vtype = self.type_()
            self.expect(".")
            self.bound.append(var)
            try:
                body = self.term()
            finally:
                self.bound.pop()
            return Lam(var, vtype, body)
        t = self.term_atom()
        while self.starts_term_atom() or self.at("lam"):
            if self.at("lam"):
                t = App(t, self.term())
                break
            t = App(t, self.term_atom())
        return t

    def term_atom(self) -> Term:
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return numeral(int(tok.text))
        if tok.text == "S" and tok.kind == "ident":
            self.i += 1
            return SUCC
        if tok.text == "fst" and tok.kind == "ident":
            self.i += 1
            return Fst()
        if tok.text == "snd" and tok.kind == "ident":
            self.i += 1
            return Snd()
        if tok.text == "Rec" and tok.kind == "ident":
            self.i += 1
            self.expect("[")
            t = self.type_()
            self.expect("]")
            return Rec(t)
        if tok.text == "<":
            self.i += 1
            left = self.term()
            self.expect(",")
            right = self.term()
            self.expect(">")
            return Pair(left, right)
        if tok.text == "(":
            self.i += 1
            t = self.term()
            self.expect(")")
            return t
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            self.i += 1
            name = tok.text
            if name in self.defs and name not in self.bound:
                return self.defs[name]
            return Var(name)
        raise self.error(f"unexpected {tok.text or 'end of input'!r}",
                         ["identifier", "numeral", "'lam'", "'S'", "'Rec'", "'<'", "'('"])

    # formulas
    def formula(self) -> Formula:
        left = self.disj()
        if self.at("->"):
            self.i += 1
            return Implies(left, self.formula())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.at("|"):
            self.i += 1
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.at("&"):
            self.i += 1
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.tok
        if tok.kind == "quant":
            self.i += 1
            var = self.ident()
            if tok.text in ("forall", "exists") and self.at("<="):
                self.i += 1
                bound = self.term()
                self.expect(".")
                self.bound.append(var)
                try:
                    body = self.formula()
                finally:
                    self.bound.pop()
                return BQuant(tok.text, var, bound, body)
            self.expect(":")
            vtype = self.type_()
            self.expect(".")
            self.bound.append(var)
            try:
                body = self.formula()
            finally:
                self.bound.pop()
            return Quant(tok.text, var, vtype, body)
        if tok.kind == "ident" and tok.text == "false":
            self.i += 1
            return FALSUM
        if tok.kind == "ident" and tok.text == "st":
            self.i += 1
            self.expect("[")
            t = self.type_()
            self.expect("]")
            self.expect("(")
            e = self.term()
            self.expect(")")
            return St(t, e)
        if tok.text == "@":
            if not self.allow_meta:
                raise self.error("schema placeholder outside a template")
            self.i += 1
            name = self.ident()
            self.expect("(")
            args = []
            if not self.at(")"):
                args.append(self.term())
                while self.at(","):
                    self.i += 1
                    args.append(self.term())
            self.expect(")")
            return Meta(name, tuple(args))
        if tok.text == "(":
            save = self.i
            self.i += 1
            try:
                f = self.formula()
                self.expect(")")
            except ParseError:
                self.i = save
            else:
                if not self.at("=", "<=", "<=*", "~"):
                    return f
                self.i = save
        return self.atom()

    def atom(self) -> Formula:
        lhs = self.term()
        tok = self.tok
        if tok.text in ("=", "<=", "<=*", "~"):
            self.i += 1
            if self.at("["):
                self.i += 1
                t = self.type_()
                self.expect("]")
                rhs = self.term()
                return Rel(REL_KINDS[tok.text], t, lhs, rhs)
            if tok.text == "=":
                return Eq(lhs, self.term())
            raise self.error("typed relation needs a type annotation", ["'['"])
        raise self.error(f"unexpected {tok.text or 'end of input'!r}",
                         ["'='", "'=['", "'<=['", "'~['", "'<=*['"])

    def abstraction(self) -> tuple[tuple[tuple[str, FiniteType], ...], Formula]:
        self.expect("[")
        params = []
        if not self.at("]"):
            while True:
                name = self.ident()
                self.expect(":")
                params.append((name, self.type_()))
                if not self.at(","):
                    break
                self.i += 1
        self.expect("]")
        self.bound.extend(p for p, _ in params)
        try:
            body = self.formula()
        finally:
            del self.bound[len(self.bound) - len(params):]
        return tuple(params), body


def parse(kind: str, text: str, defs: Optional[Mapping[str, Term]] = None,
          allow_meta: bool = False):
    """Parse ``text`` as a ``type``, ``term`` or ``formula``.

    ``defs`` maps abbreviation names to terms; free occurrences are expanded.
    """
    p = Parser(text, defs, allow_meta)
    if kind == "type":
        result = p.type_()
    elif kind == "term":
        result = p.term()
    elif kind == "formula":
        result = p.formula()
    elif kind == "abstraction":
        result = p.abstraction()
    else:
        raise ValueError(f"unknown syntactic category {kind!r}")
    p.finish()
    return result


def parse_type(text: str) -> FiniteType:
    return parse("type", text)


def parse_term(text: str, defs=None) -> Term:
    return parse("term", text, defs)


def parse_formula(text: str, defs=None, allow_meta: bool = False) -> Formula:
    return parse("formula", text, defs, allow_meta)


# --------------------------------------------------------------- printer

def print_type(t: FiniteType) -> str:
    if isinstance(t, Base):
        return "0"
    if isinstance(t, Arrow):
        dom = print_type(t.dom)
        if isinstance(t.dom, Arrow):
            dom = f"({dom})"
        return f"{dom}->{print_type(t.cod)}"
    left = print_type(t.left)
    if isinstance(t.left, Arrow):
        left = f"({left})"
    right = print_type(t.right)
    if isinstance(t.right, (Arrow, Prod)):
        right = f"({right})"
    return f"{left}*{right}"


def print_term(t: Term, folds: Optional[Mapping[Term, str]] = None) -> str:
    if folds and t in folds:
        return folds[t]
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, NumLit):
        return str(t.n)
    if isinstance(t, Succ):
        return "S"
    if isinstance(t, Fst):
        return "fst"
    if isinstance(t, Snd):
        return "snd"
    if isinstance(t, Rec):
        return f"Rec[{print_type(t.rtype)}]"
    if isinstance(t, Pair):
        return f"<{print_term(t.left, folds)}, {print_term(t.right, folds)}>"
    if isinstance(t, Lam):
        return f"lam {t.var}:{print_type(t.vtype)}. {print_term(t.body, folds)}"
    if isinstance(t, App):
        fn = print_term(t.fn, folds)
        if isinstance(t.fn, Lam) and not (folds and t.fn in folds):
            fn = f"({fn})"
        arg = print_term(t.arg, folds)
        if isinstance(t.arg, (App, Lam)) and not (folds and t.arg in folds):
            arg = f"({arg})"
        return f"{fn} {arg}"
    raise TypeError(f"not a term: {t!r}")


def _atom_term(t: Term, folds) -> str:
    s = print_term(t, folds)
    return f"({s})" if isinstance(t, Lam) and not (folds and t in folds) else s


_PREC = {Implies: 1, Or: 2, And: 3}


def print_formula(f: Formula, folds: Optional[Mapping[Term, str]] = None) -> str:
    def prec(g):
        return _PREC.get(type(g), 4 if not isinstance(g, (Quant, BQuant)) else 0)

    def wrap(g, need):
        s = print_formula(g, folds)
        return f"({s})" if prec(g) < need else s

    if isinstance(f, Falsum):
        return "false"
    if isinstance(f, Eq):
        return f"{_atom_term(f.lhs, folds)} = {_atom_term(f.rhs, folds)}"
    if isinstance(f, Rel):
        op = REL_TOKENS[f.kind]
        return f"{_atom_term(f.lhs, folds)} {op}[{print_type(f.rtype)}] {_atom_term(f.rhs, folds)}"
    if isinstance(f, St):
        return f"st[{print_type(f.stype)}]({print_term(f.term, folds)})"
    if isinstance(f, Meta):
        return f"@{f.name}({', '.join(print_term(a, folds) for a in f.args)})"
    if isinstance(f, Quant):
        return f"{f.kind} {f.var}:{print_type(f.vtype)}. {print_formula(f.body, folds)}"
    if isinstance(f, BQuant):
        return f"{f.kind} {f.var} <= {print_term(f.bound, folds)}. {print_formula(f.body, folds)}"
    if isinstance(f, Implies):
        return f"{wrap(f.left, 2)} -> {wrap(f.right, 1)}"
    if isinstance(f, Or):
        return f"{wrap(f.left, 2)} | {wrap(f.right, 3)}"
    if isinstance(f, And):
        return f"{wrap(f.left, 3)} & {wrap(f.right, 4)}"
    raise TypeError(f"not a formula: {f!r}")


def print_ast(ast: AST, folds=None) -> str:
    """Render any AST node in concrete syntax."""
    if isinstance(ast, (Base, Arrow, Prod)):
        return print_type(ast)
    if isinstance(ast, (Falsum, Eq, St, And, Or, Implies, Quant, BQuant, Rel, Meta)):
        return print_formula(ast, folds)
    return print_term(ast, folds)
