"""Standard abbreviations: primitive recursive arithmetic written as T terms.

Every definition is closed and may refer to the ones above it.  Parsing with
``defs=PRELUDE`` expands free occurrences of these names.

Finite sequences are coded as ``code(<>) = 0`` and
``code(s * <x>) = 1 + pair(code(s), x)`` with Cantor pairing; ``bar f n`` is
the code of the first ``n`` values of ``f``.  Rational codes are
``pair(pair(a, b), d)`` standing for ``(a - b) / (d + 1)``.
"""
from __future__ import annotations

from .syntax import Term, parse_term, print_ast

_SOURCE = """
pred   := lam x:0. Rec[0] x 0 (lam k:0. lam r:0. k)
add    := lam m:0. lam n:0. Rec[0] n m (lam k:0. lam r:0. S r)
sub    := lam m:0. lam n:0. Rec[0] n m (lam k:0. lam r:0. pred r)
mul    := lam m:0. lam n:0. Rec[0] n 0 (lam k:0. lam r:0. add r m)
sg     := lam x:0. Rec[0] x 0 (lam k:0. lam r:0. 1)
sgbar  := lam x:0. Rec[0] x 1 (lam k:0. lam r:0. 0)
max    := lam a:0. lam b:0. add a (sub b a)
min    := lam a:0. lam b:0. sub a (sub a b)
tri    := lam n:0. Rec[0] n 0 (lam k:0. lam r:0. add r (S k))
pair   := lam a:0. lam b:0. add (tri (add a b)) b
ustep  := lam p:0*0. Rec[0*0] (fst p) <S (snd p), 0> (lam k:0. lam r:0*0. <k, S (snd p)>)
unpair := lam n:0. Rec[0*0] n <0, 0> (lam k:0. lam r:0*0. ustep r)
bar    := lam f:0->0. lam n:0. Rec[0] n 0 (lam k:0. lam r:0. S (pair r (f k)))
zero1  := lam n:0. 0
one1   := lam n:0. 1
one2   := lam f:0->0. 1
cap1   := lam f:0->0. lam n:0. sg (f n)
qnum   := lam q:0. fst (unpair (fst (unpair q)))
qden   := lam q:0. snd (unpair (fst (unpair q)))
qdiv   := lam q:0. S (snd (unpair q))
qle    := lam q:0. lam r:0. sub (add (mul (qnum q) (qdiv r)) (mul (qden r) (qdiv q))) (add (mul (qnum r) (qdiv q)) (mul (qden q) (qdiv r)))
qsub   := lam q:0. lam r:0. pair (pair (add (mul (qnum q) (qdiv r)) (mul (qden r) (qdiv q))) (add (mul (qnum r) (qdiv q)) (mul (qden q) (qdiv r)))) (pred (mul (qdiv q) (qdiv r)))
qrec   := lam k:0. pair (pair 1 0) k
qnrec  := lam k:0. pair (pair 0 1) k
"""


def _load() -> dict[str, Term]:
    defs: dict[str, Term] = {}
    for line in _SOURCE.strip().splitlines():
        name, _, body = line.partition(":=")
        defs[name.strip()] = parse_term(body.strip(), defs)
    return defs


PRELUDE: dict[str, Term] = _load()
FOLDS: dict[Term, str] = {v: k for k, v in PRELUDE.items()}


def show(ast) -> str:
    """Print with prelude abbreviations folded back in."""
    return print_ast(ast, FOLDS)
