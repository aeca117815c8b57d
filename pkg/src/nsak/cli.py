"""Command line: ``nsak <subcommand> ...`` (also ``python3 -m nsak``)."""
from __future__ import annotations

import argparse
import os
import random
import shlex
import sys
from dataclasses import dataclass, field, fields
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import audit, majorizability as mj, reals, samples, schemas, witnesses as wt
from .checker import TypeCheckError, check_formula, infer_type, is_internal
from .evaluator import DEFAULT_FUEL, FuelExhausted, eval_nat, normalize
from .kernel import KernelError, LIBRARY_DIR, check_file
from .prelude import PRELUDE, show
from .syntax import ParseError, parse, print_ast, print_type

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class RunConfig:
    fuel: int = DEFAULT_FUEL
    B: int = 2
    N: int = 8
    samples: int = 1000
    seed: int = 0
    cap_exp: int = 60
    depth: int = 2
    format: str = "human"           # human | line
    paths: list = field(default_factory=list)

    @classmethod
    def from_env(cls, environ=None) -> "RunConfig":
        environ = os.environ if environ is None else environ
        cfg = cls()
        for f in fields(cls):
            key = "NSAK_" + f.name.upper()
            if key in environ and f.name != "paths":
                setattr(cfg, f.name, type(getattr(cfg, f.name))(environ[key]))
        return cfg


class Reporter:
    """Emits records either as readable lines or as KEY=VALUE records."""

    def __init__(self, fmt: str, out=None):
        self.fmt = fmt
        self.out = out or sys.stdout
        self.failures = 0

    def record(self, record: str, status: Optional[str] = None, **items):
        if status == "FAIL":
            self.failures += 1
        if self.fmt == "line":
            parts = [f"RECORD={record}"] + ([f"STATUS={status}"] if status else [])
            parts += [f"{k.upper()}={shlex.quote(str(v))}" for k, v in items.items()]
            print(" ".join(parts), file=self.out)
        else:
            head = f"{status:<4} {record}" if status else record
            body = ", ".join(f"{k}={v}" for k, v in items.items())
            print(f"{head}: {body}" if body else head, file=self.out)

    def text(self, s: str):
        if self.fmt == "line":
            self.record("text", value=s)
        else:
            print(s, file=self.out)


def _status(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def _ctx(text: Optional[str]) -> dict:
    out = {}
    for item in (text or "").split(","):
        if item.strip():
            name, _, ty = item.partition(":")
            out[name.strip()] = parse("type", ty.strip())
    return out


# ---------------------------------------------------------- subcommands

def cmd_parse(args, cfg: RunConfig, rep: Reporter) -> int:
    ast = parse(args.kind, args.text, PRELUDE if args.prelude else None)
    rep.record("parse", kind=args.kind, printed=print_ast(ast))
    return EXIT_OK


def cmd_check(args, cfg, rep) -> int:
    ctx = _ctx(args.ctx)
    defs = PRELUDE
    try:
        if args.kind == "term":
            t = infer_type(parse("term", args.text, defs), ctx)
            rep.record("check", "PASS", kind="term", type=print_type(t))
        else:
            f = parse("formula", args.text, defs)
            check_formula(f, ctx)
            rep.record("check", "PASS", kind="formula", internal=is_internal(f))
    except TypeCheckError as exc:
        rep.record("check", "FAIL", error=str(exc))
    return EXIT_FAIL if rep.failures else EXIT_OK


def cmd_eval(args, cfg, rep) -> int:
    term = parse("term", args.text, PRELUDE)
    ty = infer_type(term, {})
    if not args.normalize and ty != parse("type", "0"):
        raise TypeCheckError(f"eval needs a closed term of type 0, got {print_type(ty)}")
    try:
        if args.normalize:
            rep.record("eval", normal_form=show(normalize(term, cfg.fuel)))
        else:
            rep.record("eval", value=eval_nat(term, cfg.fuel))
    except FuelExhausted as exc:
        rep.record("eval", "FAIL", error=str(exc))
    return EXIT_FAIL if rep.failures else EXIT_OK


def cmd_maj(args, cfg, rep) -> int:
    types = [parse("type", args.type)] if args.type else mj.types_up_to_depth(cfg.depth)
    checks = args.checks or ["reflexivity-iff-monotone", "right-monotone", "maj"]
    if not args.exhaustive:
        rep.record("maj", "FAIL", error="only --exhaustive checks are available on finite models")
        return EXIT_USAGE
    for B in (sorted({1, cfg.B}) if args.all_B else [cfg.B]):
        mm = mj.MajModel(B, args.cap)
        for t in types:
            for name in checks:
                try:
                    mm.model.elements(t)
                except Exception as exc:       # model too large
                    rep.record("maj", "SKIP", check=name, type=print_type(t), B=B, reason=str(exc))
                    continue
                res = {"reflexivity-iff-monotone": mj.check_reflexivity_iff_monotone,
                       "right-monotone": mj.check_right_monotone,
                       "maj": mj.check_maj,
                       "transitivity": mj.probe_transitivity}[name](mm, t)
                status = "SKIP" if res.skipped else _status(res.ok)
                if name == "transitivity" and not res.ok:
                    status = "INFO"     # reported, not asserted
                rep.record("maj", status, check=name, type=print_type(t), B=B,
                           checked=res.checked, detail=res.detail or "-")
    return EXIT_FAIL if rep.failures else EXIT_OK


def cmd_axiom(args, cfg, rep) -> int:
    if args.action == "list":
        for ident, desc, conds in schemas.catalog():
            rep.record("schema", id=ident, description=desc, side_conditions="; ".join(conds) or "-")
        return EXIT_OK
    if not args.id:
        rep.text("axiom inst needs a schema id")
        return EXIT_USAGE
    spec = schemas.CATALOG.get(args.id)
    if spec is None:
        rep.record("axiom", "FAIL", error=f"unknown schema {args.id}")
        return EXIT_FAIL
    phis = []
    for path in args.phi or []:
        text = Path(path).read_text().strip() if Path(path).exists() else path
        phis.append(schemas.parse_abstraction(text))
    types = tuple(parse("type", t) for t in (args.type or []))
    terms = tuple(parse("term", t, PRELUDE) for t in (args.term or []))
    try:
        f = schemas.instantiate(schemas.Instantiation(args.id, tuple(phis), types, terms))
    except (schemas.SideConditionError, TypeCheckError, ValueError) as exc:
        rep.record("axiom", "FAIL", id=args.id, error=str(exc))
        return EXIT_FAIL
    rep.record("axiom", id=args.id, formula=show(f))
    return EXIT_OK


def _script_paths(paths: Sequence[str]) -> list[Path]:
    out = []
    for p in paths or [str(LIBRARY_DIR)]:
        path = Path(p)
        if not path.exists() and p.rstrip("/") == "library":
            path = LIBRARY_DIR
        out += sorted(path.glob("*.prf")) if path.is_dir() else [path]
    return out


def cmd_prove(args, cfg, rep) -> int:
    paths = _script_paths(args.paths)
    if not paths:
        rep.text("no scripts found")
        return EXIT_USAGE
    for path in paths:
        try:
            thm = check_file(path, max(cfg.fuel, 5_000_000))
        except (KernelError, OSError) as exc:
            rep.record("prove", "FAIL", script=path.name, error=str(exc)[:300])
            continue
        rep.record("prove", "PASS", script=thm.name, file=path.name, theory=",".join(thm.theory),
                   axioms=",".join(thm.axioms), lemmas=",".join(n for n, _ in thm.lemmas) or "-",
                   leaves=len(thm.leaves), conclusion=show(thm.conclusion))
    if args.mutations:
        outcomes = audit.run_mutations()
        rejected = sum(o.rejected for o in outcomes)
        rep.record("mutations", _status(rejected == len(outcomes) and len(outcomes) >= 20),
                   total=len(outcomes), rejected=rejected)
    if args.lemmas:
        for v in audit.spot_check_library(seed=cfg.seed):
            rep.record("lemma", {"holds_on_samples": "PASS", "fails": "FAIL"}.get(v.status, "SKIP"),
                       script=v.script, lemma=v.lemma, checked=v.checked, skipped=v.skipped)
    return EXIT_FAIL if rep.failures else EXIT_OK


# ---------------------------------------------------------------- demos

def _demo_discontinuity(cfg, rep):
    N = cfg.N
    pair = wt.counterexample_pair(N)
    Y = wt.y0(N)
    a, b = Y(pair.f0), Y(pair.g0)
    rep.record("demo", _status(pair.agreement == N and (a, b) == (1, 0)), construction="discontinuity",
               N=N, agreement=pair.agreement, y0_f0=a, y0_g0=b, claimed="agree on N, outputs 1/0")


def _demo_binary(cfg, rep):
    rng = random.Random(cfg.seed)
    N = cfg.N
    n = min(16, N)
    bound = wt.digit_error_bound(n, N)
    worst = Fraction(0)
    for _ in range(min(cfg.samples, 1000)):
        q = samples.random_rational(rng)
        err = abs(wt.partial_sum(wt.binary_digits(reals.rat(q), n, N)) - q)
        worst = max(worst, err)
    rep.record("demo", _status(worst <= bound), construction="binary-digits", N=N, digits=n,
               inputs=min(cfg.samples, 1000), claimed_bound=f"{float(bound):.6g}",
               measured_bound=f"{float(worst):.6g}")


def _demo_standard_part(cfg, rep):
    rng = random.Random(cfg.seed)
    N = max(cfg.N, 8)
    bound = wt.standard_part_bound(N, cfg.cap_exp)
    worst = Fraction(0)
    for _ in range(min(cfg.samples, 1000)):
        q = samples.random_rational(rng)
        sp = wt.standard_part(reals.rat(q), N, cfg.cap_exp)
        worst = max(worst, abs(sp.value - q))
    rep.record("demo", _status(worst <= bound), construction="standard-part", N=N,
               inputs=min(cfg.samples, 1000), guard_index=f"2^{min(N, cfg.cap_exp)}",
               claimed_bound=f"{float(bound):.6g}", measured_bound=f"{float(worst):.6g}")


def _demo_hbu(cfg, rep):
    G = wt.Functional2(lambda f: f(0) + 1, "f(0)+1")
    cover = wt.find_cover(G, max(cfg.N, 2))
    ok = cover is not None and cover.N == 2 and wt.cover_is_correct(cover)
    rep.record("demo", _status(ok), construction="hbu-cover", G="f(0)+1",
               N=cover.N if cover else "none", leaves=len(cover.leaves) if cover else 0,
               claimed="N=2, exhaustive membership")


def _demo_wkl(cfg, rep):
    rng = random.Random(cfg.seed)
    N = cfg.N
    tree = samples.random_tree(rng, N)
    path = wt.wkl_path(tree, N)
    prefix = tuple(path(i) for i in range(N))
    ok = all(prefix[:k] in tree for k in range(N + 1))
    rep.record("demo", _status(ok), construction="wkl-path", N=N, tree_size=len(tree),
               path="".join(map(str, prefix)))


def _demo_sup(cfg, rep):
    Y = wt.Functional2(lambda f: f(0) + f(1), "f(0)+f(1)")
    s = wt.sup_on_cantor(Y, 2)
    rep.record("demo", _status(s == 2), construction="sup-on-cantor", Y="f(0)+f(1)", N=2, sup=s)


def _demo_ct(cfg, rep):
    N = cfg.N if cfg.N >= 100 else 1000
    d = wt.ct_diagonal(N)
    dis = d.disagreements()
    ok = bool(dis) and all((1 if d.values[e] == 0 else 0) == d.f0[e] for e in d.defined())
    rep.record("demo", _status(ok and len(dis) == len(d.defined())), construction="ct-diagonal", N=N,
               machines=len(d.f0), defined=len(d.defined()), disagreements=len(dis),
               f0="".join(map(str, d.f0)))


def _demo_kripke(cfg, rep):
    N = cfg.N
    k = wt.kripke_gamma(lambda a, m: 0, lambda a, m: 0 if a == 0 else 1, N)
    vals = [(k.g0(m), k.h0(m), k.gamma(m)) for m in range(4)]
    ok = all(v == (N, 0, 0) for v in vals)
    rep.record("demo", _status(ok), construction="kripke-gamma", N=N, g0=vals[0][0], h0=vals[0][1],
               gamma=vals[0][2])


def _demo_aca(cfg, rep):
    f0 = wt.aca_refuter(lambda n: n)
    ok = f0(2, 3) == 0 and f0(2, 2) == 1
    rep.record("demo", _status(ok), construction="aca-refuter", h0="id", f0_2_3=f0(2, 3), f0_2_2=f0(2, 2))


DEMOS = {
    "discontinuity": _demo_discontinuity,
    "binary-digits": _demo_binary,
    "standard-part": _demo_standard_part,
    "hbu-cover": _demo_hbu,
    "wkl-path": _demo_wkl,
    "sup-on-cantor": _demo_sup,
    "ct-diagonal": _demo_ct,
    "kripke-gamma": _demo_kripke,
    "aca-refuter": _demo_aca,
}


def cmd_demo(args, cfg, rep) -> int:
    names = list(DEMOS) if args.name == "all" else [args.name]
    for name in names:
        DEMOS[name](cfg, rep)
    return EXIT_FAIL if rep.failures else EXIT_OK


def cmd_model(args, cfg, rep) -> int:
    f = parse("formula", args.text, PRELUDE)
    check_formula(f, {})
    v = schemas.model_check_instance(f, cfg.B, args.budget, args.st)
    status = {"valid": "PASS", "countermodel": "FAIL", "inconclusive": "SKIP"}[v.status]
    env = ";".join(f"{k}={val}" for k, val in v.environment) or "-"
    rep.record("model", status, verdict=v.status, B=cfg.B, st=args.st, environment=env,
               reason=v.reason or "-")
    return EXIT_FAIL if v.status == "countermodel" else EXIT_OK


def selftest(cfg: RunConfig, rep: Reporter) -> None:
    """A reduced deterministic battery; output depends only on the config."""
    for path in _script_paths([]):
        try:
            thm = check_file(path)
            rep.record("library", "PASS", script=thm.name, axioms=",".join(thm.axioms))
        except KernelError as exc:
            rep.record("library", "FAIL", script=path.name, error=str(exc)[:200])
    for N in range(1, 65):
        pair = wt.counterexample_pair(N)
        Y = wt.y0(N)
        if not (pair.agreement == N and (Y(pair.f0), Y(pair.g0)) == (1, 0)):
            rep.record("discontinuity", "FAIL", N=N)
    rep.record("discontinuity", "PASS" if not rep.failures else "FAIL", range="1..64")
    rng = random.Random(cfg.seed)
    for N in (64, 256):
        xs = [samples.random_rational(rng) for _ in range(50)]
        worst = max(abs(wt.standard_part(reals.rat(q), N, cfg.cap_exp).value - q) for q in xs)
        rep.record("standard-part", _status(worst <= Fraction(4, N)), N=N, worst=str(worst))
    xs = [samples.random_rational(rng) for _ in range(50)]
    bound = wt.digit_error_bound(16, 1024)
    worst = max(abs(wt.partial_sum(wt.binary_digits(reals.rat(q), 16, 1024)) - q) for q in xs)
    rep.record("binary-digits", _status(worst <= bound), worst=str(worst))
    for r in mj.model_suite(Bs=(1,), depth=1):
        rep.record("maj-suite", "SKIP" if r.skipped else _status(r.ok), check=r.name,
                   type=print_type(r.type), B=r.B, checked=r.checked)
    ok = True
    for _ in range(20):
        G, _m = samples.random_determined_functional(rng)
        cover = wt.find_cover(G, 8)
        ok &= cover is not None and wt.cover_is_correct(cover)
    rep.record("hbu-cover", _status(ok), trials=20)
    ok = True
    for _ in range(20):
        tree = samples.random_tree(rng, 12)
        path = wt.wkl_path(tree, 12)
        ok &= all(tuple(path(i) for i in range(k)) in tree for k in range(13))
    rep.record("wkl-path", _status(ok), trials=20)
    d = wt.ct_diagonal(1000)
    rep.record("ct-diagonal", _status(bool(d.disagreements())), disagreements=len(d.disagreements()))
    x = reals.hat(samples.raw_sequence(rng))
    ok = all(reals.fast_converging_at(x, n, i) for n in range(30) for i in range(30))
    rep.record("hat", _status(ok), seed=cfg.seed)


def cmd_selftest(args, cfg, rep) -> int:
    selftest(cfg, rep)
    return EXIT_FAIL if rep.failures else EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps a subcommand from resetting a flag given before it
    quiet = argparse.SUPPRESS
    for flag in ("--fuel", "--B", "--N", "--seed", "--samples", "--depth"):
        common.add_argument(flag, type=int, default=quiet)
    common.add_argument("--cap-exp", dest="cap_exp", type=int, default=quiet)
    common.add_argument("--format", choices=("human", "line"), default=quiet)

    p = argparse.ArgumentParser(prog="nsak", parents=[common],
                                description="Finite-type syntax, proof checking and nonstandard witnesses.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("parse", parents=[common], help="parse and pretty-print")
    s.add_argument("kind", choices=("type", "term", "formula"))
    s.add_argument("text")
    s.add_argument("--prelude", action="store_true", help="expand prelude names")
    s.set_defaults(func=cmd_parse)

    s = sub.add_parser("check", parents=[common], help="type-check a term or formula")
    s.add_argument("kind", choices=("term", "formula"))
    s.add_argument("text")
    s.add_argument("--ctx", help="typing context, e.g. 'f:0->0,n:0'")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("eval", parents=[common], help="evaluate a closed term of type 0")
    s.add_argument("text")
    s.add_argument("--normalize", action="store_true")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("maj", parents=[common], help="majorizability checks on finite models")
    s.add_argument("checks", nargs="*",
                   choices=("reflexivity-iff-monotone", "right-monotone", "maj", "transitivity"))
    s.add_argument("--type")
    s.add_argument("--exhaustive", action="store_true")
    s.add_argument("--all-B", dest="all_B", action="store_true", help="run B=1 as well")
    s.add_argument("--cap", type=int, default=20_000)
    s.set_defaults(func=cmd_maj)

    s = sub.add_parser("axiom", parents=[common], help="list or instantiate schemas")
    s.add_argument("action", choices=("list", "inst"))
    s.add_argument("id", nargs="?")
    s.add_argument("--phi", action="append", help="abstraction text or a file containing it")
    s.add_argument("--type", action="append")
    s.add_argument("--term", action="append")
    s.set_defaults(func=cmd_axiom)

    s = sub.add_parser("prove", parents=[common], help="check proof scripts")
    s.add_argument("paths", nargs="*")
    s.add_argument("--mutations", action="store_true", help="also run the mutation suite")
    s.add_argument("--lemmas", action="store_true", help="also spot-check declared lemmas")
    s.set_defaults(func=cmd_prove)

    s = sub.add_parser("demo", parents=[common], help="run a witness construction")
    s.add_argument("name", choices=("all",) + tuple(DEMOS))
    s.set_defaults(func=cmd_demo)

    s = sub.add_parser("model", parents=[common], help="model-check a closed formula")
    s.add_argument("text")
    s.add_argument("--st", default="all", help="all | threshold(k)")
    s.add_argument("--budget", type=int, default=200_000)
    s.set_defaults(func=cmd_model)

    s = sub.add_parser("selftest", parents=[common], help="deterministic reduced battery")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    cfg = RunConfig.from_env()
    for name in ("fuel", "B", "N", "seed", "samples", "depth", "cap_exp", "format"):
        value = getattr(args, name, None)
        if value is not None:
            setattr(cfg, name, value)
    rep = Reporter(cfg.format, out)
    try:
        return args.func(args, cfg, rep)
    except (ParseError, TypeCheckError) as exc:
        rep.record("error", "FAIL", error=str(exc))
        return EXIT_USAGE
    except ValueError as exc:
        rep.record("error", "FAIL", error=str(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
