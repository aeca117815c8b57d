"""Exhaustive majorizability checks over the finite models, one line per (check, type, B)."""
import argparse
import sys
import time

from nsak.majorizability import model_suite


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--B", type=int, nargs="*", default=[1, 2])
    ap.add_argument("--depth", type=int, default=2)
    ap.add_argument("--cap", type=int, default=20_000, help="largest model size enumerated")
    ap.add_argument("--pair-cap", type=int, default=600_000)
    ap.add_argument("--transitivity", action="store_true", help="also probe transitivity")
    args = ap.parse_args()
    checks = ("reflexivity-iff-monotone", "right-monotone", "maj")
    if args.transitivity:
        checks += ("transitivity",)
    start = time.perf_counter()
    results = model_suite(tuple(args.B), args.depth, args.cap, args.pair_cap, checks)
    for r in results:
        print(r.line())
    print(f"{len(results)} results in {time.perf_counter() - start:.2f}s")
    return 0 if all(r.ok for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
