"""Mutate one justification at a time in the library and report each verdict."""
import argparse
import collections
import sys

from nsak.audit import run_mutations


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--scripts", nargs="*", default=["L2", "L3", "L5"])
    ap.add_argument("--verbose", action="store_true")
    args = ap.parse_args()
    outcomes = run_mutations(tuple(args.scripts))
    per = collections.Counter()
    for o in outcomes:
        m = o.mutation
        per[m.script, o.rejected] += 1
        if args.verbose or not o.rejected:
            status = "rejected" if o.rejected else "ACCEPTED"
            print(f"{m.script} step {m.step}: {m.original} -> {m.mutated}: {status}  {o.reason}")
    for name in args.scripts:
        print(f"{name}: {per[name, True]} rejected, {per[name, False]} accepted")
    return 0 if all(o.rejected for o in outcomes) else 1


if __name__ == "__main__":
    sys.exit(main())
