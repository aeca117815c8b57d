"""Run the acceptance criteria and print one line each; exit 1 on any failure."""
import argparse
import sys

from nsak.acceptance import CRITERIA, run_criterion


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--only", type=int, nargs="*", help="criterion numbers")
    args = ap.parse_args()
    failed = 0
    for number, *_ in CRITERIA:
        if args.only and number not in args.only:
            continue
        outcome = run_criterion(number, args.seed)
        print(outcome.line, flush=True)
        failed += not outcome.ok
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
