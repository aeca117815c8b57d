"""Spot-check the arithmetic lemmas every library script declares."""
import argparse
import sys

from nsak.audit import spot_check_library


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=600)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    verdicts = spot_check_library(args.points, args.seed)
    for v in verdicts:
        print(f"{v.script:<4} {v.lemma:<10} {v.status:<17} checked={v.checked:<5} skipped={v.skipped} {v.detail}")
    return 0 if all(v.status == "holds_on_samples" for v in verdicts) else 1


if __name__ == "__main__":
    sys.exit(main())
