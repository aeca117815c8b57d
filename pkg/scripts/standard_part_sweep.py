"""Worst observed |u(x, N) - x| * N over random rationals for a range of N."""
import argparse
import random
from fractions import Fraction

from nsak.reals import rat
from nsak.samples import random_rational
from nsak.witnesses import standard_part, standard_part_bound


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, nargs="*", default=[8, 16, 64, 256, 1024, 4096])
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    xs = [random_rational(rng) for _ in range(args.count)]
    print("N        worst N*err   bound N*err   guard index")
    for N in args.N:
        worst = max(abs(standard_part(rat(x), N).value - x) for x in xs)
        print(f"{N:<8} {float(worst * N):<13.4f} {float(standard_part_bound(N) * N):<13.4f} "
              f"2^{min(N, 60)}")
    # the guard branch: values outside [-1/N, 1 + 1/N] map to 0
    print("x=2 ->", standard_part(rat(2), 64).value, "| x=-1/2 ->", standard_part(rat(Fraction(-1, 2)), 64).value)


if __name__ == "__main__":
    main()
