"""Sample heights where (1,1) is visible and tabulate -val_u(j) against the cycle length."""

import argparse
import collections
import random

from tropj import jinv
from tropj.exact import rational_str
from tropj.subdivision import sample_U


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    inv = jinv.invariants()
    hist = collections.Counter()
    failures = 0
    for u in sample_U(random.Random(args.seed), args.samples):
        rep = jinv.verify_main_theorem(u, inv)
        failures += not rep.passed
        hist[rep.geometric] += 1
    print(f"{args.samples - failures}/{args.samples} agree")
    print("cycle length  count")
    for length, n in sorted(hist.items())[:25]:
        print(f"{rational_str(length):>12}  {n}")
    if len(hist) > 25:
        print(f"... {len(hist) - 25} more distinct lengths")


if __name__ == "__main__":
    main()
