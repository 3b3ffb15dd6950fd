"""Shift x -> x + t^b in the worked example for several b and draw each tropical curve."""

import argparse
from pathlib import Path

from tropj import jinv
from tropj.exact import as_rational, rational_str
from tropj.tropcurve import dual_curve, render

DEFAULT_B = ("3", "2", "3/2", "1", "2/3", "1/2", "1/3")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--b", nargs="*", default=list(DEFAULT_B))
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="out/shift")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    inv = jinv.invariants()
    print(f"{'b':>5} {'length':>7} {'val_u(j)':>9} {'val(j(f))':>10} {'cancel':>7} {'cells':>6}")
    for b in args.b:
        r = jinv.coordinate_change_experiment(as_rational(b), seed=args.seed, inv=inv)
        print(f"{b:>5} {rational_str(r.cycle_length):>7} {rational_str(r.val_j_generic):>9} "
              f"{rational_str(r.j.valuation):>10} {'yes' if r.tini_cancels else 'no':>7} "
              f"{len(r.subdivision.cells):>6}")
        name = b.replace("/", "_")
        (out / f"shift_b{name}.svg").write_text(render(dual_curve(r.heights), "svg") + "\n")


if __name__ == "__main__":
    main()
