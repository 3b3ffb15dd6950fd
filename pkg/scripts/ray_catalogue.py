"""Write the ray catalogue as JSON plus one SVG per representative."""

import argparse
import json
from pathlib import Path

from tropj import jinv
from tropj.exact import rational_str
from tropj.subdivision import enumerate_rays
from tropj.tropcurve import cycle_report, dual_curve, render


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/rays")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    inv = jinv.invariants()
    rows = []
    for k, (ray, w) in enumerate(enumerate_rays()):
        rep = cycle_report(w)
        rows.append({"tag": ray.tag, "points": [list(p) for p in ray.points], "heights": w.to_names(),
                     "negValJ": rational_str(-jinv.val_j_generic(w, inv)), "cycle": rep.to_json()})
        (out / f"{k:02d}_{ray.tag}.svg").write_text(render(dual_curve(w), "svg") + "\n")
    (out / "catalogue.json").write_text(json.dumps(rows, indent=2, sort_keys=True) + "\n")
    print(f"wrote {len(rows)} rays to {out}")


if __name__ == "__main__":
    main()
