"""Command-line entry point: ``tropj <command> ...``.

Exit codes: 0 success, 1 invalid input, 2 counterexample or failed check,
3 truncation of the input series is insufficient.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import jinv
from .exact import as_rational, rational_str
from .puiseux import INF, PuiseuxSeries
from .subdivision import (A3, A3_POINTS, CENTER, HeightVector, NonRegularInput, ARRAY_ORDER,
                          classify_ray, enumerate_rays, regular_subdivision, sample_U)
from .tropcurve import cycle_report, dual_curve, render

OK, INVALID, COUNTEREXAMPLE, TRUNCATION = 0, 1, 2, 3


class InputError(ValueError):
    pass


@dataclass
class Loaded:
    heights: HeightVector
    cubic: dict | None = None  # (i, j) -> PuiseuxSeries when the input was a cubic


def _fmt(q) -> str:
    return "inf" if q == INF else rational_str(q)


def parse_heights(obj) -> HeightVector:
    try:
        if isinstance(obj, list):
            if len(obj) != 10:
                raise InputError("a height array needs exactly 10 entries")
            u = HeightVector.from_array([_height(v) for v in obj], ARRAY_ORDER)
        elif isinstance(obj, dict):
            keys = {f"u{i}{j}" for i, j in A3_POINTS}
            if set(obj) != keys:
                raise InputError(f"height keys must be exactly {sorted(keys)}")
            u = HeightVector.from_names({k: _height(v) for k, v in obj.items()})
        else:
            raise InputError("heights must be a JSON object or array")
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InputError(str(exc)) from None
    for p in A3.hull:
        if u[p] == INF:
            raise InputError(f"height of corner {p} must be finite")
    return u


def _height(v):
    if v == "inf":
        return INF
    if isinstance(v, float):
        raise InputError("heights must be exact: use integers or \"p/q\" strings")
    return as_rational(v)


def parse_cubic(obj) -> dict:
    if not isinstance(obj, dict):
        raise InputError("a cubic must be a JSON object keyed a00..a03")
    keys = {f"a{i}{j}" for i, j in A3_POINTS}
    extra = set(obj) - keys
    if extra:
        raise InputError(f"unknown coefficient keys {sorted(extra)}")
    try:
        coeffs = {(int(k[1]), int(k[2])): PuiseuxSeries.from_json(v) for k, v in obj.items()}
    except (KeyError, ValueError, ZeroDivisionError, TypeError) as exc:
        raise InputError(f"bad series literal: {exc}") from None
    coeffs = {p: coeffs.get(p, PuiseuxSeries.zero()) for p in A3_POINTS}
    if all(c.is_exact_zero() for c in coeffs.values()):
        raise InputError("the cubic is identically zero")
    return coeffs


def load(path: str) -> Loaded:
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    if isinstance(obj, dict) and obj and all(k.startswith("a") for k in obj):
        coeffs = parse_cubic(obj)
        try:
            u = jinv.valuation_heights(coeffs)
        except ArithmeticError as exc:
            raise jinv.TruncationInsufficient(str(exc)) from None
        return Loaded(u, coeffs)
    return Loaded(parse_heights(obj))


def _config(loaded: Loaded):
    return jinv.support_config(loaded.heights) if loaded.cubic is not None else A3


# --- commands -------------------------------------------------------------------------


def cmd_tropicalize(args) -> int:
    loaded = load(args.input)
    cfg = _config(loaded)
    u = HeightVector({p: loaded.heights[p] for p in cfg.points})
    curve = dual_curve(u, cfg)
    rep = cycle_report(u, config=cfg)
    if rep.has_cycle:
        print(f"cycle length = {rational_str(rep.length)}")
    elif rep.generalized:
        print(f"generalized cycle length = {rational_str(rep.length)}")
    else:
        print("no cycle; length = 0")
    if args.json:
        Path(args.json).write_text(json.dumps({"curve": curve.to_json(), "cycle": rep.to_json()},
                                              indent=2, sort_keys=True) + "\n")
    if args.svg:
        Path(args.svg).write_text(render(curve, "svg", box=args.box) + "\n")
    if args.ascii:
        print(render(curve, "ascii", box=args.box), end="")
    return OK


def cmd_jval(args) -> int:
    loaded = load(args.input)
    inv = jinv.invariants()
    u = loaded.heights
    va = jinv.generic_valuation(inv.table("A"), u)
    vd = jinv.generic_valuation(inv.table("Delta"), u)
    print(f"val_u(A) = {_fmt(va)}")
    print(f"val_u(Delta) = {_fmt(vd)}")
    if va != INF and vd != INF:
        print(f"val_u(j) = {_fmt(va - vd)}")
    if loaded.cubic is not None:
        j = jinv.evaluate_j(loaded.cubic, inv)
        print(f"val(j(f)) = {_fmt(j.valuation)}")
        print(f"lc(j(f)) = {rational_str(j.leading_coefficient)}")
    return OK


def cmd_verify(args) -> int:
    if args.samples < 1:
        raise InputError("--samples must be at least 1")
    inv = jinv.invariants()
    rng = random.Random(args.seed)
    samples = []
    if args.pin_example:
        samples.append(HeightVector.from_array([0, 1, 100, 100, 1, 100, 1, 1, 3, 7]))
    samples += sample_U(rng, args.samples - len(samples))
    failures = 0
    for k, u in enumerate(samples):
        rep = jinv.verify_main_theorem(u, inv)
        if not rep.passed:
            failures += 1
            print(f"sample {k}: {u.to_names()} -> {rep.to_json()}")
    print(f"{len(samples) - failures}/{len(samples)} samples satisfy -val_u(j) = cycle length")
    return OK if failures == 0 else COUNTEREXAMPLE


def cmd_rays(args) -> int:
    inv = jinv.invariants()
    bad = 0
    for ray, w in enumerate_rays():
        S = regular_subdivision(w)
        back = classify_ray(S)
        rep = cycle_report(w)
        neg = -jinv.val_j_generic(w, inv)
        if rep.has_cycle:
            note = f"cycle length {rational_str(rep.length)}"
            ok = neg == rep.length
        elif rep.generalized:
            note = f"generalized cycle length {rational_str(rep.length)}"
            ok = neg == rep.length
        else:
            note = "no cycle"
            ok = True
        ok = ok and back == ray
        bad += not ok
        heights = " ".join(f"{k}={v}" for k, v in w.to_names().items()) if args.catalog else ""
        print(f"{ray}: -val_u(j) = {rational_str(neg)}; {note}; {'ok' if ok else 'MISMATCH'} {heights}".rstrip())
    return OK if not bad else COUNTEREXAMPLE


def cmd_shift_experiment(args) -> int:
    try:
        b = as_rational(args.b)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad rational {args.b!r}") from None
    if b <= 0:
        raise InputError("--b must be positive")
    inv = jinv.invariants()
    rep = jinv.coordinate_change_experiment(b, seed=args.seed, inv=inv)
    ref = jinv.coordinate_change_experiment(2, seed=args.seed, inv=inv) if b != 2 else rep
    print("valuations after the shift:")
    for p in ARRAY_ORDER:
        print(f"  u{p[0]}{p[1]} = {_fmt(rep.heights[p])}")
    print("cells:")
    for c in rep.subdivision.cells:
        print("  " + " ".join(f"({p[0]},{p[1]})" for p in c.vertices))
    same = rep.subdivision == ref.subdivision
    print(f"subdivision {'equals' if same else 'differs from'} the one for b = 2")
    kind = "generalized cycle length" if rep.generalized else "cycle length"
    print(f"{kind} = {rational_str(rep.cycle_length)}")
    print(f"val_u(j) = {_fmt(rep.val_j_generic)}")
    print(f"val(j(f)) = {_fmt(rep.j.valuation)}")
    print(f"leading terms cancel in tini(Delta): {'yes' if rep.tini_cancels else 'no'}")
    print(f"a01*a12 - a11*a02 vanishes on leading terms: {'yes' if rep.factor_vanishes else 'no'}")
    return OK


def cmd_build_invariants(args) -> int:
    inv = jinv.invariants(rebuild=args.force)
    print(f"S: {len(inv.S)} terms, A: {len(inv.A)} terms, Delta: {len(inv.Delta)} terms")
    print(f"certificate: {inv.normalization_witness}")
    print(f"cache: {jinv.cache_path()}")
    return OK if all(inv.normalization_witness.values()) else COUNTEREXAMPLE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tropj", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tropicalize", help="dual tropical curve and cycle length")
    p.add_argument("input", help="heights or cubic JSON file")
    p.add_argument("--svg")
    p.add_argument("--json")
    p.add_argument("--ascii", action="store_true")
    p.add_argument("--box", type=Fraction, default=Fraction(6))
    p.set_defaults(func=cmd_tropicalize)

    p = sub.add_parser("jval", help="generic valuations of A, Delta and j")
    p.add_argument("input")
    p.set_defaults(func=cmd_jval)

    p = sub.add_parser("verify", help="random check of -val_u(j) = cycle length")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pin-example", action="store_true", help="include the worked example first")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("rays", help="lifts, folds and pinwheels up to symmetry")
    p.add_argument("--catalog", action="store_true", help="also print witness heights")
    p.set_defaults(func=cmd_rays)

    p = sub.add_parser("shift-experiment", help="(x, y) -> (x + t^b, y) on the worked example")
    p.add_argument("--b", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_shift_experiment)

    p = sub.add_parser("build-invariants", help="build and cache S, A and Delta")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_build_invariants)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, NonRegularInput) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INVALID
    except jinv.SingularCurve as exc:
        print(f"error: {exc}", file=sys.stderr)
        return COUNTEREXAMPLE
    except (jinv.TruncationInsufficient, jinv.IndeterminateValuation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return TRUNCATION


if __name__ == "__main__":
    sys.exit(main())
