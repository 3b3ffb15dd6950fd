"""The j-invariant of a plane cubic as a quotient A / Delta of degree-12
invariants of the ten coefficients, and everything measured through it.

Variables are ``a{i}{j}`` for the monomial x^i y^j (homogenised with
z^(3-i-j)).  ``S`` is the degree-4 invariant obtained by contracting four
copies of the symmetric coefficient tensor with four Levi-Civita symbols in
the pattern (abc)(abd)(acd)(bcd); ``A`` is its cube.  ``Delta`` is the
Macaulay resultant of the three partial derivatives.  Both are scaled so that
on the Weierstrass family y^2 + a x y - x^3 - b x^2 - 1 they become
(a^2 + 4b)^6 and -(a^2 + 4b)^3 - 432.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import os
import random
import threading
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from pathlib import Path

import numpy as np

from . import puiseux
from .exact import (SparsePolynomial, as_rational, det_fraction_free, integer_points_monomials,
                    poly_eval, rational_str)
from .puiseux import INF, IndeterminateValuation, PuiseuxSeries, ValuedScalar
from .subdivision import (A3, A3_POINTS, CENTER, HeightVector, MarkedSubdivision, PointConfig,
                          lattice_length, membership_U, regular_subdivision)
from .tropcurve import (cycle_coefficients, cycle_length_closed_form, cycle_report,
                        per_edge_closed_form, per_edge_geometric)

VARIABLES = tuple(f"a{i}{j}" for i, j in A3_POINTS)
_INDEX = {p: k for k, p in enumerate(A3_POINTS)}
WEIERSTRASS_VARS = ("a", "b")


class NormalizationError(ArithmeticError):
    pass


class TruncationInsufficient(ArithmeticError):
    pass


class SingularCurve(ArithmeticError):
    pass


# --- construction ------------------------------------------------------------------


def _coef_tensor():
    """T[a][b][c] = (variable index, weight) with F = sum T_abc x_a x_b x_c."""
    T = {}
    for idx in itertools.product(range(3), repeat=3):
        e = tuple(idx.count(k) for k in range(3))  # exponents of x, y, z
        mult = factorial(3) // (factorial(e[0]) * factorial(e[1]) * factorial(e[2]))
        T[idx] = (_INDEX[(e[0], e[1])], Fraction(1, mult))
    return T


def _perm_sign(p):
    s = 1
    for i in range(3):
        for j in range(i + 1, 3):
            if p[i] > p[j]:
                s = -s
    return s


def aronhold_S_raw() -> SparsePolynomial:
    """sum eps(i1 j1 k1) eps(i2 j2 l1) eps(i3 k2 l2) eps(j3 k3 l3) T_i T_j T_k T_l."""
    T = _coef_tensor()
    eps = [(p, _perm_sign(p)) for p in itertools.permutations(range(3))]
    acc: dict = {}
    n = len(VARIABLES)
    for (i1, j1, k1), s1 in eps:
        for (i2, j2, l1), s2 in eps:
            for (i3, k2, l2), s3 in eps:
                for (j3, k3, l3), s4 in eps:
                    factors = (T[(i1, i2, i3)], T[(j1, j2, j3)], T[(k1, k2, k3)], T[(l1, l2, l3)])
                    e = [0] * n
                    c = Fraction(s1 * s2 * s3 * s4)
                    for v, w in factors:
                        e[v] += 1
                        c *= w
                    e = tuple(e)
                    acc[e] = acc.get(e, 0) + c
    return SparsePolynomial(VARIABLES, acc)


def _partial_rows():
    """For each of x, y, z: {degree-2 monomial: (integer, variable index)} of dF/dx_k."""
    out = []
    for k in range(3):
        rows = {}
        for idx, (i, j) in enumerate(A3_POINTS):
            e = [i, j, 3 - i - j]
            if e[k] == 0:
                continue
            c = e[k]
            e[k] -= 1
            rows[tuple(e)] = (c, idx)
        out.append(rows)
    return out


def macaulay_matrix(order=(0, 1, 2)):
    """15x15 Macaulay matrix of the partials at degree 4 and the reduced
    (extraneous) row/column indices.  ``order`` fixes which variable's square
    decides the row assignment of a monomial."""
    P = _partial_rows()
    mons = integer_points_monomials(3, 4)
    col = {m: i for i, m in enumerate(mons)}
    zero = SparsePolynomial.zero(VARIABLES)
    M = []
    for m in mons:
        k = next(k for k in order if m[k] >= 2)
        shift = list(m)
        shift[k] -= 2
        row = [zero] * len(mons)
        for e, (c, idx) in P[k].items():
            tgt = tuple(a + b for a, b in zip(e, shift))
            ex = [0] * len(VARIABLES)
            ex[idx] = 1
            row[col[tgt]] = SparsePolynomial(VARIABLES, {tuple(ex): c})
        M.append(row)
    reduced = [col[m] for m in mons if sum(1 for k in range(3) if m[k] >= 2) >= 2]
    return M, reduced


def divide_exact(p: SparsePolynomial, q: SparsePolynomial) -> SparsePolynomial:
    """p / q when q divides p (lex leading terms); raises otherwise."""
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    qt = max(q.terms)
    qc = q.terms[qt]
    quo = {}
    r = p
    while not r.is_zero():
        lt = max(r.terms)
        m = tuple(a - b for a, b in zip(lt, qt))
        if min(m) < 0:
            raise ArithmeticError("polynomial division is not exact")
        c = Fraction(r.terms[lt]) / qc
        quo[m] = c
        r = r - SparsePolynomial(p.variables, {m: c}) * q
    return SparsePolynomial(p.variables, quo)


def discriminant_raw() -> SparsePolynomial:
    for order in ((0, 1, 2), (2, 1, 0)):
        M, red = macaulay_matrix(order)
        extraneous = det_fraction_free([[M[r][c] for c in red] for r in red])
        if isinstance(extraneous, SparsePolynomial) and not extraneous.is_zero():
            return divide_exact(det_fraction_free(M), extraneous)
    raise NormalizationError("extraneous minor vanishes for both row partitions")


def weierstrass_images():
    """The cubic y^2 + a x y - x^3 - b x^2 - 1 as images of the ten coefficients."""
    a = SparsePolynomial.var(WEIERSTRASS_VARS, "a")
    b = SparsePolynomial.var(WEIERSTRASS_VARS, "b")
    one = SparsePolynomial.constant(WEIERSTRASS_VARS, 1)
    zero = SparsePolynomial.zero(WEIERSTRASS_VARS)
    img = {v: zero for v in VARIABLES}
    img.update(a02=one, a11=a, a30=-one, a20=-b, a00=-one)
    return img


def weierstrass_targets():
    a = SparsePolynomial.var(WEIERSTRASS_VARS, "a")
    b = SparsePolynomial.var(WEIERSTRASS_VARS, "b")
    q = a * a + b * 4
    return {"S": q ** 2, "A": q ** 6, "Delta": -(q ** 3) - 432}


def _scale_to(p: SparsePolynomial, target: SparsePolynomial, what: str):
    got = p.substitute(weierstrass_images())
    if got.is_zero():
        raise NormalizationError(f"{what} vanishes on the Weierstrass family")
    e = max(target.terms)
    c = target.terms[e] / Fraction(got.coefficient(e)) if got.coefficient(e) else None
    if c is None or got * c != target:
        raise NormalizationError(f"{what} on the Weierstrass family is not proportional to the target")
    return c


def aronhold_S() -> SparsePolynomial:
    S = aronhold_S_raw()
    return S * _scale_to(S, weierstrass_targets()["S"], "S")


def discriminant_delta() -> SparsePolynomial:
    D = discriminant_raw()
    return D * _scale_to(D, weierstrass_targets()["Delta"], "Delta")


def numerator_A(S: SparsePolynomial | None = None) -> SparsePolynomial:
    S = aronhold_S() if S is None else S
    A = S ** 3
    return A * _scale_to(A, weierstrass_targets()["A"], "A")


# --- invariants bundle with cache -----------------------------------------------------


def _poly_json(p: SparsePolynomial):
    return [[list(e), rational_str(c)] for e, c in sorted(p.terms.items(), reverse=True)]


def _poly_from_json(rows):
    return SparsePolynomial(VARIABLES, {tuple(e): as_rational(c) for e, c in rows})


@dataclass
class CubicInvariants:
    S: SparsePolynomial
    A: SparsePolynomial
    Delta: SparsePolynomial
    normalization_witness: dict = field(default_factory=dict)

    def __post_init__(self):
        self._tables = {}

    def table(self, name: str) -> SupportTable:
        if name not in self._tables:
            self._tables[name] = SupportTable(getattr(self, name))
        return self._tables[name]

    def certify(self) -> dict:
        img = weierstrass_images()
        tgt = weierstrass_targets()
        w = {name: getattr(self, name).substitute(img) == tgt[name] for name in ("S", "A", "Delta")}
        w["A=S^3"] = self.A == self.S ** 3
        self.normalization_witness = w
        return w

    def to_json(self) -> dict:
        body = {"variables": list(VARIABLES), "S": _poly_json(self.S), "A": _poly_json(self.A),
                "Delta": _poly_json(self.Delta)}
        body["sha256"] = _content_hash(body)
        return body

    @classmethod
    def from_json(cls, obj) -> CubicInvariants:
        if tuple(obj["variables"]) != VARIABLES:
            raise ValueError("cached invariants use a different variable order")
        if obj.get("sha256") != _content_hash(obj):
            raise ValueError("cached invariants fail the content hash")
        return cls(_poly_from_json(obj["S"]), _poly_from_json(obj["A"]), _poly_from_json(obj["Delta"]))

    @classmethod
    def build(cls) -> CubicInvariants:
        S = aronhold_S()
        inv = cls(S, numerator_A(S), discriminant_delta())
        inv.certify()
        return inv


def _content_hash(body) -> str:
    core = {k: body[k] for k in ("variables", "S", "A", "Delta")}
    return hashlib.sha256(json.dumps(core, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


CACHE_ENV = "TROPJ_CACHE"


def cache_path() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "tropj" / "invariants.json"


_lock = threading.Lock()
_instance: CubicInvariants | None = None


def invariants(path: Path | None = None, rebuild: bool = False) -> CubicInvariants:
    """Load (or build once and store) the invariants; concurrent callers share one build."""
    global _instance
    with _lock:
        if _instance is not None and not rebuild and path is None:
            return _instance
        path = cache_path() if path is None else Path(path)
        inv = None
        if path.exists() and not rebuild:
            try:
                inv = CubicInvariants.from_json(json.loads(path.read_text()))
                if not all(inv.certify().values()):
                    inv = None
            except (ValueError, KeyError, json.JSONDecodeError):
                inv = None
        if inv is None:
            inv = CubicInvariants.build()
            if not all(inv.normalization_witness.values()):
                raise NormalizationError(f"certificate failed: {inv.normalization_witness}")
            try:
                path.parent.mkdir(parents=True, exist_ok=True)
                tmp = path.with_suffix(".tmp")
                tmp.write_text(json.dumps(inv.to_json()))
                tmp.replace(path)
            except OSError:
                pass
        _instance = inv
        return inv


# --- generic valuations -------------------------------------------------------------


class SupportTable:
    """Exponent matrix of a polynomial for batched exact minima of u . w."""

    def __init__(self, p: SparsePolynomial):
        if p.is_zero():
            raise ValueError("zero polynomial has no generic valuation")
        self.variables = p.variables
        self.exponents = sorted(p.terms)
        self.E = np.array(self.exponents, dtype=np.int64)
        self.maxdeg = int(self.E.sum(axis=1).max())

    def weights(self, values) -> tuple:
        """(min value, index array of minimisers)."""
        vals = _as_var_values(values, self.variables)
        finite = [v for v in vals if v != INF]
        mask = np.ones(len(self.exponents), dtype=bool)
        for k, v in enumerate(vals):
            if v == INF:
                mask &= self.E[:, k] == 0
        if not mask.any():
            return INF, np.array([], dtype=np.int64)
        den = math.lcm(*(Fraction(v).denominator for v in finite)) if finite else 1
        ints = [0 if v == INF else int(v * den) for v in vals]
        big = max((abs(x) for x in ints), default=0) * self.maxdeg
        if big < 2 ** 62:
            s = self.E @ np.array(ints, dtype=np.int64)
        else:
            s = self.E.astype(object) @ np.array(ints, dtype=object)
        s = s[mask]
        idx = np.nonzero(mask)[0]
        m = s.min()
        return Fraction(int(m), den), idx[s == m]

    def argmin(self, values) -> list:
        _, idx = self.weights(values)
        return [self.exponents[k] for k in idx]


def _as_var_values(values, variables):
    if isinstance(values, Mapping):
        out = []
        for v in variables:
            if v in values:
                x = values[v]
            else:
                p = (int(v[1]), int(v[2]))
                x = values[p]
            out.append(INF if x == INF else as_rational(x))
        return out
    vals = [INF if x == INF else as_rational(x) for x in values]
    if len(vals) != len(variables):
        raise ValueError("weight vector length does not match the variables")
    return vals


def generic_valuation(p, u) -> Fraction:
    """min over the support of p of u . w (u keyed by variable name or lattice point)."""
    table = p if isinstance(p, SupportTable) else SupportTable(p)
    return table.weights(u)[0]


def generic_argmin(p, u) -> list:
    table = p if isinstance(p, SupportTable) else SupportTable(p)
    return table.argmin(u)


def val_j_generic(u, inv: CubicInvariants | None = None) -> Fraction:
    inv = invariants() if inv is None else inv
    return generic_valuation(inv.table("A"), u) - generic_valuation(inv.table("Delta"), u)


# --- j of a concrete cubic over the series field -----------------------------------------


def cubic_coefficients(f) -> dict:
    """Coefficient map (i, j) -> PuiseuxSeries from a polynomial in x, y or a mapping."""
    if isinstance(f, SparsePolynomial):
        if len(f.variables) != 2:
            raise ValueError("expected a polynomial in two variables")
        out = {}
        for e, c in f.terms.items():
            if sum(e) > 3:
                raise ValueError(f"degree exceeds 3: monomial {e}")
            out[tuple(e)] = c
    else:
        out = {}
        for k, c in f.items():
            p = (int(k[1]), int(k[2])) if isinstance(k, str) else tuple(k)
            if p not in _INDEX:
                raise ValueError(f"not a cubic monomial: {k}")
            out[p] = c
    return {p: PuiseuxSeries._coerce(out.get(p, 0)) for p in A3_POINTS}


def valuation_heights(coeffs: Mapping) -> HeightVector:
    """Coordinatewise valuations; exact-zero coefficients get +inf."""
    return HeightVector({p: PuiseuxSeries._coerce(coeffs.get(p, 0)).val() for p in A3_POINTS})


def support_config(u: HeightVector) -> PointConfig:
    """The cubic configuration when its corners carry finite heights, else the finite support."""
    if all(u[p] != INF for p in A3.hull):
        return A3
    return PointConfig(tuple(p for p in A3_POINTS if u[p] != INF))


def linear_change(coeffs: Mapping, g) -> dict:
    """Coefficients of F(g . (x, y, z)) for the homogenised cubic F and a 3x3 matrix g."""
    xyz = ("x", "y", "z")
    F = SparsePolynomial(xyz, {(i, j, 3 - i - j): c for (i, j), c in _points(coeffs).items()})
    images = {xyz[r]: SparsePolynomial(xyz, {tuple(int(k == s) for k in range(3)): as_rational(g[r][s])
                                              for s in range(3)}) for r in range(3)}
    G = F.substitute(images)
    return {p: G.coefficient((p[0], p[1], 3 - p[0] - p[1])) for p in A3_POINTS}


def _evaluate_determinate(poly, table, values, what):
    u = {VARIABLES[k]: values[k].valuation_bound() for k in range(len(values))}
    low = table.weights(u)[0]
    if low == INF:
        return PuiseuxSeries.zero()
    for margin in (1, 2, 4, 16, 64, None):
        cap = None if margin is None else low + margin
        s = poly_eval(poly, values, cap=cap)
        if s.terms or s.is_exact_zero():
            return s
    raise TruncationInsufficient(f"{what}(f) has no determinate leading term under the input truncation")


def evaluate_j(f, inv: CubicInvariants | None = None) -> ValuedScalar:
    """Valuation and leading coefficient of A(f) / Delta(f)."""
    inv = invariants() if inv is None else inv
    coeffs = cubic_coefficients(f)
    values = [coeffs[p] for p in A3_POINTS]
    D = _evaluate_determinate(inv.Delta, inv.table("Delta"), values, "Delta")
    if D.is_exact_zero():
        raise SingularCurve("Delta(f) = 0: the cubic is singular")
    Sv = _evaluate_determinate(inv.S, inv.table("S"), values, "S")
    if Sv.is_exact_zero():
        return ValuedScalar(INF, Fraction(0))
    return ValuedScalar(3 * Sv.val() - D.val(), Sv.lc() ** 3 / D.lc())


def j_rational(coeffs: Mapping, inv: CubicInvariants | None = None) -> Fraction:
    """A/Delta for a cubic with rational coefficients (keys (i, j) or names)."""
    inv = invariants() if inv is None else inv
    vals = {VARIABLES[_INDEX[p]]: as_rational(c) for p, c in _points(coeffs).items()}
    for v in VARIABLES:
        vals.setdefault(v, Fraction(0))
    d = poly_eval(inv.Delta, vals)
    if d == 0:
        raise SingularCurve("Delta(f) = 0")
    return poly_eval(inv.S, vals) ** 3 / d


def _points(coeffs):
    return {((int(k[1]), int(k[2])) if isinstance(k, str) else tuple(k)): c for k, c in coeffs.items()}


# --- linear forms on secondary cones --------------------------------------------------


@dataclass(frozen=True)
class LinearFormOnCone:
    coefficients: dict
    triangulation: MarkedSubdivision

    def __call__(self, u) -> Fraction:
        return sum((c * as_rational(u[p]) for p, c in self.coefficients.items()), Fraction(0))

    def as_exponent(self) -> tuple:
        return tuple(int(self.coefficients[p]) for p in A3_POINTS)


def _require_triangulation(T: MarkedSubdivision):
    if not T.is_triangulation():
        raise ValueError("not a triangulation: every cell must be a triangle marked only at its vertices")


def _boundary_facets_at(T: MarkedSubdivision, p) -> list:
    """Lattice lengths of cell edges at p lying in the boundary of the configuration hull."""
    out = []
    for _, (a, b) in T.boundary_edges():
        if p in (a, b):
            out.append(lattice_length(a, b))
    return out


def eta_vector(T: MarkedSubdivision) -> LinearFormOnCone:
    _require_triangulation(T)
    cfg = T.config
    hull = set(cfg.hull)
    eta = {}
    for p in cfg.points:
        vol = sum(abs(c.area2) for c in T.cells if p in c.marked)
        if not cfg.is_boundary(p):
            eta[p] = Fraction(vol)
        elif not T.is_cell_vertex(p):
            eta[p] = Fraction(0)
        else:
            ls = _boundary_facets_at(T, p)
            if len(ls) != 2:
                raise AssertionError(f"boundary point {p} meets {len(ls)} boundary facets")
            eta[p] = Fraction((1 if p in hull else 0) - sum(ls) + vol)
    return LinearFormOnCone(eta, T)


def c_vector(T: MarkedSubdivision, p=CENTER) -> LinearFormOnCone:
    if not T.is_cell_vertex(p):
        raise ValueError(f"{p} is not a cell vertex")
    coeffs = {q: Fraction(0) for q in T.config.points}
    for w, K in cycle_coefficients(T, p):
        coeffs[p] += K
        coeffs[w] -= K
    return LinearFormOnCone(coeffs, T)


@dataclass(frozen=True)
class EtaCComparison:
    eta: dict
    c: dict
    passed: bool
    mismatches: tuple


def compare_eta_c(T: MarkedSubdivision) -> EtaCComparison:
    eta = eta_vector(T).coefficients
    c = c_vector(T).coefficients
    bad = []
    for p in T.config.points:
        want = eta[p] - 12 if p == CENTER else eta[p]
        if c[p] != want:
            bad.append(p)
    return EtaCComparison(eta, c, not bad, tuple(bad))


# --- theorem checks ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MainTheoremReport:
    kind: str  # "cycle" | "generalized" | "not-applicable"
    neg_val_j: Fraction
    geometric: Fraction | None = None
    closed_form: Fraction | None = None
    per_edge_agree: bool | None = None
    passed: bool | None = None

    def to_json(self):
        q = lambda x: None if x is None else rational_str(x)  # noqa: E731
        return {"kind": self.kind, "negValJ": q(self.neg_val_j), "geometric": q(self.geometric),
                "closedForm": q(self.closed_form), "perEdgeAgree": self.per_edge_agree,
                "passed": self.passed}


def verify_main_theorem(u, inv: CubicInvariants | None = None) -> MainTheoremReport:
    u = u if isinstance(u, HeightVector) else HeightVector(u)
    neg = -val_j_generic(u, inv)
    rep = cycle_report(u)
    if rep.has_cycle:
        closed = cycle_length_closed_form(u)
        pe = per_edge_closed_form(u) == per_edge_geometric(u)
        ok = neg == rep.length == closed and pe
        return MainTheoremReport("cycle", neg, rep.length, closed, pe, ok)
    if rep.generalized:
        return MainTheoremReport("generalized", neg, rep.length, None, None, neg == rep.length)
    return MainTheoremReport("not-applicable", neg)


def check_A_cone(u, inv: CubicInvariants | None = None) -> bool:
    inv = invariants() if inv is None else inv
    u = u if isinstance(u, HeightVector) else HeightVector(u)
    if not membership_U(u):
        raise ValueError("heights are outside the region where the center is visible")
    target = tuple(12 if v == "a11" else 0 for v in VARIABLES)
    return target in inv.table("A").argmin(u)


# --- coordinate change experiment ------------------------------------------------------

EXAMPLE_VALUATIONS = {(0, 0): 1, (1, 0): 100, (2, 0): 100, (3, 0): 1, (0, 1): 1,
                      (1, 1): 0, (2, 1): 100, (0, 2): 3, (1, 2): 1, (0, 3): 7}


def random_unit(rng: random.Random, span: int = 9) -> Fraction:
    while True:
        c = Fraction(rng.randint(-span, span), rng.randint(1, span))
        if c:
            return c


def example_cubic(seed: int = 0, extra_terms: int = 0) -> SparsePolynomial:
    """The worked-example cubic with random rational c_ij (and optional random higher-order tails)."""
    rng = random.Random(seed)
    terms = {}
    for p, v in sorted(EXAMPLE_VALUATIONS.items()):
        s = [(v, random_unit(rng))]
        for k in range(extra_terms):
            s.append((v + Fraction(rng.randint(1, 12), rng.randint(1, 3)), random_unit(rng)))
        terms[p] = PuiseuxSeries(s)
    return SparsePolynomial(("x", "y"), terms)


@dataclass(frozen=True)
class ShiftReport:
    b: Fraction
    heights: HeightVector
    subdivision: MarkedSubdivision
    cycle_length: Fraction
    generalized: bool
    val_j_generic: Fraction
    j: ValuedScalar
    tini_delta: SparsePolynomial
    tini_cancels: bool
    has_factor: bool
    factor_vanishes: bool  # a01 a12 - a11 a02 is zero on the leading coefficients

    def to_json(self):
        return {"b": rational_str(self.b), "heights": self.heights.to_names(),
                "subdivision": self.subdivision.to_json(), "cycleLength": rational_str(self.cycle_length),
                "generalized": self.generalized, "valJGeneric": rational_str(self.val_j_generic),
                "valJ": rational_str(self.j.valuation), "tiniCancels": self.tini_cancels,
                "hasFactor": self.has_factor, "factorVanishes": self.factor_vanishes}


def coordinate_change_experiment(b, seed: int = 0, inv: CubicInvariants | None = None) -> ShiftReport:
    b = as_rational(b)
    if b <= 0:
        raise ValueError("shift exponent must be positive")
    inv = invariants() if inv is None else inv
    f = puiseux.shift_substitute(example_cubic(seed), PuiseuxSeries.monomial(1, b))
    coeffs = cubic_coefficients(f)
    u = HeightVector({p: coeffs[p].val() for p in A3_POINTS})
    rep = cycle_report(u)
    vj = val_j_generic(u, inv)
    j = evaluate_j(f, inv)
    weights = {VARIABLES[_INDEX[p]]: u[p] for p in A3_POINTS}
    tin = puiseux.tini(inv.Delta, weights)
    lead = {VARIABLES[_INDEX[p]]: coeffs[p].lc() if not coeffs[p].is_exact_zero() else Fraction(0)
            for p in A3_POINTS}
    cancels = poly_eval(tin, lead) == 0
    g = SparsePolynomial.var(VARIABLES, "a01") * SparsePolynomial.var(VARIABLES, "a12") \
        - SparsePolynomial.var(VARIABLES, "a11") * SparsePolynomial.var(VARIABLES, "a02")
    try:
        divide_exact(tin, g)
        has_factor = True
    except ArithmeticError:
        has_factor = False
    return ShiftReport(b, u, regular_subdivision(u), rep.length, rep.generalized, vj, j, tin,
                       cancels, has_factor, poly_eval(g, lead) == 0)

