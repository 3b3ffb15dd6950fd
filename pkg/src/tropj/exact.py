"""Exact rationals and sparse multivariate polynomials.

Rationals are :class:`fractions.Fraction` (plain ``int`` is accepted wherever a
rational is expected).  Polynomials store a dense exponent tuple per term, so
the variable set is fixed at construction and shared by both operands of every
binary operation.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import reduce
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

Rational = Fraction
Exponent = tuple


class VariableMismatch(ValueError):
    pass


def as_rational(value) -> Fraction:
    """Parse ``"p/q"``, ints and Fractions into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not an exact rational: {value!r}")


def rational_str(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _is_zero(c) -> bool:
    iz = getattr(c, "is_exact_zero", None)
    if iz is not None:
        return iz()
    return c == 0


class SparsePolynomial:
    """Immutable sparse polynomial over an exact coefficient ring.

    ``terms`` maps exponent tuples (one entry per variable) to coefficients.
    Coefficients are rationals, or Puiseux series when the polynomial is a
    curve equation over the series field.
    """

    __slots__ = ("variables", "terms", "laurent")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, object] | None = None,
                 laurent: bool = False):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise ValueError(f"exponent {e} has wrong length for {n} variables")
            if not laurent and any(k < 0 for k in e):
                raise ValueError(f"negative exponent {e} in a non-Laurent polynomial")
            if not _is_zero(c):
                clean[e] = c
        self.terms = clean
        self.laurent = laurent

    # construction helpers
    @classmethod
    def zero(cls, variables):
        return cls(variables)

    @classmethod
    def constant(cls, variables, c):
        return cls(variables, {(0,) * len(tuple(variables)): c})

    @classmethod
    def var(cls, variables, name, power: int = 1):
        variables = tuple(variables)
        e = [0] * len(variables)
        e[variables.index(name)] = power
        return cls(variables, {tuple(e): 1})

    @classmethod
    def _raw(cls, variables, terms, laurent=False):
        # terms already clean; skip validation in hot loops
        p = object.__new__(cls)
        p.variables = variables
        p.terms = terms
        p.laurent = laurent
        return p

    def gens(self):
        return [SparsePolynomial.var(self.variables, v) for v in self.variables]

    # basic queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no degree")
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def coefficient(self, exponent) -> object:
        return self.terms.get(tuple(exponent), 0)

    def support(self) -> set:
        return support(self)

    def sorted_terms(self):
        """Terms in graded lexicographic order, largest first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    # arithmetic
    def _check(self, other: SparsePolynomial):
        if self.variables != other.variables:
            raise VariableMismatch(f"{self.variables} vs {other.variables}")

    def _coerce(self, other):
        if isinstance(other, SparsePolynomial):
            self._check(other)
            return other
        return SparsePolynomial.constant(self.variables, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if _is_zero(s):
                    del out[e]
                else:
                    out[e] = s
        return SparsePolynomial._raw(self.variables, out, self.laurent or other.laurent)

    __radd__ = __add__

    def __neg__(self):
        return SparsePolynomial._raw(self.variables, {e: -c for e, c in self.terms.items()}, self.laurent)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, SparsePolynomial):
            if _is_zero(other):
                return SparsePolynomial.zero(self.variables)
            return SparsePolynomial._raw(self.variables, {e: c * other for e, c in self.terms.items()},
                                         self.laurent)
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(map(int.__add__, ea, eb))
                s = get(e)
                out[e] = ca * cb if s is None else s + ca * cb
        out = {e: c for e, c in out.items() if not _is_zero(c)}
        return SparsePolynomial._raw(self.variables, out, self.laurent or other.laurent)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, n: int):
        return poly_pow(self, n)

    def __truediv__(self, scalar):
        return self * (Fraction(1) / as_rational(scalar))

    def __eq__(self, other):
        if isinstance(other, SparsePolynomial):
            return self.variables == other.variables and self.terms == other.terms
        if not self.terms:
            return _is_zero(other)
        return self.terms == SparsePolynomial.constant(self.variables, other).terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def map_coefficients(self, fn: Callable) -> SparsePolynomial:
        return SparsePolynomial(self.variables, {e: fn(c) for e, c in self.terms.items()}, self.laurent)

    def scale_to_integers(self) -> tuple[SparsePolynomial, Fraction]:
        """Return (p * k, k) with k > 0 chosen so that p * k has coprime integer coefficients."""
        if not self.terms:
            return self, Fraction(1)
        cs = [Fraction(c) for c in self.terms.values()]
        den = reduce(np.lcm, [c.denominator for c in cs], 1)
        nums = [int(c * den) for c in cs]
        g = reduce(np.gcd, [abs(n) for n in nums])
        k = Fraction(int(den), int(g))
        return self * k, k

    def derivative(self, name: str) -> SparsePolynomial:
        i = self.variables.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i] != 0:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[ne] = c * e[i]
        return SparsePolynomial(self.variables, out, self.laurent)

    def __call__(self, assignment):
        return poly_eval(self, assignment)

    def substitute(self, images: Mapping[str, SparsePolynomial]) -> SparsePolynomial:
        """Compose with polynomial images of some variables (others map to themselves)."""
        targets = None
        for v in images.values():
            targets = v.variables
            break
        if targets is None:
            return self
        gens = {name: images.get(name) for name in self.variables}
        for name, img in gens.items():
            if img is None:
                if name not in targets:
                    raise VariableMismatch(f"variable {name} has no image")
                gens[name] = SparsePolynomial.var(targets, name)
        powers: dict = {}

        def power(name, k):
            key = (name, k)
            if key not in powers:
                powers[key] = poly_pow(gens[name], k)
            return powers[key]

        total = SparsePolynomial.zero(targets)
        for e, c in self.terms.items():
            term = SparsePolynomial.constant(targets, c)
            for name, k in zip(self.variables, e):
                if k:
                    term = term * power(name, k)
            total = total + term
        return total

    def __repr__(self):
        return f"SparsePolynomial({self.to_str()})"

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k)
            cs = rational_str(c) if isinstance(c, (int, Fraction)) else f"({c})"
            if not mono:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def poly_add(p: SparsePolynomial, q: SparsePolynomial) -> SparsePolynomial:
    p._check(q)
    return p + q


def poly_mul(p: SparsePolynomial, q: SparsePolynomial) -> SparsePolynomial:
    p._check(q)
    return p * q


def poly_pow(p: SparsePolynomial, n: int) -> SparsePolynomial:
    if n < 0:
        raise ValueError("negative power")
    result = SparsePolynomial.constant(p.variables, 1)
    base = p
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def poly_eval(p: SparsePolynomial, assignment, cap=None):
    """Evaluate ``p`` at a point.

    ``assignment`` maps variable names (or positions) to rationals or Puiseux
    series.  For series values, ``cap`` bounds the t-exponents that are kept:
    every product is truncated at ``cap`` so only the low-order part of the
    value is computed.
    """
    if isinstance(assignment, Mapping):
        try:
            values = [assignment[v] for v in p.variables]
        except KeyError as exc:
            raise KeyError(f"missing value for variable {exc.args[0]}") from None
    else:
        values = list(assignment)
        if len(values) != len(p.variables):
            raise KeyError("assignment does not cover all variables")
    series = any(hasattr(v, "valuation_bound") for v in values)
    if not series:
        return _eval_scalar(p, values)
    return _eval_series(p, values, cap)


def _eval_scalar(p, values):
    cache: dict = {}
    total = 0
    for e, c in p.terms.items():
        term = c
        for i, k in enumerate(e):
            if k:
                key = (i, k)
                v = cache.get(key)
                if v is None:
                    v = values[i] ** k
                    cache[key] = v
                term = term * v
        total = total + term
    return Fraction(total) if isinstance(total, int) else total


def _eval_series(p, values, cap):
    from .puiseux import PuiseuxSeries

    values = [v if isinstance(v, PuiseuxSeries) else PuiseuxSeries.constant(v) for v in values]
    lows = [v.valuation_bound() for v in values]
    cache: dict = {}

    def power(i, k):
        key = (i, k)
        if key not in cache:
            cache[key] = values[i].pow(k, cap=cap)
        return cache[key]

    total = PuiseuxSeries.zero()
    for e, c in p.terms.items():
        if cap is not None:
            low = sum(k * lows[i] for i, k in enumerate(e) if k)
            if low >= cap:
                total = total + PuiseuxSeries.big_o(cap)
                continue
        term = PuiseuxSeries.constant(c) if not isinstance(c, PuiseuxSeries) else c
        for i, k in enumerate(e):
            if k:
                term = term.mul(power(i, k), cap=cap)
        total = total + term
    return total


def support(p: SparsePolynomial) -> set:
    return set(p.terms)


def support_matrix(p: SparsePolynomial) -> np.ndarray:
    """Exponent vectors as rows of an integer array (exact; used for batch minima)."""
    return np.array(sorted(p.terms), dtype=np.int64).reshape(len(p.terms), len(p.variables))


# --- convex hull vertices of a support ---------------------------------------


def newton_vertices(p) -> list:
    """Vertices of the convex hull of the support of ``p``.

    Accepts a polynomial or an iterable of integer points.  Candidate answers
    come from a floating-point LP; every verdict is then certified exactly
    (a separating functional for a vertex, a convex combination for a
    non-vertex).  Points whose certificate cannot be rationalised are decided
    by an exact simplex.
    """
    if isinstance(p, SparsePolynomial):
        if p.is_zero():
            raise ValueError("zero polynomial has no Newton polytope")
        pts = sorted(p.terms)
    else:
        pts = sorted({tuple(int(a) for a in q) for q in p})
        if not pts:
            raise ValueError("empty point set")
    if len(pts) <= 2:
        return pts
    P = np.array(pts, dtype=np.int64)
    present = set(pts)
    cand = []
    for i, q in enumerate(pts):
        if not _is_midpoint(q, pts, present):
            cand.append(i)
    return [pts[i] for i in cand if _is_vertex(i, P, pts)]


def _is_midpoint(q, pts, present) -> bool:
    for r in pts:
        if r == q:
            continue
        s = tuple(2 * a - b for a, b in zip(q, r))
        if s != q and s in present:
            return True
    return False


def _is_vertex(i, P, pts) -> bool:
    from scipy.optimize import linprog

    p = P[i]
    others = np.delete(P, i, axis=0)
    diffs = others - p
    n = P.shape[1]
    # vertex iff some w has w.(q - p) >= 1 for all q != p
    res = linprog(np.zeros(n), A_ub=-diffs.astype(float), b_ub=-np.ones(len(diffs)),
                  bounds=[(None, None)] * n, method="highs")
    if res.status == 0:
        w = [Fraction(x).limit_denominator(10**6) for x in res.x]
        if all(sum(wk * int(dk) for wk, dk in zip(w, d)) > 0 for d in diffs):
            return True
    elif res.status == 2:
        lam = _interior_combination(p, others)
        if lam is not None:
            return False
    return _exact_is_vertex(p, others)


def _interior_combination(p, others):
    """Exact convex weights expressing p from ``others``, or None."""
    from scipy.optimize import linprog

    m = len(others)
    A = np.vstack([others.T, np.ones(m)]).astype(float)
    b = np.concatenate([p, [1]]).astype(float)
    res = linprog(np.zeros(m), A_eq=A, b_eq=b, bounds=[(0, None)] * m, method="highs")
    if res.status != 0:
        return None
    idx = [k for k in range(m) if res.x[k] > 1e-9]
    cols = [[Fraction(int(v)) for v in others[k]] + [Fraction(1)] for k in idx]
    rhs = [Fraction(int(v)) for v in p] + [Fraction(1)]
    sol = _solve_exact(cols, rhs)
    if sol is None or any(x < 0 for x in sol):
        return None
    return dict(zip(idx, sol))


def _solve_exact(cols, rhs):
    """Solve sum_k x_k cols[k] = rhs exactly (free variables set to 0)."""
    nrow, ncol = len(rhs), len(cols)
    M = [[cols[k][r] for k in range(ncol)] + [rhs[r]] for r in range(nrow)]
    piv_cols = []
    row = 0
    for col in range(ncol):
        pr = next((r for r in range(row, nrow) if M[r][col] != 0), None)
        if pr is None:
            continue
        M[row], M[pr] = M[pr], M[row]
        inv = 1 / M[row][col]
        M[row] = [x * inv for x in M[row]]
        for r in range(nrow):
            if r != row and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[row])]
        piv_cols.append(col)
        row += 1
        if row == nrow:
            break
    if any(M[r][-1] != 0 for r in range(row, nrow)):
        return None
    x = [Fraction(0)] * ncol
    for r, col in enumerate(piv_cols):
        x[col] = M[r][-1]
    return x


def _exact_is_vertex(p, others) -> bool:
    """Phase-one simplex (Bland's rule) on: lambda >= 0, sum lambda_q (q, 1) = (p, 1)."""
    m = len(others)
    rows = [[Fraction(int(others[k][r])) for k in range(m)] for r in range(len(p))]
    rows.append([Fraction(1)] * m)
    rhs = [Fraction(int(v)) for v in p] + [Fraction(1)]
    nr = len(rows)
    for r in range(nr):
        if rhs[r] < 0:
            rows[r] = [-x for x in rows[r]]
            rhs[r] = -rhs[r]
    # tableau with artificials m..m+nr-1
    T = [rows[r] + [Fraction(int(r == s)) for s in range(nr)] + [rhs[r]] for r in range(nr)]
    basis = [m + r for r in range(nr)]
    ncol = m + nr
    while True:
        # reduced costs of the phase-one objective (sum of artificials)
        cost = [Fraction(0)] * ncol
        for j in range(ncol):
            if j >= m:
                cost[j] = Fraction(1)
        red = [cost[j] - sum(cost[basis[r]] * T[r][j] for r in range(nr)) for j in range(ncol)]
        enter = next((j for j in range(ncol) if red[j] < 0), None)
        if enter is None:
            break
        ratios = [(T[r][-1] / T[r][enter], basis[r], r) for r in range(nr) if T[r][enter] > 0]
        if not ratios:
            break
        _, _, leave = min(ratios)
        piv = T[leave][enter]
        T[leave] = [x / piv for x in T[leave]]
        for r in range(nr):
            if r != leave and T[r][enter] != 0:
                f = T[r][enter]
                T[r] = [a - f * b for a, b in zip(T[r], T[leave])]
        basis[leave] = enter
    infeas = sum(T[r][-1] for r in range(nr) if basis[r] >= m)
    return infeas != 0


# --- determinants -------------------------------------------------------------


def det_fraction_free(M: Sequence[Sequence]) -> object:
    """Exact determinant of a square matrix over a commutative ring.

    Uses Laplace expansion along rows with memoisation on the set of columns
    still available, which needs no division and profits from sparse rows.
    """
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("matrix is not square")
    if n == 0:
        return Fraction(1)
    nz = [[(j, M[i][j]) for j in range(n) if not _is_zero(M[i][j])] for i in range(n)]
    memo: dict = {}
    zero = None
    for row in M:
        for x in row:
            zero = x * 0 if isinstance(x, SparsePolynomial) else 0
            break
        break

    def minor(i: int, free: int):
        # determinant of rows i.. restricted to the column set ``free`` (bitmask)
        if i == n:
            return 1
        hit = memo.get(free)
        if hit is not None:
            return hit
        total = zero
        # sign: position of column j among the free columns
        for j, a in nz[i]:
            bit = 1 << j
            if not free & bit:
                continue
            pos = bin(free & (bit - 1)).count("1")
            sub = minor(i + 1, free & ~bit)
            if isinstance(sub, SparsePolynomial) and sub.is_zero():
                continue
            if not isinstance(sub, SparsePolynomial) and sub == 0:
                continue
            term = a * sub if isinstance(a, SparsePolynomial) or not isinstance(sub, SparsePolynomial) else sub * a
            total = total - term if pos & 1 else total + term
        memo[free] = total
        return total

    result = minor(0, (1 << n) - 1)
    return Fraction(result) if isinstance(result, int) else result


def det_rational(M: Sequence[Sequence]) -> Fraction:
    """Determinant of a rational matrix by Gaussian elimination."""
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("matrix is not square")
    A = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for c in range(n):
        pr = next((r for r in range(c, n) if A[r][c] != 0), None)
        if pr is None:
            return Fraction(0)
        if pr != c:
            A[c], A[pr] = A[pr], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            if A[r][c] != 0:
                f = A[r][c] / A[c][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return det


def integer_points_monomials(nvars: int, degree: int) -> list:
    """All exponent tuples of the given total degree, in graded-lex order (largest first)."""
    out = [e for e in itertools.product(range(degree + 1), repeat=nvars) if sum(e) == degree]
    return sorted(out, reverse=True)


def product(iterable: Iterable, start=1):
    return reduce(lambda a, b: a * b, iterable, start)
