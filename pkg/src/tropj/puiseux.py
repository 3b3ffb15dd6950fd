"""Truncated Puiseux series over Q.

A series is a finite list of ``(exponent, coefficient)`` pairs with rational
exponents plus a truncation order: every term with exponent at or above the
truncation order is unknown.  A series with no terms and infinite truncation
is the certified zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import comb, lcm

from .exact import SparsePolynomial, as_rational, rational_str

INF = math.inf


class IndeterminateValuation(ArithmeticError):
    """The stored terms do not determine the leading term (truncation too coarse)."""


class PuiseuxSeries:
    __slots__ = ("terms", "trunc")

    def __init__(self, terms=(), trunc=INF):
        trunc = INF if trunc is None or trunc == INF else as_rational(trunc)
        acc: dict = {}
        for e, c in terms:
            e, c = as_rational(e), as_rational(c)
            if e >= trunc:
                continue
            acc[e] = acc.get(e, 0) + c
        self.terms = tuple((e, c) for e, c in sorted(acc.items()) if c != 0)
        self.trunc = trunc

    @classmethod
    def _raw(cls, terms, trunc):
        s = object.__new__(cls)
        s.terms = terms
        s.trunc = trunc
        return s

    @classmethod
    def zero(cls):
        return cls._raw((), INF)

    @classmethod
    def constant(cls, c, trunc=INF):
        return cls([(0, c)], trunc)

    @classmethod
    def monomial(cls, c, exponent, trunc=INF):
        return cls([(exponent, c)], trunc)

    @classmethod
    def big_o(cls, order):
        return cls._raw((), as_rational(order))

    # --- valuation ---------------------------------------------------------

    def is_exact_zero(self) -> bool:
        return not self.terms and self.trunc == INF

    def valuation_bound(self):
        """A certain lower bound for the valuation (exact when a term is stored)."""
        return self.terms[0][0] if self.terms else self.trunc

    def val(self):
        if self.terms:
            return self.terms[0][0]
        if self.trunc == INF:
            return INF
        raise IndeterminateValuation(f"no term below t^{rational_str(self.trunc)} is known")

    def lc(self) -> Fraction:
        if self.terms:
            return self.terms[0][1]
        if self.trunc == INF:
            raise ValueError("the zero series has no leading coefficient")
        raise IndeterminateValuation(f"no term below t^{rational_str(self.trunc)} is known")

    def ramification(self) -> int:
        """Common denominator of the stored exponents."""
        return reduce(lcm, (e.denominator for e, _ in self.terms), 1)

    def leading_term(self) -> PuiseuxSeries:
        return PuiseuxSeries._raw(self.terms[:1], INF) if self.terms else self

    # --- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, PuiseuxSeries):
            return other
        return PuiseuxSeries.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        trunc = min(self.trunc, other.trunc)
        acc = {}
        for e, c in self.terms:
            if e < trunc:
                acc[e] = c
        for e, c in other.terms:
            if e < trunc:
                s = acc.get(e, 0) + c
                acc[e] = s
        terms = tuple((e, c) for e, c in sorted(acc.items()) if c != 0)
        return PuiseuxSeries._raw(terms, trunc)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries._raw(tuple((e, -c) for e, c in self.terms), self.trunc)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def mul(self, other, cap=None) -> PuiseuxSeries:
        """Product; terms at or above ``cap`` are dropped and recorded as unknown."""
        other = self._coerce(other)
        a, b = self, other
        trunc = min(a.valuation_bound() + b.trunc, b.valuation_bound() + a.trunc)
        if cap is not None and cap < trunc:
            trunc = cap
        acc: dict = {}
        for ea, ca in a.terms:
            if ea + b.valuation_bound() >= trunc:
                break
            for eb, cb in b.terms:
                e = ea + eb
                if e >= trunc:
                    break
                acc[e] = acc.get(e, 0) + ca * cb
        terms = tuple((e, c) for e, c in sorted(acc.items()) if c != 0)
        return PuiseuxSeries._raw(terms, trunc)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return PuiseuxSeries.zero()
            return PuiseuxSeries._raw(tuple((e, c * other) for e, c in self.terms), self.trunc)
        return self.mul(other)

    __rmul__ = __mul__

    def pow(self, n: int, cap=None) -> PuiseuxSeries:
        if n < 0:
            raise ValueError("negative power")
        result = PuiseuxSeries.constant(1)
        base = self
        while n:
            if n & 1:
                result = result.mul(base, cap)
            n >>= 1
            if n:
                base = base.mul(base, cap)
        return result

    def __pow__(self, n: int):
        return self.pow(n)

    def truncate(self, order) -> PuiseuxSeries:
        order = as_rational(order)
        if order >= self.trunc:
            return self
        return PuiseuxSeries._raw(tuple(t for t in self.terms if t[0] < order), order)

    def __eq__(self, other):
        if isinstance(other, PuiseuxSeries):
            return self.terms == other.terms and self.trunc == other.trunc
        if isinstance(other, (int, Fraction)):
            return self == PuiseuxSeries.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.terms, self.trunc))

    def __repr__(self):
        return f"PuiseuxSeries({self})"

    def __str__(self):
        parts = []
        for e, c in self.terms:
            cs = rational_str(c)
            if e == 0:
                parts.append(cs)
            else:
                parts.append(f"{cs}*t^{rational_str(e)}" if e != 1 else f"{cs}*t")
        if self.trunc != INF:
            parts.append(f"O(t^{rational_str(self.trunc)})")
        return " + ".join(parts) if parts else "0"

    # --- literal syntax ----------------------------------------------------

    def to_json(self):
        out = {"terms": [{"exp": rational_str(e), "coef": rational_str(c)} for e, c in self.terms]}
        if self.trunc != INF:
            out["trunc"] = rational_str(self.trunc)
        return out

    @classmethod
    def from_json(cls, obj) -> PuiseuxSeries:
        """Parse ``[{"exp": .., "coef": ..}, ..]`` or ``{"terms": [..], "trunc": ..}``.

        Without ``"trunc"`` the listed terms are the whole series.
        """
        if isinstance(obj, (int, str)):
            return cls.constant(as_rational(obj))
        if isinstance(obj, list):
            terms, trunc = obj, None
        else:
            terms, trunc = obj.get("terms", []), obj.get("trunc")
        return cls([(t["exp"], t["coef"]) for t in terms], trunc)


def t_power(exponent, c=1) -> PuiseuxSeries:
    return PuiseuxSeries.monomial(c, exponent)


@dataclass(frozen=True)
class ValuedScalar:
    valuation: object
    leading_coefficient: Fraction | None = None

    @classmethod
    def of(cls, s: PuiseuxSeries) -> ValuedScalar:
        v = s.val()
        return cls(v, None if v == INF else s.lc())


def val(s):
    return PuiseuxSeries._coerce(s).val()


def lc(s):
    return PuiseuxSeries._coerce(s).lc()


def _coef_val(c):
    if isinstance(c, PuiseuxSeries):
        return c.val()
    return INF if c == 0 else Fraction(0)


def _coef_lc(c):
    return c.lc() if isinstance(c, PuiseuxSeries) else Fraction(c)


def weight(h: SparsePolynomial, v) -> Fraction:
    """min over terms of val(h_w) + v.w."""
    if h.is_zero():
        raise ValueError("weight of the zero polynomial")
    v = _weights(h, v)
    return min(_coef_val(c) + sum(vi * k for vi, k in zip(v, e)) for e, c in h.terms.items())


def tini(h: SparsePolynomial, v) -> SparsePolynomial:
    """t-initial form: leading coefficients of the weight-minimising terms."""
    w = weight(h, v)
    v = _weights(h, v)
    out = {}
    for e, c in h.terms.items():
        if _coef_val(c) + sum(vi * k for vi, k in zip(v, e)) == w:
            out[e] = _coef_lc(c)
    return SparsePolynomial(h.variables, out, h.laurent)


def _weights(h, v):
    if isinstance(v, dict):
        return [as_rational(v[name]) for name in h.variables]
    v = [as_rational(x) for x in v]
    if len(v) != len(h.variables):
        raise ValueError("weight vector length does not match the variables")
    return v


def shift_substitute(f: SparsePolynomial, s, var: str = "x") -> SparsePolynomial:
    """f(x + s, y): binomial expansion of every term in ``var``."""
    if f.laurent:
        raise ValueError("shift_substitute needs a polynomial, not a Laurent polynomial")
    s = PuiseuxSeries._coerce(s)
    k_idx = f.variables.index(var)
    spow: dict = {0: PuiseuxSeries.constant(1)}

    def power(n):
        if n not in spow:
            spow[n] = power(n - 1).mul(s)
        return spow[n]

    acc: dict = {}
    for e, c in f.terms.items():
        c = PuiseuxSeries._coerce(c)
        d = e[k_idx]
        for k in range(d + 1):
            ne = e[:k_idx] + (k,) + e[k_idx + 1:]
            term = c.mul(power(d - k)) * comb(d, k)
            acc[ne] = acc[ne] + term if ne in acc else term
    return SparsePolynomial(f.variables, acc)
