import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import EXAMPLE
from tropj import jinv
from tropj.exact import det_rational, newton_vertices, poly_eval
from tropj.puiseux import INF, PuiseuxSeries
from tropj.subdivision import (A3_POINTS, CENTER, HeightVector, random_heights, regular_subdivision,
                               sample_U)
from tropj.tropcurve import cycle_report

U_EX = HeightVector.from_array(EXAMPLE)


def rand_q(rng, span=5):
    return Fraction(rng.randint(-span, span), rng.randint(1, 3))


def rand_cubic(rng):
    return {p: rand_q(rng) for p in A3_POINTS}


def rand_gl3(rng):
    while True:
        g = [[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)]
        if det_rational(g) != 0:
            return g


def values(coeffs):
    return {jinv.VARIABLES[k]: Fraction(coeffs.get(p, 0)) for k, p in enumerate(A3_POINTS)}


def weierstrass(a1, a2, a3, a4, a6):
    # y^2 + a1 xy + a3 y - x^3 - a2 x^2 - a4 x - a6
    return {(0, 2): 1, (1, 1): a1, (0, 1): a3, (3, 0): -1, (2, 0): -a2, (1, 0): -a4, (0, 0): -a6}


def tate_j(a1, a2, a3, a4, a6):
    b2, b4, b6 = a1 * a1 + 4 * a2, 2 * a4 + a1 * a3, a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    disc = -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return c4 ** 3, disc


# --- the polynomials ---------------------------------------------------------------------


def test_certificates(inv):
    assert inv.certify() == {"S": True, "A": True, "Delta": True, "A=S^3": True}
    assert (len(inv.S), len(inv.A), len(inv.Delta)) == (25, 1607, 2040)


@pytest.mark.parametrize("name,deg", [("S", 4), ("A", 12), ("Delta", 12)])
def test_homogeneous_and_isobaric(inv, name, deg):
    for e in getattr(inv, name).terms:
        assert sum(e) == deg
        assert sum(k * p[0] for k, p in zip(e, A3_POINTS)) == deg
        assert sum(k * p[1] for k, p in zip(e, A3_POINTS)) == deg


def test_center_power_in_A(inv):
    assert tuple(12 if p == CENTER else 0 for p in A3_POINTS) in inv.A.terms


def test_fermat(inv):
    f = {(3, 0): 1, (0, 3): 1, (0, 0): 1}
    assert poly_eval(inv.S, values(f)) == 0
    assert poly_eval(inv.Delta, values(f)) == -19683
    assert jinv.j_rational(f, inv) == 0


def test_semi_invariance(inv):
    rng = random.Random(3)
    for _ in range(15):
        f, g = rand_cubic(rng), rand_gl3(rng)
        d = det_rational(g)
        h = jinv.linear_change(f, g)
        assert poly_eval(inv.S, values(h)) == d ** 4 * poly_eval(inv.S, values(f))
        assert poly_eval(inv.Delta, values(h)) == d ** 12 * poly_eval(inv.Delta, values(f))
        assert poly_eval(inv.A, values(h)) == d ** 12 * poly_eval(inv.A, values(f))


def test_singular_cubics_have_zero_discriminant(inv):
    rng = random.Random(5)
    for _ in range(100):
        f = rand_cubic(rng)
        f[(0, 0)] = f[(1, 0)] = f[(0, 1)] = 0  # singular at the origin
        h = jinv.linear_change(f, rand_gl3(rng))
        assert poly_eval(inv.Delta, values(h)) == 0
        with pytest.raises(jinv.SingularCurve):
            jinv.j_rational(h, inv)


def test_weierstrass_oracle(inv):
    rng = random.Random(11)
    checked = 0
    while checked < 100:
        a = [rand_q(rng) for _ in range(5)]
        num, disc = tate_j(*a)
        if disc == 0:
            continue
        assert jinv.j_rational(weierstrass(*a), inv) == num / disc
        assert poly_eval(inv.A, values(weierstrass(*a))) == num
        assert poly_eval(inv.Delta, values(weierstrass(*a))) == disc
        checked += 1


def test_newton_polytope_vertices(inv):
    assert len(newton_vertices(inv.S)) == 19


# --- generic valuations ------------------------------------------------------------------


def test_generic_valuations_of_example(inv):
    assert jinv.generic_valuation(inv.table("A"), U_EX) == 0
    assert jinv.generic_valuation(inv.table("Delta"), U_EX) == 5
    assert jinv.val_j_generic(U_EX, inv) == -5


def test_generic_valuation_small():
    from tropj.exact import SparsePolynomial
    p = SparsePolynomial(("a", "b"), {(2, 0): 1, (1, 1): -3, (0, 3): 2})
    assert jinv.generic_valuation(p, {"a": 1, "b": Fraction(1, 3)}) == 1
    assert sorted(jinv.generic_argmin(p, {"a": 1, "b": Fraction(1, 3)})) == [(0, 3)]
    assert jinv.generic_valuation(p, {"a": INF, "b": 1}) == 3


@given(st.integers(0, 10**6), st.tuples(*[st.fractions(-4, 4, max_denominator=3)] * 3))
@settings(max_examples=40, deadline=None)
def test_val_j_affine_invariant(inv, seed, aff):
    u = random_heights(random.Random(seed))
    assert jinv.val_j_generic(u.add_affine(*aff), inv) == jinv.val_j_generic(u, inv)


# --- linear forms on cones -----------------------------------------------------------------


def triangulation_from(names):
    return regular_subdivision(HeightVector.from_names(names))


def test_eta_examples_from_drawn_triangulation():
    h = {p: 10 for p in A3_POINTS}
    h.update({(0, 0): 0, (0, 3): 0, (1, 1): -1, (2, 1): 0, (2, 0): 0, (3, 0): 2})
    eta = jinv.eta_vector(regular_subdivision(h)).coefficients
    assert eta[(0, 3)] == 1 and eta[(2, 1)] == 1


def test_case_values():
    T = regular_subdivision(U_EX)
    cmp = jinv.compare_eta_c(T)
    assert cmp.passed and cmp.eta[CENTER] == 7 and cmp.c[CENTER] == -5
    star = {p: 10 for p in A3_POINTS}
    star.update({CENTER: 0, (0, 0): 1, (2, 1): 1, (1, 2): 1})
    cmp = jinv.compare_eta_c(regular_subdivision(star))
    assert cmp.passed and cmp.eta[CENTER] == 3 and cmp.c[CENTER] == -9
    hexagon = triangulation_from({"u00": 5, "u01": -2, "u02": -6, "u03": 3, "u10": 2, "u11": -4,
                                  "u12": -4, "u20": 1, "u21": -1, "u30": 5})
    cmp = jinv.compare_eta_c(hexagon)
    assert cmp.passed and cmp.eta[CENTER] == 6 and cmp.c[CENTER] == -6


def test_linear_forms_on_sampled_cones(inv):
    rng = random.Random(21)
    n = 0
    for u in sample_U(rng, 300):
        T = regular_subdivision(u)
        if not T.is_triangulation():
            continue
        c = jinv.c_vector(T)
        assert sum(c.coefficients.values()) == 0
        assert all(sum(k * p[i] for p, k in c.coefficients.items()) == 0 for i in range(2))
        assert c(u) == cycle_report(u).length
        eta = jinv.eta_vector(T)
        assert jinv.compare_eta_c(T).passed
        assert inv.table("Delta").argmin(u) == [eta.as_exponent()]
        assert eta(u) == jinv.generic_valuation(inv.table("Delta"), u)
        n += 1
    assert n >= 200


def test_coarsening_property(inv):
    rng = random.Random(8)
    pairs = 0
    while pairs < 50:
        u = random_heights(rng)
        T = regular_subdivision(u)
        if not T.is_triangulation() or len(T.marked_points()) < 10:
            continue
        v = HeightVector({p: u[p] + Fraction(rng.randint(-99, 99), 10**4) for p in A3_POINTS})
        if regular_subdivision(v) != T:
            continue
        a, b = inv.table("Delta").argmin(u), inv.table("Delta").argmin(v)
        assert a == b and len(a) == 1
        pairs += 1


def test_A_cone(inv):
    for u in sample_U(random.Random(2), 50):
        assert jinv.check_A_cone(u, inv)
        assert jinv.generic_valuation(inv.table("A"), u) == 12 * u[CENTER]
    with pytest.raises(ValueError):
        jinv.check_A_cone({p: 0 for p in A3_POINTS}, inv)


# --- concrete cubics over the series field ------------------------------------------------


def test_worked_example_lifts(inv):
    for seed in range(10):
        assert jinv.evaluate_j(jinv.example_cubic(seed), inv).valuation == -5
    assert jinv.evaluate_j(jinv.example_cubic(3, extra_terms=2), inv).valuation == -5


def test_evaluate_j_under_linear_change(inv):
    f = jinv.cubic_coefficients(jinv.example_cubic(1))
    g = [[1, 2, 0], [0, 1, -1], [1, 0, 3]]
    a, b = jinv.evaluate_j(f, inv), jinv.evaluate_j(jinv.linear_change(f, g), inv)
    assert a == b


def test_rational_cubic_agrees_with_series_path(inv):
    rng = random.Random(4)
    for _ in range(10):
        f = rand_cubic(rng)
        try:
            j = jinv.j_rational(f, inv)
        except jinv.SingularCurve:
            continue
        r = jinv.evaluate_j(f, inv)
        if j == 0:
            assert r.valuation == INF
        else:
            assert r.valuation == 0 and r.leading_coefficient == j


def test_trivial_weierstrass(inv):
    t1 = PuiseuxSeries([(0, 1), (1, 1)])
    f = {(0, 2): 1, (1, 1): t1, (3, 0): -1, (2, 0): -1, (0, 0): -1}
    assert jinv.evaluate_j(f, inv).valuation == 0


def test_errors(inv):
    coarse = PuiseuxSeries.big_o(1)
    f = {(0, 2): 1, (1, 1): coarse, (3, 0): -1, (2, 0): -1, (0, 0): PuiseuxSeries.big_o(1)}
    with pytest.raises(jinv.TruncationInsufficient):
        jinv.evaluate_j(f, inv)
    node = {(0, 2): 1, (3, 0): -1, (2, 0): -1}  # y^2 = x^3 + x^2
    with pytest.raises(jinv.SingularCurve):
        jinv.evaluate_j(node, inv)


def test_cache_round_trip_and_tamper(inv, tmp_path):
    body = inv.to_json()
    again = jinv.CubicInvariants.from_json(json.loads(json.dumps(body)))
    assert (again.S, again.A, again.Delta) == (inv.S, inv.A, inv.Delta)
    bad = json.loads(json.dumps(body))
    bad["S"][0][1] = "12345"
    with pytest.raises(ValueError):
        jinv.CubicInvariants.from_json(bad)
    path = tmp_path / "inv.json"
    path.write_text(json.dumps(body))
    loaded = jinv.invariants(path=path)
    assert loaded.Delta == inv.Delta
