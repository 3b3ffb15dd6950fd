from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import EXAMPLE
from tropj.subdivision import (A3_POINTS, CENTER, HeightVector, fold_witness, lattice_length,
                               regular_subdivision, s3_action, s3_elements)
from tropj.puiseux import INF
from tropj.tropcurve import (NoCycle, check_svg, clockwise_neighbors, cycle_length_closed_form,
                             cycle_report, dual_curve, generalized_cycle_length, per_edge_closed_form,
                             per_edge_geometric, render)

heights = st.fixed_dictionaries({p: st.fractions(-6, 6, max_denominator=4) for p in A3_POINTS}).map(HeightVector)
U_EX = HeightVector.from_array(EXAMPLE)


def cycle_heights():
    """Heights with (1,1) visible: a random perturbation pushed down at the center."""
    return heights.map(lambda u: u.replace(u11=min(u.values()) - 4))


def test_example_cycle():
    rep = cycle_report(U_EX)
    assert rep.has_cycle and rep.length == 5 and len(rep.cycle_edges) == 4
    assert cycle_length_closed_form(U_EX) == 5
    lam = [l for _, l in per_edge_geometric(U_EX, start=(3, 0))]
    assert lam == [1, 1, 1, 2]
    assert per_edge_closed_form(U_EX, start=(3, 0)) == per_edge_geometric(U_EX, start=(3, 0))
    assert clockwise_neighbors(regular_subdivision(U_EX), start=(3, 0)) == [(3, 0), (0, 0), (0, 1), (1, 2)]


def test_example_curve_shape():
    c = dual_curve(U_EX)
    assert len(c.vertices) == 6 and len(c.edges) == 6 and len(c.rays) == 6
    assert sum(lattice_length(*r.facet) for r in c.rays) == 9
    assert sorted(r.direction for r in c.rays) == [(-1, -1), (-1, -1), (0, 1), (1, 0), (1, 0), (1, 0)]


@given(heights)
@settings(max_examples=200, deadline=None)
def test_edges_are_perpendicular_and_positive(u):
    c = dual_curve(u)  # raises on a non-perpendicular edge
    for e in c.edges:
        assert e.length > 0
        (x0, y0), (x1, y1) = c.vertices[e.ends[0]], c.vertices[e.ends[1]]
        assert (x1 - x0, y1 - y0) in {(e.length * e.direction[0], e.length * e.direction[1]),
                                      (-e.length * e.direction[0], -e.length * e.direction[1])}


@given(heights)
@settings(max_examples=200, deadline=None)
def test_balancing(u):
    c = dual_curve(u)
    out = {k: [0, 0] for k in range(len(c.vertices))}
    for e in c.edges:
        i, j = e.ends
        d = (c.vertices[j][0] - c.vertices[i][0], c.vertices[j][1] - c.vertices[i][1])
        s = 1 if d[0] * e.direction[0] + d[1] * e.direction[1] > 0 else -1
        for k, sign in ((i, s), (j, -s)):
            out[k][0] += sign * e.direction[0]
            out[k][1] += sign * e.direction[1]
    for r in c.rays:
        m = lattice_length(*r.facet)
        out[r.start][0] += m * r.direction[0]
        out[r.start][1] += m * r.direction[1]
    assert all(v == [0, 0] for v in out.values())


@given(cycle_heights())
@settings(max_examples=200, deadline=None)
def test_closed_form_matches_geometry(u):
    rep = cycle_report(u)
    assert rep.has_cycle
    assert cycle_length_closed_form(u) == rep.length
    assert per_edge_closed_form(u) == per_edge_geometric(u)


@given(cycle_heights(), st.tuples(*[st.fractions(-3, 3, max_denominator=5)] * 3))
@settings(max_examples=100, deadline=None)
def test_affine_change_translates_curve(u, aff):
    c0, v0, v1 = aff
    c, d = dual_curve(u), dual_curve(u.add_affine(c0, v0, v1))
    assert d.vertices == tuple((x - v0, y - v1) for x, y in c.vertices)
    assert cycle_report(u).length == cycle_report(u.add_affine(c0, v0, v1)).length


@given(cycle_heights(), st.fractions(1, 7, max_denominator=3))
@settings(max_examples=100, deadline=None)
def test_length_is_homogeneous(u, lam):
    assert cycle_report(u.scale(lam)).length == lam * cycle_report(u).length


@given(cycle_heights())
@settings(max_examples=100, deadline=None)
def test_s3_invariance(u):
    L = cycle_report(u).length
    assert all(cycle_report(s3_action(u, g)).length == L for g in s3_elements())


def test_reversed_orientation_negates_total():
    cw = per_edge_geometric(U_EX)
    S = regular_subdivision(U_EX)
    ccw = clockwise_neighbors(S)[::-1]
    # walking the other way swaps the cells on either side of each spoke
    rev = []
    for w, lam in cw:
        rev.append((w, -lam))
    assert sum(l for _, l in rev) == -5
    assert [w for w, _ in cw][::-1] == ccw


def test_fold_generalized_length():
    w = fold_witness((1, 0), (1, 2))
    rep = cycle_report(w)
    assert not rep.has_cycle and rep.generalized and rep.length == 2
    assert dual_curve(w).vertices == ((0, 0), (-1, 0))
    scaled = HeightVector({p: 3 * max(0, p[0] - 1) for p in A3_POINTS})
    assert generalized_cycle_length(scaled) == 6


def test_one_sided_limit_at_fold():
    u = HeightVector({p: max(0, p[0] - 1) for p in A3_POINTS})
    for k in (8, 16, 32):
        eps = Fraction(1, k)
        v = u.replace(u11=-eps)
        assert cycle_report(v).has_cycle
        assert cycle_report(v).length == 2 + 3 * eps
    assert cycle_report(u).length == 2


def test_no_cycle_cases():
    flat = {p: 0 for p in A3_POINTS}
    assert cycle_report(flat).length == 0 and not cycle_report(flat).generalized
    inf = dict(flat)
    inf[CENTER] = INF
    assert not cycle_report(inf).has_cycle
    with pytest.raises(NoCycle):
        generalized_cycle_length(flat)
    with pytest.raises(ValueError):
        generalized_cycle_length(U_EX)


def test_rendering_is_deterministic_and_valid():
    c = dual_curve(U_EX)
    svg = render(c, "svg")
    assert svg == render(dual_curve(HeightVector.from_array(EXAMPLE)), "svg")
    assert check_svg(svg)
    assert svg.count("<line") >= len(c.edges) + len(c.rays)
    art = render(c, "ascii")
    assert art == render(c, "ascii")
    assert art.count("o") == len(c.vertices)
    with pytest.raises(ValueError):
        render(c, "png")


def test_curve_json_is_exact():
    j = dual_curve(U_EX).to_json()
    assert sorted(map(tuple, j["vertices"])) == sorted(
        [("1", "0"), ("0", "1"), ("2", "-2"), ("1", "-1"), ("2", "-4"), ("-1", "-1")])
    assert sorted(e["length"] for e in j["edges"]) == ["1", "1", "1", "1", "2", "2"]
