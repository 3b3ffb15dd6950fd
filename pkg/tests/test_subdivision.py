import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import EXAMPLE
from tropj.puiseux import INF
from tropj.subdivision import (A3, A3_POINTS, CENTER, HeightVector, NonRegularInput, NotARay, RayClass,
                               classify_ray, enumerate_rays, fold_witness, is_interior_vertex_visible,
                               is_refinement, lift_witness, membership_U, pinwheel_witness,
                               random_heights, regular_subdivision, s3_action, s3_elements, u_inequalities)

heights = st.fixed_dictionaries({p: st.fractions(-6, 6, max_denominator=4) for p in A3_POINTS}).map(HeightVector)


def cells_of(S):
    return sorted(sorted(c.marked) for c in S.cells)


def test_worked_example_cells():
    S = regular_subdivision(HeightVector.from_array(EXAMPLE))
    assert cells_of(S) == [
        [(0, 0), (0, 1), (1, 1)], [(0, 0), (1, 1), (3, 0)], [(0, 1), (0, 2), (1, 2)],
        [(0, 1), (1, 1), (1, 2)], [(0, 2), (0, 3), (1, 2)], [(1, 1), (1, 2), (3, 0)]]
    assert S.is_triangulation()
    assert is_interior_vertex_visible(S)


def test_flat_heights_give_one_cell():
    S = regular_subdivision({p: 0 for p in A3_POINTS})
    assert len(S.cells) == 1 and S.cells[0].marked == frozenset(A3_POINTS)
    assert S.cells[0].vertices == ((0, 0), (3, 0), (0, 3))


def test_infinite_heights():
    u = {p: 0 for p in A3_POINTS}
    u[(1, 1)] = INF
    S = regular_subdivision(u)
    assert CENTER not in S.marked_points()
    u[(3, 0)] = INF
    with pytest.raises(NonRegularInput):
        regular_subdivision(u)


def test_array_order():
    u = HeightVector.from_array(EXAMPLE)
    assert u[(1, 1)] == 0 and u[(1, 0)] == 100 and u[(0, 3)] == 7
    assert u.to_array() == EXAMPLE
    assert HeightVector.from_names(u.to_names()) == u


@given(heights)
@settings(max_examples=300, deadline=None)
def test_cells_tile_the_triangle(u):
    S = regular_subdivision(u)
    assert sum(c.area2 for c in S.cells) == 9
    assert all(c.area2 > 0 for c in S.cells)
    for c in S.cells:
        assert set(c.vertices) <= c.marked
        for p in c.marked:
            a, gx, gy = c.plane
            assert u[p] == a + gx * p[0] + gy * p[1]


@given(heights)
@settings(max_examples=300, deadline=None)
def test_membership_matches_visibility(u):
    assert membership_U(u) == regular_subdivision(u).is_cell_vertex(CENTER)


def test_membership_matches_visibility_seeded():
    rng = random.Random(7)
    for _ in range(2000):
        u = random_heights(rng, span=4, max_den=3)
        assert membership_U(u) == regular_subdivision(u).is_cell_vertex(CENTER)


def test_inequalities_are_convex_combinations():
    for lhs, k in u_inequalities():
        assert sum(lhs.values()) == k
        assert all(sum(w * p[i] for p, w in lhs.items()) == k for i in range(2))
    assert len(u_inequalities()) == 24


@given(heights, st.fractions(1, 5, max_denominator=3), st.tuples(*[st.fractions(-3, 3, max_denominator=3)] * 3))
@settings(max_examples=100, deadline=None)
def test_scaling_and_affine_invariance(u, lam, aff):
    S = regular_subdivision(u)
    assert regular_subdivision(u.scale(lam)) == S
    assert regular_subdivision(u.add_affine(*aff)) == S


@given(heights)
@settings(max_examples=100, deadline=None)
def test_s3_equivariance(u):
    S = regular_subdivision(u)
    for g in s3_elements():
        assert regular_subdivision(s3_action(u, g)) == s3_action(S, g)


@given(heights)
@settings(max_examples=100, deadline=None)
def test_refinement(u):
    S = regular_subdivision(u)
    coarsest = regular_subdivision({p: 0 for p in A3_POINTS})
    assert is_refinement(S, S)
    assert is_refinement(S, coarsest)
    # a tiny generic perturbation refines
    rng = random.Random(hash(u) & 0xFFFF)
    v = HeightVector({p: u[p] + Fraction(rng.randint(0, 10**6), 10**9) for p in A3_POINTS})
    assert is_refinement(regular_subdivision(v), S)


def test_refinement_is_not_symmetric():
    fine = regular_subdivision(HeightVector.from_array(EXAMPLE))
    coarse = regular_subdivision(fold_witness((1, 0), (1, 2)))
    assert not is_refinement(coarse, fine)


def test_ray_catalogue():
    rays = enumerate_rays()
    tags = [r.tag for r, _ in rays]
    assert tags.count("lift") == 2 and tags.count("fold") == 4 and tags.count("pinwheel") == 5
    orbits = {r for r, _ in rays}

    def orbit(r):
        return {s3_action(r, g) for g in s3_elements()}

    for a, b in [((3, 0), (0, 1)), ((2, 0), (0, 1)), ((1, 0), (0, 1)), ((2, 0), (0, 2))]:
        fold = RayClass("fold", tuple(sorted((a, b))))
        assert orbit(fold) & orbits
        assert classify_ray(regular_subdivision(fold_witness(a, b))) == fold
    assert orbit(RayClass("lift", ((0, 1),))) & orbits
    for ray, w in rays:
        assert classify_ray(regular_subdivision(w)) == ray


def test_two_drawn_pinwheels_are_symmetric():
    p = classify_ray(regular_subdivision(pinwheel_witness([(3, 0), (1, 2), (0, 0)])))
    q = classify_ray(regular_subdivision(pinwheel_witness([(3, 0), (0, 2), (0, 0)])))
    assert p.tag == q.tag == "pinwheel"
    assert q in {s3_action(p, g) for g in s3_elements()}


def test_non_rays():
    with pytest.raises(NotARay):
        classify_ray(regular_subdivision({p: 0 for p in A3_POINTS}))
    with pytest.raises(NotARay):
        classify_ray(regular_subdivision(HeightVector.from_array(EXAMPLE)))
    with pytest.raises(NotARay):
        classify_ray(regular_subdivision(lift_witness((1, 1)) + lift_witness((0, 1))))


def test_visibility_needs_interior_point():
    S = regular_subdivision({p: 0 for p in A3_POINTS})
    with pytest.raises(ValueError):
        is_interior_vertex_visible(S, (0, 0))
    assert A3.interior_points() == [CENTER]
