"""Regular marked subdivisions of planar lattice point configurations.

Heights are attached to lattice points; the subdivision is the projection of
the lower faces of the lifted configuration.  A point with height ``+inf`` is
dropped before lifting.  Everything here is specialised to the plane, and
most helpers that need the cubic configuration take it as a default.
"""

from __future__ import annotations

import functools
import itertools
import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key

from .exact import as_rational, rational_str

INF = math.inf

Point = tuple  # (i, j) integer pair


class NonRegularInput(ValueError):
    """Heights do not describe a valid lifting (e.g. a hull vertex at +inf)."""


def cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> tuple:
    """Extreme points in counterclockwise order (monotone chain, collinear points dropped)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return tuple(pts)
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return tuple(lower[:-1] + upper[:-1])


def polygon_area2(poly) -> int:
    """Twice the signed area; equals the normalized lattice volume for a ccw polygon."""
    n = len(poly)
    return sum(poly[k][0] * poly[(k + 1) % n][1] - poly[(k + 1) % n][0] * poly[k][1] for k in range(n))


def lattice_length(p, q) -> int:
    return math.gcd(abs(q[0] - p[0]), abs(q[1] - p[1]))


def in_polygon(p, poly) -> bool:
    """Closed containment in a convex ccw polygon."""
    n = len(poly)
    return all(cross(poly[k], poly[(k + 1) % n], p) >= 0 for k in range(n))


def strictly_inside(p, poly) -> bool:
    n = len(poly)
    return all(cross(poly[k], poly[(k + 1) % n], p) > 0 for k in range(n))


def on_segment(p, a, b) -> bool:
    return cross(a, b, p) == 0 and min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) \
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


@dataclass(frozen=True)
class PointConfig:
    points: tuple

    def __post_init__(self):
        pts = tuple(tuple(int(c) for c in p) for p in self.points)
        if len(set(pts)) != len(pts):
            raise ValueError("duplicate points in configuration")
        object.__setattr__(self, "points", pts)

    @property
    def hull(self) -> tuple:
        return convex_hull(self.points)

    def hull_vertices(self) -> set:
        return set(self.hull)

    def is_boundary(self, p) -> bool:
        h = self.hull
        return any(on_segment(p, h[k], h[(k + 1) % len(h)]) for k in range(len(h)))

    def interior_points(self) -> list:
        return [p for p in self.points if not self.is_boundary(p)]

    def boundary_points(self) -> list:
        return [p for p in self.points if self.is_boundary(p)]


A3_POINTS = tuple((i, j) for j in range(4) for i in range(4 - j))
A3 = PointConfig(A3_POINTS)
CENTER = (1, 1)
# coordinate order used by the flat 10-entry height arrays
ARRAY_ORDER = ((1, 1), (3, 0), (2, 0), (1, 0), (0, 0), (2, 1), (0, 1), (1, 2), (0, 2), (0, 3))


def point_name(p, prefix="u") -> str:
    return f"{prefix}{p[0]}{p[1]}"


class HeightVector(Mapping):
    """Immutable map lattice point -> rational or +inf."""

    __slots__ = ("_h",)

    def __init__(self, heights: Mapping):
        h = {}
        for p, v in heights.items():
            p = (int(p[0]), int(p[1]))
            h[p] = INF if v == INF or v == "inf" else as_rational(v)
        self._h = h

    def __getitem__(self, p):
        return self._h[tuple(p)]

    def __iter__(self):
        return iter(self._h)

    def __len__(self):
        return len(self._h)

    def __repr__(self):
        return "HeightVector({" + ", ".join(f"{p}: {_fmt(v)}" for p, v in sorted(self._h.items())) + "})"

    def __eq__(self, other):
        if isinstance(other, Mapping):
            return dict(self) == {tuple(k): v for k, v in other.items()}
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._h.items()))

    @classmethod
    def from_array(cls, values, order=ARRAY_ORDER) -> HeightVector:
        values = list(values)
        if len(values) != len(order):
            raise ValueError(f"expected {len(order)} heights, got {len(values)}")
        return cls(dict(zip(order, values)))

    @classmethod
    def from_names(cls, named: Mapping) -> HeightVector:
        out = {}
        for k, v in named.items():
            if len(k) != 3 or not k[1:].isdigit():
                raise ValueError(f"bad height key {k!r}")
            out[(int(k[1]), int(k[2]))] = v
        return cls(out)

    def to_array(self, order=ARRAY_ORDER) -> list:
        return [self._h[p] for p in order]

    def to_names(self) -> dict:
        return {point_name(p): _fmt(v) for p, v in sorted(self._h.items())}

    def finite(self) -> dict:
        return {p: v for p, v in self._h.items() if v != INF}

    def __add__(self, other):
        return HeightVector({p: self._h[p] + other[p] for p in self._h})

    def scale(self, c) -> HeightVector:
        c = as_rational(c)
        if c <= 0:
            raise ValueError("only positive scalings preserve the subdivision")
        return HeightVector({p: v * c if v != INF else INF for p, v in self._h.items()})

    def add_affine(self, c0, c1, c2) -> HeightVector:
        c0, c1, c2 = map(as_rational, (c0, c1, c2))
        return HeightVector({p: v + c0 + c1 * p[0] + c2 * p[1] if v != INF else INF
                             for p, v in self._h.items()})

    def replace(self, **named) -> HeightVector:
        h = dict(self._h)
        for k, v in named.items():
            h[(int(k[1]), int(k[2]))] = v
        return HeightVector(h)


def _fmt(v):
    return "inf" if v == INF else rational_str(v)


@dataclass(frozen=True)
class MarkedCell:
    """A cell of a marked subdivision: ccw polygon, its marked points, and the
    affine function ``c0 + g . w`` agreeing with the heights on the marked set."""

    vertices: tuple
    marked: frozenset
    plane: tuple = field(default=(Fraction(0), Fraction(0), Fraction(0)), compare=False)

    @property
    def area2(self) -> int:
        return polygon_area2(self.vertices)

    def edges(self):
        n = len(self.vertices)
        return [(self.vertices[k], self.vertices[(k + 1) % n]) for k in range(n)]

    def contains(self, p) -> bool:
        return in_polygon(p, self.vertices)

    def neighbors_of(self, p):
        """The two polygon neighbours of vertex ``p`` (previous, next in ccw order)."""
        k = self.vertices.index(p)
        n = len(self.vertices)
        return self.vertices[k - 1], self.vertices[(k + 1) % n]

    def is_triangle(self) -> bool:
        return len(self.vertices) == 3 and len(self.marked) == 3


@dataclass(frozen=True)
class MarkedSubdivision:
    config: PointConfig
    cells: tuple

    def key(self) -> frozenset:
        return frozenset((frozenset(c.vertices), c.marked) for c in self.cells)

    def __eq__(self, other):
        if not isinstance(other, MarkedSubdivision):
            return NotImplemented
        return self.config.points == other.config.points and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def marked_points(self) -> set:
        return set().union(*(c.marked for c in self.cells))

    def is_triangulation(self) -> bool:
        return all(c.is_triangle() for c in self.cells)

    def is_fine(self) -> bool:
        return self.is_triangulation() and self.marked_points() == set(self.config.points)

    def cells_with_vertex(self, p) -> list:
        return [c for c in self.cells if p in c.vertices]

    def is_cell_vertex(self, p) -> bool:
        return any(p in c.vertices for c in self.cells)

    def interior_edges(self) -> dict:
        """segment (frozenset of endpoints) -> pair of cell indices."""
        seen: dict = {}
        for k, c in enumerate(self.cells):
            for a, b in c.edges():
                seen.setdefault(frozenset((a, b)), []).append(k)
        return {e: tuple(v) for e, v in seen.items() if len(v) == 2}

    def boundary_edges(self) -> list:
        seen: dict = {}
        for k, c in enumerate(self.cells):
            for a, b in c.edges():
                seen.setdefault(frozenset((a, b)), []).append((k, (a, b)))
        return [v[0] for v in seen.values() if len(v) == 1]

    def to_json(self) -> dict:
        return {"cells": [{"vertices": [list(p) for p in c.vertices],
                           "marked": sorted(list(p) for p in c.marked)} for c in self.cells]}


def regular_subdivision(u: Mapping, config: PointConfig = A3) -> MarkedSubdivision:
    """Project the lower faces of the lifted points ``(w, u_w)``.

    A cell is kept for every 2-dimensional lower face; its marked points are
    the points lying on that face.
    """
    u = u if isinstance(u, HeightVector) else HeightVector(u)
    return _regular_subdivision(u, config)


@functools.lru_cache(maxsize=4096)
def _regular_subdivision(u: HeightVector, config: PointConfig) -> MarkedSubdivision:
    missing = [p for p in config.points if p not in u]
    if missing:
        raise ValueError(f"no height for {missing}")
    for p in config.hull:
        if u[p] == INF:
            raise NonRegularInput(f"hull vertex {p} has infinite height")
    pts = [p for p in config.points if u[p] != INF]
    den = math.lcm(*(u[p].denominator for p in pts))
    h = {p: int(u[p] * den) for p in pts}
    faces: dict = {}
    for a, b, c in itertools.combinations(pts, 3):
        d = cross(a, b, c)
        if d == 0:
            continue
        r1 = (b[0] - a[0], b[1] - a[1], h[b] - h[a])
        r2 = (c[0] - a[0], c[1] - a[1], h[c] - h[a])
        # q lies above the plane through a, b, c iff det(r1, r2, q - a) has the sign of d
        n0 = r1[1] * r2[2] - r1[2] * r2[1]
        n1 = r1[2] * r2[0] - r1[0] * r2[2]
        on = []
        for q in pts:
            m = n0 * (q[0] - a[0]) + n1 * (q[1] - a[1]) + d * (h[q] - h[a])
            if m == 0:
                on.append(q)
            elif (m < 0) == (d > 0):
                break
        else:
            key = frozenset(on)
            if key not in faces:
                faces[key] = MarkedCell(convex_hull(on), key, _plane(a, b, c, u[a], u[b], u[c], d))
    cells = tuple(sorted(faces.values(), key=lambda c: (sorted(c.vertices), sorted(c.marked))))
    return MarkedSubdivision(config, cells)


def _plane(a, b, c, ha, hb, hc, d):
    # solve c0 + gx x + gy y = h at three points (Cramer)
    gx = Fraction((hb - ha) * (c[1] - a[1]) - (hc - ha) * (b[1] - a[1])) / d
    gy = Fraction((hc - ha) * (b[0] - a[0]) - (hb - ha) * (c[0] - a[0])) / d
    c0 = ha - gx * a[0] - gy * a[1]
    return (Fraction(c0), gx, gy)


def is_interior_vertex_visible(S: MarkedSubdivision, p=CENTER) -> bool:
    if S.config.is_boundary(p) or p not in S.config.points:
        raise ValueError(f"{p} is not an interior point of the configuration")
    return S.is_cell_vertex(p)


# (weights on other points, multiple of the center height); strict inequalities
_U_INEQUALITIES = [
    ({(0, 1): 3, (3, 0): 2, (0, 3): 1}, 6), ({(1, 0): 3, (0, 3): 2, (3, 0): 1}, 6),
    ({(1, 2): 3, (3, 0): 1, (0, 0): 2}, 6), ({(2, 1): 3, (0, 3): 1, (0, 0): 2}, 6),
    ({(3, 0): 2, (0, 2): 3, (0, 0): 1}, 6), ({(0, 3): 2, (2, 0): 3, (0, 0): 1}, 6),
    ({(1, 2): 1, (3, 0): 1, (0, 0): 1, (0, 2): 1}, 4), ({(2, 1): 1, (0, 3): 1, (0, 0): 1, (2, 0): 1}, 4),
    ({(0, 1): 1, (1, 0): 1, (0, 3): 1, (3, 0): 1}, 4), ({(0, 1): 2, (1, 2): 1, (3, 0): 1}, 4),
    ({(1, 0): 2, (2, 1): 1, (0, 3): 1}, 4), ({(1, 2): 2, (2, 0): 1, (0, 0): 1}, 4),
    ({(2, 1): 2, (0, 2): 1, (0, 0): 1}, 4), ({(0, 2): 2, (1, 0): 1, (3, 0): 1}, 4),
    ({(2, 0): 2, (0, 1): 1, (0, 3): 1}, 4), ({(2, 0): 1, (0, 1): 1, (1, 2): 1}, 3),
    ({(0, 2): 1, (1, 0): 1, (2, 1): 1}, 3), ({(3, 0): 1, (0, 2): 1, (0, 1): 1}, 3),
    ({(0, 3): 1, (1, 0): 1, (2, 0): 1}, 3), ({(0, 0): 1, (1, 2): 1, (2, 1): 1}, 3),
    ({(0, 0): 1, (3, 0): 1, (0, 3): 1}, 3), ({(2, 1): 1, (0, 1): 1}, 2),
    ({(1, 0): 1, (1, 2): 1}, 2), ({(2, 0): 1, (0, 2): 1}, 2),
]


def u_inequalities():
    return list(_U_INEQUALITIES)


def membership_U(u: Mapping) -> bool:
    """Whether the center of the cubic configuration is a cell vertex, via the
    explicit list of strict linear inequalities on finite heights."""
    u = u if isinstance(u, HeightVector) else HeightVector(u)
    if any(u[p] == INF for p in A3_POINTS):
        raise ValueError("membership test needs finite heights")
    c = u[CENTER]
    return all(sum(w * u[p] for p, w in lhs.items()) > k * c for lhs, k in _U_INEQUALITIES)


def is_refinement(S: MarkedSubdivision, T: MarkedSubdivision) -> bool:
    """True when ``S`` refines ``T`` (S <= T)."""
    if S.config.points != T.config.points:
        raise ValueError("subdivisions of different configurations")
    for big in T.cells:
        inside = [c for c in S.cells if all(in_polygon(v, big.vertices) for v in c.vertices)]
        if sum(c.area2 for c in inside) != big.area2:
            return False
        if any(not c.marked <= big.marked for c in inside):
            return False
    return True


# --- rays of the secondary fan of the cubic configuration ---------------------


@dataclass(frozen=True, order=True)
class RayClass:
    tag: str  # "lift" | "fold" | "pinwheel"
    points: tuple

    def __str__(self):
        return f"{self.tag}{list(self.points)}"


class NotARay(ValueError):
    pass


_BOUNDARY_CYCLE = ((0, 0), (1, 0), (2, 0), (3, 0), (2, 1), (1, 2), (0, 3), (0, 2), (0, 1))


def _ccw_from_center(pts, center=CENTER):
    """Sort points counterclockwise around ``center`` starting at angle 0 (exact)."""
    def half(d):
        return 0 if (d[1] > 0 or (d[1] == 0 and d[0] > 0)) else 1

    def cmp(p, q):
        dp = (p[0] - center[0], p[1] - center[1])
        dq = (q[0] - center[0], q[1] - center[1])
        hp, hq = half(dp), half(dq)
        if hp != hq:
            return hp - hq
        c = dp[0] * dq[1] - dp[1] * dq[0]
        return -1 if c > 0 else (1 if c < 0 else 0)

    return sorted(pts, key=cmp_to_key(cmp))


def classify_ray(S: MarkedSubdivision) -> RayClass:
    """Identify a coarsest non-trivial subdivision of the cubic configuration."""
    if S.config.points != A3.points:
        raise ValueError("ray classification is specific to the cubic configuration")
    all_pts = set(A3_POINTS)
    if len(S.cells) == 1:
        missing = all_pts - S.cells[0].marked
        if len(missing) == 1:
            return RayClass("lift", (missing.pop(),))
        raise NotARay("a single cell is a ray only when exactly one point is unmarked")
    if S.marked_points() != all_pts:
        raise NotARay("several cells and an unmarked point")
    # cells must have all their lattice points marked
    for c in S.cells:
        if any(c.contains(p) and p not in c.marked for p in A3_POINTS):
            raise NotARay("a cell leaves one of its lattice points unmarked")
    inner = list(S.interior_edges())
    if len(S.cells) == 2 and len(inner) == 1:
        a, b = sorted(inner[0])
        return RayClass("fold", (a, b))
    if len(S.cells) == 3 and len(inner) == 3 and all(CENTER in e for e in inner):
        spokes = [next(iter(e - {CENTER})) for e in inner]
        if all(A3.is_boundary(p) for p in spokes):
            return RayClass("pinwheel", tuple(_ccw_from_center(spokes)))
    raise NotARay("subdivision is not one of the coarsest types")


def s3_elements():
    return list(itertools.permutations(range(3)))


def s3_point(g, p):
    c = (p[0], p[1], 3 - p[0] - p[1])
    return (c[g[0]], c[g[1]])


def s3_action(obj, g):
    """Act by a coordinate permutation of (i, j, 3-i-j) on points, heights,
    subdivisions or ray classes."""
    if isinstance(obj, tuple) and len(obj) == 2 and all(isinstance(x, int) for x in obj):
        return s3_point(g, obj)
    if isinstance(obj, HeightVector) or isinstance(obj, dict):
        return HeightVector({s3_point(g, p): v for p, v in obj.items()})
    if isinstance(obj, MarkedSubdivision):
        cells = []
        for c in obj.cells:
            verts = convex_hull([s3_point(g, p) for p in c.vertices])
            cells.append(MarkedCell(verts, frozenset(s3_point(g, p) for p in c.marked)))
        cells.sort(key=lambda c: (sorted(c.vertices), sorted(c.marked)))
        return MarkedSubdivision(obj.config, tuple(cells))
    if isinstance(obj, RayClass):
        pts = [s3_point(g, p) for p in obj.points]
        if obj.tag == "pinwheel":
            pts = _ccw_from_center(pts)
        elif obj.tag == "fold":
            pts = sorted(pts)
        return RayClass(obj.tag, tuple(pts))
    raise TypeError(f"no S3 action on {type(obj).__name__}")


def _canonical(ray: RayClass) -> RayClass:
    return min(s3_action(ray, g) for g in s3_elements())


def _same_facet(p, q) -> bool:
    h = A3.hull
    return any(on_segment(p, h[k], h[(k + 1) % 3]) and on_segment(q, h[k], h[(k + 1) % 3])
               for k in range(3))


def lift_witness(nu) -> HeightVector:
    return HeightVector({p: 1 if p == nu else 0 for p in A3_POINTS})


def fold_witness(a, b) -> HeightVector:
    # max(0, l) for the affine l vanishing on the line ab
    n = (b[1] - a[1], a[0] - b[0])
    g = math.gcd(*n)
    n = (n[0] // g, n[1] // g)
    return HeightVector({p: max(0, n[0] * (p[0] - a[0]) + n[1] * (p[1] - a[1])) for p in A3_POINTS})


def pinwheel_witness(spokes) -> HeightVector:
    """Convex piecewise-linear function with domains of linearity the three
    cones spanned from the center by consecutive spokes."""
    p1, p2, p3 = (tuple(x - c for x, c in zip(p, CENTER)) for p in spokes)
    # write w - center = alpha v1 + beta v2 + gamma v3 using the cone containing w;
    # the height is the v3 coefficient on the cones adjacent to v3, else 0
    h = {}
    for p in A3_POINTS:
        d = (p[0] - CENTER[0], p[1] - CENTER[1])
        h[p] = _pinwheel_value(d, p1, p2, p3)
    return HeightVector(h)


def _coords(d, a, b):
    det = a[0] * b[1] - a[1] * b[0]
    s = Fraction(d[0] * b[1] - d[1] * b[0], det)
    t = Fraction(a[0] * d[1] - a[1] * d[0], det)
    return s, t


def _pinwheel_value(d, v1, v2, v3):
    if d == (0, 0):
        return Fraction(0)
    s, t = _coords(d, v1, v2)
    if s >= 0 and t >= 0:
        return Fraction(0)
    s, t = _coords(d, v2, v3)
    if s >= 0 and t >= 0:
        return t
    s, t = _coords(d, v3, v1)
    return s


def enumerate_rays(config: PointConfig = A3) -> list:
    """One representative per S3-orbit of each ray type, with a height witness
    whose regular subdivision classifies back to it."""
    if config.points != A3.points:
        raise ValueError("ray enumeration is specific to the cubic configuration")
    hull = set(A3.hull)
    boundary = [p for p in _BOUNDARY_CYCLE]
    found: dict = {}
    for p in A3_POINTS:
        if p not in hull:
            found.setdefault(_canonical(RayClass("lift", (p,))), lift_witness)
    for a, b in itertools.combinations(boundary, 2):
        if not _same_facet(a, b):
            found.setdefault(_canonical(RayClass("fold", tuple(sorted((a, b))))), fold_witness)
    for tri in itertools.combinations(boundary, 3):
        if abs(polygon_area2(tri)) and strictly_inside(CENTER, convex_hull(tri)):
            found.setdefault(_canonical(RayClass("pinwheel", tuple(_ccw_from_center(tri)))), pinwheel_witness)
    out = []
    for ray in sorted(found):
        if ray.tag == "lift":
            w = lift_witness(ray.points[0])
        elif ray.tag == "fold":
            w = fold_witness(*ray.points)
        else:
            w = pinwheel_witness(ray.points)
        got = classify_ray(regular_subdivision(w))
        if got != ray:
            raise AssertionError(f"witness for {ray} classifies as {got}")
        out.append((ray, w))
    return out


def random_heights(rng, span: int = 20, max_den: int = 8) -> HeightVector:
    """Integer heights in [-span, span] plus a rational perturbation with denominator <= max_den."""
    h = {}
    for p in A3_POINTS:
        d = rng.randint(1, max_den)
        h[p] = Fraction(rng.randint(-span, span)) + Fraction(rng.randint(0, d - 1), d)
    return HeightVector(h)


def sample_U(rng, n: int, span: int = 20, max_den: int = 8, max_tries: int = 10**6) -> list:
    """n height vectors with the center visible, by rejection on ``membership_U``."""
    out = []
    tries = 0
    while len(out) < n:
        tries += 1
        if tries > max_tries:
            raise RuntimeError("rejection sampling did not produce enough samples")
        u = random_heights(rng, span, max_den)
        if membership_U(u):
            out.append(u)
    return out
