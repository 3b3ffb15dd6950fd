"""Tropical plane curves dual to regular subdivisions (min convention), the
length of the cycle around the interior point, and rendering."""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key

from .exact import rational_str
from .subdivision import (A3, CENTER, HeightVector, MarkedSubdivision, PointConfig, cross,
                          lattice_length, on_segment, regular_subdivision)

INF = math.inf


class NoCycle(ValueError):
    pass


@dataclass(frozen=True)
class TropicalEdge:
    ends: tuple  # indices into TropicalCurve.vertices
    facet: tuple  # the dual segment of the subdivision
    direction: tuple  # v(E): perpendicular to the facet, same length as the facet
    length: Fraction  # |E| / |v(E)|


@dataclass(frozen=True)
class TropicalRay:
    start: int
    facet: tuple
    direction: tuple


@dataclass(frozen=True)
class TropicalCurve:
    subdivision: MarkedSubdivision
    vertices: tuple  # one per cell, same order as subdivision.cells
    edges: tuple
    rays: tuple

    def to_json(self) -> dict:
        q = rational_str
        return {
            "vertices": [[q(x), q(y)] for x, y in self.vertices],
            "edges": [{"ends": list(e.ends), "facet": [list(p) for p in e.facet],
                       "direction": list(e.direction), "length": q(e.length)} for e in self.edges],
            "rays": [{"start": r.start, "facet": [list(p) for p in r.facet],
                      "direction": list(r.direction)} for r in self.rays],
        }


def _primitive(v):
    g = math.gcd(abs(v[0]), abs(v[1]))
    return (v[0] // g, v[1] // g)


def perp(p, q):
    """Direction vector of the edge dual to segment p -> q: (y2 - y1, x1 - x2)."""
    return (q[1] - p[1], p[0] - q[0])


def dual_curve(u: Mapping, config: PointConfig = A3) -> TropicalCurve:
    S = regular_subdivision(u, config)
    verts = tuple((-c.plane[1], -c.plane[2]) for c in S.cells)
    edges = []
    for seg, (i, j) in sorted(S.interior_edges().items(), key=lambda kv: kv[1]):
        p, q = sorted(seg)
        d = perp(p, q)
        dv = (verts[j][0] - verts[i][0], verts[j][1] - verts[i][1])
        if dv[0] * d[1] - dv[1] * d[0] != 0:
            raise ArithmeticError(f"edge between cells {i},{j} is not perpendicular to {seg}")
        lam = Fraction(dv[0] * d[0] + dv[1] * d[1], d[0] ** 2 + d[1] ** 2)
        if lam == 0:
            raise ArithmeticError("two cells share a dual vertex")
        edges.append(TropicalEdge((i, j), (p, q), d, abs(lam)))
    rays = []
    for k, (a, b) in S.boundary_edges():
        cell = S.cells[k]
        # direction: inward normal of the cell at the boundary facet a -> b (ccw)
        d = _primitive((-(b[1] - a[1]), b[0] - a[0]))
        rays.append(TropicalRay(k, (a, b), d))
    rays.sort(key=lambda r: (r.start, r.facet))
    return TropicalCurve(S, verts, tuple(edges), tuple(rays))


def clockwise_neighbors(S: MarkedSubdivision, p=CENTER, start=None) -> list:
    """Neighbours of ``p`` in the subdivision, clockwise around ``p``."""
    nbrs = set()
    for c in S.cells_with_vertex(p):
        nbrs.update(c.neighbors_of(p))
    if not nbrs:
        raise NoCycle(f"{p} is not a vertex of the subdivision")

    def half(d):
        return 0 if (d[1] > 0 or (d[1] == 0 and d[0] > 0)) else 1

    def cmp(a, b):
        da, db = (a[0] - p[0], a[1] - p[1]), (b[0] - p[0], b[1] - p[1])
        if half(da) != half(db):
            return half(da) - half(db)
        c = da[0] * db[1] - da[1] * db[0]
        return -1 if c > 0 else (1 if c < 0 else 0)

    ccw = sorted(nbrs, key=cmp_to_key(cmp))
    cw = ccw[::-1]
    if start is not None:
        k = cw.index(start)
        cw = cw[k:] + cw[:k]
    return cw


def _D(p, a, b):
    """det(a - p, b - p)."""
    return (a[0] - p[0]) * (b[1] - p[1]) - (a[1] - p[1]) * (b[0] - p[0])


def cycle_coefficients(S: MarkedSubdivision, p=CENTER) -> list:
    """Pairs (w_j, K_j) with K_j = (D_{j-1,j} + D_{j,j+1} + D_{j+1,j-1}) / (D_{j-1,j} D_{j,j+1})
    for the clockwise neighbours w_j of ``p``."""
    ws = clockwise_neighbors(S, p)
    n = len(ws)
    out = []
    for j in range(n):
        a, b, c = ws[j - 1], ws[j], ws[(j + 1) % n]
        d1, d2, d3 = _D(p, a, b), _D(p, b, c), _D(p, c, a)
        out.append((b, Fraction(d1 + d2 + d3, d1 * d2)))
    return out


def cycle_length_closed_form(u: Mapping, p=CENTER) -> Fraction:
    """sum_j (u_p - u_{w_j}) K_j over the clockwise neighbours of ``p``."""
    u = u if isinstance(u, HeightVector) else HeightVector(u)
    S = regular_subdivision(u)
    return sum(((u[p] - u[w]) * K for w, K in cycle_coefficients(S, p)), Fraction(0))


def per_edge_closed_form(u: Mapping, p=CENTER, start=None) -> list:
    """[(w_j, lambda_j)]: the lattice length of the cycle edge dual to (p, w_j)
    written in the heights of p and its three consecutive neighbours."""
    u = u if isinstance(u, HeightVector) else HeightVector(u)
    S = regular_subdivision(u)
    ws = clockwise_neighbors(S, p, start)
    n = len(ws)
    out = []
    for j in range(n):
        a, b, c = ws[j - 1], ws[j], ws[(j + 1) % n]
        d_ab, d_bc, d_ca = _D(p, a, b), _D(p, b, c), _D(p, c, a)
        h = u[p]
        lam = Fraction(h - u[a], d_ab) + Fraction(h - u[c], d_bc) + (h - u[b]) * Fraction(d_ca, d_ab * d_bc)
        out.append((b, lam))
    return out


def per_edge_geometric(u: Mapping, p=CENTER, start=None) -> list:
    """[(w_j, lambda_j)] with v_j - v_{j-1} = lambda_j (w_j - p)^perp, read off
    the dual vertices of the two cells on either side of the segment (p, w_j)."""
    u = u if isinstance(u, HeightVector) else HeightVector(u)
    curve = dual_curve(u)
    S = curve.subdivision
    ws = clockwise_neighbors(S, p, start)
    out = []
    for w in ws:
        before = after = None
        for k, c in enumerate(S.cells):
            if p in c.vertices and w in c.vertices:
                prev, nxt = c.neighbors_of(p)
                # clockwise from w lies the cell whose ccw order around p goes w -> p -> ..
                if nxt == w:
                    after = k
                elif prev == w:
                    before = k
        if before is None or after is None:
            raise NoCycle(f"segment {p}-{w} is not interior")
        va, vb = curve.vertices[after], curve.vertices[before]
        d = (w[0] - p[0], w[1] - p[1])
        dperp = (-d[1], d[0])
        dv = (vb[0] - va[0], vb[1] - va[1])
        out.append((w, Fraction(dv[0] * dperp[0] + dv[1] * dperp[1], dperp[0] ** 2 + dperp[1] ** 2)))
    return out


@dataclass(frozen=True)
class CycleReport:
    has_cycle: bool
    generalized: bool
    length: Fraction
    cycle_edges: tuple = field(default=())

    def to_json(self):
        return {"hasCycle": self.has_cycle, "generalized": self.generalized,
                "length": rational_str(self.length),
                "cycleEdges": [list(map(list, f)) for f in self.cycle_edges]}


def _center_facet(S: MarkedSubdivision, p=CENTER):
    """The interior segment containing ``p`` in its relative interior."""
    for seg, cells in S.interior_edges().items():
        a, b = tuple(seg)
        if p != a and p != b and on_segment(p, a, b):
            return seg, cells
    return None


def cycle_report(u: Mapping, p=CENTER, config: PointConfig = A3) -> CycleReport:
    u = u if isinstance(u, HeightVector) else HeightVector(u)
    if p not in config.points or u[p] == INF:
        return CycleReport(False, False, Fraction(0))
    curve = dual_curve(u, config)
    S = curve.subdivision
    if S.is_cell_vertex(p):
        edges = [e for e in curve.edges if p in e.facet]
        return CycleReport(True, False, sum((e.length for e in edges), Fraction(0)),
                           tuple(e.facet for e in edges))
    hit = _center_facet(S, p)
    if hit is not None:
        return CycleReport(False, True, generalized_cycle_length(u, p, config))
    return CycleReport(False, False, Fraction(0))


def generalized_cycle_length(u: Mapping, p=CENTER, config: PointConfig = A3) -> Fraction:
    """4 times the lattice length of the edge dual to the segment through ``p``."""
    u = u if isinstance(u, HeightVector) else HeightVector(u)
    curve = dual_curve(u, config)
    S = curve.subdivision
    if S.is_cell_vertex(p):
        raise ValueError(f"{p} is a vertex; use the ordinary cycle length")
    hit = _center_facet(S, p)
    if hit is None:
        raise NoCycle(f"{p} is not in the relative interior of an interior segment")
    seg, _ = hit
    for e in curve.edges:
        if frozenset(e.facet) == seg:
            return 4 * e.length
    raise AssertionError("segment without dual edge")


# --- rendering -----------------------------------------------------------------

BOX = Fraction(6)
_SVG_TAGS = {"svg", "g", "line", "circle", "polygon", "text", "rect", "title"}


def _clip(p, d, lo, hi, bounded_end=None):
    """Liang-Barsky on p + t d, t in [0, 1] if bounded_end else [0, inf)."""
    t0, t1 = Fraction(0), (Fraction(1) if bounded_end else None)
    for k in range(2):
        for q, r in ((-d[k], p[k] - lo), (d[k], hi - p[k])):
            if q == 0:
                if r < 0:
                    return None
                continue
            t = Fraction(r) / q
            if q < 0:
                t0 = max(t0, t)
            else:
                t1 = t if t1 is None else min(t1, t)
    if t1 is None or t0 > t1:
        return None
    return ((p[0] + t0 * d[0], p[1] + t0 * d[1]), (p[0] + t1 * d[0], p[1] + t1 * d[1]))


def _segments(curve: TropicalCurve, box=BOX):
    segs = []
    for e in curve.edges:
        a, b = curve.vertices[e.ends[0]], curve.vertices[e.ends[1]]
        s = _clip(a, (b[0] - a[0], b[1] - a[1]), -box, box, bounded_end=True)
        if s:
            segs.append(s)
    for r in curve.rays:
        s = _clip(curve.vertices[r.start], r.direction, -box, box)
        if s:
            segs.append(s)
    return segs


def _f(x) -> str:
    return f"{float(x):.4f}".rstrip("0").rstrip(".")


def render(curve: TropicalCurve, fmt: str = "svg", box=BOX, with_subdivision: bool = True) -> str:
    box = Fraction(box)
    if fmt == "ascii":
        return _render_ascii(curve, box)
    if fmt != "svg":
        raise ValueError(f"unknown format {fmt!r}")
    size = 2 * box
    scale = Fraction(400) / size

    def X(x):
        return _f((x + box) * scale)

    def Y(y):
        return _f((box - y) * scale)

    width = 820 if with_subdivision else 420
    root = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", width=str(width), height="420",
                      viewBox=f"-10 -10 {width} 420")
    g = ET.SubElement(root, "g", id="curve")
    ET.SubElement(g, "rect", x="0", y="0", width="400", height="400", fill="none", stroke="#999")
    for a, b in _segments(curve, box):
        ET.SubElement(g, "line", x1=X(a[0]), y1=Y(a[1]), x2=X(b[0]), y2=Y(b[1]),
                      stroke="black", **{"stroke-width": "2"})
    for v in curve.vertices:
        if -box <= v[0] <= box and -box <= v[1] <= box:
            ET.SubElement(g, "circle", cx=X(v[0]), cy=Y(v[1]), r="3", fill="black")
    if with_subdivision:
        sub = ET.SubElement(root, "g", id="subdivision", transform="translate(420,0)")
        s = Fraction(400, 3)
        for c in curve.subdivision.cells:
            pts = " ".join(f"{_f(x * s)},{_f(400 - y * s)}" for x, y in c.vertices)
            ET.SubElement(sub, "polygon", points=pts, fill="none", stroke="black")
        for p in curve.subdivision.config.points:
            filled = p in curve.subdivision.marked_points()
            ET.SubElement(sub, "circle", cx=_f(p[0] * s), cy=_f(400 - p[1] * s), r="5",
                          fill="black" if filled else "white", stroke="black")
    return ET.tostring(root, encoding="unicode")


def check_svg(text: str) -> bool:
    """Structural check of our own SVG output: known tags, numeric geometry attributes."""
    root = ET.fromstring(text)
    ns = "{http://www.w3.org/2000/svg}"
    for el in root.iter():
        tag = el.tag.replace(ns, "")
        if tag not in _SVG_TAGS:
            return False
        for attr in ("x1", "y1", "x2", "y2", "cx", "cy", "r"):
            if attr in el.attrib:
                float(el.attrib[attr])
    return root.tag.replace(ns, "") == "svg"


def _render_ascii(curve: TropicalCurve, box, cols=49, rows=25) -> str:
    grid = [[" "] * cols for _ in range(rows)]

    def cell(x, y):
        c = int((x + box) / (2 * box) * (cols - 1))
        r = int((box - y) / (2 * box) * (rows - 1))
        return r, c

    for a, b in _segments(curve, box):
        steps = 4 * max(cols, rows)
        for k in range(steps + 1):
            t = Fraction(k, steps)
            r, c = cell(a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))
            grid[r][c] = "."
    for v in curve.vertices:
        if -box <= v[0] <= box and -box <= v[1] <= box:
            r, c = cell(*v)
            grid[r][c] = "o"
    return "\n".join("".join(row).rstrip() for row in grid) + "\n"
