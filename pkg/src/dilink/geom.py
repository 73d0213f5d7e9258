"""Exact piecewise-linear geometry for spatial digraph embeddings.

All positions are integer lattice points and every predicate is evaluated in
exact integer or rational arithmetic; floating point is never consulted for a
geometric decision.  Diagrams use the standard projection (x, y, z) -> (x, y),
with z as the height that decides over/under at a crossing.

Crossing sign convention (fixed here, used everywhere): a crossing counts +1
when the under-strand direction is counterclockwise from the over-strand
direction in the projection plane, i.e. ``cross2(over_dir, under_dir) > 0``,
and -1 otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence

from .errors import (
    CoordinateOverflow,
    DegenerateProjection,
    DisjointnessViolated,
)

__all__ = [
    "COORD_LIMIT",
    "DEFAULT_BOX",
    "Point3",
    "PolyLine",
    "SpatialEmbedding",
    "Violation",
    "ValidationReport",
    "Crossing",
    "LinkDiagram",
    "validate_general_position",
    "project_to_diagram",
    "shear",
    "shear_points",
]

# Default half-width of the coordinate box for generated data.
DEFAULT_BOX = 2**30
# Hard cap: beyond this, shearing refuses to grow coordinates further.
COORD_LIMIT = 2**62


class Point3(NamedTuple):
    x: int
    y: int
    z: int


def _as_point(p: Sequence[int]) -> Point3:
    x, y, z = p
    if not (isinstance(x, int) and isinstance(y, int) and isinstance(z, int)):
        raise TypeError("lattice points need integer coordinates")
    return Point3(x, y, z)


class PolyLine:
    """An open polyline with >= 2 distinct-in-sequence lattice points."""

    __slots__ = ("points",)

    def __init__(self, points: Iterable[Sequence[int]]):
        pts = tuple(_as_point(p) for p in points)
        if len(pts) < 2:
            raise ValueError("polyline needs at least two points")
        for a, b in zip(pts, pts[1:]):
            if a == b:
                raise ValueError("polyline repeats a point consecutively")
        self.points = pts

    def __len__(self) -> int:
        return len(self.points)

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyLine) and self.points == other.points

    def __hash__(self) -> int:
        return hash(self.points)

    def __repr__(self) -> str:
        return f"PolyLine({list(self.points)!r})"

    def reversed(self) -> "PolyLine":
        return PolyLine(self.points[::-1])

    def segments(self) -> Iterator[tuple[Point3, Point3]]:
        return zip(self.points, self.points[1:])


@dataclass(frozen=True)
class SpatialEmbedding:
    """Integer-lattice PL embedding of a digraph.

    ``vertices`` maps vertex id -> position, ``arcs`` maps a directed edge
    (tail, head) -> the polyline drawn for it.  Each arc must start at its
    tail's position and end at its head's; arcs of antiparallel edges are
    separate curves with disjoint interiors (checked by
    :func:`validate_general_position`, not here).
    """

    vertices: dict[int, Point3]
    arcs: dict[tuple[int, int], PolyLine]
    box: int = DEFAULT_BOX

    def __post_init__(self):
        object.__setattr__(
            self,
            "vertices",
            {int(v): _as_point(p) for v, p in self.vertices.items()},
        )
        seen_pos: dict[Point3, int] = {}
        for v, p in self.vertices.items():
            if max(abs(p.x), abs(p.y), abs(p.z)) > self.box:
                raise CoordinateOverflow(f"vertex {v} outside box {self.box}")
            if p in seen_pos:
                raise ValueError(f"vertices {seen_pos[p]} and {v} coincide")
            seen_pos[p] = v
        for (t, h), arc in self.arcs.items():
            if t == h:
                raise ValueError("loop edges are not allowed")
            if t not in self.vertices or h not in self.vertices:
                raise ValueError(f"edge ({t},{h}) references unknown vertex")
            if arc.points[0] != self.vertices[t] or arc.points[-1] != self.vertices[h]:
                raise ValueError(f"arc of ({t},{h}) does not join its endpoints")
            for p in arc.points:
                if max(abs(p.x), abs(p.y), abs(p.z)) > self.box:
                    raise CoordinateOverflow(f"arc of ({t},{h}) leaves box")

    def has_arc(self, tail: int, head: int) -> bool:
        return (tail, head) in self.arcs

    def segment_count(self) -> int:
        return sum(len(a) - 1 for a in self.arcs.values())


# ---------------------------------------------------------------------------
# exact primitives


def _sub(a: Point3, b: Point3) -> tuple[int, int, int]:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _cross3(a, b) -> tuple[int, int, int]:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _dot3(a, b) -> int:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross2(ax: int, ay: int, bx: int, by: int) -> int:
    return ax * by - ay * bx


def orient2(p, q, r) -> int:
    """Sign of the 2D orientation of (p, q, r) using x/y coordinates."""
    v = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (v > 0) - (v < 0)


def seg3_relation(p: Point3, q: Point3, r: Point3, s: Point3):
    """Exact intersection of closed 3D segments pq and rs.

    Returns ("none", None), ("point", (Fraction, Fraction, Fraction)), or
    ("overlap", None) for a positive-length collinear overlap.
    """
    d1 = _sub(q, p)
    d2 = _sub(s, r)
    w = _sub(r, p)
    c = _cross3(d1, d2)
    if c == (0, 0, 0):
        if _cross3(d1, w) != (0, 0, 0):
            return ("none", None)
        # collinear: compare parameters along d1, scaled by L = |d1|^2
        length = _dot3(d1, d1)
        t_r = _dot3(d1, w)
        t_s = _dot3(d1, _sub(s, p))
        lo2, hi2 = (t_r, t_s) if t_r <= t_s else (t_s, t_r)
        lo = max(0, lo2)
        hi = min(length, hi2)
        if lo > hi:
            return ("none", None)
        if lo == hi:
            t = Fraction(lo, length)
            return ("point", (p[0] + t * d1[0], p[1] + t * d1[1], p[2] + t * d1[2]))
        return ("overlap", None)
    if _dot3(w, c) != 0:
        return ("none", None)  # skew lines
    den = _dot3(c, c)
    t_num = _dot3(_cross3(w, d2), c)
    u_num = _dot3(_cross3(w, d1), c)
    if den > 0:
        if not (0 <= t_num <= den and 0 <= u_num <= den):
            return ("none", None)
    t = Fraction(t_num, den)
    return ("point", (p[0] + t * d1[0], p[1] + t * d1[1], p[2] + t * d1[2]))


def _between1(lo: int, hi: int, v: int) -> bool:
    return min(lo, hi) <= v <= max(lo, hi)


def _on_seg2(p, q, r) -> bool:
    """r collinear with pq: is r within the closed 2D segment pq?"""
    return _between1(p[0], q[0], r[0]) and _between1(p[1], q[1], r[1])


def seg2_relation(p, q, r, s):
    """Exact relation of the xy-projections of closed segments pq and rs.

    Returns one of
      ("none", None)
      ("proper", (t_num, u_num, den))   interior transversal crossing, with
                                        exact parameters t = t_num/den along pq
                                        and u = u_num/den along rs, den > 0
      ("touch", (x, y))                 single contact point, not transversal
                                        through both interiors (integer point)
      ("overlap", None)                 collinear overlap of positive length
    """
    o1 = orient2(p, q, r)
    o2 = orient2(p, q, s)
    o3 = orient2(r, s, p)
    o4 = orient2(r, s, q)
    if o1 == 0 and o2 == 0:
        # all four points collinear in projection
        touches = []
        for pt, a, b in ((r, p, q), (s, p, q), (p, r, s), (q, r, s)):
            if _on_seg2(a, b, pt) and (pt[0], pt[1]) not in touches:
                touches.append((pt[0], pt[1]))
        if not touches:
            return ("none", None)
        if len(touches) == 1:
            return ("touch", touches[0])
        return ("overlap", None)
    if o1 != o2 and o3 != o4 and o1 != 0 and o2 != 0 and o3 != 0 and o4 != 0:
        d1x, d1y = q[0] - p[0], q[1] - p[1]
        d2x, d2y = s[0] - r[0], s[1] - r[1]
        den = cross2(d1x, d1y, d2x, d2y)
        wx, wy = r[0] - p[0], r[1] - p[1]
        t_num = cross2(wx, wy, d2x, d2y)
        u_num = cross2(wx, wy, d1x, d1y)
        if den < 0:
            den, t_num, u_num = -den, -t_num, -u_num
        return ("proper", (t_num, u_num, den))
    # boundary contact: some endpoint sits on the other segment
    if o1 == 0 and _on_seg2(p, q, r):
        return ("touch", (r[0], r[1]))
    if o2 == 0 and _on_seg2(p, q, s):
        return ("touch", (s[0], s[1]))
    if o3 == 0 and _on_seg2(r, s, p):
        return ("touch", (p[0], p[1]))
    if o4 == 0 and _on_seg2(r, s, q):
        return ("touch", (q[0], q[1]))
    return ("none", None)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    kind: str
    where: tuple
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> tuple[str, ...]:
        return tuple(v.kind for v in self.violations)


_Seg = tuple  # (owner, index, p, q) with owner hashable


def _candidate_pairs(segs: list, key_lo, key_hi) -> Iterator[tuple[int, int]]:
    """Indices of segment pairs whose boxes overlap, cheap prefilter.

    ``key_lo``/``key_hi`` extract per-axis min/max tuples from a segment.
    Uses numpy for large inputs, a plain double loop otherwise.
    """
    n = len(segs)
    if n <= 512:
        los = [key_lo(s) for s in segs]
        his = [key_hi(s) for s in segs]
        dims = len(los[0]) if n else 0
        for i in range(n):
            li, hi_ = los[i], his[i]
            for j in range(i + 1, n):
                lj, hj = los[j], his[j]
                ok = True
                for d in range(dims):
                    if li[d] > hj[d] or lj[d] > hi_[d]:
                        ok = False
                        break
                if ok:
                    yield (i, j)
        return
    import numpy as np

    los = np.array([key_lo(s) for s in segs], dtype=np.int64)
    his = np.array([key_hi(s) for s in segs], dtype=np.int64)
    dims = los.shape[1]
    chunk = max(1, (1 << 22) // max(n, 1))
    for start in range(0, n, chunk):
        stop = min(n, start + chunk)
        mask = np.ones((stop - start, n), dtype=bool)
        for d in range(dims):
            mask &= los[start:stop, d : d + 1] <= his[None, :, d]
            mask &= los[None, :, d] <= his[start:stop, d : d + 1]
        ii, jj = np.nonzero(mask)
        for a, b in zip(ii, jj):
            i = start + int(a)
            j = int(b)
            if i < j:
                yield (i, j)


def _gather_segments(
    arcs: dict[tuple[int, int], PolyLine]
) -> list[tuple[tuple[int, int], int, Point3, Point3]]:
    out = []
    for key in sorted(arcs):
        pts = arcs[key].points
        for i in range(len(pts) - 1):
            out.append((key, i, pts[i], pts[i + 1]))
    return out


def _allowed_contacts(
    sa: _Seg, sb: _Seg, vertices_of_arcs: dict[tuple[int, int], tuple[Point3, Point3]]
) -> frozenset[Point3]:
    """Points where this segment pair may legitimately touch."""
    (arc_a, ia, pa, qa) = sa
    (arc_b, ib, pb, qb) = sb
    if arc_a == arc_b:
        if abs(ia - ib) == 1:
            return frozenset({qa if ia < ib else pa})
        return frozenset()
    ends_a = vertices_of_arcs[arc_a]
    ends_b = vertices_of_arcs[arc_b]
    shared = set(ends_a) & set(ends_b)
    if not shared:
        return frozenset()
    allowed = set()
    for pt in shared:
        if pt in (pa, qa) and pt in (pb, qb):
            allowed.add(pt)
    return frozenset(allowed)


def validate_general_position(
    emb: SpatialEmbedding,
    arc_keys: Optional[Iterable[tuple[int, int]]] = None,
) -> ValidationReport:
    """Check 3D disjointness and projection genericity.

    An empty report means the (sub-)embedding is accepted by every downstream
    operation: arcs meet only at shared endpoint vertices, no segment is
    vertical, and the z-projection has only transversal double points away
    from vertices and bends.
    """
    if arc_keys is None:
        arcs = emb.arcs
    else:
        arcs = {k: emb.arcs[k] for k in arc_keys}
    segs = _gather_segments(arcs)
    ends = {k: (a.points[0], a.points[-1]) for k, a in arcs.items()}
    violations: list[Violation] = []

    # vertical segments are invisible to the projection
    for (arc, i, p, q) in segs:
        if p.x == q.x and p.y == q.y:
            violations.append(
                Violation("vertical-segment", (arc, i), f"{p}->{q}")
            )

    # 3D pairwise checks
    lo3 = lambda s: (
        min(s[2][0], s[3][0]),
        min(s[2][1], s[3][1]),
        min(s[2][2], s[3][2]),
    )
    hi3 = lambda s: (
        max(s[2][0], s[3][0]),
        max(s[2][1], s[3][1]),
        max(s[2][2], s[3][2]),
    )
    for i, j in _candidate_pairs(segs, lo3, hi3):
        sa, sb = segs[i], segs[j]
        kind, data = seg3_relation(sa[2], sa[3], sb[2], sb[3])
        if kind == "none":
            continue
        allowed = _allowed_contacts(sa, sb, ends)
        if kind == "overlap":
            violations.append(
                Violation("arc-intersection-3d", (sa[0], sa[1], sb[0], sb[1]), "collinear overlap")
            )
        else:
            px, py, pz = data
            pt_ok = any(
                px == ap[0] and py == ap[1] and pz == ap[2] for ap in allowed
            )
            if not pt_ok:
                violations.append(
                    Violation(
                        "arc-intersection-3d",
                        (sa[0], sa[1], sb[0], sb[1]),
                        f"meet at ({px},{py},{pz})",
                    )
                )

    # vertices on non-incident arcs (3D), incl. isolated vertices
    seg_by_bbox = segs
    for v, pos in sorted(emb.vertices.items()):
        for (arc, i, p, q) in seg_by_bbox:
            if v in arc:
                continue
            if not (
                _between1(p[0], q[0], pos[0])
                and _between1(p[1], q[1], pos[1])
                and _between1(p[2], q[2], pos[2])
            ):
                continue
            d = _sub(q, p)
            w = _sub(pos, p)
            if _cross3(d, w) == (0, 0, 0):
                violations.append(
                    Violation("vertex-on-arc-3d", (v, arc, i), f"vertex {v}")
                )

    # projection genericity
    lo2 = lambda s: (min(s[2][0], s[3][0]), min(s[2][1], s[3][1]))
    hi2 = lambda s: (max(s[2][0], s[3][0]), max(s[2][1], s[3][1]))
    cross_points: dict[tuple[Fraction, Fraction], list] = {}
    for i, j in _candidate_pairs(segs, lo2, hi2):
        sa, sb = segs[i], segs[j]
        kind, data = seg2_relation(sa[2], sa[3], sb[2], sb[3])
        if kind == "none":
            continue
        allowed = _allowed_contacts(sa, sb, ends)
        allowed2 = {(a[0], a[1]) for a in allowed}
        if kind == "overlap":
            violations.append(
                Violation(
                    "projection-overlap", (sa[0], sa[1], sb[0], sb[1]), "collinear in projection"
                )
            )
        elif kind == "touch":
            if data not in allowed2:
                violations.append(
                    Violation(
                        "projection-tangency",
                        (sa[0], sa[1], sb[0], sb[1]),
                        f"touch at {data}",
                    )
                )
        else:  # proper crossing: collect for triple-point detection
            t_num, u_num, den = data
            t = Fraction(t_num, den)
            px = sa[2][0] + t * (sa[3][0] - sa[2][0])
            py = sa[2][1] + t * (sa[3][1] - sa[2][1])
            cross_points.setdefault((px, py), []).append((sa[0], sa[1], sb[0], sb[1]))

    for pt, hits in cross_points.items():
        if len(hits) > 1:
            violations.append(
                Violation("triple-point", tuple(hits[0] + hits[1]), f"at {pt}")
            )

    # projected vertices on non-incident strands
    for v, pos in sorted(emb.vertices.items()):
        for (arc, i, p, q) in segs:
            if v in arc:
                continue
            if not (_between1(p[0], q[0], pos[0]) and _between1(p[1], q[1], pos[1])):
                continue
            if orient2(p, q, pos) == 0:
                violations.append(
                    Violation("vertex-on-strand", (v, arc, i), f"vertex {v} in projection")
                )

    return ValidationReport(tuple(violations))


# ---------------------------------------------------------------------------
# diagrams


@dataclass(frozen=True, order=True)
class StrandPos:
    """Position along a closed loop: segment index plus exact parameter."""

    loop: int
    seg: int
    t: Fraction


@dataclass(frozen=True)
class Crossing:
    over: StrandPos
    under: StrandPos
    sign: int
    point: tuple[Fraction, Fraction]


@dataclass(frozen=True)
class LinkDiagram:
    """Generic z-projection of disjoint closed loops.

    ``loops`` holds each component's closed point tuple (last point joins the
    first).  ``crossings`` is canonically sorted, so equal inputs produce
    bit-identical diagrams.
    """

    loops: tuple[tuple[Point3, ...], ...]
    crossings: tuple[Crossing, ...]

    def passes(self, loop: int) -> list[tuple[StrandPos, int, bool]]:
        """All crossing passes on a loop: (position, crossing index, is_over),
        ordered along the traversal."""
        out = []
        for idx, c in enumerate(self.crossings):
            if c.over.loop == loop:
                out.append((c.over, idx, True))
            if c.under.loop == loop:
                out.append((c.under, idx, False))
        out.sort(key=lambda e: (e[0].seg, e[0].t))
        return out


def _loop_segments(points: tuple[Point3, ...]) -> list[tuple[int, Point3, Point3]]:
    n = len(points)
    return [(i, points[i], points[(i + 1) % n]) for i in range(n)]


def project_to_diagram(loop_points: Sequence[tuple[Point3, ...]]) -> LinkDiagram:
    """Project closed loops to a crossing diagram, exactly.

    Raises :class:`DegenerateProjection` when the projection is not generic
    and :class:`DisjointnessViolated` when the loops meet in space.
    """
    loops = tuple(tuple(p for p in lp) for lp in loop_points)
    for li, lp in enumerate(loops):
        if len(lp) < 3:
            raise DisjointnessViolated(f"loop {li} has fewer than 3 points")
    all_segs: list[tuple[int, int, Point3, Point3]] = []
    for li, lp in enumerate(loops):
        for i, p, q in _loop_segments(lp):
            if p == q:
                raise DisjointnessViolated(f"loop {li} repeats a point")
            all_segs.append((li, i, p, q))

    for (li, i, p, q) in all_segs:
        if p.x == q.x and p.y == q.y:
            raise DegenerateProjection(
                f"vertical segment on loop {li}",
                (Violation("vertical-segment", (li, i)),),
            )

    def adjacent(sa, sb) -> Optional[Point3]:
        if sa[0] != sb[0]:
            return None
        n = len(loops[sa[0]])
        i, j = sa[1], sb[1]
        if (i + 1) % n == j:
            return sa[3]
        if (j + 1) % n == i:
            return sb[3]
        return None

    lo3 = lambda s: (
        min(s[2][0], s[3][0]),
        min(s[2][1], s[3][1]),
        min(s[2][2], s[3][2]),
    )
    hi3 = lambda s: (
        max(s[2][0], s[3][0]),
        max(s[2][1], s[3][1]),
        max(s[2][2], s[3][2]),
    )
    for i, j in _candidate_pairs(all_segs, lo3, hi3):
        sa, sb = all_segs[i], all_segs[j]
        kind, data = seg3_relation(sa[2], sa[3], sb[2], sb[3])
        if kind == "none":
            continue
        shared = adjacent(sa, sb)
        if kind == "point" and shared is not None:
            px, py, pz = data
            if px == shared[0] and py == shared[1] and pz == shared[2]:
                continue
        raise DisjointnessViolated(
            f"loops {sa[0]} and {sb[0]} intersect in space (segments {sa[1]},{sb[1]})"
        )

    lo2 = lambda s: (min(s[2][0], s[3][0]), min(s[2][1], s[3][1]))
    hi2 = lambda s: (max(s[2][0], s[3][0]), max(s[2][1], s[3][1]))
    raw: list[Crossing] = []
    seen_points: dict[tuple[Fraction, Fraction], tuple] = {}
    for i, j in _candidate_pairs(all_segs, lo2, hi2):
        sa, sb = all_segs[i], all_segs[j]
        kind, data = seg2_relation(sa[2], sa[3], sb[2], sb[3])
        if kind == "none":
            continue
        shared = adjacent(sa, sb)
        if kind in ("touch", "overlap"):
            if kind == "touch" and shared is not None and data == (shared[0], shared[1]):
                continue
            raise DegenerateProjection(
                f"non-transversal contact between loop {sa[0]} seg {sa[1]} "
                f"and loop {sb[0]} seg {sb[1]}",
                (Violation("projection-" + kind, (sa[0], sa[1], sb[0], sb[1])),),
            )
        t_num, u_num, den = data
        t = Fraction(t_num, den)
        u = Fraction(u_num, den)
        pa, qa = sa[2], sa[3]
        pb, qb = sb[2], sb[3]
        za = pa[2] + t * (qa[2] - pa[2])
        zb = pb[2] + u * (qb[2] - pb[2])
        assert za != zb, "equal heights at a crossing of disjoint segments"
        px = pa[0] + t * (qa[0] - pa[0])
        py = pa[1] + t * (qa[1] - pa[1])
        key = (px, py)
        if key in seen_points:
            raise DegenerateProjection(
                f"triple point at ({px},{py})",
                (Violation("triple-point", (sa[0], sa[1], sb[0], sb[1])),),
            )
        seen_points[key] = (i, j)
        if za > zb:
            over = StrandPos(sa[0], sa[1], t)
            under = StrandPos(sb[0], sb[1], u)
            odx, ody = qa[0] - pa[0], qa[1] - pa[1]
            udx, udy = qb[0] - pb[0], qb[1] - pb[1]
        else:
            over = StrandPos(sb[0], sb[1], u)
            under = StrandPos(sa[0], sa[1], t)
            odx, ody = qb[0] - pb[0], qb[1] - pb[1]
            udx, udy = qa[0] - pa[0], qa[1] - pa[1]
        s = cross2(odx, ody, udx, udy)
        sign = 1 if s > 0 else -1
        raw.append(Crossing(over=over, under=under, sign=sign, point=(px, py)))

    raw.sort(key=lambda c: (c.over, c.under))
    return LinkDiagram(loops=loops, crossings=tuple(raw))


# ---------------------------------------------------------------------------
# shearing


def shear_points(points: Iterable[Point3], kx: int, ky: int = 0) -> tuple[Point3, ...]:
    """Apply (x, y, z) -> (x + kx*z, y + ky*z, z) to a point sequence.

    Both slopes are needed: a degeneracy lying in a plane y = const
    survives every pure x-shear, and vice versa.
    """
    out = []
    for p in points:
        nx = p[0] + kx * p[2]
        ny = p[1] + ky * p[2]
        if abs(nx) > COORD_LIMIT or abs(ny) > COORD_LIMIT:
            raise CoordinateOverflow("shear pushed a coordinate past the exact bound")
        out.append(Point3(nx, ny, p[2]))
    return tuple(out)


def shear(emb: SpatialEmbedding, kx: int, ky: int = 0) -> SpatialEmbedding:
    """Shear a whole embedding.  Height (z) is untouched, so every over/under
    relation, and hence every invariant, is preserved."""
    new_vertices = {
        v: Point3(p.x + kx * p.z, p.y + ky * p.z, p.z) for v, p in emb.vertices.items()
    }
    new_arcs = {key: PolyLine(shear_points(arc.points, kx, ky)) for key, arc in emb.arcs.items()}
    new_box = 0
    for p in new_vertices.values():
        new_box = max(new_box, abs(p.x), abs(p.y), abs(p.z))
    for a in new_arcs.values():
        for p in a.points:
            new_box = max(new_box, abs(p.x), abs(p.y), abs(p.z))
    if new_box > COORD_LIMIT:
        raise CoordinateOverflow("shear pushed a coordinate past the exact bound")
    return SpatialEmbedding(vertices=new_vertices, arcs=new_arcs, box=max(new_box, emb.box))
