"""Linking numbers and the second Conway coefficient, exactly.

Two independent routes are provided for the knot coefficient: a signed
count of interleaved crossing pairs read off the diagram, and a skein
evaluator that resolves crossings recursively.  They share nothing beyond
the projection code, so tests can play them against each other.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

from .errors import DegenerateProjection, TooLarge
from .geom import LinkDiagram, Point3, project_to_diagram, shear_points

__all__ = [
    "ProjectionResult",
    "project_with_retry",
    "linking_table",
    "linking_number",
    "omega",
    "ChordSums",
    "interleaved_pair_sums",
    "a2",
    "a2_skein",
    "conway_polynomial",
    "conway_from_diagram",
]


def _loop_points(obj) -> tuple[Point3, ...]:
    # accepts anything with .points (realized cycles) or a bare sequence
    pts = getattr(obj, "points", obj)
    return tuple(pts)


class ProjectionResult(NamedTuple):
    diagram: LinkDiagram
    shear: tuple[int, int]


def shear_schedule(n: int) -> list[tuple[int, int]]:
    """First n slope pairs (kx, ky), sweeping diagonals of the integer
    quadrant so any finite set of bad directions is eventually escaped."""
    out: list[tuple[int, int]] = []
    s = 0
    while len(out) < n:
        for a in range(s, -1, -1):
            out.append((a, s - a))
            if len(out) == n:
                break
        s += 1
    return out


def project_with_retry(loops: Sequence, max_tries: int = 120) -> ProjectionResult:
    """Project loops to a diagram, shearing until the projection is generic.

    The shear (x, y, z) -> (x + kx*z, y + ky*z, z) keeps every height, so
    the diagram still describes the original curves.  Only degenerate
    projections are retried; intersections in space are real errors and
    propagate immediately.
    """
    point_lists = [_loop_points(l) for l in loops]
    if not point_lists:
        raise ValueError("need at least one loop")
    last: DegenerateProjection | None = None
    for kx, ky in shear_schedule(max_tries):
        sheared = (
            point_lists
            if kx == 0 and ky == 0
            else [shear_points(pts, kx, ky) for pts in point_lists]
        )
        try:
            return ProjectionResult(project_to_diagram(sheared), (kx, ky))
        except DegenerateProjection as exc:
            last = exc
    assert last is not None
    raise DegenerateProjection(
        f"no generic projection after {max_tries} shears: {last}", last.violations
    )


# ---------------------------------------------------------------------------
# linking


def linking_table(loops: Sequence) -> dict[tuple[int, int], int]:
    """Linking number of every component pair, from one shared projection.

    Keys are (i, j) with i < j in the order the loops were given.
    """
    diagram, _ = project_with_retry(loops)
    sums: dict[tuple[int, int], int] = {}
    for c in diagram.crossings:
        a, b = c.over.loop, c.under.loop
        if a != b:
            key = (a, b) if a < b else (b, a)
            sums[key] = sums.get(key, 0) + c.sign
    out: dict[tuple[int, int], int] = {}
    n = len(diagram.loops)
    for i in range(n):
        for j in range(i + 1, n):
            s = sums.get((i, j), 0)
            assert s % 2 == 0, "odd signed crossing sum between two components"
            out[(i, j)] = s // 2
    return out


def linking_number(a, b) -> int:
    """Linking number of two disjoint closed curves: half the signed sum of
    the crossings between them."""
    return linking_table([a, b])[(0, 1)]


def omega(a, b) -> int:
    """Linking number mod 2, as 0 or 1."""
    return linking_number(a, b) & 1


# ---------------------------------------------------------------------------
# second Conway coefficient, route 1: interleaved crossing pairs


class ChordSums(NamedTuple):
    oo: int
    ou: int
    uo: int
    uu: int


def _single_loop_passes(diagram: LinkDiagram) -> list[tuple[int, bool, int]]:
    if len(diagram.loops) != 1:
        raise ValueError("knot invariants need a single closed loop")
    return [(idx, over, diagram.crossings[idx].sign) for (_, idx, over) in diagram.passes(0)]


def interleaved_pair_sums(diagram: LinkDiagram) -> ChordSums:
    """Signed counts of interleaved crossing pairs on a knot diagram.

    Walk the knot once; each crossing is visited twice.  Crossings a and b
    interleave when their visits alternate a, b, a, b around the walk.
    Each interleaved pair contributes sign(a) * sign(b) to one of four
    buckets named by whether a and b are first visited on the over or the
    under strand (a is the one visited first).
    """
    seq = _single_loop_passes(diagram)
    first: dict[int, int] = {}
    second: dict[int, int] = {}
    info: dict[int, tuple[bool, int]] = {}
    for pos, (cid, over, sign) in enumerate(seq):
        if cid not in first:
            first[cid] = pos
            info[cid] = (over, sign)
        else:
            second[cid] = pos
    sums = {"oo": 0, "ou": 0, "uo": 0, "uu": 0}
    cids = sorted(first, key=lambda c: first[c])
    for ia, a in enumerate(cids):
        for b in cids[ia + 1 :]:
            if not (first[b] < second[a] < second[b]):
                continue
            over_a, sign_a = info[a]
            over_b, sign_b = info[b]
            key = ("o" if over_a else "u") + ("o" if over_b else "u")
            sums[key] += sign_a * sign_b
    return ChordSums(**sums)


def a2(knot) -> int:
    """Second Conway coefficient of a knot via the interleaved-pair count.

    This is the bucket of pairs whose earlier crossing is first met over
    and whose later crossing is first met under; the value is independent
    of where the walk starts and of the knot's orientation.
    """
    diagram, _ = project_with_retry([knot])
    return interleaved_pair_sums(diagram).ou


# ---------------------------------------------------------------------------
# second Conway coefficient, route 2: skein recursion

PassEntry = tuple[int, bool, int]
PassList = tuple[PassEntry, ...]
Poly = dict[int, int]


def _canonical(passes: tuple[PassList, ...]) -> tuple[PassList, ...]:
    # renumber crossing ids by first appearance so equal shapes share memo hits
    relabel: dict[int, int] = {}
    out = []
    for comp in passes:
        oc = []
        for cid, over, sign in comp:
            r = relabel.setdefault(cid, len(relabel))
            oc.append((r, over, sign))
        out.append(tuple(oc))
    return tuple(out)


def _padd(p: Poly, q: Poly) -> Poly:
    out = dict(p)
    for d, c in q.items():
        s = out.get(d, 0) + c
        if s:
            out[d] = s
        else:
            out.pop(d, None)
    return out


def _pzmul(p: Poly, k: int) -> Poly:
    # multiply by k*z, k = +1 or -1
    return {d + 1: c * k for d, c in p.items()}


def _conway(passes: tuple[PassList, ...], memo: dict) -> Poly:
    key = _canonical(passes)
    got = memo.get(key)
    if got is not None:
        return got

    if any(not comp for comp in key):
        # a component with no crossings is split off
        result = {0: 1} if len(key) == 1 else {}
        memo[key] = result
        return result

    # first crossing met on the under strand, scanning components in order
    seen: set[int] = set()
    bad: tuple[int, int] | None = None
    for ci, comp in enumerate(key):
        for pi, (cid, over, _) in enumerate(comp):
            if cid in seen:
                continue
            seen.add(cid)
            if not over:
                bad = (ci, pi)
                break
        if bad:
            break
    if bad is None:
        # fully descending: an unknot, or a split collection of them
        result = {0: 1} if len(key) == 1 else {}
        memo[key] = result
        return result

    cid0 = key[bad[0]][bad[1]][0]
    locs = [
        (ci, pi)
        for ci, comp in enumerate(key)
        for pi, e in enumerate(comp)
        if e[0] == cid0
    ]
    assert len(locs) == 2
    (c1, p1), (c2, p2) = locs
    sign0 = key[c1][p1][2]

    switched = tuple(
        tuple(
            (cid, (not over) if cid == cid0 else over, -sign if cid == cid0 else sign)
            for (cid, over, sign) in comp
        )
        for comp in key
    )

    if c1 == c2:
        comp = key[c1]
        i, j = sorted((p1, p2))
        pieces = (comp[i + 1 : j], comp[j + 1 :] + comp[:i])
        smoothed = key[:c1] + pieces + key[c1 + 1 :]
    else:
        a_comp, b_comp = key[c1], key[c2]
        merged = a_comp[:p1] + b_comp[p2 + 1 :] + b_comp[:p2] + a_comp[p1 + 1 :]
        smoothed = key[:c1] + (merged,) + key[c1 + 1 : c2] + key[c2 + 1 :]

    result = _padd(_conway(switched, memo), _pzmul(_conway(smoothed, memo), sign0))
    memo[key] = result
    return result


def conway_from_diagram(diagram: LinkDiagram, max_crossings: int = 16) -> Poly:
    """Conway polynomial of a diagram by skein recursion, as {degree: coeff}.

    Exponential in the crossing number; refuses diagrams above the bound.
    """
    if len(diagram.crossings) > max_crossings:
        raise TooLarge(
            f"{len(diagram.crossings)} crossings exceed the skein bound of {max_crossings}"
        )
    passes = tuple(
        tuple((idx, over, diagram.crossings[idx].sign) for (_, idx, over) in diagram.passes(li))
        for li in range(len(diagram.loops))
    )
    return _conway(passes, {})


def conway_polynomial(loops: Sequence, max_crossings: int = 16) -> Poly:
    diagram, _ = project_with_retry(loops)
    return conway_from_diagram(diagram, max_crossings)


def a2_skein(knot, max_crossings: int = 16) -> int:
    """Second Conway coefficient by skein recursion.  Slow but independent
    of the pair-count route."""
    diagram, _ = project_with_retry([knot])
    if len(diagram.loops) != 1:
        raise ValueError("knot invariants need a single closed loop")
    poly = conway_from_diagram(diagram, max_crossings)
    assert poly.get(0, 0) == 1, "knot Conway polynomial must have constant term 1"
    return poly.get(2, 0)
