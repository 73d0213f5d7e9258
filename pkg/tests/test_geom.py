"""Exact predicates, embedding validation, projection, shearing."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dilink.errors import (
    CoordinateOverflow,
    DegenerateProjection,
    DisjointnessViolated,
)
from dilink.geom import (
    COORD_LIMIT,
    Point3,
    PolyLine,
    SpatialEmbedding,
    orient2,
    project_to_diagram,
    seg2_relation,
    seg3_relation,
    shear,
    shear_points,
    validate_general_position,
)

from conftest import hand_hopf, square_loop, tiny_embedding

P = Point3


# ---------------------------------------------------------------------------
# container validation


def test_polyline_needs_two_points():
    with pytest.raises(ValueError):
        PolyLine([P(0, 0, 0)])


def test_polyline_rejects_repeated_point():
    with pytest.raises(ValueError):
        PolyLine([P(0, 0, 0), P(1, 0, 0), P(1, 0, 0)])


def test_embedding_rejects_coincident_vertices():
    with pytest.raises(ValueError, match="coincide"):
        SpatialEmbedding({0: P(0, 0, 0), 1: P(0, 0, 0)}, {}, box=8)


def test_embedding_rejects_detached_arc():
    v = {0: P(0, 0, 0), 1: P(4, 0, 0)}
    with pytest.raises(ValueError, match="join"):
        SpatialEmbedding(v, {(0, 1): PolyLine([P(1, 1, 1), v[1]])}, box=8)


def test_embedding_rejects_out_of_box():
    with pytest.raises(CoordinateOverflow):
        SpatialEmbedding({0: P(100, 0, 0), 1: P(0, 1, 0)}, {}, box=8)


def test_embedding_rejects_loop_edge():
    v = {0: P(0, 0, 0)}
    with pytest.raises(ValueError, match="loop"):
        SpatialEmbedding(v, {(0, 0): PolyLine([v[0], P(1, 1, 1), v[0]])}, box=8)


def test_segment_count(grid13):
    emb = grid13.embedding
    assert emb.segment_count() == sum(
        len(a.points) - 1 for a in emb.arcs.values()
    )


# ---------------------------------------------------------------------------
# 3D segment predicate


def test_seg3_skew():
    kind, data = seg3_relation(P(0, 0, 0), P(4, 0, 0), P(1, 1, 1), P(1, 4, 3))
    assert (kind, data) == ("none", None)


def test_seg3_proper_point_is_exact():
    kind, data = seg3_relation(P(0, 0, 0), P(2, 2, 0), P(0, 2, 0), P(2, 0, 0))
    assert kind == "point"
    assert data == (Fraction(1), Fraction(1), Fraction(0))


def test_seg3_interior_point_fractional():
    kind, data = seg3_relation(P(0, 0, 0), P(3, 0, 0), P(1, -1, 0), P(1, 2, 0))
    assert kind == "point" and data == (1, 0, 0)


def test_seg3_collinear_overlap():
    kind, _ = seg3_relation(P(0, 0, 0), P(4, 0, 0), P(2, 0, 0), P(6, 0, 0))
    assert kind == "overlap"


def test_seg3_collinear_disjoint():
    kind, _ = seg3_relation(P(0, 0, 0), P(1, 0, 0), P(3, 0, 0), P(5, 0, 0))
    assert kind == "none"


def test_seg3_collinear_endpoint_touch():
    kind, data = seg3_relation(P(0, 0, 0), P(2, 0, 0), P(2, 0, 0), P(5, 0, 0))
    assert kind == "point" and data == (2, 0, 0)


def test_seg3_parallel_offset():
    kind, _ = seg3_relation(P(0, 0, 0), P(4, 0, 0), P(0, 1, 0), P(4, 1, 0))
    assert kind == "none"


def test_seg3_coplanar_crossing_out_of_range():
    # lines meet, segments stop short
    kind, _ = seg3_relation(P(0, 0, 0), P(1, 0, 0), P(3, -1, 0), P(3, 1, 0))
    assert kind == "none"


# ---------------------------------------------------------------------------
# projected predicate


def test_seg2_proper_parameters():
    kind, (t_num, u_num, den) = seg2_relation(
        P(0, 0, 0), P(4, 0, 9), P(1, -2, 3), P(1, 2, -5)
    )
    assert kind == "proper"
    assert den > 0
    assert Fraction(t_num, den) == Fraction(1, 4)
    assert Fraction(u_num, den) == Fraction(1, 2)


def test_seg2_touch_endpoint_on_interior():
    kind, data = seg2_relation(P(0, 0, 0), P(4, 0, 0), P(2, 0, 5), P(2, 3, 5))
    assert kind == "touch" and data == (2, 0)


def test_seg2_overlap_and_none():
    assert seg2_relation(P(0, 0, 0), P(4, 0, 1), P(1, 0, 7), P(6, 0, 7))[0] == "overlap"
    assert seg2_relation(P(0, 0, 0), P(1, 0, 0), P(5, 5, 0), P(6, 5, 0))[0] == "none"


def test_seg2_collinear_single_touch():
    kind, data = seg2_relation(P(0, 0, 0), P(2, 0, 0), P(2, 0, 9), P(6, 0, 9))
    assert kind == "touch" and data == (2, 0)


@given(
    st.tuples(st.integers(-50, 50), st.integers(-50, 50)),
    st.tuples(st.integers(-50, 50), st.integers(-50, 50)),
    st.tuples(st.integers(-50, 50), st.integers(-50, 50)),
)
def test_orient2_antisymmetry(p, q, r):
    assert orient2(p, q, r) == -orient2(q, p, r)
    assert orient2(p, q, r) == orient2(q, r, p)


@given(
    st.tuples(
        st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20)
    ),
    st.tuples(
        st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20)
    ),
    st.tuples(
        st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20)
    ),
    st.tuples(
        st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20)
    ),
)
def test_seg2_symmetric_in_arguments(a, b, c, d):
    p, q, r, s = (P(*a), P(*b), P(*c), P(*d))
    if p == q or r == s:
        return
    k1, _ = seg2_relation(p, q, r, s)
    k2, _ = seg2_relation(r, s, p, q)
    assert k1 == k2


# ---------------------------------------------------------------------------
# general position validation


def test_validate_clean_embedding():
    assert validate_general_position(tiny_embedding()).ok


def test_validate_flags_vertical_segment():
    v = {0: P(0, 0, 0), 1: P(0, 0, 5)}
    emb = SpatialEmbedding(
        v, {(0, 1): PolyLine([v[0], v[1]])}, box=8
    )
    kinds = validate_general_position(emb).kinds()
    assert "vertical-segment" in kinds


def test_validate_flags_3d_intersection():
    v = {0: P(0, 0, 0), 1: P(4, 0, 0), 2: P(2, -2, 0), 3: P(2, 2, 0)}
    emb = SpatialEmbedding(
        v,
        {
            (0, 1): PolyLine([v[0], v[1]]),
            (2, 3): PolyLine([v[2], v[3]]),
        },
        box=8,
    )
    assert "arc-intersection-3d" in validate_general_position(emb).kinds()


def test_validate_flags_projection_tangency():
    # arcs disjoint in space but touching in the shadow
    v = {0: P(0, 0, 0), 1: P(4, 0, 0), 2: P(2, -2, 5), 3: P(2, 2, 5)}
    emb = SpatialEmbedding(
        v,
        {
            (0, 1): PolyLine([v[0], v[1]]),
            (2, 3): PolyLine([v[2], Point3(2, 0, 6), v[3]]),
        },
        box=8,
    )
    kinds = validate_general_position(emb).kinds()
    assert "projection-tangency" in kinds


def test_validate_flags_vertex_on_arc():
    v = {0: P(0, 0, 0), 1: P(4, 0, 0), 2: P(2, 0, 0), 3: P(2, 5, 1)}
    emb = SpatialEmbedding(
        v,
        {
            (0, 1): PolyLine([v[0], v[1]]),
            (2, 3): PolyLine([v[2], v[3]]),
        },
        box=8,
    )
    assert "vertex-on-arc-3d" in validate_general_position(emb).kinds()


def test_validate_subset_of_arcs(grid13):
    emb = grid13.embedding
    some = list(emb.arcs)[:4]
    assert validate_general_position(emb, arc_keys=some).ok


def test_generated_instances_validate(grid13, grid22, bigz_n2, wrap45, coil4):
    for inst in (grid13, grid22, bigz_n2, wrap45, coil4):
        assert validate_general_position(inst.embedding).ok


# ---------------------------------------------------------------------------
# diagrams


def test_hand_hopf_has_two_equal_sign_crossings():
    a, b = hand_hopf()
    d = project_to_diagram([a, b])
    inter = [c for c in d.crossings if c.over.loop != c.under.loop]
    assert len(inter) == 2
    assert abs(sum(c.sign for c in inter)) == 2


def test_planar_square_has_no_crossings():
    d = project_to_diagram([square_loop()])
    assert d.crossings == ()


def test_diagram_is_deterministic(trefoil_points):
    d1 = project_to_diagram([trefoil_points])
    d2 = project_to_diagram([trefoil_points])
    assert d1 == d2
    assert len(d1.crossings) == 3


def test_project_rejects_intersecting_loops():
    sq = square_loop(z=0)
    with pytest.raises(DisjointnessViolated):
        project_to_diagram([sq, square_loop(z=0, dx=5)])


def test_project_rejects_vertical_segment():
    loop = (P(0, 0, 0), P(4, 0, 0), P(4, 0, 3), P(0, 2, 1))
    with pytest.raises(DegenerateProjection):
        project_to_diagram([loop])


def test_project_rejects_shadow_overlap():
    # stacked identical squares: every segment overlaps in projection
    with pytest.raises(DegenerateProjection):
        project_to_diagram([square_loop(z=0), square_loop(z=7)])


def test_passes_are_ordered_along_loop(trefoil_points):
    d = project_to_diagram([trefoil_points])
    ps = d.passes(0)
    assert len(ps) == 2 * len(d.crossings)
    assert ps == sorted(ps, key=lambda e: (e[0].seg, e[0].t))


# ---------------------------------------------------------------------------
# shearing


def test_shear_points_formula():
    pts = shear_points([P(1, 2, 3)], kx=10, ky=-2)
    assert pts == (P(31, -4, 3),)


def test_gentle_shear_keeps_crossing_structure(trefoil_points):
    base = project_to_diagram([trefoil_points])
    assert len(base.crossings) == 3
    for kx, ky in ((1, 0), (0, 1), (1, 1), (2, 1)):
        tilted = project_to_diagram([shear_points(trefoil_points, kx, ky)])
        assert len(tilted.crossings) == 3
        assert sorted(c.sign for c in tilted.crossings) == sorted(
            c.sign for c in base.crossings
        )


def test_strong_shear_adds_cancelling_pairs(trefoil_points):
    # a steep tilt creates extra crossings, but only in +/- pairs
    tilted = project_to_diagram([shear_points(trefoil_points, 7, 3)])
    base = project_to_diagram([trefoil_points])
    assert len(tilted.crossings) > len(base.crossings)
    assert sum(c.sign for c in tilted.crossings) == sum(
        c.sign for c in base.crossings
    )


def test_shear_embedding_keeps_heights(grid13):
    emb = shear(grid13.embedding, kx=3, ky=2)
    for vid, p in grid13.embedding.vertices.items():
        assert emb.vertices[vid].z == p.z
    assert validate_general_position(emb).ok


def test_shear_overflow_guard():
    with pytest.raises(CoordinateOverflow):
        shear_points([P(0, 0, 2)], kx=COORD_LIMIT)


def test_shear_can_fix_degenerate_projection():
    # stacked squares overlap in the shadow until tilted
    loops = [square_loop(z=0), square_loop(z=7)]
    with pytest.raises(DegenerateProjection):
        project_to_diagram(loops)
    tilted = [shear_points(lp, 1, 2) for lp in loops]
    d = project_to_diagram(tilted)
    inter = [c for c in d.crossings if c.over.loop != c.under.loop]
    assert sum(c.sign for c in inter) == 0  # split pair
