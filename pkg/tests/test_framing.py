from fractions import Fraction

import pytest

from fpt.framing import (EmptySliceError, FramedPolytope, FramingError,
                         NonTransversalError, canonical_embedding, germ_hpolyhedron,
                         irrationality_degree, is_delzant, is_rational_faced,
                         is_regular_germ, slice_framing, transversality, validate)
from fpt.lift import lift_and_frame
from fpt.morita import polytope_iso
from fpt.polytope import HPolyhedron, VPolytope, enumerate_vertices, irredundant_hrep
from fpt.scalar import sqrt

QUADRANT = HPolyhedron(2, (((1, 0), 0), ((0, 1), 0)))
STRIP_BOX = HPolyhedron(2, (((1, 0), 0), ((-1, 0), -1), ((0, 1), -5), ((0, -1), -5)))
R2 = sqrt(2)


def test_slice_quadrant_corner():
    F = slice_framing(QUADRANT, (1, 0), [(-1, 1)], "hopf")
    assert len(F.germ) == 2
    assert sorted(F.vertex_points) == [(0, 1), (1, 0)]
    assert validate(F).ok


def test_slice_strip_drops_box_facets():
    F = slice_framing(STRIP_BOX, (0, 0), [(1, 0)])
    assert sorted(F.germ) == [((-1, 0), -1), ((1, 0), 0)]
    assert validate(F).ok


def test_slice_misses():
    with pytest.raises(EmptySliceError):
        slice_framing(QUADRANT, (-1, -1), [(1, -1)])


def test_slice_unbounded():
    with pytest.raises(FramingError):
        slice_framing(QUADRANT, (0, 0), [(1, 1)])


def test_slice_not_transversal():
    Q = HPolyhedron(2, (((1, 0), 0), ((-1, 0), -1), ((0, 1), 0), ((0, -1), -1)))
    with pytest.raises(NonTransversalError):
        slice_framing(Q, (0, 0), [(1, 1)])


def test_lift_of_simplex_validates():
    simplex = HPolyhedron(2, (((1, 0), 0), ((0, 1), 0), ((-1, -1), -1)))
    rep = validate(lift_and_frame(simplex).framed)
    assert rep.ok and rep.as_dict()["ok"] is True


def test_germ_not_canonical():
    F = FramedPolytope(2, (0, 0), ((1, 0),), (((1, 0), 0), ((-1, 0), -1), ((1, 0), -5)))
    rep = validate(F)
    assert not rep.germ_canonical and rep.witnesses["germ_canonical"] == 2
    assert not rep.ok


def test_irregular_germ():
    # covectors (1,0,0) and (1,2,0) active at the origin: Smith invariants {1, 2}
    F = FramedPolytope(3, (0, 0, 0), ((1, 0, 0), (0, 1, 0)),
                       (((1, 0, 0), 0), ((1, 2, 0), 0), ((-1, 0, 0), -1), ((0, -1, 0), -1)))
    assert transversality(F)[0]
    ok, witness = is_regular_germ(F)
    assert not ok and witness == frozenset({0, 1})
    rep = validate(F)
    assert rep.transversal and not rep.regular


def test_non_simple_lift_is_not_transversal():
    pyramid = VPolytope(3, [(0, 0, 0), (2, 0, 0), (0, 2, 0), (2, 2, 0), (1, 1, 1)])
    rep = validate(lift_and_frame(irredundant_hrep(pyramid)).framed)
    assert not rep.transversal and not rep.simple


def test_unbounded_framing_reported():
    F = FramedPolytope(2, (0, 0), ((1, 0),), (((1, 0), 0),))
    rep = validate(F)
    assert not rep.bounded and not rep.ok


def test_rational_faced():
    assert is_rational_faced(VPolytope(2, [(0, 0), (3, 1), (Fraction(1, 2), 4)]))[0]
    assert is_rational_faced(VPolytope(2, [(0, 0), (1, R2)]))[0]
    ok, certs = is_rational_faced(VPolytope(2, [(0, 0), (1, R2), (1, 0)]))
    assert not ok and sum(c is None for c in certs) == 1


def test_delzant():
    assert is_delzant(VPolytope(2, [(0, 0), (1, 0), (0, 1)])).ok
    cube = VPolytope(3, [tuple((m >> i) & 1 for i in range(3)) for m in range(8)])
    assert is_delzant(cube).ok
    rep = is_delzant(VPolytope(2, [(0, 0), (1, 0), (0, 2)]))
    assert not rep.ok and rep.witness_vertex == (1, 0) and rep.witness_det == 2


def test_box_of_any_lift_is_delzant():
    tri = HPolyhedron(2, (((1, 0), 0), ((0, 1), 0), ((-2, -1), -2)))
    res = lift_and_frame(tri)
    assert is_delzant(enumerate_vertices(res.box)).ok


def test_irrationality_degree():
    assert irrationality_degree(VPolytope(2, [(0, 0), (1, 0), (0, 1), (1, 1)])).degree == 0
    rep = irrationality_degree(VPolytope(2, [(0, 0), (1, R2)]))
    assert (rep.daff_rank, rep.degree) == (2, 1)
    tri = VPolytope(3, [(0, 0, 0), (1, 0, 0), (0, 1, 0)])
    assert irrationality_degree(tri).degree == 0


def test_canonical_embedding():
    square = VPolytope(2, [(0, 0), (1, 0), (0, 1), (1, 1)])
    lifted = VPolytope(4, [(x, y, x + y, 2 * x - y) for x, y in square.vertices])
    image, G = canonical_embedding(lifted)
    assert image.ambient_dim == 2
    assert polytope_iso(image, square) is not None
    seg = VPolytope(2, [(0, 0), (1, R2)])
    image, _ = canonical_embedding(seg)
    assert image == seg
    image, G = canonical_embedding(VPolytope(3, [(1, 2, 3)]))
    assert image.ambient_dim == 0 and G == ()


def test_germ_hpolyhedron_contains_polytope():
    F = slice_framing(QUADRANT, (1, 0), [(-1, 1)])
    Q, n = germ_hpolyhedron(F)
    assert n == 2 and all(Q.contains(v) for v in F.vertex_points)


def test_transform_preserves_validity():
    F = slice_framing(QUADRANT, (1, 0), [(-1, 1)])
    G = F.transformed([[2, 1], [1, 1]], (3, -1))
    assert validate(G).ok
    assert sorted(G.vertex_points) == sorted(
        (2 * x + y + 3, x + y - 1) for x, y in F.vertex_points)
