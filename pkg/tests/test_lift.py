from fractions import Fraction

import pytest

from fpt.framing import FramingError, is_delzant, validate
from fpt.lift import (LiftError, lift_and_frame, make_qpq, realize_weighted,
                      retarget_weights)
from fpt.morita import decide_morita, facet_weight, facet_weights
from fpt.polytope import (HPolyhedron, UnboundedError, VPolytope, enumerate_vertices)
from fpt.scalar import sqrt

UNIT = HPolyhedron(1, (((1,), 0), ((-1,), -1)))
TRIANGLE = HPolyhedron(2, (((1, 0), 0), ((0, 1), 0), ((-2, -1), -2)))
SQUARE = VPolytope(2, [(0, 0), (1, 0), (0, 1), (1, 1)])


def test_unit_interval_lift():
    res = lift_and_frame(UNIT)
    assert res.framed.ambient_dim == 3
    assert res.framed.polytope.vertices == ((0, 0, 1), (1, 1, 0))
    assert res.M == 2
    assert res.is_integral_iso and res.projection_bijective()
    assert is_delzant(enumerate_vertices(res.box)).ok
    assert validate(res.framed).ok


def test_triangle_lift_weights():
    res = lift_and_frame(TRIANGLE)
    assert res.framed.ambient_dim == 5
    assert res.weights == (1, 1, 1)
    assert tuple(facet_weight(res.framed, i) for i in range(3)) == (1, 1, 1)
    assert validate(res.framed).ok


def test_unnormalized_rows_keep_their_gcd():
    H = HPolyhedron(1, (((2,), 0), ((-3,), -3)))
    res = lift_and_frame(H, normalize=False)
    assert res.weights == (2, 3)
    assert facet_weights(res.framed) == (2, 3)


def test_sqrt2_segment_lift():
    r2 = sqrt(2)
    seg = HPolyhedron(2, (((1, 0), 0), ((-1, 0), -1)), (((r2, -1), 0),))
    res = lift_and_frame(seg)
    rep = validate(res.framed)
    assert rep.ok and rep.rational_faced
    assert res.projection_bijective()
    assert res.framed.polytope.vertices == ((0, 0, 0, 1), (1, r2, 1, 0))


def test_redundant_rows():
    H = HPolyhedron(1, (((1,), 0), ((-1,), -1), ((1,), -5), ((2,), 0)))
    with pytest.raises(LiftError, match="redundant rows"):
        lift_and_frame(H)
    res = lift_and_frame(H, strip_redundant=True)
    assert len(res.rows) == 2


def test_lift_rejects_bad_input():
    with pytest.raises(UnboundedError):
        lift_and_frame(HPolyhedron(1, (((1,), 0),)))
    with pytest.raises(LiftError):
        lift_and_frame(HPolyhedron(1, (((1,), 1), ((-1,), 0))))


def test_qpq():
    assert facet_weights(make_qpq(1, 1, 0)) == (1, 1)
    assert facet_weights(make_qpq(1, 2, 1)) == (1, 2)
    assert validate(make_qpq(Fraction(3, 2), 5, -3)).ok
    with pytest.raises(FramingError):
        make_qpq(1, 2, 2)
    with pytest.raises(FramingError):
        make_qpq(0, 1, 0)


def test_retarget():
    res = lift_and_frame(UNIT)
    assert retarget_weights(res, 0, 3).weights == (3, 1)
    assert facet_weights(retarget_weights(res, 0, 3).framed) == (3, 1)
    same = retarget_weights(res, 1, 1)
    assert same.framed.germ_set() == res.framed.germ_set()
    both = retarget_weights(retarget_weights(res, 0, 2), 1, 5)
    assert facet_weights(both.framed) == (2, 5)
    with pytest.raises(LiftError):
        retarget_weights(res, 0, 0)


def test_realize_weighted():
    plain = realize_weighted(SQUARE, (1, 1, 1, 1))
    assert facet_weights(plain.framed) == (1, 1, 1, 1)
    w = realize_weighted(SQUARE, (2, 3, 1, 5))
    assert facet_weights(w.framed) == (2, 3, 1, 5)
    assert validate(w.framed).ok
    with pytest.raises(LiftError):
        realize_weighted(SQUARE, (1, 2))


def test_realize_weighted_segment_matches_qpq_class():
    seg = VPolytope(1, [(0,), (1,)])
    F = realize_weighted(seg, (7, 1)).framed
    assert decide_morita(F, make_qpq(1, 7, 3)).equivalent
    assert not decide_morita(F, make_qpq(1, 5, 3)).equivalent


def test_realize_weighted_rejects_non_simple():
    pyramid = VPolytope(3, [(0, 0, 0), (2, 0, 0), (0, 2, 0), (2, 2, 0), (1, 1, 1)])
    with pytest.raises(LiftError):
        realize_weighted(pyramid, (1,) * 5)
