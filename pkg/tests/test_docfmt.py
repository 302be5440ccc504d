import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from _gen import random_bounded_h
from fpt.docfmt import Document, DocumentError, emit_document, parse_document
from fpt.lift import lift_and_frame, make_qpq
from fpt.polytope import HPolyhedron, VPolytope, enumerate_vertices
from fpt.scalar import sqrt

SQUARE = ("kind polytope-h dim 2\nname square\n"
          "ineq -1 0 : -1\nineq 0 -1 : -1\nineq 0 1 : 0\nineq 1 0 : 0\n")


def test_square_roundtrip_is_byte_identical():
    assert emit_document(parse_document(SQUARE)) == SQUARE


def test_radical_scalar_roundtrip():
    text = "kind polytope-v dim 1 sqrt 2\nvertex 0\nvertex 3/2+1/1*sqrt(2)\n"
    doc = parse_document(text)
    assert doc.radicand == 2
    assert doc.payload.vertices[1] == (sqrt(2) + Fraction(3, 2),)
    assert emit_document(doc) == text


def test_comments_blank_lines_and_order():
    text = ("# a comment\n\nkind polytope-v dim 2  # trailing\n"
            "vertex 1 1\nvertex 0 0 # origin\n")
    assert emit_document(parse_document(text)) == \
        "kind polytope-v dim 2\nvertex 0 0\nvertex 1 1\n"


def test_mixed_radicands_error():
    with pytest.raises(DocumentError, match="radicand"):
        parse_document("kind polytope-v dim 1\nvertex 1+1/1*sqrt(2)\nvertex sqrt(3)\n")
    with pytest.raises(DocumentError, match="radicand"):
        parse_document("kind polytope-v dim 1 sqrt 5\nvertex sqrt(2)\n")


@pytest.mark.parametrize("text,where", [
    ("vertex 1\n", "line 1"),
    ("kind polytope-x dim 1\n", "line 1, column 6"),
    ("kind polytope-v dim 2\nvertex 1 2/\n", "line 2, column 10"),
    ("kind polytope-v dim 2\nvertex 1\n", "line 2"),
    ("kind polytope-h dim 2\nineq 1 0 0\n", "line 2"),
    ("kind polytope-h dim 2\nvertex 1 0\n", "line 2"),
    ("kind framed dim 2\ndir 1 0\n", "base"),
    ("kind polytope-v dim 1\nbogus 1\n", "line 2, column 1"),
])
def test_syntax_errors_have_positions(text, where):
    with pytest.raises(DocumentError) as info:
        parse_document(text)
    assert where in str(info.value)


def test_shape_error():
    with pytest.raises(DocumentError, match="shape"):
        parse_document("kind framed dim 2\nbase 0 0\ndir 1 0\ndir 2 0\nfacet 1 0 : 0\n")


def test_framed_roundtrip():
    for F in (make_qpq(1, 2, 1), make_qpq(sqrt(3), 3, -1),
              lift_and_frame(HPolyhedron(1, (((1,), 0), ((-1,), -1)))).framed):
        text = emit_document(Document.of(F))
        doc = parse_document(text)
        assert doc.payload.germ_set() == F.normalized().germ_set()
        assert emit_document(doc) == text


def test_emit_is_canonical_for_equivalent_inputs():
    a = HPolyhedron(1, (((2,), 0), ((-1,), -1)))
    b = HPolyhedron(1, (((-3,), -3), ((1,), 0)))
    assert emit_document(Document.of(a)) == emit_document(Document.of(b))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_roundtrips(seed):
    rng = random.Random(seed)
    H = random_bounded_h(rng, rng.randint(1, 3), rng.randint(0, 3))
    text = emit_document(Document.of(H))
    assert emit_document(parse_document(text)) == text
    V = enumerate_vertices(H)
    vt = emit_document(Document.of(V))
    assert parse_document(vt).payload == V
