"""Box lifting of arbitrary polytopes to rational-faced slices of a Delzant
box, the Q_{p,q} family of framed segments, and weight retargeting."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from fpt import lattice, linalg
from fpt.framing import (FramedPolytope, FramingError, canonicalize,
                         canonical_embedding, irrationality_degree,
                         is_rational_faced)
from fpt.polytope import (HPolyhedron, VPolytope, affine_hull, canonical_row, dimension,
                          enumerate_vertices, irredundant_hrep, is_simple)
from fpt.scalar import ceil_scalar, scalar_sign, to_scalar


class LiftError(ValueError):
    pass


@dataclass(frozen=True)
class LiftResult:
    framed: FramedPolytope
    n: int
    rows: tuple            # (a, b) with F(x) = a.x + b >= 0, in input order
    equalities: tuple      # (u, c) with u.x = c, carried into the slice
    M: int
    box: HPolyhedron       # the full box before germ canonicalization
    is_integral_iso: bool
    source: VPolytope

    def project(self, point):
        return tuple(point[: self.n])

    def projection_bijective(self) -> bool:
        lifted = self.framed.polytope.vertices
        images = {self.project(v) for v in lifted}
        return len(images) == len(lifted) == len(self.source.vertices) and \
            images == set(self.source.vertices)

    @property
    def weights(self) -> tuple:
        """Row gcds; equals the facet weights for integer rows."""
        out = []
        for a, _ in self.rows:
            g = 0
            for x in a:
                g = gcd(g, int(x))
            out.append(g)
        return tuple(out)


def _normalize_row(u, c):
    """F(x) = u.x - c, scaled to a coprime integer linear part when rational."""
    if linalg.is_rational_vector(u):
        prim = lattice.primitive_covector(u)
        j = next(i for i, x in enumerate(u) if x != 0)
        f = Fraction(prim[j]) / u[j]
        return tuple(Fraction(x) for x in prim), -c * f
    return tuple(u), -c


def _facet_defining(V: VPolytope, a, b) -> bool:
    tight = [v for v in V.vertices if linalg.dot(a, v) + b == 0]
    if not tight:
        return False
    return dimension(VPolytope(V.ambient_dim, tight)) == dimension(V) - 1


def lift_and_frame(P: HPolyhedron, strip_redundant: bool = False,
                   normalize: bool = True, name: str = "") -> LiftResult:
    """Lift P ⊂ R^n into R^(n+k) as a slice of the box Q, one new coordinate
    y_i = F_i(x) per facet row."""
    V = enumerate_vertices(P)
    if V.is_empty:
        raise LiftError("cannot lift an empty polytope")
    rows = []
    for u, c in P.inequalities:
        rows.append(_normalize_row(u, c) if normalize else (tuple(u), -c))
    bad = [i for i, (a, b) in enumerate(rows) if not _facet_defining(V, a, b)]
    seen = {}
    for i, (a, b) in enumerate(rows):
        key = canonical_row(a, -b)
        if key in seen and i not in bad:
            bad.append(i)
        seen.setdefault(key, i)
    if bad:
        if not strip_redundant:
            raise LiftError(f"redundant rows {sorted(bad)}")
        rows = [r for i, r in enumerate(rows) if i not in bad]
    return _cubic_lift(V, tuple(rows), P.equalities, name)


def _cubic_lift(V: VPolytope, rows, equalities, name="") -> LiftResult:
    n, k = V.ambient_dim, len(rows)
    N = n + k
    vals = [abs(x) for v in V.vertices for x in v]
    vals += [linalg.dot(a, v) + b for v in V.vertices for a, b in rows]
    M = ceil_scalar(1 + max(vals)) if vals else 1
    base_x = V.vertices[0]
    base = tuple(base_x) + tuple(linalg.dot(a, base_x) + b for a, b in rows)
    _, dirs = affine_hull(V)
    directions = [tuple(d) + tuple(linalg.dot(a, d) for a, _ in rows) for d in dirs]
    box = []
    for i in range(n):
        e = tuple(int(j == i) for j in range(N))
        box.append((e, -M))
        box.append((tuple(-x for x in e), -M))
    germ_rows = []
    for i in range(k):
        e = tuple(int(j == n + i) for j in range(N))
        germ_rows.append((e, 0))
        box.append((e, 0))
        box.append((tuple(-x for x in e), -M))
    # germ facets in row order first, then the remaining box facets
    ordered = germ_rows + [r for r in box if r not in germ_rows]
    framed = canonicalize(FramedPolytope(N, base, tuple(directions), tuple(ordered), name))
    integer_rows = all(linalg.is_rational_vector(a) and
                       all(Fraction(x).denominator == 1 for x in a) for a, _ in rows)
    integral = False
    if integer_rows and _rational_faced(V):
        cols = [[int(i == j) for j in range(n)] for i in range(n)]
        cols += [[int(x) for x in a] for a, _ in rows]
        integral = lattice.is_saturated([list(c) for c in zip(*cols)])
    return LiftResult(framed, n, tuple(rows), tuple(equalities), M,
                      HPolyhedron(N, tuple(box)), integral, V)


def _rational_faced(V: VPolytope) -> bool:
    if dimension(V) == 0:
        return True
    return is_rational_faced(V)[0]


def retarget_weights(lift: LiftResult, i: int, p: int) -> LiftResult:
    """Rescale row i by p/q (q = gcd of its linear part) so facet i gets weight p."""
    if p < 1:
        raise LiftError("weights are positive integers")
    a, b = lift.rows[i]
    if not linalg.is_rational_vector(a) or any(Fraction(x).denominator != 1 for x in a):
        raise LiftError("retargeting needs an integer row (rational polytope)")
    if irrationality_degree(lift.source).degree:
        raise LiftError("retargeting needs a rational polytope")
    if dimension(lift.source) != lift.n:
        raise LiftError("retargeting needs a full-dimensional source polytope")
    q = 0
    for x in a:
        q = gcd(q, int(x))
    f = Fraction(p, q)
    rows = list(lift.rows)
    rows[i] = (tuple(x * f for x in a), b * f)
    return _cubic_lift(lift.source, tuple(rows), lift.equalities, lift.framed.name)


def realize_weighted(P: VPolytope, weights, name: str = "") -> LiftResult:
    """A regular framing of P (canonically embedded) whose facet weights are
    the given integers, in irredundant_hrep facet order of the embedded P."""
    if irrationality_degree(P).degree:
        raise LiftError("weighted polytopes must be rational")
    ok, vertex = is_simple(P)
    if not ok:
        raise LiftError(f"polytope is not simple at {vertex}")
    image, _ = canonical_embedding(P)
    H = irredundant_hrep(image)
    if len(weights) != len(H.inequalities):
        raise LiftError(f"expected {len(H.inequalities)} weights, got {len(weights)}")
    lift = lift_and_frame(H, name=name)
    for i, w in enumerate(weights):
        if int(w) != lift.weights[i]:
            lift = retarget_weights(lift, i, int(w))
    return lift


def make_qpq(a, p: int, q: int, name: str = "") -> FramedPolytope:
    """Framed segment [(0,0),(a,0)] with germ x >= 0, p(x - a) + q y <= 0,
    slice y = 0."""
    a = to_scalar(a)
    if p < 1 or scalar_sign(a) <= 0:
        raise FramingError("need p >= 1 and a > 0")
    if gcd(p, q) != 1:
        raise FramingError(f"gcd({p}, {q}) != 1")
    germ = (((1, 0), 0), ((-p, -q), -p * a))
    return FramedPolytope(2, (0, 0), ((1, 0),), germ, name or f"Q_{p},{q}")
