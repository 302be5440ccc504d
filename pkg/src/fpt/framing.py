"""Framed polytopes P = L ∩ Q and the predicates defined on them:
rational-faced, transversal, regular, Delzant, irrationality degree and the
canonical lattice embedding."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd

from fpt import lattice, linalg
from fpt.polytope import (FaceIncidence, HPolyhedron, PolyhedronError,
                          UnboundedError, VPolytope, affine_hull, canonical_row,
                          dimension, enumerate_vertices, facets, irredundant_hrep)
from fpt.scalar import ceil_scalar, floor_scalar, to_scalar


class FramingError(ValueError):
    pass


class EmptySliceError(FramingError):
    pass


class NonTransversalError(FramingError):
    def __init__(self, msg, face=None):
        super().__init__(msg)
        self.face = face


@dataclass(frozen=True)
class FramedPolytope:
    """A slice ``L = base + span(directions)`` with the germ of a framing,
    stored as facet halfspaces ``<u,x> >= c`` with primitive integer ``u``."""

    ambient_dim: int
    base: tuple
    directions: tuple
    germ: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        base = tuple(to_scalar(x) for x in self.base)
        dirs = tuple(tuple(to_scalar(x) for x in d) for d in self.directions)
        germ = []
        for u, c in self.germ:
            u = tuple(Fraction(x) for x in u)
            if any(x.denominator != 1 for x in u):
                raise FramingError("germ covectors must be integral")
            u_int = tuple(int(x) for x in u)
            if lattice.primitive_covector(u_int) != u_int:
                raise FramingError(f"germ covector {u_int} is not primitive")
            germ.append((u_int, to_scalar(c)))
        if len(base) != self.ambient_dim or any(len(d) != self.ambient_dim for d in dirs):
            raise FramingError("slice data does not match ambient_dim")
        if linalg.rank(dirs, self.ambient_dim) != len(dirs):
            raise FramingError("slice directions are linearly dependent")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "directions", dirs)
        object.__setattr__(self, "germ", tuple(germ))

    @property
    def dim(self) -> int:
        return len(self.directions)

    # -- derived polytope ------------------------------------------------------
    @cached_property
    def local_hrep(self) -> HPolyhedron:
        """P in slice coordinates t, where x = base + sum t_j d_j."""
        rows = []
        for u, c in self.germ:
            a = tuple(linalg.dot(u, d) for d in self.directions)
            rows.append((a, c - linalg.dot(u, self.base)))
        n = self.dim
        ineq = []
        for a, c in rows:
            if all(x == 0 for x in a):
                # constant on L; keep as a trivially true/false condition
                ineq.append(((Fraction(0),) * n, c))
            else:
                ineq.append((a, c))
        return _LocalH(n, ineq)

    @cached_property
    def local_vertices(self) -> tuple:
        return _local_vertices(self.local_hrep)

    def to_ambient(self, t):
        x = self.base
        for tj, d in zip(t, self.directions):
            if tj != 0:
                x = linalg.add(x, linalg.scale(tj, d))
        return x

    @cached_property
    def vertex_points(self) -> tuple:
        return tuple(self.to_ambient(t) for t in self.local_vertices)

    @cached_property
    def polytope(self) -> VPolytope:
        return VPolytope(self.ambient_dim, self.vertex_points)

    @cached_property
    def incidence(self) -> FaceIncidence:
        act = tuple(self.local_hrep.active(t) for t in self.local_vertices)
        n = dimension(VPolytope(self.dim, self.local_vertices)) if self.local_vertices else -1
        return FaceIncidence(self.local_vertices, act, len(self.germ), n)

    def faces(self) -> dict:
        return self.incidence.faces()

    def facet_vertices(self, i) -> frozenset:
        return frozenset(k for k, a in enumerate(self.incidence.active) if i in a)

    def restricted(self, i):
        """Germ covector i as a functional on the slice directions."""
        return tuple(linalg.dot(self.germ[i][0], d) for d in self.directions)

    def transformed(self, A, b=None) -> "FramedPolytope":
        """Image under x -> A x + b with A unimodular."""
        N = self.ambient_dim
        b = b or (Fraction(0),) * N
        Ainv = lattice.inverse_unimodular(A)
        base = linalg.add(linalg.matvec(A, self.base), b)
        dirs = [linalg.matvec(A, d) for d in self.directions]
        germ = []
        for u, c in self.germ:
            v = tuple(sum(u[k] * Ainv[k][j] for k in range(N)) for j in range(N))
            germ.append((v, c + linalg.dot(v, b)))
        return FramedPolytope(N, base, tuple(dirs), tuple(germ), self.name)

    def normalized(self) -> "FramedPolytope":
        """Canonical presentation: rref directions, base with zero pivot
        coordinates, germ facets sorted."""
        red, pivots = linalg.rref(self.directions, self.ambient_dim)
        dirs = linalg.row_space_basis(self.directions, self.ambient_dim)
        base = self.base
        for row, p in zip(red, pivots):
            if base[p] != 0:
                base = linalg.sub(base, linalg.scale(base[p], row))
        return FramedPolytope(self.ambient_dim, base, tuple(dirs),
                              tuple(sorted(self.germ)), self.name)

    def germ_set(self) -> frozenset:
        return frozenset(self.germ)


class _LocalH(HPolyhedron):
    """HPolyhedron allowing zero rows (constraints constant on the slice)."""

    def __init__(self, n, ineq):
        object.__setattr__(self, "ambient_dim", n)
        object.__setattr__(self, "inequalities",
                           tuple((tuple(map(to_scalar, u)), to_scalar(c)) for u, c in ineq))
        object.__setattr__(self, "equalities", ())

    def active(self, x) -> frozenset:
        return frozenset(i for i, (u, c) in enumerate(self.inequalities)
                         if any(a != 0 for a in u) and linalg.dot(u, x) == c)


def _local_vertices(H) -> tuple:
    n = H.ambient_dim
    ineq = []
    for u, c in H.inequalities:
        if all(x == 0 for x in u):
            if c > 0:
                return ()
            continue
        ineq.append((u, c))
    if n == 0:
        return ((),)
    V = enumerate_vertices(HPolyhedron(n, tuple(ineq)))
    return V.vertices


# -- construction ---------------------------------------------------------------

def canonicalize(F: FramedPolytope) -> FramedPolytope:
    """Drop germ facets that do not meet P and exact duplicates."""
    keep, seen = [], set()
    for i, g in enumerate(F.germ):
        if g in seen or not F.facet_vertices(i):
            continue
        seen.add(g)
        keep.append(g)
    return FramedPolytope(F.ambient_dim, F.base, F.directions, tuple(keep), F.name)


def slice_framing(Q: HPolyhedron, base, directions, name: str = "") -> FramedPolytope:
    """Frame P = L ∩ Q, keeping only the facets of Q that cut out facets of P."""
    if Q.equalities:
        raise FramingError("framing polyhedron must be full-dimensional")
    germ = []
    for u, c in Q.inequalities:
        if not linalg.is_rational_vector(u):
            raise FramingError("framing polyhedron has an irrational facet covector")
        uc, cc = canonical_row(u, c)
        germ.append((tuple(int(x) for x in uc), cc))
    F = FramedPolytope(Q.ambient_dim, base, tuple(directions), tuple(germ), name)
    try:
        verts = F.local_vertices
    except UnboundedError:
        raise FramingError("slice is unbounded") from None
    if not verts:
        raise EmptySliceError("slice does not meet the framing polyhedron")
    F = canonicalize(F)
    ok, face = transversality(F)
    if not ok:
        raise NonTransversalError(f"slice is not transversal at face {sorted(face)}", face)
    if dimension(F.polytope) != F.dim:
        raise FramingError("slice meets the framing in a lower-dimensional set")
    return F


def germ_hpolyhedron(F: FramedPolytope) -> tuple[HPolyhedron, int]:
    """Materialize the germ as a bounded polyhedron: germ facets plus a
    synthetic rational box at margin 1 beyond P.  Returns (Q, n_germ)."""
    N = F.ambient_dim
    rows = [(u, c) for u, c in F.germ]
    for k in range(N):
        lo = min(floor_scalar(v[k]) for v in F.vertex_points) - 1
        hi = max(ceil_scalar(v[k]) for v in F.vertex_points) + 1
        e = tuple(int(j == k) for j in range(N))
        rows.append((e, lo))
        rows.append((tuple(-x for x in e), -hi))
    return HPolyhedron(N, tuple(rows)), len(F.germ)


# -- predicates -----------------------------------------------------------------

def transversality(F: FramedPolytope):
    """Active covectors restricted to dir(L) independent at every vertex."""
    for a in F.incidence.active:
        rows = [F.restricted(i) for i in sorted(a)]
        if rows and linalg.rank(rows, F.dim) != len(rows):
            return False, a
    return True, None


def is_regular_germ(F: FramedPolytope):
    """Active germ covectors have all Smith invariants 1 at every face.
    Faces of P inherit subsets of vertex active sets, so vertices suffice."""
    for a in sorted(set(F.incidence.active), key=sorted):
        if not lattice.is_saturated([F.germ[i][0] for i in sorted(a)]):
            return False, a
    return True, None


def is_simple_framed(F: FramedPolytope):
    for t, a in zip(F.local_vertices, F.incidence.active):
        if len(a) != F.dim:
            return False, F.to_ambient(t)
    return True, None


def germ_canonical(F: FramedPolytope):
    inc = F.incidence
    seen = {}
    for i in range(len(F.germ)):
        vs = F.facet_vertices(i)
        if not vs:
            return False, i
        if F.dim > 0:
            pts = [inc.vertices[k] for k in sorted(vs)]
            if dimension(VPolytope(F.dim, pts)) != F.dim - 1:
                return False, i
        if vs in seen:
            return False, i
        seen[vs] = i
    if F.dim > 0 and len(seen) != len(facets(VPolytope(F.dim, inc.vertices))):
        return False, None
    return True, None


@dataclass
class ValidationReport:
    bounded: bool
    nonempty: bool
    transversal: bool = False
    simple: bool = False
    regular: bool = False
    rational_faced: bool = False
    germ_canonical: bool = False
    witnesses: dict = field(default_factory=dict)

    FLAGS = ("bounded", "nonempty", "transversal", "simple", "regular",
             "rational_faced", "germ_canonical")

    @property
    def ok(self) -> bool:
        return all(getattr(self, f) for f in self.FLAGS)

    def as_dict(self) -> dict:
        out = {f: getattr(self, f) for f in self.FLAGS}
        out["ok"] = self.ok
        out["witnesses"] = {k: _jsonable(v) for k, v in self.witnesses.items()}
        return out


def _jsonable(v):
    if isinstance(v, (frozenset, set)):
        return sorted(v)
    if isinstance(v, tuple):
        return [str(x) for x in v]
    return v


def validate(F: FramedPolytope) -> ValidationReport:
    try:
        verts = F.local_vertices
    except UnboundedError:
        return ValidationReport(bounded=False, nonempty=True)
    if not verts:
        return ValidationReport(bounded=True, nonempty=False)
    rep = ValidationReport(bounded=True, nonempty=True)
    checks = {
        "transversal": transversality,
        "simple": is_simple_framed,
        "regular": is_regular_germ,
        "germ_canonical": germ_canonical,
    }
    for name, fn in checks.items():
        ok, wit = fn(F)
        setattr(rep, name, ok)
        if not ok:
            rep.witnesses[name] = wit
    if F.dim == 0:
        rep.rational_faced = True
    else:
        ok, certs = is_rational_faced(F.polytope)
        rep.rational_faced = ok
        if not ok:
            rep.witnesses["rational_faced"] = [i for i, c in enumerate(certs) if c is None]
    return rep


# -- polytope-level predicates ----------------------------------------------------

def _rational_span(vectors, N):
    """Rational vectors spanning the smallest rational subspace containing
    the given Scalar vectors (rational and radical parts separately)."""
    out = []
    for v in vectors:
        split = linalg.split_rows([v])[0]
        out.append(split[:N])
        out.append(split[N:])
    return [r for r in out if any(x != 0 for x in r)]


def is_rational_faced(P: VPolytope):
    """For each facet, an integer covector constant on it but not on P, or
    None when no such covector exists."""
    N = P.ambient_dim
    base, dirs = affine_hull(P)
    span_P = _rational_span(dirs, N)
    rank_P = linalg.rank(span_P, N) if span_P else 0
    certs = []
    for f in facets(P):
        pts = [P.vertices[i] for i in sorted(f.vertex_indices)]
        zdirs = [linalg.sub(p, pts[0]) for p in pts[1:]]
        span_Z = _rational_span(zdirs, N)
        ann = linalg.nullspace(span_Z, N) if span_Z else [
            tuple(Fraction(int(i == j)) for j in range(N)) for i in range(N)]
        cert = None
        if (linalg.rank(span_Z, N) if span_Z else 0) < rank_P:
            for h in ann:
                if any(linalg.dot(h, d) != 0 for d in dirs):
                    cert = lattice.primitive_covector(h)
                    if linalg.dot(cert, linalg.sub(_far_vertex(P, f), pts[0])) < 0:
                        cert = tuple(-x for x in cert)
                    break
        certs.append(cert)
    return all(c is not None for c in certs), certs


def _far_vertex(P, f):
    return next(v for i, v in enumerate(P.vertices) if i not in f.vertex_indices)


@dataclass(frozen=True)
class DelzantReport:
    ok: bool
    rational: bool
    simple: bool
    witness_vertex: tuple | None = None
    witness_det: int | None = None


def is_delzant(P: VPolytope) -> DelzantReport:
    if dimension(P) != P.ambient_dim:
        raise PolyhedronError("is_delzant needs a full-dimensional polytope")
    H = irredundant_hrep(P)
    if not all(linalg.is_rational_vector(u) for u, _ in H.inequalities):
        return DelzantReport(False, False, False)
    n = P.ambient_dim
    for v in P.vertices:
        act = sorted(H.active(v))
        if len(act) != n:
            return DelzantReport(False, True, False, v)
        d = lattice.integer_det([[int(x) for x in H.inequalities[i][0]] for i in act])
        if abs(d) != 1:
            return DelzantReport(False, True, True, v, abs(d))
    return DelzantReport(True, True, True)


@dataclass(frozen=True)
class IrrationalityReport:
    dim_P: int
    daff_rank: int
    degree: int
    daff_basis: tuple


def irrationality_degree(P: VPolytope) -> IrrationalityReport:
    _, dirs = affine_hull(P)
    n, N = len(dirs), P.ambient_dim
    if n == 0:
        return IrrationalityReport(0, 0, 0, ())
    restr = [tuple(d[k] for d in dirs) for k in range(N)]
    split = linalg.split_rows(restr)
    rank = lattice.qspan_rank(restr)
    hs, _ = lattice.image_lattice_basis(split, N)
    kernel = lattice.integer_kernel(
        [[int(x) for x in row] for row in _integer_columns(split, N)], N)
    hs = tuple(lattice.reduce_mod_lattice(h, kernel, N) for h in hs)
    return IrrationalityReport(n, rank, rank - n, hs)


def _integer_columns(split, N):
    """Rows of the transposed split matrix with denominators cleared."""
    width = len(split[0])
    out = []
    for i in range(width):
        col = [Fraction(split[k][i]) for k in range(N)]
        den = 1
        for x in col:
            den = den * x.denominator // gcd(den, x.denominator)
        out.append([int(x * den) for x in col])
    return out


def canonical_embedding(P: VPolytope):
    """Integral affine image of P in R^(n+d) built from a Z-basis of the
    integral affine 1-forms on P.  Returns (image, covectors)."""
    if dimension(P) > 0 and not is_rational_faced(P)[0]:
        raise FramingError("canonical embedding needs a rational-faced polytope")
    rep = irrationality_degree(P)
    G = rep.daff_basis
    if P.ambient_dim == rep.daff_rank:
        G = tuple(tuple(int(i == j) for j in range(P.ambient_dim))
                  for i in range(P.ambient_dim))
    image = VPolytope(len(G), tuple(tuple(linalg.dot(h, v) for h in G)
                                    for v in P.vertices))
    return image, G
