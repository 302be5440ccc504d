"""Exact convex polyhedra: H/V conversion by double description, affine
hulls, face incidences, simplicity and supporting cones."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from fpt import linalg
from fpt.scalar import scalar_sign, to_scalar


class PolyhedronError(ValueError):
    pass


class UnboundedError(PolyhedronError):
    pass


class NotAFaceError(PolyhedronError):
    pass


def _vec(v):
    return tuple(to_scalar(x) for x in v)


def canonical_row(u, c):
    """Scale ``<u,x> >= c`` positively to canonical form."""
    u = _vec(u)
    c = to_scalar(c)
    lead = next((x for x in u if x != 0), None)
    if lead is None:
        raise PolyhedronError("zero covector")
    if linalg.is_rational_vector(u):
        prim = linalg.primitive_integer(u)
        j = next(i for i, x in enumerate(u) if x != 0)
        factor = Fraction(prim[j]) / u[j]
        return tuple(Fraction(x) for x in prim), c * factor
    if scalar_sign(lead) < 0:
        lead = -lead
    return tuple(x / lead for x in u), c / lead


@dataclass(frozen=True)
class HPolyhedron:
    """{x : <u,x> >= c for inequalities, <u,x> = c for equalities}."""

    ambient_dim: int
    inequalities: tuple = ()
    equalities: tuple = ()

    def __post_init__(self):
        ineq = tuple((_vec(u), to_scalar(c)) for u, c in self.inequalities)
        eqs = tuple((_vec(u), to_scalar(c)) for u, c in self.equalities)
        for u, _ in ineq + eqs:
            if len(u) != self.ambient_dim:
                raise PolyhedronError("covector length does not match ambient_dim")
            if all(x == 0 for x in u):
                raise PolyhedronError("zero covector")
        object.__setattr__(self, "inequalities", ineq)
        object.__setattr__(self, "equalities", eqs)

    def contains(self, x) -> bool:
        return (all(scalar_sign(linalg.dot(u, x) - c) >= 0 for u, c in self.inequalities)
                and all(linalg.dot(u, x) == c for u, c in self.equalities))

    def active(self, x) -> frozenset:
        return frozenset(i for i, (u, c) in enumerate(self.inequalities)
                         if linalg.dot(u, x) == c)

    def canonical(self) -> "HPolyhedron":
        ineq = sorted({canonical_row(u, c) for u, c in self.inequalities})
        return HPolyhedron(self.ambient_dim, tuple(ineq), self.equalities)


@dataclass(frozen=True)
class VPolytope:
    ambient_dim: int
    vertices: tuple = ()

    def __post_init__(self):
        vs = sorted({_vec(v) for v in self.vertices})
        for v in vs:
            if len(v) != self.ambient_dim:
                raise PolyhedronError("vertex length does not match ambient_dim")
        object.__setattr__(self, "vertices", tuple(vs))

    @property
    def is_empty(self) -> bool:
        return not self.vertices


# -- double description -------------------------------------------------------

def _normalize_ray(r):
    if all(x == 0 for x in r):
        return None
    return linalg.normalize_direction(r)


def cone_generators(dim: int, inequalities: Sequence, equalities: Sequence = ()):
    """Extreme rays and lineality basis of {z : A z >= 0, E z = 0}.

    Incremental double description; adjacency is decided combinatorially
    from the zero sets of the rays.  Returns (rays, lineality) where each
    ray is paired with its set of tight inequality indices.
    """
    lin = [tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]
    rays: list[tuple[tuple, frozenset]] = []
    eff_dim = dim  # dimension of the current cone's linear hull

    def project(h, pivot_vec, hp):
        return lambda v: linalg.sub(v, linalg.scale(linalg.dot(h, v) / hp, pivot_vec))

    for h in equalities:
        k = next((i for i, l in enumerate(lin) if linalg.dot(h, l) != 0), None)
        if k is not None:
            l0 = lin.pop(k)
            hp = linalg.dot(h, l0)
            proj = project(h, l0, hp)
            lin = [proj(l) for l in lin]
            rays = [(_normalize_ray(proj(r)), z) for r, z in rays]
            eff_dim -= 1
            continue
        pos, zero, neg = _split(rays, h)
        if pos or neg:
            eff_dim -= 1
        rays = zero + _combine(pos, neg, h, rays, eff_dim + 1 - len(lin))

    for idx, h in enumerate(inequalities):
        k = next((i for i, l in enumerate(lin) if linalg.dot(h, l) != 0), None)
        if k is not None:
            l0 = lin.pop(k)
            hp = linalg.dot(h, l0)
            if scalar_sign(hp) < 0:
                l0, hp = linalg.scale(-1, l0), -hp
            proj = project(h, l0, hp)
            lin = [proj(l) for l in lin]
            done = frozenset(range(idx))
            rays = [(_normalize_ray(proj(r)), z | {idx}) for r, z in rays]
            rays.append((_normalize_ray(l0), done))
            continue
        pos, zero, neg = _split(rays, h)
        zero = [(r, z | {idx}) for r, z in zero]
        new = _combine(pos, neg, h, rays, eff_dim - len(lin), idx)
        rays = pos + zero + new
    return rays, lin


def _split(rays, h):
    pos, zero, neg = [], [], []
    for r, z in rays:
        s = scalar_sign(linalg.dot(h, r))
        (pos if s > 0 else neg if s < 0 else zero).append((r, z))
    return pos, zero, neg


def _combine(pos, neg, h, all_rays, pointed_dim, idx=None):
    out = []
    need = pointed_dim - 2
    zsets = [z for _, z in all_rays]
    for rp, zp in pos:
        hp = linalg.dot(h, rp)
        for rn, zn in neg:
            common = zp & zn
            if len(common) < need:
                continue
            # adjacent iff no third ray is tight on all of `common`
            if sum(1 for z in zsets if common <= z) > 2:
                continue
            hn = linalg.dot(h, rn)
            new = _normalize_ray(linalg.sub(linalg.scale(hp, rn), linalg.scale(hn, rp)))
            if new is None:
                continue
            zset = common | {idx} if idx is not None else common
            out.append((new, frozenset(zset)))
    return out


def enumerate_vertices(P: HPolyhedron) -> VPolytope:
    """Exact vertex set of a bounded polyhedron (empty VPolytope if empty).

    Raises UnboundedError for nonempty unbounded input.
    """
    N = P.ambient_dim
    hom_ineq = [(Fraction(1),) + tuple(Fraction(0) for _ in range(N))]
    hom_ineq += [(-c,) + tuple(u) for u, c in P.inequalities]
    hom_eq = [(-c,) + tuple(u) for u, c in P.equalities]
    rays, lin = cone_generators(N + 1, hom_ineq, hom_eq)
    verts = [tuple(x / r[0] for x in r[1:]) for r, _ in rays if scalar_sign(r[0]) > 0]
    if not verts:
        return VPolytope(N, ())
    if lin or any(r[0] == 0 for r, _ in rays):
        raise UnboundedError("polyhedron is unbounded")
    return VPolytope(N, tuple(verts))


def is_bounded(P: HPolyhedron) -> bool:
    try:
        enumerate_vertices(P)
    except UnboundedError:
        return False
    return True


# -- affine hulls and facets --------------------------------------------------

def affine_hull(P: VPolytope):
    """(base point, direction basis) of the affine hull; base = first vertex."""
    if P.is_empty:
        raise PolyhedronError("empty polytope has no affine hull")
    base = P.vertices[0]
    diffs = [linalg.sub(v, base) for v in P.vertices[1:]]
    dirs = linalg.row_space_basis(diffs, P.ambient_dim) if diffs else []
    return base, dirs


def dimension(P: VPolytope) -> int:
    return len(affine_hull(P)[1])


def _local_coords(P: VPolytope):
    """Coordinates of the vertices in the affine hull frame."""
    base, dirs = affine_hull(P)
    n = len(dirs)
    if n == 0:
        return base, dirs, [()] * len(P.vertices)
    # solve base + D y = v via least squares-free exact projection
    gram = [[linalg.dot(a, b) for b in dirs] for a in dirs]
    ginv = linalg.inverse(gram)
    coords = []
    for v in P.vertices:
        rhs = [linalg.dot(d, linalg.sub(v, base)) for d in dirs]
        coords.append(tuple(linalg.dot(row, rhs) for row in ginv))
    return base, dirs, coords


@dataclass(frozen=True)
class Facet:
    covector: tuple
    constant: object
    vertex_indices: frozenset


def facets(P: VPolytope) -> list[Facet]:
    """Facet inequalities of conv(P) (covectors lie in the hull direction
    space, canonically scaled), each with its incident vertex indices."""
    base, dirs, coords = _local_coords(P)
    n = len(dirs)
    if n == 0:
        return []
    # cone of valid (u, c): u.y - c >= 0 for all vertices y
    cons = [tuple(y) + (Fraction(-1),) for y in coords]
    rays, lin = cone_generators(n + 1, cons)
    if lin:
        raise PolyhedronError("degenerate hull computation")
    gram = [[linalg.dot(a, b) for b in dirs] for a in dirs]
    ginv = linalg.inverse(gram)
    out = {}
    for r, zero in rays:
        u_loc, c_loc = r[:n], r[n]
        if all(x == 0 for x in u_loc):
            continue
        w = [linalg.dot(row, u_loc) for row in ginv]
        u_amb = tuple(sum((wi * d[k] for wi, d in zip(w, dirs)), Fraction(0))
                      for k in range(P.ambient_dim))
        c_amb = c_loc + linalg.dot(u_amb, base)
        u_c, c_c = canonical_row(u_amb, c_amb)
        out[(u_c, c_c)] = frozenset(zero)
    return [Facet(u, c, out[(u, c)]) for u, c in sorted(out)]


def irredundant_hrep(P: VPolytope) -> HPolyhedron:
    if P.is_empty:
        raise PolyhedronError("empty polytope")
    base, dirs = affine_hull(P)
    N = P.ambient_dim
    ann = linalg.nullspace(dirs, N) if dirs else [
        tuple(Fraction(int(i == j)) for j in range(N)) for i in range(N)]
    eqs = []
    for row in linalg.row_space_basis(ann, N):
        eqs.append((row, linalg.dot(row, base)))
    ineq = [(f.covector, f.constant) for f in facets(P)]
    return HPolyhedron(N, tuple(ineq), tuple(eqs))


# -- faces, simplicity, cones -------------------------------------------------

@dataclass
class FaceIncidence:
    """Per-vertex active inequality sets of a polytope in H-form."""

    vertices: tuple
    active: tuple  # frozensets, aligned with vertices
    n_inequalities: int
    dim: int
    _faces: dict | None = field(default=None, repr=False)

    @classmethod
    def of(cls, H: HPolyhedron, V: VPolytope | None = None) -> "FaceIncidence":
        V = enumerate_vertices(H) if V is None else V
        act = tuple(H.active(v) for v in V.vertices)
        return cls(V.vertices, act, len(H.inequalities), dimension(V))

    def closure(self, S) -> frozenset | None:
        S = frozenset(S)
        vs = [a for a in self.active if S <= a]
        if not vs:
            return None
        out = vs[0]
        for a in vs[1:]:
            out = out & a
        return out

    def faces(self) -> dict:
        """Map active set -> vertex index set for every nonempty face."""
        if self._faces is None:
            found = {}
            for a in set(self.active):
                for k in range(len(a) + 1):
                    for S in combinations(sorted(a), k):
                        c = self.closure(S)
                        if c is not None and c not in found:
                            found[c] = frozenset(i for i, b in enumerate(self.active) if c <= b)
            self._faces = found
        return self._faces

    def face_dimension(self, S) -> int:
        idx = self.faces()[frozenset(S)]
        pts = [self.vertices[i] for i in sorted(idx)]
        return dimension(VPolytope(len(pts[0]), pts))

    def f_vector(self) -> list[int]:
        counts = [0] * (self.dim + 1)
        for S in self.faces():
            counts[self.face_dimension(S)] += 1
        return counts


def is_simple(P) -> tuple[bool, tuple | None]:
    """Every vertex on exactly dim P facets; witness = offending vertex."""
    V = P if isinstance(P, VPolytope) else enumerate_vertices(P)
    H = irredundant_hrep(V)
    n = dimension(V)
    for v in V.vertices:
        if len(H.active(v)) != n:
            return False, v
    return True, None


def supporting_cone(P: HPolyhedron, face):
    """(relative interior point of the face, cone at it) for an active set."""
    inc = FaceIncidence.of(P)
    S = frozenset(face)
    faces = inc.faces()
    if S not in faces:
        raise NotAFaceError(f"index set {sorted(S)} is not a face")
    idx = sorted(faces[S])
    k = len(idx)
    point = tuple(sum((inc.vertices[i][j] for i in idx), Fraction(0)) / k
                  for j in range(P.ambient_dim))
    zero = Fraction(0)
    cone = HPolyhedron(P.ambient_dim,
                       tuple((P.inequalities[i][0], zero) for i in sorted(S)),
                       tuple((u, zero) for u, _ in P.equalities))
    return point, cone
