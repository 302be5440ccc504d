"""Momentum-side shadow of the presymplectic normal form: the affine
relations cutting out the slice, the kernel directions they define, and the
local model data (corank, isotropy, transversality) at each face."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from fpt import lattice, linalg
from fpt.framing import FramedPolytope, NonTransversalError
from fpt.polytope import NotAFaceError


@dataclass(frozen=True)
class FlatnessData:
    relations: tuple        # (a, b) with a . x = b on L
    kernel_vectors: tuple
    rationality: bool

    @property
    def count(self) -> int:
        return len(self.relations)


def _annihilator(vectors, N):
    """Canonical basis of the annihilator, primitive integer rows when rational."""
    if not vectors:
        return [tuple(Fraction(int(i == j)) for j in range(N)) for i in range(N)]
    ns = linalg.nullspace(list(vectors), N)
    return linalg.row_space_basis(ns, N) if ns else []


def flatness_relations(F: FramedPolytope) -> FlatnessData:
    N = F.ambient_dim
    rows = _annihilator(F.directions, N)
    rels = tuple((tuple(a), linalg.dot(a, F.base)) for a in rows)
    rational = all(linalg.is_rational_vector(a) for a in rows)
    return FlatnessData(rels, tuple(tuple(a) for a in rows), rational)


def kernel_directions(F: FramedPolytope):
    """Kernel subspace basis and whether its leaves close up (rational case)."""
    data = flatness_relations(F)
    return list(data.kernel_vectors), data.rationality


@dataclass(frozen=True)
class LocalModel:
    face: tuple                 # active germ facet indices
    vertices: tuple             # vertex indices of the face
    corank: int
    isotropy_basis: tuple       # active primitive covectors
    m_star_basis: tuple         # their annihilator
    l_basis: tuple              # directions of L
    transversal: bool
    face_directions: tuple      # basis of l ∩ m*, the face's direction space
    smith: tuple
    face_dim: int


def face_of_vertex(F: FramedPolytope, k: int) -> frozenset:
    return F.incidence.active[k]


def local_model(F: FramedPolytope, face) -> LocalModel:
    """Local model at the face given by its set of active germ facets."""
    face = frozenset(face)
    faces = F.faces()
    if face not in faces:
        raise NotAFaceError(f"{sorted(face)} is not the active set of a face")
    N = F.ambient_dim
    idx = sorted(face)
    iso = [F.germ[i][0] for i in idx]
    m_star = _annihilator(iso, N)
    l = list(F.directions)
    total = linalg.rank(l + list(m_star), N) if (l or m_star) else 0
    transversal = total == N
    inter = _intersection(l, m_star, N)
    smith = tuple(lattice.smith_invariants([list(u) for u in iso])) if iso else ()
    verts = faces[face]
    pts = [F.local_vertices[i] for i in sorted(verts)]
    face_dim = linalg.rank([linalg.sub(p, pts[0]) for p in pts[1:]], F.dim) if len(pts) > 1 else 0
    model = LocalModel(tuple(idx), tuple(sorted(verts)), len(idx), tuple(iso),
                       tuple(m_star), tuple(l), transversal, tuple(inter), smith, face_dim)
    if not transversal:
        raise NonTransversalError("l + m* is a proper subspace", face=tuple(idx))
    return model


def _intersection(U, W, N):
    """Basis of span(U) ∩ span(W)."""
    if not U or not W:
        return []
    annU = _annihilator(U, N)
    annW = _annihilator(W, N)
    return _annihilator(list(annU) + list(annW), N)
