"""Facet weights, integral affine isomorphisms of polytopes and framings,
Morita equivalence embeddings, crossed products and the rational-case
Morita decision procedure."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from fpt import lattice, linalg
from fpt.framing import (FramedPolytope, canonical_embedding, irrationality_degree,
                         validate)
from fpt.polytope import VPolytope, dimension, facets, irredundant_hrep
from fpt.scalar import parts, scalar_sign, to_scalar


class MoritaError(ValueError):
    pass


class IrrationalSliceError(MoritaError):
    pass


class CrossedProductError(MoritaError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


# -- maps -----------------------------------------------------------------------

@dataclass(frozen=True)
class IntegralAffineMap:
    """x -> linear . x + translation, linear an integer matrix (rows)."""

    linear: tuple
    translation: tuple

    def __post_init__(self):
        object.__setattr__(self, "linear", tuple(tuple(int(x) for x in r) for r in self.linear))
        object.__setattr__(self, "translation", tuple(to_scalar(x) for x in self.translation))

    @property
    def source_dim(self) -> int:
        return len(self.linear[0]) if self.linear else 0

    @property
    def target_dim(self) -> int:
        return len(self.linear)

    def __call__(self, x):
        return linalg.add(linalg.matvec(self.linear, x), self.translation)

    def apply_linear(self, d):
        return linalg.matvec(self.linear, d)

    def compose(self, inner: "IntegralAffineMap") -> "IntegralAffineMap":
        """self ∘ inner."""
        lin = lattice.matmul([list(r) for r in self.linear], [list(r) for r in inner.linear])
        return IntegralAffineMap(lin, self(inner.translation))

    def is_saturated(self) -> bool:
        cols = [list(c) for c in zip(*self.linear)]
        return lattice.is_saturated(cols)

    def sort_key(self):
        return (tuple(x for r in self.linear for x in r),
                tuple(float(x) for x in self.translation))


def identity_map(N: int) -> IntegralAffineMap:
    return IntegralAffineMap(lattice.identity(N), (0,) * N)


# -- facet weights --------------------------------------------------------------

def slice_lattice(F: FramedPolytope) -> lattice.LatticeBasis:
    if not all(linalg.is_rational_vector(d) for d in
               linalg.rref(F.directions, F.ambient_dim)[0]):
        raise IrrationalSliceError("slice is irrational; weights are undefined")
    return lattice.lattice_intersect_subspace(F.ambient_dim, F.directions)


def facet_weight(F: FramedPolytope, i: int) -> int:
    """Positive generator of {<u_i, beta> : beta in Z^N ∩ dir(L)}."""
    basis = slice_lattice(F).basis_vectors
    u = F.germ[i][0]
    g = 0
    for beta in basis:
        g = gcd(g, int(sum(a * b for a, b in zip(u, beta))))
    if g == 0:
        raise MoritaError(f"germ facet {i} is constant on the slice lattice "
                          "(inconsistent with transversality)")
    return g


def facet_weights(F: FramedPolytope) -> tuple:
    basis = slice_lattice(F).basis_vectors
    out = []
    for u, _ in F.germ:
        g = 0
        for beta in basis:
            g = gcd(g, int(sum(a * b for a, b in zip(u, beta))))
        if g == 0:
            raise MoritaError("germ facet constant on the slice lattice")
        out.append(g)
    return tuple(out)


def is_rational_slice(F: FramedPolytope) -> bool:
    return linalg.is_rational_subspace(F.directions, F.ambient_dim)


# -- combinatorial isomorphisms --------------------------------------------------

def _facet_bijections(fac1, fac2):
    """Bijections sigma between facet lists (vertex-index sets) that are
    compatible with all pairwise incidence sizes and induce a vertex map."""
    k = len(fac1)
    if k != len(fac2):
        return
    order = sorted(range(k), key=lambda i: -len(fac1[i]))
    sigma = [None] * k
    used = [False] * k

    def rec(pos):
        if pos == k:
            yield list(sigma)
            return
        i = order[pos]
        for j in range(k):
            if used[j] or len(fac2[j]) != len(fac1[i]):
                continue
            if any(len(fac1[i] & fac1[p]) != len(fac2[j] & fac2[sigma[p]])
                   for p in order[:pos]):
                continue
            sigma[i], used[j] = j, True
            yield from rec(pos + 1)
            sigma[i], used[j] = None, False

    yield from rec(0)


def _vertex_map(fac1, fac2, sigma, nv1, nv2):
    """Induced vertex bijection, or None."""
    act1 = [frozenset(i for i, f in enumerate(fac1) if v in f) for v in range(nv1)]
    act2 = {frozenset(i for i, f in enumerate(fac2) if v in f): v for v in range(nv2)}
    pi = []
    for a in act1:
        w = act2.get(frozenset(sigma[i] for i in a))
        if w is None:
            return None
        pi.append(w)
    return pi if len(set(pi)) == nv1 == nv2 else None


def _split_pairs(xs, ys):
    """Rational column pairs (x, y) with A x = y for A rational."""
    X, Y = [], []
    for x, y in zip(xs, ys):
        xr, xs_ = zip(*(parts(a) for a in x))
        yr, ys_ = zip(*(parts(a) for a in y))
        X.append(xr)
        Y.append(yr)
        if any(a != 0 for a in xs_) or any(a != 0 for a in ys_):
            X.append(xs_)
            Y.append(ys_)
    return X, Y


def _solve_linear_map(xs, ys, N):
    """The rational N x N matrix with A x = y for all pairs, if unique."""
    X, Y = _split_pairs(xs, ys)
    red, piv = linalg.rref([list(x) for x in zip(*X)], len(X)) if X else ([], [])
    if len(red) != N:
        return None
    # pick N independent pairs
    sel = piv
    Xs = [[X[j][i] for j in sel] for i in range(N)]
    Ys = [[Y[j][i] for j in sel] for i in range(N)]
    try:
        Xinv = linalg.inverse(Xs)
    except ZeroDivisionError:
        return None
    A = [[linalg.dot(Ys[i], [Xinv[k][j] for k in range(N)]) for j in range(N)]
         for i in range(N)]
    for x, y in zip(X, Y):
        if linalg.matvec(A, x) != tuple(y):
            return None
    return A


def polytope_isomorphisms(P1: VPolytope, P2: VPolytope, auto_embed: bool = True):
    """All integral affine isomorphisms between canonical embeddings of P1
    and P2 as (map, vertex_perm, embedding1, embedding2), sorted."""
    E1, G1 = canonical_embedding(P1) if auto_embed else (P1, None)
    E2, G2 = canonical_embedding(P2) if auto_embed else (P2, None)
    if E1.ambient_dim != E2.ambient_dim or len(E1.vertices) != len(E2.vertices):
        return []
    if irrationality_degree(E1).degree != irrationality_degree(E2).degree:
        return []
    N = E1.ambient_dim
    if dimension(E1) != dimension(E2):
        return []
    if dimension(E1) == 0:
        b = linalg.sub(E2.vertices[0], E1.vertices[0])
        return [(IntegralAffineMap(lattice.identity(N), b), [0], G1, G2)]
    fac1 = [f.vertex_indices for f in facets(E1)]
    fac2 = [f.vertex_indices for f in facets(E2)]
    if sorted(map(len, fac1)) != sorted(map(len, fac2)):
        return []
    out, seen = [], set()
    for sigma in _facet_bijections(fac1, fac2):
        pi = _vertex_map(fac1, fac2, sigma, len(E1.vertices), len(E2.vertices))
        if pi is None:
            continue
        v0, w0 = E1.vertices[0], E2.vertices[pi[0]]
        xs = [linalg.sub(v, v0) for v in E1.vertices[1:]]
        ys = [linalg.sub(E2.vertices[pi[j]], w0) for j in range(1, len(pi))]
        A = _solve_linear_map(xs, ys, N)
        if A is None or any(Fraction(x).denominator != 1 for r in A for x in r):
            continue
        A = [[int(x) for x in r] for r in A]
        if abs(lattice.integer_det(A)) != 1:
            continue
        b = linalg.sub(w0, linalg.matvec(A, v0))
        m = IntegralAffineMap(A, b)
        if m in seen:
            continue
        seen.add(m)
        out.append((m, pi, G1, G2))
    out.sort(key=lambda t: t[0].sort_key())
    return out


def polytope_iso(P1: VPolytope, P2: VPolytope, auto_embed: bool = True):
    """Least integral affine isomorphism between the canonical embeddings of
    P1 and P2 (unimodular linear part), or None."""
    isos = polytope_isomorphisms(P1, P2, auto_embed)
    return isos[0][0] if isos else None


# -- framed isomorphisms --------------------------------------------------------

SEARCH_RADIUS = 2
SEARCH_LIMIT = 20000


def _integer_affine_solutions(C, d, nvars):
    """Integer solutions of C z = d as (z0, kernel basis), or None."""
    rows, rhs = [], []
    for r, b in zip(C, d):
        den = 1
        for x in list(r) + [b]:
            den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
        rows.append([int(Fraction(x) * den) for x in r])
        rhs.append(int(Fraction(b) * den))
    if not rows:
        return [0] * nvars, [tuple(int(i == j) for j in range(nvars)) for i in range(nvars)]
    H, U = lattice.hnf(rows, nvars)
    z = [0] * nvars
    col = 0
    for i, row in enumerate(H):
        acc = sum(row[k] * z[k] for k in range(col))
        if col < nvars and row[col] != 0:
            q, r = divmod(rhs[i] - acc, row[col])
            if r:
                return None
            z[col] = q
            col += 1
        elif acc != rhs[i]:
            return None
    x0 = [sum(U[i][k] * z[k] for k in range(nvars)) for i in range(nvars)]
    kernel = [tuple(U[i][k] for i in range(nvars)) for k in range(col, nvars)]
    return x0, kernel


def _local_transfer(F1: FramedPolytope, F2: FramedPolytope, pi):
    """Linear map T on slice directions sending dir(L1) to dir(L2) as dictated
    by the vertex bijection, as images of F1's directions; None if not affine."""
    t1, t2 = F1.local_vertices, F2.local_vertices
    n = F1.dim
    if n == 0:
        return []
    xs = [linalg.sub(t, t1[0]) for t in t1[1:]]
    ys = [linalg.sub(t2[pi[j]], t2[pi[0]]) for j in range(1, len(pi))]
    # solve Tloc (n x n, Scalar) with Tloc x = y: treat per-row linear systems
    red = linalg.rref([list(x) for x in xs], n)[0]
    if len(red) != n:
        return None
    Tloc = []
    for i in range(n):
        sol = linalg.solve([list(x) for x in xs], [y[i] for y in ys], n)
        if sol is None:
            return None
        Tloc.append(sol)
    images = []
    for k in range(n):
        img = (Fraction(0),) * F2.ambient_dim
        for l in range(n):
            if Tloc[l][k] != 0:
                img = linalg.add(img, linalg.scale(Tloc[l][k], F2.directions[l]))
        images.append(img)
    return images


def _extend_framed_iso(F1, F2, sigma, pi):
    N = F1.ambient_dim
    images = _local_transfer(F1, F2, pi)
    if images is None:
        return None
    u1 = [F1.germ[i][0] for i in range(len(F1.germ))]
    u2 = [F2.germ[sigma[i]][0] for i in range(len(F1.germ))]
    # covector map u2[i] -> u1[i], extended to the saturation of span(u2)
    S2 = lattice.lattice_intersect_subspace(N, u2).basis_vectors if u2 else ()
    r = len(S2)
    idx = linalg.rref([list(x) for x in zip(*u2)], len(u2))[1] if u2 else []
    if len(idx) != r:
        return None
    basis_u2 = [u2[i] for i in idx]
    basis_u1 = [u1[i] for i in idx]

    def image_of(w):
        lam = linalg.solve([list(x) for x in zip(*basis_u2)], list(w), r)
        if lam is None:
            return None
        out = [Fraction(0)] * N
        for l, u in zip(lam, basis_u1):
            out = [a + l * b for a, b in zip(out, u)]
        return out

    for a, b in zip(u2, u1):
        if image_of(a) != [Fraction(x) for x in b]:
            return None
    img_S = []
    for s in S2:
        im = image_of(s)
        if im is None or any(x.denominator != 1 for x in im):
            return None
        img_S.append([int(x) for x in im])
    comp2 = lattice.lattice_complement(list(S2), N).basis_vectors
    S1 = lattice.lattice_intersect_subspace(N, u1).basis_vectors if u1 else ()
    comp1 = lattice.lattice_complement(list(S1), N).basis_vectors
    dirs1 = F1.directions
    # consistency of the known part with the direction transfer
    for s, im in zip(S2, img_S):
        for d, td in zip(dirs1, images):
            if linalg.dot(im, d) != linalg.dot(s, td):
                return None
    # unknown images of comp2 rows: g . comp1 + h . S1, per row the same system
    gens = list(comp1) + list(S1)
    m = len(gens)
    C, rhs_cols = [], []
    for d in dirs1:
        coeffs = [linalg.dot(g, d) for g in gens]
        cr = [parts(c) for c in coeffs]
        C.append([c[0] for c in cr])
        C.append([c[1] for c in cr])
        rhs_cols.append([parts(linalg.dot(c2, td)) for c2, td in
                         ((c2, td) for c2 in comp2 for td in [images[dirs1.index(d)]])])
    k = len(comp2)
    rows_sol = []
    for j in range(k):
        rhs = []
        for block in rhs_cols:
            rhs.append(block[j][0])
            rhs.append(block[j][1])
        sol = _integer_affine_solutions(C, rhs, m)
        if sol is None:
            return None
        rows_sol.append(sol)
    ng = len(comp1)
    # the determinant depends only on the comp1 coefficients g
    choices = []
    for x0, ker in rows_sol:
        gk = [v[:ng] for v in ker if any(v[:ng])]
        gk = lattice._hermite_sorted(gk, ng) if gk else []
        cands = []
        rng = range(-SEARCH_RADIUS, SEARCH_RADIUS + 1)
        for t in itertools.product(rng, repeat=len(gk)):
            g = list(x0[:ng])
            for tt, v in zip(t, gk):
                g = [a + tt * b for a, b in zip(g, v)]
            cands.append((sum(abs(x) for x in t), t, g, x0, ker))
        cands.sort(key=lambda c: (c[0], c[1]))
        choices.append(cands)
    count = 0
    for combo in itertools.product(*choices) if choices else [()]:
        count += 1
        if count > SEARCH_LIMIT:
            return None
        G = [c[2] for c in combo]
        if ng and abs(lattice.integer_det(G)) != 1:
            continue
        rows_img = []
        for (_, _, g, x0, ker) in combo:
            # pick h consistent with chosen g: solve for a kernel combination
            h = _complete_h(g, x0, ker, ng)
            if h is None:
                break
            vec = [0] * N
            for coef, gen in zip(list(g) + list(h), gens):
                vec = [a + coef * b for a, b in zip(vec, gen)]
            rows_img.append(vec)
        else:
            basis2 = [list(s) for s in S2] + [list(c) for c in comp2]
            imgs = img_S + rows_img
            P2inv = lattice.inverse_unimodular(basis2)
            A = lattice.matmul(P2inv, imgs)
            if abs(lattice.integer_det(A)) != 1:
                continue
            return A, images
    return None


def _complete_h(g, x0, ker, ng):
    """Find integer t with (x0 + K t)[:ng] == g; return the h part."""
    C = [[v[i] for v in ker] for i in range(ng)]
    d = [g[i] - x0[i] for i in range(ng)]
    if not ker:
        return list(x0[ng:]) if all(x == 0 for x in d) else None
    sol = _integer_affine_solutions(C, d, len(ker)) if ng else ([0] * len(ker), [])
    if sol is None:
        return None
    t = sol[0]
    full = [x0[i] + sum(tt * v[i] for tt, v in zip(t, ker)) for i in range(len(x0))]
    return full[ng:]


def framed_isomorphisms(F1: FramedPolytope, F2: FramedPolytope, first_only=False):
    if F1.ambient_dim != F2.ambient_dim or F1.dim != F2.dim:
        return []
    if len(F1.germ) != len(F2.germ) or len(F1.local_vertices) != len(F2.local_vertices):
        return []
    fac1 = [F1.facet_vertices(i) for i in range(len(F1.germ))]
    fac2 = [F2.facet_vertices(i) for i in range(len(F2.germ))]
    nv = len(F1.local_vertices)
    out = []
    for sigma in _facet_bijections(fac1, fac2):
        pi = _vertex_map(fac1, fac2, sigma, nv, nv)
        if pi is None:
            continue
        res = _extend_framed_iso(F1, F2, sigma, pi)
        if res is None:
            continue
        A, _ = res
        b = linalg.sub(F2.vertex_points[pi[0]], linalg.matvec(A, F1.vertex_points[0]))
        phi = IntegralAffineMap(A, b)
        if F1.transformed(A, b).germ_set() != F2.germ_set():
            continue
        out.append((phi, sigma))
        if first_only:
            break
    out.sort(key=lambda t: t[0].sort_key())
    return out


def framed_iso(F1: FramedPolytope, F2: FramedPolytope):
    """An ambient unimodular affine map carrying L1 to L2 and the germ of F1
    onto the germ of F2, or None."""
    isos = framed_isomorphisms(F1, F2)
    return isos[0][0] if isos else None


# -- Morita embeddings ----------------------------------------------------------

@dataclass(frozen=True)
class EmbeddingCheck:
    ok: bool
    failed: str | None = None
    detail: str = ""
    multipliers: tuple = ()
    facet_map: tuple = ()   # germ index of F1 -> germ index of F2

    def __bool__(self):
        return self.ok


def verify_morita_embedding(eta: IntegralAffineMap, F2: FramedPolytope,
                            F1: FramedPolytope) -> EmbeddingCheck:
    """Check that eta: R^N2 -> R^N1 is a Morita equivalence embedding of
    (P2, Q2) into (P1, Q1)."""
    N1, N2 = F1.ambient_dim, F2.ambient_dim
    if eta.source_dim != N2 or eta.target_dim != N1:
        return EmbeddingCheck(False, "a", "map dimensions do not match")
    if not eta.is_saturated():
        return EmbeddingCheck(False, "a", "linear part is not saturated")
    if F1.dim != F2.dim:
        return EmbeddingCheck(False, "b", "slice dimensions differ")
    imgs = [eta.apply_linear(d) for d in F2.directions]
    if linalg.rank(list(F1.directions) + imgs, N1) != F1.dim or \
            linalg.rank(imgs, N1) != F2.dim:
        return EmbeddingCheck(False, "b", "eta(L2) direction differs from L1")
    off = linalg.sub(eta(F2.base), F1.base)
    if linalg.rank(list(F1.directions) + [off], N1) != F1.dim:
        return EmbeddingCheck(False, "b", "eta(L2) is not contained in L1")
    pulled = {}
    lookup = {g: j for j, g in enumerate(F2.germ)}
    mults, fmap = [], []
    for i, (u, c) in enumerate(F1.germ):
        v = tuple(sum(u[k] * eta.linear[k][j] for k in range(N1)) for j in range(N2))
        g = 0
        for x in v:
            g = gcd(g, x)
        if g == 0:
            return EmbeddingCheck(False, "c", f"germ facet {i} is constant on the image")
        prim = tuple(x // g for x in v)
        const = (c - linalg.dot(u, eta.translation)) / g
        j = lookup.get((prim, const))
        if j is None or j in pulled:
            return EmbeddingCheck(False, "c", f"germ facet {i} does not pull back to a germ facet")
        pulled[j] = i
        mults.append(g)
        fmap.append(j)
    if len(pulled) != len(F2.germ):
        return EmbeddingCheck(False, "c", "germ facets do not correspond bijectively")
    bad = [i for i, m in enumerate(mults) if m != 1]
    if bad:
        return EmbeddingCheck(False, "d", f"pullback multipliers {mults} at facets {bad}",
                              tuple(mults), tuple(fmap))
    return EmbeddingCheck(True, None, "", tuple(mults), tuple(fmap))


# -- crossed products -----------------------------------------------------------

@dataclass(frozen=True)
class MoritaWitness:
    third: FramedPolytope
    embed_1: IntegralAffineMap
    embed_2: IntegralAffineMap

    def verify(self, F1, F2) -> bool:
        return bool(verify_morita_embedding(self.embed_1, F1, self.third)) and \
            bool(verify_morita_embedding(self.embed_2, F2, self.third))


@dataclass(frozen=True)
class _SliceFrame:
    F: FramedPolytope
    B: tuple        # lattice basis of dir(L) (columns as vectors)
    K: tuple        # lattice complement
    base: tuple

    @property
    def psi(self):
        return [list(r) for r in zip(*(list(self.B) + list(self.K)))]

    def coords(self, x):
        """(t, s) with x = base + B t + K s."""
        inv = lattice.inverse_unimodular(self.psi)
        return linalg.matvec(inv, linalg.sub(x, self.base))


def _slice_frame(F: FramedPolytope, complement=None) -> _SliceFrame:
    B = slice_lattice(F).basis_vectors
    K = complement if complement is not None else \
        lattice.lattice_complement(list(B), F.ambient_dim).basis_vectors
    return _SliceFrame(F, tuple(B), tuple(tuple(k) for k in K), F.base)


def slice_polytope(F: FramedPolytope, frame: _SliceFrame | None = None):
    """P in lattice coordinates of its slice; vertices kept in F's order."""
    frame = frame or _slice_frame(F)
    n = F.dim
    return [tuple(frame.coords(v)[:n]) for v in F.vertex_points]


def _slice_isos(F1, F2, fr1, fr2):
    """Integral affine isomorphisms between the slice-coordinate polytopes,
    each with the induced germ facet correspondence of F1 -> F2."""
    t1, t2 = slice_polytope(F1, fr1), slice_polytope(F2, fr2)
    n = F1.dim
    if n != F2.dim:
        return []
    V1, V2 = VPolytope(n, t1), VPolytope(n, t2)
    out = []
    for m, pi, _, _ in polytope_isomorphisms(V1, V2, auto_embed=False):
        pos2 = {p: i for i, p in enumerate(t2)}
        vmap = [pos2.get(m(p)) for p in t1]
        if None in vmap:
            continue
        fac2 = {F2.facet_vertices(j): j for j in range(len(F2.germ))}
        corr = []
        for i in range(len(F1.germ)):
            img = frozenset(vmap[v] for v in F1.facet_vertices(i))
            if img not in fac2:
                break
            corr.append(fac2[img])
        else:
            out.append((m, tuple(corr)))
    return out


def crossed_product(F1: FramedPolytope, F2: FramedPolytope,
                    identification: IntegralAffineMap | None = None,
                    complements=(None, None), name: str = "") -> MoritaWitness:
    """Crossed product of two framings of the same rational polytope.

    ``identification`` maps slice-lattice coordinates of P1 onto those of P2;
    when omitted, the least isomorphism preserving facet weights is used.
    """
    fr1 = _slice_frame(F1, complements[0])
    fr2 = _slice_frame(F2, complements[1])
    n = F1.dim
    if identification is None:
        w1, w2 = facet_weights(F1), facet_weights(F2)
        isos = _slice_isos(F1, F2, fr1, fr2)
        if not isos:
            raise CrossedProductError("slice polytopes are not isomorphic")
        good = [m for m, corr in isos if all(w1[i] == w2[j] for i, j in enumerate(corr))]
        identification = (good or [isos[0][0]])[0]
    T = [list(r) for r in identification.linear]
    tau = identification.translation
    # recoordinatize F2 so its slice coordinates agree with F1's
    B2 = [list(b) for b in fr2.B]
    B2T = [tuple(sum(B2[l][k] * T[l][j] for l in range(n)) for k in range(F2.ambient_dim))
           for j in range(n)]
    base2 = F2.base
    for l in range(n):
        if tau[l] != 0:
            base2 = linalg.add(base2, linalg.scale(tau[l], fr2.B[l]))
    fr2 = _SliceFrame(F2, tuple(B2T), fr2.K, base2)

    N1, N2 = F1.ambient_dim, F2.ambient_dim
    k1, k2 = N1 - n, N2 - n
    N3 = n + k1 + k2

    def split(fr, u, c):
        alpha = tuple(sum(a * b for a, b in zip(u, v)) for v in fr.B)
        beta = tuple(sum(a * b for a, b in zip(u, v)) for v in fr.K)
        return alpha, beta, c - linalg.dot(u, fr.base)

    def key(alpha, gamma):
        g = 0
        for x in alpha:
            g = gcd(g, x)
        return tuple(x // g for x in alpha), gamma / g, g

    side2 = {}
    for j, (u, c) in enumerate(F2.germ):
        a, b, gm = split(fr2, u, c)
        kk = key(a, gm)
        side2[kk[:2]] = (j, b, kk[2])
    germ3 = []
    for i, (u, c) in enumerate(F1.germ):
        a1, b1, g1 = split(fr1, u, c)
        prim, gnorm, w1 = key(a1, g1)
        hit = side2.pop((prim, gnorm), None)
        if hit is None:
            raise CrossedProductError(f"facet {i} of the first framing has no partner",
                                      witness=i)
        j, b2, w2 = hit
        g = gcd(w1, w2)
        k_1, k_2 = w2 // g, w1 // g
        cov = tuple(k_1 * x for x in a1) + tuple(k_1 * x for x in b1) + tuple(k_2 * x for x in b2)
        const = k_1 * g1
        h = 0
        for x in cov:
            h = gcd(h, x)
        germ3.append((tuple(x // h for x in cov), const / h))
    if side2:
        raise CrossedProductError("facet sets of the two framings do not correspond")
    dirs3 = tuple(tuple(int(i == j) for j in range(N3)) for i in range(n))
    F3 = FramedPolytope(N3, (0,) * N3, dirs3, tuple(germ3),
                        name or f"{F1.name}#{F2.name}")

    def embedding(fr, offset, k):
        inv = lattice.inverse_unimodular(fr.psi)
        N = len(inv)
        rows = [[0] * N for _ in range(N3)]
        for r in range(n):
            rows[r] = inv[r]
        for r in range(k):
            rows[offset + r] = inv[n + r]
        shift = linalg.matvec(inv, fr.base)
        trans = [Fraction(0)] * N3
        for r in range(n):
            trans[r] = -shift[r]
        for r in range(k):
            trans[offset + r] = -shift[n + r]
        return IntegralAffineMap(rows, trans)

    eta1 = embedding(fr1, n, k1)
    eta2 = embedding(fr2, n + k1, k2)
    rep = validate(F3)
    if not rep.regular:
        raise CrossedProductError("crossed product is not regular",
                                  witness=rep.witnesses.get("regular"))
    if not rep.ok:
        bad = [f for f in rep.FLAGS if not getattr(rep, f)]
        raise CrossedProductError(f"crossed product fails validation: {bad}")
    for label, eta, F in (("first", eta1, F1), ("second", eta2, F2)):
        chk = verify_morita_embedding(eta, F, F3)
        if not chk:
            raise CrossedProductError(
                f"{label} inclusion is not a Morita embedding (check {chk.failed}: {chk.detail})",
                witness=chk)
    return MoritaWitness(F3, eta1, eta2)


# -- decision procedure ---------------------------------------------------------

@dataclass(frozen=True)
class MoritaVerdict:
    status: str                  # equivalent | inequivalent | undecided
    reason: str = ""
    witness: MoritaWitness | None = None
    weights: tuple = ()

    @property
    def equivalent(self) -> bool:
        return self.status == "equivalent"


def decide_morita(F1: FramedPolytope, F2: FramedPolytope) -> MoritaVerdict:
    if not (is_rational_slice(F1) and is_rational_slice(F2)):
        return MoritaVerdict("undecided", "irrational")
    for F in (F1, F2):
        rep = validate(F)
        if not rep.ok:
            bad = [f for f in rep.FLAGS if not getattr(rep, f)]
            return MoritaVerdict("undecided", f"invalid framing: {','.join(bad)}")
    fr1, fr2 = _slice_frame(F1), _slice_frame(F2)
    isos = _slice_isos(F1, F2, fr1, fr2)
    w1, w2 = facet_weights(F1), facet_weights(F2)
    if not isos:
        return MoritaVerdict("inequivalent", "polytopes", weights=(w1, w2))
    for m, corr in isos:
        if all(w1[i] == w2[j] for i, j in enumerate(corr)):
            wit = crossed_product(F1, F2, identification=m)
            if not wit.verify(F1, F2):
                raise MoritaError("crossed product witness failed re-verification")
            return MoritaVerdict("equivalent", "weights", wit, (w1, w2))
    return MoritaVerdict("inequivalent", "weights", weights=(w1, w2))


# -- quotient invariant ---------------------------------------------------------

@dataclass(frozen=True)
class WeightedPolytope:
    polytope: VPolytope
    weights: tuple

    def __post_init__(self):
        if any(int(w) < 1 for w in self.weights):
            raise MoritaError("weights must be positive")


@dataclass(frozen=True)
class QuotientInvariant:
    kind: str                       # orbifold | quasifold
    weighted: WeightedPolytope | None = None
    irrationality: object = None
    kernel: tuple = ()


def quotient_invariant(F: FramedPolytope) -> QuotientInvariant:
    from fpt.normal_form import kernel_directions

    if not is_rational_slice(F):
        basis, _ = kernel_directions(F)
        return QuotientInvariant("quasifold", irrationality=irrationality_degree(F.polytope),
                                 kernel=tuple(basis))
    image, G = canonical_embedding(F.polytope)
    emb = [tuple(linalg.dot(h, v) for h in G) for v in F.vertex_points]
    H = irredundant_hrep(image)
    weights = facet_weights(F)
    out = [None] * len(H.inequalities)
    for i in range(len(F.germ)):
        pts = {emb[k] for k in F.facet_vertices(i)}
        for j, (u, c) in enumerate(H.inequalities):
            tight = {v for v in image.vertices if linalg.dot(u, v) == c}
            if tight == pts:
                out[j] = weights[i]
    if any(w is None for w in out):
        raise MoritaError("germ facets do not match facets of the embedded polytope")
    return QuotientInvariant("orbifold", WeightedPolytope(image, tuple(out)))
