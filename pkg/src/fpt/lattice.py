"""Integer lattice algorithms: Hermite and Smith normal forms, saturated
sublattices, complements, and ranks of Z-modules inside Q(sqrt(m))^n."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from fpt import linalg
from fpt.scalar import is_rational

IntMatrix = list  # list of rows of Python ints


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class LatticeBasis:
    ambient_dim: int
    basis_vectors: tuple

    @property
    def rank(self) -> int:
        return len(self.basis_vectors)


def _xgcd(a: int, b: int):
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    bt = list(zip(*b)) if b else []
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def hnf(M: IntMatrix, ncols: int | None = None):
    """Column Hermite normal form.

    Returns ``(H, U)`` with ``M . U = H``, ``U`` unimodular, ``H`` lower
    triangular in column echelon form with positive pivots and the entries
    left of each pivot reduced into ``[0, pivot)``.
    """
    m = len(M)
    n = len(M[0]) if m else (ncols or 0)
    # work on columns: cols[j] is the j-th column of H, ucols[j] of U
    cols = [[int(M[i][j]) for i in range(m)] for j in range(n)]
    ucols = [[int(i == j) for i in range(n)] for j in range(n)]

    def combine(j, k, a, b, c, d):
        # (col_j, col_k) <- (a*col_j + b*col_k, c*col_j + d*col_k)
        cj, ck = cols[j], cols[k]
        cols[j] = [a * x + b * y for x, y in zip(cj, ck)]
        cols[k] = [c * x + d * y for x, y in zip(cj, ck)]
        uj, uk = ucols[j], ucols[k]
        ucols[j] = [a * x + b * y for x, y in zip(uj, uk)]
        ucols[k] = [c * x + d * y for x, y in zip(uj, uk)]

    piv = 0
    for row in range(m):
        if piv == n:
            break
        for k in range(piv + 1, n):
            b = cols[k][row]
            if b == 0:
                continue
            a = cols[piv][row]
            g, x, y = _xgcd(a, b)
            combine(piv, k, x, y, -b // g, a // g)
        p = cols[piv][row]
        if p == 0:
            continue
        if p < 0:
            cols[piv] = [-x for x in cols[piv]]
            ucols[piv] = [-x for x in ucols[piv]]
            p = -p
        for k in range(piv):
            q = cols[k][row] // p
            if q:
                cols[k] = [x - q * y for x, y in zip(cols[k], cols[piv])]
                ucols[k] = [x - q * y for x, y in zip(ucols[k], ucols[piv])]
        piv += 1
    H = [[cols[j][i] for j in range(n)] for i in range(m)]
    U = [[ucols[j][i] for j in range(n)] for i in range(n)]
    return H, U


def smith_invariants(M: IntMatrix) -> list[int]:
    """Nonzero invariant factors d1 | d2 | ... of an integer matrix."""
    a = [[int(x) for x in row] for row in M]
    out = []
    while a and a[0]:
        entries = [(abs(x), i, j) for i, row in enumerate(a)
                   for j, x in enumerate(row) if x]
        if not entries:
            break
        _, i, j = min(entries)
        a[0], a[i] = a[i], a[0]
        for row in a:
            row[0], row[j] = row[j], row[0]
        while True:
            p = a[0][0]
            done = True
            for i in range(1, len(a)):
                q = a[i][0] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[0])]
                if a[i][0]:
                    done = False
            for j in range(1, len(a[0])):
                q = a[0][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[0]
                if a[0][j]:
                    done = False
            if not done:
                entries = [(abs(a[i][0]), i, 0) for i in range(len(a)) if a[i][0]]
                entries += [(abs(a[0][j]), 0, j) for j in range(len(a[0])) if a[0][j]]
                _, i, j = min(entries)
                a[0], a[i] = a[i], a[0]
                for row in a:
                    row[0], row[j] = row[j], row[0]
                continue
            bad = next(((i, j) for i in range(1, len(a))
                        for j in range(1, len(a[0])) if a[i][j] % p), None)
            if bad is None:
                break
            a[0] = [x + y for x, y in zip(a[0], a[bad[0]])]
        out.append(abs(a[0][0]))
        a = [row[1:] for row in a[1:]]
    return out


def is_saturated(vectors) -> bool:
    """True iff the integer vectors span a saturated sublattice
    (torsion-free quotient) and are linearly independent."""
    vectors = [list(v) for v in vectors]
    if not vectors:
        return True
    inv = smith_invariants(vectors)
    return len(inv) == len(vectors) and all(d == 1 for d in inv)


def primitive_covector(v) -> tuple[int, ...]:
    """The positive multiple of a rational vector with coprime integer entries."""
    if not all(is_rational(x) for x in v):
        raise LatticeError("primitive_covector needs rational entries")
    try:
        return linalg.primitive_integer(v)
    except ValueError as exc:
        raise LatticeError(str(exc)) from None


def _clear_rows(vectors):
    out = []
    for v in vectors:
        den = 1
        for x in v:
            x = Fraction(x)
            den = den * x.denominator // gcd(den, x.denominator)
        out.append([int(Fraction(x) * den) for x in v])
    return out


def integer_kernel(A: IntMatrix, n: int) -> list[tuple[int, ...]]:
    """Basis of the lattice {z in Z^n : A z = 0}."""
    if not A:
        return [tuple(r) for r in identity(n)]
    H, U = hnf(A, n)
    zero_cols = [j for j in range(n) if all(H[i][j] == 0 for i in range(len(H)))]
    return [tuple(U[i][j] for i in range(n)) for j in zero_cols]


def lattice_intersect_subspace(N: int, spanning) -> LatticeBasis:
    """Basis of Z^N intersected with the rational span of ``spanning``."""
    spanning = [tuple(v) for v in spanning]
    for v in spanning:
        if not linalg.is_rational_vector(v):
            raise LatticeError("subspace must be spanned by rational vectors")
    ann = linalg.nullspace(spanning, N) if spanning else [
        tuple(Fraction(int(i == j)) for j in range(N)) for i in range(N)]
    basis = integer_kernel(_clear_rows(ann), N)
    basis = _hermite_sorted(basis, N)
    return LatticeBasis(N, tuple(basis))


def _hermite_sorted(basis, N):
    """Canonical basis of the lattice spanned by ``basis`` (row HNF)."""
    if not basis:
        return []
    H, _ = hnf([[b[i] for b in basis] for i in range(N)])
    r = len(basis)
    return [tuple(H[i][j] for i in range(N)) for j in range(r)
            if any(H[i][j] for i in range(N))]


def lattice_complement(S: LatticeBasis | list, N: int | None = None) -> LatticeBasis:
    """Vectors K such that S followed by K is a basis of Z^N."""
    if isinstance(S, LatticeBasis):
        vectors, N = list(S.basis_vectors), S.ambient_dim
    else:
        vectors = list(S)
    r = len(vectors)
    if r == 0:
        return LatticeBasis(N, tuple(tuple(row) for row in identity(N)))
    St = [list(map(int, v)) for v in vectors]  # r x N
    H, U = hnf(St, N)
    if any(H[i][i] != 1 for i in range(r)) or any(H[i][j] for i in range(r) for j in range(r, N)):
        raise LatticeError("sublattice is not saturated")
    V = inverse_unimodular(U)
    return LatticeBasis(N, tuple(tuple(V[i]) for i in range(r, N)))


def inverse_unimodular(U: IntMatrix) -> IntMatrix:
    inv = linalg.inverse([[Fraction(x) for x in row] for row in U])
    out = []
    for row in inv:
        if any(Fraction(x).denominator != 1 for x in row):
            raise LatticeError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return out


def integer_det(M: IntMatrix) -> int:
    return int(linalg.det([[Fraction(x) for x in row] for row in M]))


def qspan_rank(vectors, n: int | None = None) -> int:
    """Rank of the Z-module generated by Scalar vectors: rational rank of
    their (rational part, radical part) splittings."""
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return 0
    split = linalg.split_rows(vectors)
    return linalg.rank(split, len(split[0]))


def image_lattice_basis(columns, N: int):
    """For rational row vectors w_1..w_N (restrictions of e_1..e_N), find
    integer covectors h_j in Z^N whose images sum_k h_jk w_k form a Z-basis
    of the group generated by the w_k.  Returns (h_list, image_list)."""
    dim = len(columns[0]) if columns else 0
    # matrix S^T : dim x N with integer entries after clearing denominators
    den = 1
    for w in columns:
        for x in w:
            den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    St = [[int(Fraction(columns[k][i]) * den) for k in range(N)] for i in range(dim)]
    H, U = hnf(St, N)
    hs, imgs = [], []
    for j in range(N):
        col = [H[i][j] for i in range(dim)]
        if any(col):
            hs.append(tuple(U[i][j] for i in range(N)))
            imgs.append(tuple(Fraction(x, den) for x in col))
    return hs, imgs


def reduce_mod_lattice(v, lattice_basis, N):
    """Canonical representative of v + L, reducing against L's echelon form
    taken from the last coordinate backwards."""
    if not lattice_basis:
        return tuple(v)
    rev = [[b[N - 1 - i] for b in lattice_basis] for i in range(N)]
    H, _ = hnf(rev)
    cols = [[H[i][j] for i in range(N)] for j in range(len(lattice_basis))]
    cols = [c for c in cols if any(c)]
    w = [v[N - 1 - i] for i in range(N)]
    for c in cols:
        p_row = next(i for i in range(N) if c[i])
        q = w[p_row] // c[p_row]
        if q:
            w = [x - q * y for x, y in zip(w, c)]
    return tuple(w[N - 1 - i] for i in range(N))
