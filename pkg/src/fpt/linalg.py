"""Dense exact linear algebra over Q or Q(sqrt(m)).

Matrices are lists of rows; entries are Fractions or Quads.  Only the small
set of routines the polyhedral code needs is provided.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from fpt.scalar import is_rational, parts, scalar_sign


def dot(u, v):
    s = Fraction(0)
    for a, b in zip(u, v):
        if a != 0 and b != 0:
            s = s + a * b
    return s


def sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def scale(c, v):
    return tuple(c * a for a in v)


def matvec(rows, v):
    return tuple(dot(r, v) for r in rows)


def transpose(rows, ncols=None):
    if not rows:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*rows)]


def rref(rows, ncols=None):
    """Reduced row echelon form.  Returns (nonzero rows, pivot columns)."""
    a = [[Fraction(x) if isinstance(x, int) else x for x in r] for r in rows]
    if not a:
        return [], []
    ncols = len(a[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        if piv != 1:
            a[r] = [x / piv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return [tuple(row) for row in a[:r]], pivots


def rank(rows, ncols=None) -> int:
    return len(rref(rows, ncols)[0])


def nullspace(rows, ncols):
    """Basis of {x : rows . x = 0}, one vector per free column."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(tuple(v))
    return basis


def solve(rows, rhs, ncols):
    """One solution of rows . x = rhs, or None if inconsistent."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[ncols]
    return tuple(x)


def det(rows):
    a = [list(r) for r in rows]
    n = len(a)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        d = d * a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return d


def inverse(rows):
    n = len(rows)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)]
           for i, r in enumerate(rows)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ZeroDivisionError("singular matrix")
    return [list(r[n:]) for r in red]


def split_rows(vectors):
    """Map Scalar vectors to rational vectors (rational parts, radical parts)."""
    out = []
    for v in vectors:
        ps = [parts(x) for x in v]
        out.append(tuple(p[0] for p in ps) + tuple(p[1] for p in ps))
    return out


def is_rational_vector(v) -> bool:
    return all(is_rational(x) for x in v)


def primitive_integer(v):
    """Positive multiple of a nonzero rational vector with coprime integer entries."""
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive multiple")
    return tuple(x // g for x in ints)


def normalize_direction(v):
    """Canonical positive rescaling: primitive integers when rational,
    otherwise divide by |first nonzero entry|."""
    if is_rational_vector(v):
        return tuple(Fraction(x) for x in primitive_integer(v))
    lead = next(x for x in v if x != 0)
    if scalar_sign(lead) < 0:
        lead = -lead
    return tuple(x / lead for x in v)


def row_space_basis(vectors, ncols):
    """Canonical basis of the span: rref rows, each rescaled to primitive
    integers when rational."""
    red, _ = rref(vectors, ncols)
    out = []
    for r in red:
        if is_rational_vector(r):
            out.append(tuple(Fraction(x) for x in primitive_integer(r)))
        else:
            out.append(r)
    return out


def is_rational_subspace(vectors, ncols) -> bool:
    """A subspace is rational iff its (unique) rref basis is rational."""
    red, _ = rref(vectors, ncols)
    return all(is_rational_vector(r) for r in red)
