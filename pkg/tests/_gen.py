"""Seeded random generators and brute-force oracles shared by the tests."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from fpt import linalg
from fpt.lattice import integer_det
from fpt.polytope import HPolyhedron, VPolytope, canonical_row, enumerate_vertices, is_simple, dimension


def random_bounded_h(rng: random.Random, n: int, k: int, coef=9, scale_box=True):
    """Box rows (possibly with a common factor) plus k random rows
    a.x + b >= 0 with a in [-coef, coef]^n and b >= 1, so the origin is
    strictly inside.  Returns the HPolyhedron of rows u.x >= c."""
    rows = []
    for i in range(n):
        for sign in (1, -1):
            f = rng.randint(1, 3) if scale_box else 1
            e = [0] * n
            e[i] = sign * f
            rows.append((tuple(e), -f * rng.randint(1, 5)))
    for _ in range(k):
        a = [0] * n
        while not any(a):
            a = [rng.randint(-coef, coef) for _ in range(n)]
        b = rng.randint(1, 9)
        rows.append((tuple(a), -b))
    # one row per hyperplane
    seen, out = set(), []
    for u, c in rows:
        key = canonical_row(u, c)
        if key not in seen:
            seen.add(key)
            out.append((u, c))
    return HPolyhedron(n, tuple(out))


def random_simple_polytope(rng: random.Random, max_dim=3, max_k=4):
    while True:
        n = rng.randint(1, max_dim)
        H = random_bounded_h(rng, n, rng.randint(0, max_k), scale_box=False)
        V = enumerate_vertices(H)
        if V.is_empty or dimension(V) != n:
            continue
        if n == 1 or is_simple(V)[0]:
            return H, V


def random_unimodular(rng: random.Random, N: int, steps: int = 6):
    """Product of random elementary integer matrices and sign flips."""
    A = [[int(i == j) for j in range(N)] for i in range(N)]
    for _ in range(steps):
        if N == 1:
            break
        i, j = rng.sample(range(N), 2)
        f = rng.choice([-2, -1, 1, 2])
        A[i] = [x + f * y for x, y in zip(A[i], A[j])]
    for i in range(N):
        if rng.random() < 0.3:
            A[i] = [-x for x in A[i]]
    assert abs(integer_det(A)) == 1
    return A


def brute_force_vertices(H: HPolyhedron):
    """Vertices by solving every n-subset of constraints (as equalities,
    together with all equalities) and keeping feasible unique points."""
    n = H.ambient_dim
    eqs = [(list(u), c) for u, c in H.equalities]
    ineqs = [(list(u), c) for u, c in H.inequalities]
    need = n - linalg.rank([u for u, _ in eqs], n) if eqs else n
    pts = set()
    for S in itertools.combinations(range(len(ineqs)), need):
        rows = [u for u, _ in eqs] + [ineqs[i][0] for i in S]
        rhs = [c for _, c in eqs] + [ineqs[i][1] for i in S]
        if linalg.rank(rows, n) != n:
            continue
        x = linalg.solve(rows, rhs, n)
        if x is None:
            continue
        if all(linalg.dot(u, x) >= c for u, c in ineqs) and \
                all(linalg.dot(u, x) == c for u, c in eqs):
            pts.add(tuple(Fraction(v) for v in x))
    return VPolytope(n, tuple(pts))
