import random

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from fpt.lattice import (LatticeError, hnf, identity, image_lattice_basis,
                         integer_det, integer_kernel, inverse_unimodular,
                         is_saturated, lattice_complement,
                         lattice_intersect_subspace, matmul, primitive_covector,
                         qspan_rank, smith_invariants)
from fpt.scalar import sqrt
from fractions import Fraction

matrices = st.integers(1, 4).flatmap(lambda m: st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-12, 12), min_size=n, max_size=n),
                       min_size=m, max_size=m)))


def test_hnf_examples():
    H, U = hnf([[4, 6]])
    assert H == [[2, 0]]
    assert matmul([[4, 6]], U) == H
    H, U = hnf(identity(3))
    assert H == identity(3) and U == identity(3)
    H, _ = hnf([[2, 1], [0, 1]])
    assert abs(integer_det(H)) == 2


@given(matrices)
def test_hnf_properties(M):
    H, U = hnf(M)
    assert matmul(M, U) == H
    assert abs(integer_det(U)) == 1
    # column echelon: pivot rows strictly increase, pivots positive, left entries reduced
    last = -1
    for j in range(len(H[0])):
        col = [H[i][j] for i in range(len(H))]
        nz = [i for i, x in enumerate(col) if x]
        if not nz:
            assert all(not any(H[i][k] for i in range(len(H))) for k in range(j, len(H[0])))
            break
        p = nz[0]
        assert p > last and H[p][j] > 0
        assert all(0 <= H[p][k] < H[p][j] for k in range(j))
        last = p


def _sympy_invariants(M):
    S = smith_normal_form(Matrix(M), domain=ZZ)
    return [abs(S[i, i]) for i in range(min(S.shape)) if S[i, i] != 0]


def test_smith_examples():
    assert smith_invariants([[2, 0], [0, 3]]) == [1, 6]
    assert smith_invariants(identity(3)) == [1, 1, 1]
    assert smith_invariants([[2], [0]]) == [2]
    assert not is_saturated([[2, 0]])


@settings(max_examples=150)
@given(matrices)
def test_smith_matches_sympy(M):
    assert smith_invariants(M) == _sympy_invariants(M)


@pytest.mark.parametrize("v,expected", [
    ((Fraction(2, 3), Fraction(4, 3)), (1, 2)),
    ((-4, -6), (-2, -3)),
    ((0, 5), (0, 1)),
])
def test_primitive_covector(v, expected):
    assert primitive_covector(v) == expected


def test_primitive_covector_rejects_radicals():
    with pytest.raises(LatticeError):
        primitive_covector((1, sqrt(2)))


def test_intersect_subspace():
    assert lattice_intersect_subspace(2, [(1, 1)]).basis_vectors == ((1, 1),)
    assert lattice_intersect_subspace(2, [(Fraction(1, 2), 1)]).basis_vectors == ((1, 2),)
    full = lattice_intersect_subspace(2, [(1, 0), (0, 1)])
    assert sorted(full.basis_vectors) == [(0, 1), (1, 0)]
    with pytest.raises(LatticeError):
        lattice_intersect_subspace(2, [(1, sqrt(2))])


def test_complement_examples():
    assert lattice_complement([(1, 0)], 2).basis_vectors == ((0, 1),)
    assert lattice_complement([(1, 2)], 2).basis_vectors == ((0, 1),)
    assert lattice_complement([(1, 0), (0, 1)], 2).basis_vectors == ()
    with pytest.raises(LatticeError):
        lattice_complement([(2, 0)], 2)


def test_complement_random_is_unimodular_completion():
    rng = random.Random(0)
    for _ in range(40):
        N = rng.randint(2, 5)
        r = rng.randint(1, N - 1)
        vecs = [tuple(rng.randint(-4, 4) for _ in range(N)) for _ in range(r)]
        S = lattice_intersect_subspace(N, vecs)
        if S.rank == 0:
            continue
        K = lattice_complement(S)
        M = [list(v) for v in S.basis_vectors] + [list(v) for v in K.basis_vectors]
        assert abs(integer_det(M)) == 1


def test_kernel_and_inverse():
    ker = integer_kernel([[1, 2, 3]], 3)
    assert len(ker) == 2 and all(a + 2 * b + 3 * c == 0 for a, b, c in ker)
    U = [[2, 1], [1, 1]]
    assert matmul(U, inverse_unimodular(U)) == identity(2)
    with pytest.raises(LatticeError):
        inverse_unimodular([[2, 0], [0, 1]])


def test_qspan_rank():
    assert qspan_rank([(1, 0), (0, 1)]) == 2
    assert qspan_rank([(1,), (sqrt(2),)]) == 2
    assert qspan_rank([(1, sqrt(2)), (2, 2 * sqrt(2))]) == 1


def test_image_lattice_basis():
    hs, imgs = image_lattice_basis([(Fraction(1, 2),), (Fraction(1, 3),)], 2)
    assert imgs == [(Fraction(1, 6),)]
    (h,) = hs
    assert h[0] * Fraction(1, 2) + h[1] * Fraction(1, 3) == Fraction(1, 6)
