import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heckechain import matrix, polys
from heckechain.gf import field


def rand_matrix(rng, n, m, p):
    return rng.integers(0, p, size=(n, m), dtype=np.int64)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(min_value=0, max_value=10**6),
    st.sampled_from([5, 7, 11, 13]),
    st.integers(min_value=1, max_value=8),
    st.integers(min_value=1, max_value=8),
)
def test_rank_nullity(seed, p, n, m):
    rng = np.random.default_rng(seed)
    a = rand_matrix(rng, n, m, p)
    reduced, rank, pivots = matrix.rref(a, p)
    ker = matrix.right_kernel(a, p)
    assert rank == len(pivots)
    assert rank + ker.shape[1] == m
    assert np.all(a @ ker % p == 0)
    for row in reduced[rank:]:
        assert not row.any()
    # Pivot columns are strictly increasing with unit pivots.
    assert pivots == sorted(pivots)
    for i, c in enumerate(pivots):
        assert reduced[i, c] == 1


@settings(max_examples=40, deadline=None)
@given(
    st.integers(min_value=0, max_value=10**6),
    st.sampled_from([5, 11]),
    st.integers(min_value=1, max_value=6),
)
def test_charpoly_cayley_hamilton(seed, p, n):
    rng = np.random.default_rng(seed)
    a = rand_matrix(rng, n, n, p)
    f = matrix.charpoly_mod(a, p)
    assert len(f) == n + 1
    assert f[-1] == 1
    image = matrix.poly_of_matrix(f, a, p)
    assert not image.any()


def test_charpoly_known_2x2():
    a = np.array([[1, 2], [3, 4]], dtype=np.int64)
    # char poly x^2 - 5x - 2 over F_7: constant -2 -> 5, linear -5 -> 2.
    assert matrix.charpoly_mod(a, 7) == (5, 2, 1)


def test_solve_columns_round_trip():
    p = 11
    rng = np.random.default_rng(3)
    C = rng.integers(0, p, size=(6, 3), dtype=np.int64)
    while matrix.rref(C, p)[1] < 3:
        C = rng.integers(0, p, size=(6, 3), dtype=np.int64)
    X = rng.integers(0, p, size=(3, 4), dtype=np.int64)
    B = C @ X % p
    solved = matrix.solve_columns(C, B, p)
    assert np.array_equal(C @ solved % p, B)


def test_generic_field_matrix_ops():
    F = field(5, 2)
    A = matrix.gmat(F, [[F.encode((1, 1)), 2], [0, 3]])
    I = matrix.gidentity(F, 2)
    assert matrix.gmat_mul(F, A, I) == A
    assert matrix.gmat_mul(F, I, A) == A
    B = matrix.gmat_sub_scalar(F, A, 3)
    assert B[1][1] == 0


def test_gkernel_matches_prime_field_kernel():
    p = 7
    rng = np.random.default_rng(5)
    a = rng.integers(0, p, size=(5, 7), dtype=np.int64)
    F = field(p)
    gker = matrix.gkernel(F, matrix.gmat_from_np(a))
    nker = matrix.right_kernel(a, p)
    assert len(gker) == nker.shape[1]
    for vec in gker:
        assert all(
            sum(r * v for r, v in zip(row, vec)) % p == 0 for row in a.tolist()
        )


def test_gcharpoly_matches_numpy_charpoly_on_prime_field():
    p = 13
    rng = np.random.default_rng(11)
    a = rng.integers(0, p, size=(5, 5), dtype=np.int64)
    F = field(p)
    assert matrix.gcharpoly(F, matrix.gmat_from_np(a)) == matrix.charpoly_mod(a, p)


def test_gcharpoly_extension_field_eigenvalue():
    F = field(5, 2)
    g = F.encode((0, 1))
    A = matrix.gmat(F, [[g]])
    f = matrix.gcharpoly(F, A)
    assert polys.evaluate(F, f, g) == 0
