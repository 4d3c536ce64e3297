import numpy as np
from hypothesis import given, settings, strategies as st

from oracles import det_bareiss
from tame_eisenstein.homalg import snf
from tame_eisenstein.linalg import (
    hermite_rows,
    integer_kernel,
    integer_lattice_basis,
    kernel_mod,
    matmul_mod,
    snf_mod,
    solve_mod,
    span_size,
)

matrices = st.integers(2, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-12, 12), min_size=n, max_size=n), min_size=n, max_size=n))


def test_snf_examples():
    assert snf([[1, 0], [0, 1]])[0] == [1, 1]
    inv, _, _ = snf([[5, 0], [0, 25]], p=5, M=4)
    assert sorted(inv) == [5, 25]


@settings(max_examples=40, deadline=None)
@given(matrices)
def test_snf_product_is_determinant(m):
    inv, _, _ = snf(m)
    prod = 1
    for d in inv:
        prod *= d
    det = det_bareiss(m)
    assert (prod if len(inv) == len(m) else 0) == abs(det)


@settings(max_examples=40, deadline=None)
@given(matrices)
def test_modular_snf_transforms(m):
    p, M = 3, 4
    q = p ** M
    A = np.array(m, dtype=object) % q
    s = snf_mod(A, p, M)
    D = matmul_mod(matmul_mod(s.U, A, q), s.V, q)
    for i in range(D.shape[0]):
        for j in range(D.shape[1]):
            expect = p ** s.vals[i] % q if i == j else 0
            assert D[i, j] % q == expect
    assert (matmul_mod(s.V, s.Vinv, q) == np.eye(len(m), dtype=object)).all()


@settings(max_examples=30, deadline=None)
@given(matrices, st.lists(st.integers(0, 80), min_size=4, max_size=4))
def test_solve_and_kernel(m, x):
    p, M = 3, 4
    q = p ** M
    A = np.array(m, dtype=object) % q
    x = np.array(x[: A.shape[1]], dtype=object)
    b = matmul_mod(A, x.reshape(-1, 1), q).ravel()
    sol = solve_mod(A, b, p, M)
    assert sol is not None
    assert (matmul_mod(A, np.asarray(sol).reshape(-1, 1), q).ravel() == b).all()
    K = kernel_mod(A, p, M)
    if K.size:
        assert not matmul_mod(A, K, q).any()


def test_span_size():
    assert span_size([[5, 0], [0, 1]], 5, 3) == 2 + 3
    assert span_size([[0, 0]], 5, 3) == 0


def test_integer_kernel_is_saturated():
    ker = integer_kernel([[2, 4, 6]])
    assert len(ker) == 2
    for v in ker:
        assert 2 * v[0] + 4 * v[1] + 6 * v[2] == 0
    # index of the kernel lattice in its saturation is 1: some 2x2 minor is +-1
    minors = [ker[0][i] * ker[1][j] - ker[0][j] * ker[1][i] for i in range(3) for j in range(i + 1, 3)]
    from math import gcd
    g = 0
    for x in minors:
        g = gcd(g, x)
    assert g == 1


def test_lattice_basis():
    basis = integer_lattice_basis([[2, 0], [0, 2], [1, 1]])
    assert len(basis) == 2
    det = basis[0][0] * basis[1][1] - basis[0][1] * basis[1][0]
    assert abs(det) == 2


def test_hermite_transform():
    rows = [[4, 6], [6, 9], [2, 3]]
    ech, T = hermite_rows(rows, track=True)
    for i in range(3):
        assert [sum(T[i][t] * rows[t][j] for t in range(3)) for j in range(2)] == ech[i]
    assert abs(det_bareiss(T)) == 1
