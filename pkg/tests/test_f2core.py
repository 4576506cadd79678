import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dehntwist.f2core import (BinMatrix, BitVec, CyclicPoly, DimensionError, ModulusMismatch,
                              inverse, is_invertible, kernel_basis, plain_poly, poly_gcd,
                              poly_mul, poly_transpose, rank, regular_representation, rref,
                              solve_in_rowspace, x_n_plus_1)

CIRC = BinMatrix.from_supports([[0, 1], [1, 2], [0, 2]], 3)


def matrices(max_rows=7, max_cols=9):
    return st.integers(1, max_rows).flatmap(lambda r: st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.integers(0, (1 << c) - 1), min_size=r, max_size=r).map(
            lambda rows: BinMatrix.from_rows(rows, c))))


def polys(n):
    return st.lists(st.integers(0, n - 1), max_size=n).map(lambda e: CyclicPoly(n, e))


def test_rank_examples():
    assert rank(BinMatrix.identity(3)) == 3
    assert rank(BinMatrix.zeros(4, 7)) == 0
    assert rank(CIRC) == 2


def test_kernel_examples():
    assert kernel_basis(BinMatrix.identity(3)).nrows == 0
    assert kernel_basis(BinMatrix.zeros(2, 4)).nrows == 4
    ker = kernel_basis(CIRC)
    assert ker.nrows == 1 and ker.rows[0] == 0b111


def test_solve_examples():
    assert solve_in_rowspace(CIRC, BitVec.zeros(3)) == BitVec.zeros(3)
    c = solve_in_rowspace(CIRC, CIRC.row(0))
    assert CIRC.combine(c) == CIRC.row(0)
    assert solve_in_rowspace(CIRC, BitVec.from_support(3, [0])) is None
    with pytest.raises(DimensionError):
        solve_in_rowspace(CIRC, BitVec.zeros(4))


def test_poly_mul_examples():
    for q in (1, 2, 5, 9):
        n = 3 * q
        g = CyclicPoly(n, [0, 1]) * CyclicPoly(n, [3 * i for i in range(1, q + 1)])
        assert poly_mul(CyclicPoly(n, [0, 1, 2]), g).is_zero()
    a = CyclicPoly(7, [0, 3, 5])
    assert a * CyclicPoly.one(7) == a
    assert (CyclicPoly(2, [0, 1]) * CyclicPoly(2, [0, 1])).is_zero()
    with pytest.raises(ModulusMismatch):
        poly_mul(CyclicPoly(3, [0]), CyclicPoly(4, [0]))


def test_transpose_examples():
    assert poly_transpose(CyclicPoly(15, [0, 1, 5])) == CyclicPoly(15, [0, 10, 14])
    assert poly_transpose(CyclicPoly.one(6)) == CyclicPoly.one(6)
    rep = CyclicPoly(8, range(8))
    assert rep.T == rep


def test_gcd_examples():
    assert poly_gcd(plain_poly([0, 1, 2]), x_n_plus_1(15)) == 0b111
    a = plain_poly([0, 2, 3, 7])
    assert poly_gcd(a, a) == a
    assert poly_gcd(plain_poly([0, 1]), x_n_plus_1(3)) == 0b11
    with pytest.raises(ValueError):
        poly_gcd(0, 0)


def test_regular_representation_examples():
    assert regular_representation(CyclicPoly.one(4)) == BinMatrix.identity(4)
    m = regular_representation(CyclicPoly(3, [0, 1]))
    assert m.row_weights() == [2, 2, 2] and m.col_weights() == [2, 2, 2]
    p = CyclicPoly(11, [0, 4, 5, 9])
    m = regular_representation(p)
    assert set(m.row_weights()) == {4} and set(m.col_weights()) == {4}


def test_regular_representation_is_circulant_of_columns():
    p = CyclicPoly(5, [0, 2])
    m = regular_representation(p)
    # column j holds x^j p
    for j in range(5):
        col = [m[i, j] for i in range(5)]
        assert [i for i, b in enumerate(col) if b] == sorted((e + j) % 5 for e in p.terms())


def test_inverse_and_dense_roundtrip():
    m = BinMatrix.from_supports([[0, 1], [1], [1, 2]], 3)
    assert inverse(m) @ m == BinMatrix.identity(3)
    assert BinMatrix.from_dense(m.to_dense()) == m
    assert not is_invertible(CIRC)
    with pytest.raises(ZeroDivisionError):
        inverse(CIRC)


def test_bitvec_basics():
    v = BitVec.from_support(6, [1, 4])
    assert v.weight == 2 and v.support() == [1, 4] and v[4] == 1
    assert BitVec.from_array(v.to_array()) == v
    assert v.dot(BitVec.from_support(6, [4, 5])) == 1
    with pytest.raises(DimensionError):
        BitVec(3, 0b1000)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 12).flatmap(lambda n: st.tuples(polys(n), polys(n))))
def test_regular_representation_homomorphism(pair):
    a, b = pair
    ra, rb = regular_representation(a), regular_representation(b)
    assert regular_representation(a * b) == ra @ rb
    assert regular_representation(a + b) == ra + rb
    assert regular_representation(a.T) == ra.T


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    ker = kernel_basis(m)
    assert rank(m) + ker.nrows == m.ncols
    assert (m @ ker.T).is_zero()
    assert rank(ker) == ker.nrows


@settings(max_examples=80, deadline=None)
@given(matrices(), st.integers(0, 1 << 9))
def test_solve_iff_rank_unchanged(m, raw):
    v = BitVec(m.ncols, raw & ((1 << m.ncols) - 1))
    c = solve_in_rowspace(m, v)
    grows = rank(m.vstack(BinMatrix.from_rows([v.bits], m.ncols))) > rank(m)
    assert (c is None) == grows
    if c is not None:
        assert m.combine(c) == v


@settings(max_examples=50, deadline=None)
@given(matrices())
def test_rref_matches_rank(m):
    r, pivots = rref(m)
    assert len(pivots) == rank(m)
    for i, p in enumerate(pivots):
        assert [(row >> p) & 1 for row in r.rows] == [int(t == i) for t in range(r.nrows)]
    assert np.array_equal((m.to_dense() @ m.to_dense().T) % 2, (m @ m.T).to_dense())
