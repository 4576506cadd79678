import pytest
from hypothesis import given, settings, strategies as st

from dehntwist.cyclic import family_code, repetition_code
from dehntwist.errors import BasisInvalid, NotALogical
from dehntwist.f2core import BinMatrix, BitVec, CyclicPoly
from dehntwist.logicals import (LogicalBasis, generic_basis, kunneth_basis, reduce_to_basis,
                                symplectify, verify_logicals)
from dehntwist.products import bb_build, bp_blueprint, hgp_blueprint

TABLE_ROWS = [(1, (0, 1, 2), (0, 1, 2)), (3, (0, 1, 2), (0, 1, 2, 3, 6)),
              (5, (0, 1, 5), (0, 2, 7)), (3, (0, 1, 2), (0, 1, 2)), (5, (0, 1, 2), (0, 1, 2))]


def hgp_family(q):
    return hgp_blueprint(family_code(q), family_code(q))


def bp_bp(q, p1, p2):
    l = 3 * q
    return bp_blueprint(CyclicPoly(l, p1), CyclicPoly(l, p2), l)


def test_toric_basis():
    bp = hgp_blueprint(repetition_code(3), repetition_code(4))
    b = kunneth_basis(bp)
    assert b.k == 2
    assert sorted(b.x_rows.row_weights()) == [3, 4] and sorted(b.z_rows.row_weights()) == [3, 4]
    assert b.gram == BinMatrix.identity(2)
    s = symplectify(b)
    assert s.x_rows == b.x_rows


@pytest.mark.parametrize("q", range(1, 7))
def test_hgp_family_basis(q):
    bp = hgp_family(q)
    code = bp.build()
    b = kunneth_basis(bp, code)
    assert verify_logicals(code, b).ok and code.k == b.k == 8
    assert set(b.x_rows.row_weights()) == {2 * q} and set(b.z_rows.row_weights()) == {2 * q}
    assert [str(x) for x in b.x_labels[:2]] == ["Xh_1,1", "Xh_1,2"]


@pytest.mark.parametrize("q,p1,p2", TABLE_ROWS)
def test_bp_odd_table_rows(q, p1, p2):
    bp = bp_bp(q, p1, p2)
    code = bp.build()
    b = kunneth_basis(bp, code)
    rep = verify_logicals(code, b)
    assert rep.ok and rep.k_expected == 8 and rep.gram_invertible
    assert set(b.x_rows.row_weights()) == {2 * q}


@pytest.mark.parametrize("q", [2, 4])
def test_bp_even_q_analytic_basis_collapses(q):
    # the analytic rows lose rank on the even-q quotient; a generic basis still exists
    bp = bp_bp(q, (0, 1, 2), (0, 1, 2))
    with pytest.raises(BasisInvalid):
        kunneth_basis(bp)
    code = bp.build()
    assert verify_logicals(code, generic_basis(code)).ok


def test_bivariate_needs_generic_basis():
    code = bb_build([(9, 0), (0, 1), (0, 2)], [(0, 0), (2, 0), (7, 0)], 15, 3)
    with pytest.raises(BasisInvalid):
        kunneth_basis(code.blueprint)
    g = generic_basis(code)
    assert g.k == 8 and verify_logicals(code, g).ok


def test_stabilizer_in_place_of_logical_fails():
    bp = hgp_family(2)
    code = bp.build()
    b = kunneth_basis(bp, code)
    xr = list(b.x_rows.rows)
    xr[0] = code.hx.rows[0]
    bad = LogicalBasis(BinMatrix.from_rows(xr, code.n), b.z_rows, b.x_labels, b.z_labels)
    rep = verify_logicals(code, bad)
    assert not rep.ok and any("stabiliser" in f for f in rep.failures)


def test_gram_invertibility_and_symplectify():
    bp = hgp_family(3)
    b = kunneth_basis(bp)
    assert b.gram != BinMatrix.identity(8)
    s = symplectify(b)
    assert s.gram == BinMatrix.identity(8)
    assert symplectify(s).x_rows == s.x_rows


def test_reduce_examples():
    q = 3
    bp = hgp_family(q)
    code = bp.build()
    b = kunneth_basis(bp, code)
    assert reduce_to_basis(code, b, code.hx.rows[5], "X") == BitVec.zeros(8)
    assert reduce_to_basis(code, b, code.hz.rows[7], "Z") == BitVec.zeros(8)
    # vertical logical shifted to i = 3 equals the product of i = 1 and i = 2
    grp = bp.group()
    N = grp.order
    shifted = 0
    for s in code.blueprint.code1.g.terms():
        shifted ^= 1 << (N + grp.idx(((2 + s) % (3 * q), 0)))
    coeffs = reduce_to_basis(code, b, shifted, "X")
    assert coeffs.support() == sorted([b.index("X", "v", 1, 1), b.index("X", "v", 2, 1)])
    with pytest.raises(NotALogical):
        reduce_to_basis(code, b, 1, "X")


@pytest.mark.parametrize("bp", [hgp_family(2), bp_bp(5, (0, 1, 5), (0, 2, 7)),
                                hgp_blueprint(repetition_code(5), repetition_code(3))])
def test_reduce_is_left_inverse(bp):
    code = bp.build()
    b = kunneth_basis(bp, code)
    for pauli in "XZ":
        for t, r in enumerate(b.rows(pauli).rows):
            assert reduce_to_basis(code, b, r, pauli).support() == [t]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 255), st.integers(0, (1 << 20) - 1))
def test_reduce_ignores_stabilizers(coeffs, stab_mask):
    bp = hgp_family(2)
    code = _cached(bp)
    b = kunneth_basis(bp, code)
    v = 0
    for t in range(8):
        if coeffs >> t & 1:
            v ^= b.x_rows.rows[t]
    for t in range(20):
        if stab_mask >> t & 1:
            v ^= code.hx.rows[t]
    assert reduce_to_basis(code, b, v, "X").bits == coeffs


_CODES = {}


def _cached(bp):
    if bp not in _CODES:
        _CODES[bp] = bp.build()
    return _CODES[bp]
