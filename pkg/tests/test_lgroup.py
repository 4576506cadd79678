import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dehntwist.cyclic import family_code
from dehntwist.f2core import BinMatrix, inverse
from dehntwist.lgroup import (GlElement, StabilizerChain, generated_group_order, gl_order,
                              is_full_gl, symplectic_group_order, transvection)
from dehntwist.logicals import kunneth_basis
from dehntwist.products import hgp_blueprint
from dehntwist.twist import run_twist, twist_catalog_16

GL8 = 5_348_063_769_211_699_200


def test_order_formula():
    assert gl_order(2) == 6 and gl_order(3) == 168 and gl_order(8) == GL8


def test_small_groups():
    assert generated_group_order([BinMatrix.identity(3)]) == 1
    assert generated_group_order([transvection(2, 0, 1)]) == 2
    assert generated_group_order([transvection(2, 0, 1), transvection(2, 1, 0)]) == 6
    gens = [transvection(3, i, j) for i in range(3) for j in range(3) if i != j]
    assert generated_group_order(gens) == 168
    assert generated_group_order([transvection(3, 0, 1), transvection(3, 0, 2)]) == 4


def test_full_gl_flags():
    assert not is_full_gl([BinMatrix.identity(4)])
    k = 5
    gens = [transvection(k, i, (i + 1) % k) for i in range(k)] + [transvection(k, 1, 0)]
    assert is_full_gl(gens) == (generated_group_order(gens) == gl_order(k))


def test_singular_generator_rejected():
    with pytest.raises(ValueError):
        GlElement(BinMatrix.zeros(2, 2))


def test_permutation_chain_symmetric_group():
    # S_5 from a transposition and a 5-cycle
    chain = StabilizerChain(5)
    chain.add(np.array([1, 0, 2, 3, 4]))
    chain.add(np.array([1, 2, 3, 4, 0]))
    assert chain.order() == 120
    assert chain.contains(np.array([4, 3, 2, 1, 0]))


def test_hgp_q3_catalog_generates_gl8():
    bp = hgp_blueprint(family_code(3), family_code(3))
    code = bp.build()
    basis = kunneth_basis(bp, code)
    reps = [run_twist(code, basis, s) for s in twist_catalog_16(bp)]
    assert generated_group_order([r.glx for r in reps]) == GL8
    assert symplectic_group_order([(r.glx, r.glz) for r in reps]) == GL8
    assert is_full_gl([r.glx for r in reps])


def _invertible(k):
    return st.lists(st.integers(0, (1 << k) - 1), min_size=k, max_size=k).map(
        lambda rows: BinMatrix.from_rows(rows, k)).filter(_is_inv)


def _is_inv(m):
    try:
        inverse(m)
        return True
    except ZeroDivisionError:
        return False


@settings(max_examples=25, deadline=None)
@given(st.lists(_invertible(4), min_size=1, max_size=3), _invertible(4))
def test_order_conjugation_invariant(gens, c):
    ci = inverse(c)
    conj = [ci @ g @ c for g in gens]
    order = generated_group_order(gens)
    assert generated_group_order(conj) == order
    assert gl_order(4) % order == 0
