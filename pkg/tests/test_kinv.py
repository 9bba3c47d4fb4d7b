import pytest
from hypothesis import given, strategies as st

from kdual.fgab import FgGroup, GroupElement, IntMatrix, PointedGroup, pointed_iso
from kdual.kinv import (
    C_INVARIANT,
    S_INVARIANT,
    KInvariant,
    StandardModel,
    cone_of_unit,
    cone_six_term,
    cuntz_invariant,
    cuntz_krieger_invariant,
    standard_model,
    suspension,
)
from kdual.kkuct import check_exactness

import oracles
from strategies import fg_groups, pointed_invariants


def G(*orders):
    return FgGroup.from_orders(orders)


def test_cuntz_invariant():
    o2 = cuntz_invariant(2)
    assert o2.k0.is_trivial and o2.k1.is_trivial and o2.unit.coords == ()
    o5 = cuntz_invariant(5)
    assert o5.k0 == G(4) and o5.unit.coords == (1,) and o5.k1.is_trivial
    with pytest.raises(ValueError):
        cuntz_invariant(1)


@pytest.mark.parametrize("rows", [[[1, 1], [1, 1]], [[1, 1], [1, 0]]])
def test_cuntz_krieger_trivial_examples(rows):
    x = cuntz_krieger_invariant(IntMatrix.from_rows(rows))
    assert x.k0.is_trivial and x.k1.is_trivial


@pytest.mark.parametrize("n", range(2, 9))
def test_one_by_one_matrix_is_cuntz(n):
    x = cuntz_krieger_invariant(IntMatrix.from_rows([[n]]))
    y = cuntz_invariant(n)
    assert x.k1 == y.k1
    assert pointed_iso(PointedGroup(x.k0, (x.unit,)), PointedGroup(y.k0, (y.unit,))) is not None


def test_all_ones_matrix_is_cuntz():
    for n in range(2, 6):
        x = cuntz_krieger_invariant(IntMatrix.from_rows([[1] * n] * n))
        assert x.k0 == G(n - 1) and x.k1.is_trivial
        assert x.k0.element_order(x.unit) == (n - 1 if n > 2 else 1)


def test_cuntz_krieger_rejects_bad_matrices():
    with pytest.raises(ValueError):
        cuntz_krieger_invariant(IntMatrix.from_rows([[1, -1], [0, 1]]))
    with pytest.raises(ValueError):
        cuntz_krieger_invariant(IntMatrix.from_rows([[1, 1]]))


@given(st.integers(1, 5).flatmap(lambda n: st.lists(
    st.lists(st.integers(0, 1), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_cuntz_krieger_groups_against_sympy(rows):
    n = len(rows)
    m = [[int(i == j) - rows[j][i] for j in range(n)] for i in range(n)]
    diag = oracles.smith_diagonal(m)
    x = cuntz_krieger_invariant(IntMatrix.from_rows(rows))
    assert x.k0.torsion == tuple(d for d in diag if d > 1)
    assert x.k0.free_rank == diag.count(0) == x.k1.free_rank
    assert x.k1.torsion == ()


def test_suspension_examples():
    assert suspension(C_INVARIANT).groups() == S_INVARIANT.groups()
    o = cuntz_invariant(4)
    assert suspension(o).groups() == (FgGroup(), G(3))


@given(pointed_invariants())
def test_suspension_involution(x):
    assert suspension(suspension(x)).groups() == x.groups()


def test_standard_model_examples():
    x = KInvariant(G(0, 2), G(3))
    assert standard_model(x) == StandardModel(1, 0, (2,), (3,))
    assert standard_model(C_INVARIANT.forget()) == StandardModel(1, 0)
    assert standard_model(cuntz_invariant(6)) == StandardModel(0, 0, (5,), ())
    assert standard_model(x).describe() == "C^1 + O_3 + SO_4"


@given(fg_groups(max_rank=3, max_torsion=32), fg_groups(max_rank=3, max_torsion=32))
def test_standard_model_roundtrip(k0, k1):
    x = KInvariant(k0, k1)
    assert standard_model(x).reconstruct() == x


@pytest.mark.parametrize("n", range(2, 9))
def test_cone_of_cuntz(n):
    c = cone_of_unit(cuntz_invariant(n))
    assert c.k0 == FgGroup(1) and c.k1.is_trivial
    assert c.e_u.matrix.rows == ((n - 1,),)


def test_cone_examples():
    c = cone_of_unit(C_INVARIANT)
    assert c.k0.is_trivial and c.k1.is_trivial
    torus = KInvariant(FgGroup(1), FgGroup(1), GroupElement((1,)))
    c = cone_of_unit(torus)
    assert c.k0 == FgGroup(1) and c.k1.is_trivial
    assert c.e_u.matrix.rows == ((0,),)
    with pytest.raises(ValueError):
        cone_of_unit(S_INVARIANT)


@given(fg_groups(), fg_groups())
def test_cone_of_zero_unit(k0, k1):
    c = cone_of_unit(KInvariant(k0, k1, k0.zero()))
    assert c.k0 == G(*(k1.moduli + (0,)))
    assert c.k1 == k0


@given(pointed_invariants())
def test_cone_six_term_exact(x):
    assert check_exactness(cone_six_term(x)).exact


def test_invariant_json_roundtrip():
    x = KInvariant(G(0, 4), G(2), GroupElement((3, -1)), GroupElement((0, 1)))
    assert x.unit.coords == (3, 3)
    assert KInvariant.from_json(x.to_json()) == x
    assert "e_class" not in C_INVARIANT.to_json()
