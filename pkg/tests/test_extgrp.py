from math import gcd

import pytest
from hypothesis import given, strategies as st

from kdual.extgrp import (
    ExtClassCoords,
    dfrak_invariant,
    ext_strong,
    ext_weak,
    extension_k_invariant,
    extension_six_term,
    index_map,
    skase_six_term,
    strong_class,
    toeplitz_class,
)
from kdual.fgab import FgGroup, GroupElement, IntMatrix, PointedGroup, pointed_iso, quotient_by
from kdual.kinv import C_INVARIANT, KInvariant, cone_of_unit, cuntz_invariant, cuntz_krieger_invariant
from kdual.kkuct import check_exactness

import oracles
from strategies import extension_classes, pointed_invariants


def G(*orders):
    return FgGroup.from_orders(orders)


def square_01(max_n=6):
    return st.integers(1, max_n).flatmap(lambda n: st.lists(
        st.lists(st.integers(0, 1), min_size=n, max_size=n), min_size=n, max_size=n))


# ---------------------------------------------------------------------------
# weak and strong groups
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("n", range(2, 9))
def test_ext_weak_cuntz(n):
    assert ext_weak(cuntz_invariant(n)) == (G(n - 1) if n > 2 else FgGroup())


def test_ext_weak_c():
    assert ext_weak(C_INVARIANT).is_trivial


@given(square_01())
def test_ext_weak_cuntz_krieger(rows):
    n = len(rows)
    diag = oracles.smith_diagonal([[int(i == j) - rows[i][j] for j in range(n)] for i in range(n)])
    w = ext_weak(cuntz_krieger_invariant(IntMatrix.from_rows(rows)))
    assert w.torsion == tuple(d for d in diag if d > 1)
    assert w.free_rank == diag.count(0)


@pytest.mark.parametrize("n", range(2, 9))
def test_ext_strong_cuntz(n):
    s = ext_strong(cuntz_invariant(n))
    assert s.group == FgGroup(1)
    assert s.iota_W.coords == (n - 1,)
    assert s.hom_part(s.iota_W).matrix.rows == ((n - 1,),)


def test_ext_strong_examples():
    s = ext_strong(C_INVARIANT)
    assert s.group.is_trivial and s.iota_W.coords == ()
    torus = KInvariant(FgGroup(1), FgGroup(1), GroupElement((1,)))
    s = ext_strong(torus)
    assert s.group == FgGroup(1) and s.iota_W.coords == (0,)
    with pytest.raises(ValueError):
        ext_strong(KInvariant(FgGroup(1), FgGroup()))


def test_iota_has_ext_part_for_divisible_torsion_unit():
    # K_0 = Z/4 with [1] = 2: the quotient of Ext_s by iota must be Ext_w = Z/4,
    # which forces a nonzero Ext-part on iota
    a = KInvariant(G(4), FgGroup(), GroupElement((2,)))
    s = ext_strong(a)
    assert s.group == G(0, 2)
    assert quotient_by(s.group, s.iota_W) == ext_weak(a)
    assert s.ext_part(s.iota_W).coords == (1,)


@given(pointed_invariants())
def test_strong_quotient_is_weak(a):
    s = ext_strong(a)
    q = quotient_by(s.group, s.iota_W)
    w = ext_weak(a)
    # K_0(C) -> Ext_s -> Ext_w -> 0 is exact
    assert q == w
    assert s.weak_map().is_surjective()


@given(pointed_invariants())
def test_strong_group_matches_cone(a):
    s, c = ext_strong(a), cone_of_unit(a)
    assert s.group == G(*([0] * c.k0.free_rank + list(c.k1.torsion)))
    assert s.group == dfrak_invariant(a).k0


@given(pointed_invariants())
def test_dfrak_k1(a):
    c = cone_of_unit(a)
    assert dfrak_invariant(a).k1 == G(*([0] * c.k1.free_rank + list(c.k0.torsion)))


@given(pointed_invariants())
def test_skase_six_term_exact(a):
    assert check_exactness(skase_six_term(a)).exact


@pytest.mark.parametrize("n", range(2, 8))
def test_skase_cuntz(n):
    s = skase_six_term(cuntz_invariant(n))
    assert s.groups[1] == FgGroup(1)
    assert s.maps[0].matrix.rows == ((n - 1,),)
    assert check_exactness(s).exact


def test_skase_c():
    assert check_exactness(skase_six_term(C_INVARIANT)).exact


# ---------------------------------------------------------------------------
# classes and extension algebras
# ---------------------------------------------------------------------------


@given(extension_classes())
def test_class_parts_roundtrip(data):
    a, coords = data
    cls = strong_class(a, coords)
    s = ext_strong(a)
    assert s.from_parts(cls.hom_part.matrix.rows[0], cls.ext_part.coords) == cls.coords
    again = ExtClassCoords.from_json(a, cls.to_json())
    assert again.coords == cls.coords
    parts = {k: v for k, v in cls.to_json().items() if k != "coords"}
    assert ExtClassCoords.from_json(a, parts).coords == cls.coords


def test_class_json_shape():
    cls = strong_class(cuntz_invariant(4), [2])
    assert cls.to_json() == {"hom": {"rows": [[2]]}, "ext": {"coords": []}, "coords": [2]}


@pytest.mark.parametrize("n", range(2, 8))
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_extension_of_cuntz(n, m):
    a = cuntz_invariant(n)
    e = extension_k_invariant(a, strong_class(a, [m]))
    g = gcd(m, n - 1)
    assert e.k0 == (G(0, g) if g > 1 else FgGroup(1))
    assert e.k1.is_trivial
    if g == 1:
        (ev,), (uv,) = e.e_class.coords, e.unit.coords
        assert abs(ev) == n - 1
        assert gcd(uv, ev) == 1


@pytest.mark.parametrize("n", range(2, 8))
def test_cuntz_toeplitz_convention(n):
    # the Toeplitz extension of O_n has K_0 = Z with [e] = (1 - n)[1]
    cls = toeplitz_class(IntMatrix.from_rows([[n]]))
    e = extension_k_invariant(cls.base, cls)
    assert e.k0 == FgGroup(1) and e.k1.is_trivial
    z = FgGroup(1)
    want = PointedGroup(z, (z.element([1]), z.element([1 - n])))
    assert pointed_iso(PointedGroup(e.k0, (e.unit, e.e_class)), want) is not None


@given(pointed_invariants())
def test_trivial_extension_splits(a):
    s = ext_strong(a)
    e = extension_k_invariant(a, strong_class(a, [0] * s.group.ngens))
    assert e.k0 == G(0, *a.k0.moduli)
    assert e.k1 == a.k1
    assert e.k0.element_order(e.e_class) == 0
    assert quotient_by(e.k0, e.e_class) == a.k0
    assert pointed_iso(
        PointedGroup(e.k0, (e.e_class, e.unit)),
        PointedGroup(e.k0, (e.k0.element([1] + [0] * a.k0.ngens),
                            e.k0.element([0] + list(a.unit.coords)))),
    ) is not None


@given(extension_classes(), st.sampled_from([1, -1]))
def test_extension_six_term_exact(data, eps):
    a, coords = data
    assert check_exactness(extension_six_term(a, strong_class(a, coords), eps)).exact


@given(extension_classes())
def test_extension_quotient_recovers_base(data):
    a, coords = data
    cls = strong_class(a, coords)
    e = extension_k_invariant(a, cls)
    assert quotient_by(e.k0, e.e_class) == a.k0
    assert index_map(cls).source == a.k1


def test_toeplitz_models_agree():
    for n in range(2, 7):
        one = toeplitz_class(IntMatrix.from_rows([[n]]))
        full = toeplitz_class(IntMatrix.from_rows([[1] * n] * n))
        assert one.coords.coords == full.coords.coords == (1,)


def test_toeplitz_rejects_general_matrices():
    with pytest.raises(ValueError):
        toeplitz_class(IntMatrix.from_rows([[2, 1], [1, 1]]))


def test_extension_class_base_mismatch():
    cls = strong_class(cuntz_invariant(3), [1])
    with pytest.raises(ValueError):
        extension_k_invariant(cuntz_invariant(4), cls)
