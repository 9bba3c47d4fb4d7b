"""Acceptance criteria 1-8.  Each test records one PASS/FAIL line, printed at the end of the run.

Also runnable directly: ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import random
import time
from math import gcd

import pytest

from kdual.cli import JobSpec, run
from kdual.extgrp import ext_strong, ext_weak, extension_six_term, skase_six_term, strong_class, toeplitz_class
from kdual.fgab import (
    FgGroup,
    IntMatrix,
    PointedGroup,
    cokernel,
    ext_group,
    hom_group,
    invariant_factors,
    pointed_iso,
    smith_normal_form,
)
from kdual.kinv import KInvariant, cone_six_term, cuntz_invariant, cuntz_krieger_invariant
from kdual.kkuct import check_exactness, dual_group_check, dual_invariant, kk_group
from kdual.strongdual import ExtensionDatum, solve_dual_extension, verify_strong_duality

import oracles
from strategies import random_01, random_invariant, random_matrix, random_pointed


def criterion_1():
    """O_n, n = 2..8: Ext_s = Z, iota = n - 1, Toeplitz class = generator, under 1 s."""
    t0 = time.perf_counter()
    iota_signs, toeplitz_signs = set(), set()
    for n in range(2, 9):
        code, out = run(JobSpec("ext-strong", {"cuntz": n}))
        if code or out["group"] != {"free_rank": 1, "torsion": []}:
            return False, f"n={n}: {out}"
        (iota,) = out["iota"]["coords"]
        if abs(iota) != n - 1:
            return False, f"n={n}: iota {iota}"
        iota_signs.add(iota > 0)
        cls = toeplitz_class(IntMatrix.from_rows([[n]]))
        if ext_strong(cls.base).group != FgGroup(1) or abs(cls.coords.coords[0]) != 1:
            return False, f"n={n}: toeplitz {cls.coords}"
        toeplitz_signs.add(cls.coords.coords[0] > 0)
    dt = time.perf_counter() - t0
    if len(iota_signs) != 1 or len(toeplitz_signs) != 1:
        return False, "sign convention not uniform in n"
    # (Z, n-1, 1) with the signs produced here
    exact = iota_signs == {True} and toeplitz_signs == {True}
    return exact and dt < 1.0, f"(Z, n-1, 1) for n=2..8 in {dt:.3f}s"


def criterion_2():
    """E(m) over O_n: dual base is (Z/(n-1), unit m) and F is (Z, n-1, eps m), under 10 s."""
    t0 = time.perf_counter()
    z = FgGroup(1)
    for n, m, eps in itertools.product(range(2, 7), (1, 2, 3), (1, -1)):
        a = cuntz_invariant(n)
        f = solve_dual_extension(ExtensionDatum.from_class(a, [m]), eps)
        b = f.base
        want_b = PointedGroup(a.k0, (a.k0.scale(m, a.unit),))
        if b.k1 != a.k1 or pointed_iso(PointedGroup(b.k0, (b.unit,)), want_b) is None:
            return False, f"n={n} m={m} eps={eps}: base {b.to_json()}"
        if gcd(m, n - 1) == 1:
            inv = f.e_inv
            want = PointedGroup(z, (z.element([n - 1]), z.element([eps * m])))
            if inv.k0 != z or not inv.k1.is_trivial or \
                    pointed_iso(PointedGroup(inv.k0, (inv.e_class, inv.unit)), want) is None:
                return False, f"n={n} m={m} eps={eps}: F {inv.to_json()}"
    dt = time.perf_counter() - t0
    return dt < 10.0, f"60 solves in {dt:.3f}s"


def criterion_3():
    """dual_invariant is an involution (500 invariants); dual_group_check on 200 pairs."""
    rng = random.Random(3)
    for _ in range(500):
        x = random_invariant(rng, 4, 64)
        if dual_invariant(dual_invariant(x)).groups() != x.groups():
            return False, f"involution fails on {x.to_json()}"
    for _ in range(200):
        a, b = random_invariant(rng, 4, 64), random_invariant(rng, 4, 64)
        if not dual_group_check(a, b):
            return False, f"dual_group_check fails on {a.to_json()}, {b.to_json()}"
    return True, "500 involutions, 200 pairs"


def criterion_4():
    """Hom/Ext against brute force on all groups of order <= 24; KK totals composed from the oracle."""
    groups = [FgGroup.from_orders(o) for n in range(1, 25) for o in oracles.abelian_groups_of_order(n)]
    ts = range(1, 25)
    for g, h in itertools.product(groups, repeat=2):
        hom, ext = hom_group(g, h), ext_group(g, h)
        for t in ts:
            if hom.killed_by(t) != oracles.hom_killed(g.torsion, h.torsion, t):
                return False, f"Hom({g}, {h}) at t={t}"
            if ext.killed_by(t) != oracles.ext_killed(g.torsion, h.torsion, t):
                return False, f"Ext({g}, {h}) at t={t}"
    rng = random.Random(4)
    for _ in range(300):
        a0, a1, b0, b1 = (rng.choice(groups) for _ in range(4))
        kk = kk_group(KInvariant(a0, a1), KInvariant(b0, b1)).total
        for t in (2, 3, 4, 6, 12, 24):
            want = (oracles.hom_killed(a0.torsion, b0.torsion, t)
                    * oracles.hom_killed(a1.torsion, b1.torsion, t)
                    * oracles.ext_killed(a0.torsion, b1.torsion, t)
                    * oracles.ext_killed(a1.torsion, b0.torsion, t))
            if kk.killed_by(t) != want:
                return False, f"KK total at t={t}"
    return True, f"{len(groups)} groups, {len(groups) ** 2} pairs, 300 KK quadruples"


def criterion_5():
    """SNF on 1000 random matrices up to 8 x 8 with entries in [-9, 9]."""
    rng = random.Random(5)
    for _ in range(1000):
        m = random_matrix(rng, 8, 9)
        u, d, v = smith_normal_form(m)
        if u @ m @ v != d or abs(u.det()) != 1 or abs(v.det()) != 1:
            return False, f"factorization fails on {m.tolist()}"
        diag = invariant_factors(m)[: min(m.shape)]
        for a, b in zip(diag, diag[1:]):
            if (a == 0 and b != 0) or (a and b % a):
                return False, f"divisibility fails on {m.tolist()}"
        if diag != oracles.smith_diagonal(m.tolist()):
            return False, f"sympy disagrees on {m.tolist()}"
        c, ct = cokernel(m), cokernel(m.T)
        if c.torsion != ct.torsion or (m.nrows == m.ncols and c != ct):
            return False, f"transpose invariance fails on {m.tolist()}"
    return True, "1000 matrices"


def criterion_6():
    """Ext_w of Cuntz-Krieger algebras against coker(I - A), 200 matrices up to 6 x 6, under 5 s."""
    rng = random.Random(6)
    mats = [random_01(rng, 6) for _ in range(200)]
    t0 = time.perf_counter()
    weak = [ext_weak(cuntz_krieger_invariant(a)) for a in mats]
    dt = time.perf_counter() - t0
    for a, w in zip(mats, weak):
        n = a.nrows
        diag = oracles.smith_diagonal([[int(i == j) - a.rows[i][j] for j in range(n)] for i in range(n)])
        if w.torsion != tuple(x for x in diag if x > 1) or w.free_rank != diag.count(0):
            return False, f"mismatch on {a.tolist()}"
    return dt < 5.0, f"200 matrices in {dt:.3f}s"


def criterion_7():
    """Every generated six-term instance is exact, 200 random pointed invariants."""
    rng = random.Random(7)
    for _ in range(200):
        a = random_pointed(rng, 2, 12)
        cls = strong_class(a, [rng.randint(-5, 5) for _ in range(ext_strong(a).group.ngens)])
        for name, s in (("skase", skase_six_term(a)), ("cone", cone_six_term(a)),
                        ("extension", extension_six_term(a, cls))):
            report = check_exactness(s)
            if not report.exact:
                return False, f"{name} instance of {a.to_json()} fails at {report.failures}"
    return True, "600 instances"


def criterion_8():
    """Solver round trip on 100 random extension data, both signs."""
    rng = random.Random(8)
    for _ in range(100):
        a = random_pointed(rng, 2, 12)
        e = ExtensionDatum.from_class(a, [rng.randint(-5, 5) for _ in range(ext_strong(a).group.ngens)])
        for eps in (1, -1):
            f = solve_dual_extension(e, eps)
            if not verify_strong_duality(e, f, eps).holds:
                return False, f"{a.to_json()} class {e.cls.coords} eps={eps}"
    return True, "200 solves verified"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4,
            criterion_5, criterion_6, criterion_7, criterion_8]


def _line(i, ok, detail):
    return f"criterion {i}: {'PASS' if ok else 'FAIL'}  {detail}"


@pytest.mark.parametrize("index", range(1, 9))
def test_criterion(index, acceptance_log):
    ok, detail = CRITERIA[index - 1]()
    line = _line(index, ok, detail)
    acceptance_log.append(line)
    print(line)
    assert ok, line


if __name__ == "__main__":
    for i, crit in enumerate(CRITERIA, 1):
        print(_line(i, *crit()), flush=True)
