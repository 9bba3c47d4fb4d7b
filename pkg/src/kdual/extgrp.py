"""Weak and strong extension groups and the K-theory of extension algebras.

Computations run on a minimal Z/2-graded free chain model of A built from
the canonical presentations of K_0(A) and K_1(A):

    C_0 = Z^{gens K_0} + Z^{tors K_1},   C_1 = Z^{gens K_1} + Z^{tors K_0},

with the relation matrices as differentials and the unit as a 0-cycle.
Ext_s(A) = KK(C_u, C) is the degree-0 cohomology of Hom(cone(u), Z).
A cochain ("raw" coordinates) is

    (f_c, f_h[0..r1), f_k[0..t0))

where f_c is the value on the generator coming from C, f_h the values on
the free generators of K_1(A) and f_k the values on the torsion relations
of K_0(A).  Coboundaries are (h . [1], 0, h . R_0) for h in Z^{gens K_0}.
The image of a Toeplitz-type unitary is iota_W = (1, 0, 0).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .fgab import (
    FgGroup,
    GroupElement,
    GroupHom,
    IntMatrix,
    Presentation,
    kernel_basis,
    present,
    solve_integer,
    _row_hnf,
    _snf_full,
)
from .kinv import Cone, KInvariant, cone_of_unit, cuntz_krieger_matrix
from .kkuct import SixTermInstance, dual_invariant


def ext_weak(a: KInvariant) -> FgGroup:
    """Ext_w(A) = Ext(A, K) = Hom(K_1(A), Z) + Ext(K_0(A), Z)."""
    return FgGroup(a.k1.free_rank, a.k0.torsion)


@dataclass(frozen=True, eq=False)
class StrongExtGroup:
    of: KInvariant
    cone: Cone
    presentation: Presentation

    @property
    def group(self) -> FgGroup:
        return self.presentation.group

    @property
    def raw_dim(self) -> int:
        return 1 + self.of.k1.free_rank + len(self.of.k0.torsion)

    @cached_property
    def iota_W(self) -> GroupElement:
        return self.from_cochain([1] + [0] * (self.raw_dim - 1))

    def from_cochain(self, raw: Sequence[int]) -> GroupElement:
        if len(raw) != self.raw_dim:
            raise ValueError(f"cochain of length {len(raw)}, expected {self.raw_dim}")
        return self.presentation.element(raw)

    def cochain(self, x: GroupElement) -> list[int]:
        return self.presentation.lift(self.group.element(x.coords))

    def hom_part(self, x: GroupElement) -> GroupHom:
        """Image of x in Hom(K_0(C_u), Z)."""
        a, c = self.of, self.cone
        r1 = a.k1.free_rank
        raw = self.cochain(x)
        fc, fh, fk = raw[0], raw[1 : 1 + r1], raw[1 + r1 :]
        vals = list(fh)
        k = c.unit_order
        if k:
            ut = a.unit.coords[a.k0.free_rank :]
            # the unit-kernel generator is the cycle (k, a) with a_j = -k u_j / d_j
            vals.append(k * fc - sum(f * (k * u // d) for f, u, d in zip(fk, ut, a.k0.torsion)))
        vals += [0] * len(c.k0.torsion)
        return GroupHom.from_rows(c.k0, FgGroup(1), [vals])

    def ext_part(self, x: GroupElement) -> GroupElement:
        """Component in the torsion subgroup Ext(K_1(C_u), Z)."""
        x = self.group.element(x.coords)
        return GroupElement(x.coords[self.group.free_rank :])

    def from_parts(self, hom: Sequence[int], ext: Sequence[int]) -> GroupElement:
        """Element with the given Hom-part values (on K_0(C_u) generators) and Ext-part."""
        g = self.group
        basis = [self.hom_part(g.gen(i)).matrix.rows[0] for i in range(g.free_rank)]
        lmat = IntMatrix.from_rows(zip(*basis), g.free_rank) if basis else \
            IntMatrix.zeros(self.cone.k0.ngens, 0)
        sol = solve_integer(lmat, list(hom))
        if sol is None:
            raise ValueError(f"{list(hom)} is not the Hom-part of a class in {g}")
        if len(ext) != len(g.torsion):
            raise ValueError("Ext-part has the wrong length")
        return g.element(list(sol) + list(ext))

    def weak_map(self) -> GroupHom:
        """q_A : Ext_s(A) -> Ext_w(A), forgetting the strong structure."""
        fc = self.presentation.from_canon
        return GroupHom(self.group, ext_weak(self.of), IntMatrix(fc.rows[1:], fc.ncols))

    def to_json(self) -> dict:
        return {"group": self.group.to_json(), "iota": self.iota_W.to_json()}


def ext_strong(a: KInvariant) -> StrongExtGroup:
    if a.unit is None:
        raise ValueError("Ext_s needs a unital invariant")
    k0, k1 = a.k0, a.k1
    r0, r1 = k0.free_rank, k1.free_rank
    cols = []
    for i in range(k0.ngens):
        col = [a.unit.coords[i]] + [0] * r1
        col += [d if i == r0 + j else 0 for j, d in enumerate(k0.torsion)]
        cols.append(col)
    n = 1 + r1 + len(k0.torsion)
    rel = IntMatrix.from_rows(zip(*cols), len(cols)) if cols else IntMatrix.zeros(n, 0)
    return StrongExtGroup(a, cone_of_unit(a), _normalize_iota(present(rel)))


def _normalize_iota(pres: Presentation) -> Presentation:
    """Change free coordinates so that iota_W has free part (content, 0, ..., 0), content >= 0."""
    r = pres.group.free_rank
    if r == 0:
        return pres
    iota_free = [[pres.to_canon.rows[i][0]] for i in range(r)]
    _, u, ui = _row_hnf(iota_free)
    tc, fc = pres.to_canon, pres.from_canon
    free_rows = IntMatrix.from_rows(u, r) @ IntMatrix(tc.rows[:r], tc.ncols)
    to_c = IntMatrix(free_rows.rows + tc.rows[r:], tc.ncols)
    left = IntMatrix(tuple(row[:r] for row in fc.rows), r) @ IntMatrix.from_rows(ui, r)
    from_c = IntMatrix(tuple(lr + row[r:] for lr, row in zip(left.rows, fc.rows)), fc.ncols)
    return Presentation(pres.group, to_c, from_c)


@dataclass(frozen=True)
class ExtClassCoords:
    """A class [E]_s in Ext_s(base), in the canonical coordinates of ext_strong(base).group."""

    base: KInvariant
    coords: GroupElement

    @cached_property
    def _strong(self) -> StrongExtGroup:
        return ext_strong(self.base)

    @property
    def hom_part(self) -> GroupHom:
        return self._strong.hom_part(self.coords)

    @property
    def ext_part(self) -> GroupElement:
        return self._strong.ext_part(self.coords)

    def to_json(self) -> dict:
        return {
            "hom": self.hom_part.matrix.to_json(),
            "ext": self.ext_part.to_json(),
            "coords": list(self.coords.coords),
        }

    @classmethod
    def from_json(cls, base: KInvariant, obj) -> "ExtClassCoords":
        s = ext_strong(base)
        if isinstance(obj, (int, list)):
            obj = {"coords": obj if isinstance(obj, list) else [obj]}
        if "coords" in obj:
            return cls(base, s.group.element(GroupElement.from_json(obj).coords))
        hom = IntMatrix.from_json(obj["hom"]).rows[0]
        ext = GroupElement.from_json(obj["ext"]).coords
        return cls(base, s.from_parts(hom, ext))


def strong_class(base: KInvariant, coords: Sequence[int]) -> ExtClassCoords:
    s = ext_strong(base)
    return ExtClassCoords(base, s.group.element(coords))


# ---------------------------------------------------------------------------
# six-term sequence of extension groups (coefficients in C)
# ---------------------------------------------------------------------------


def skase_six_term(a: KInvariant) -> SixTermInstance:
    """Z -> Ext_s(A) -> Ext_w(A) -> 0 -> KK(S C_u, C) -> KK(A, C) -> Z."""
    s = ext_strong(a)
    z, zero = FgGroup(1), FgGroup(0)
    k0, k1 = a.k0, a.k1
    r0 = k0.free_rank
    u_free = list(a.unit.coords[:r0])
    kb = kernel_basis(IntMatrix.from_rows([u_free], r0))
    g4 = FgGroup(kb.ncols, k1.torsion)
    g5 = FgGroup(r0, k1.torsion)
    t1 = len(k1.torsion)
    m4 = [list(kb.rows[i]) + [0] * t1 for i in range(r0)]
    m4 += [[0] * kb.ncols + [int(i == j) for j in range(t1)] for i in range(t1)]
    maps = (
        GroupHom.from_rows(z, s.group, [[c] for c in s.iota_W.coords]),
        s.weak_map(),
        GroupHom.zero(ext_weak(a), zero),
        GroupHom.zero(zero, g4),
        GroupHom.from_rows(g4, g5, m4),
        GroupHom.from_rows(g5, z, [u_free + [0] * t1]),
    )
    return SixTermInstance((z, s.group, ext_weak(a), zero, g4, g5), maps)


def dfrak_invariant(a: KInvariant) -> KInvariant:
    """K-groups of the Paschke-type dual algebra: those of D(C_u)."""
    return dual_invariant(cone_of_unit(a).invariant)


# ---------------------------------------------------------------------------
# K-theory of the extension algebra
# ---------------------------------------------------------------------------


def _extension_k0(a: KInvariant, cls: ExtClassCoords, eps_conventions: int):
    """Presentation of K_0(E) on (lifts of K_0(A) generators, [e], [1_E]) and the index cochain."""
    if eps_conventions not in (1, -1):
        raise ValueError("eps_conventions must be +1 or -1")
    if cls.base != a:
        raise ValueError("class does not belong to this base invariant")
    s = ext_strong(a)
    raw = [eps_conventions * v for v in s.cochain(cls.coords)]
    k0, k1 = a.k0, a.k1
    g, r0, r1 = k0.ngens, k0.free_rank, k1.free_rank
    fc, fh, fk = raw[0], raw[1 : 1 + r1], raw[1 + r1 :]
    cols = [[-v for v in a.unit.coords] + [fc, 1]]
    for j, d in enumerate(k0.torsion):
        cols.append([-d if i == r0 + j else 0 for i in range(g)] + [fk[j], 0])
    for v in fh:
        cols.append([0] * g + [v, 0])
    pres = present(IntMatrix.from_rows(zip(*cols), len(cols)))
    return pres, GroupHom.from_rows(k1, FgGroup(1), [list(fh) + [0] * len(k1.torsion)])


def _index_kernel(index: GroupHom) -> GroupHom:
    """K_1(E) = ker(index) with its inclusion into K_1(A)."""
    k1 = index.source
    r1, t1 = k1.free_rank, len(k1.torsion)
    kb = kernel_basis(IntMatrix.from_rows([index.matrix.rows[0][:r1]], r1))
    rows = [list(kb.rows[i]) + [0] * t1 for i in range(r1)]
    rows += [[0] * kb.ncols + [int(i == j) for j in range(t1)] for i in range(t1)]
    return GroupHom.from_rows(FgGroup(kb.ncols, k1.torsion), k1, rows)


def extension_k_invariant(a: KInvariant, cls: ExtClassCoords, eps_conventions: int = 1) -> KInvariant:
    """K-invariant (K_0(E), [1_E], [e], K_1(E)) of the unital extension K -> E -> A of class cls.

    K_0(E) is generated by lifts of the generators of K_0(A) and [e], with
    [1_E] = [1_A] - f_c [e] and each torsion relation d_j x_j = f_k[j] [e].
    The index map K_1(A) -> Z is f_h; K_1(E) is its kernel.
    ``eps_conventions = -1`` replaces the class by its negative.
    """
    pres, index = _extension_k0(a, cls, eps_conventions)
    g = a.k0.ngens
    e_vec = [0] * g + [1, 0]
    one_vec = [0] * g + [0, 1]
    return KInvariant(pres.group, _index_kernel(index).source, pres.element(one_vec),
                      pres.element(e_vec))


def extension_six_term(a: KInvariant, cls: ExtClassCoords, eps_conventions: int = 1) -> SixTermInstance:
    """K_0(K) -> K_0(E) -> K_0(A) -> K_1(K) = 0 -> K_1(E) -> K_1(A) -> K_0(K)."""
    pres, index = _extension_k0(a, cls, eps_conventions)
    inv = extension_k_invariant(a, cls, eps_conventions)
    k0e, k0a = inv.k0, a.k0
    z, zero = FgGroup(1), FgGroup(0)
    g = k0a.ngens
    # generators of the presentation: lifts of K_0(A) generators, [e], [1_E]
    fc = pres.from_canon
    proj_rows = []
    for i in range(g):
        row = []
        for j in range(k0e.ngens):
            col = fc.column(j)
            row.append(col[i] + col[g + 1] * a.unit.coords[i])
        proj_rows.append(row)
    incl = _index_kernel(index)
    maps = (
        GroupHom.from_rows(z, k0e, [[c] for c in inv.e_class.coords]),
        GroupHom.from_rows(k0e, k0a, proj_rows),
        GroupHom.zero(k0a, zero),
        GroupHom.zero(zero, incl.source),
        incl,
        index,
    )
    return SixTermInstance((z, k0e, k0a, zero, incl.source, a.k1), maps)


def index_map(cls: ExtClassCoords) -> GroupHom:
    """Index map K_1(A) -> K_0(K) = Z of the extension."""
    k1 = cls.base.k1
    return cls.hom_part.compose(cone_of_unit(cls.base).k1_inclusion) if k1.ngens else \
        GroupHom.zero(k1, FgGroup(1))


# ---------------------------------------------------------------------------
# Toeplitz extensions of Cuntz-Krieger algebras
# ---------------------------------------------------------------------------


def toeplitz_class(a_mat: IntMatrix) -> ExtClassCoords:
    """Class of the Toeplitz extension K -> T_A -> O_A.

    For a 0-1 matrix the Fock-space relations are 1 = e + sum s_i s_i^* and
    s_i^* s_i = e + sum_j A(i, j) s_j s_j^*, so each relation of
    coker(I - A^t) lifts to +[e] and [1] = sum [s_i s_i^*] + [e].  A 1 x 1
    matrix [n] is read as the one-vertex graph with n loops (the
    Cuntz-Toeplitz algebra), where [1] = [p] and p = sum s_e s_e^* + e.
    """
    from .kinv import cuntz_krieger_invariant

    n = a_mat.nrows
    base = cuntz_krieger_invariant(a_mat)
    zero_one = all(v in (0, 1) for row in a_mat.rows for v in row)
    if zero_one:
        f_c = -1
    elif n == 1:
        f_c = 0
    else:
        raise ValueError("Toeplitz extensions need a 0-1 matrix or a 1 x 1 matrix [n]")
    m = cuntz_krieger_matrix(a_mat)
    u, _, d, v, _ = _snf_full(m)
    f_rel = [sum(v[i][j] for i in range(n)) for j in range(n)]
    u_new = [sum(row) for row in u]  # U . (1, ..., 1)
    rk = sum(1 for i in range(n) if d[i][i])
    diag = [d[i][i] for i in range(n)]
    # cancel contractible pairs with a coboundary
    for j in range(rk):
        if diag[j] == 1:
            f_c -= f_rel[j] * u_new[j]
    tors_rows = [j for j in range(rk) if diag[j] > 1]
    f_k = [f_rel[j] for j in tors_rows]
    f_h = [f_rel[j] for j in range(rk, n)]
    # move from the unreduced unit lift to the reduced one used by ext_strong
    u_red = base.unit.coords[base.k0.free_rank :]
    for fk, j, ur in zip(f_k, tors_rows, u_red):
        f_c += fk * ((ur - u_new[j]) // diag[j])
    s = ext_strong(base)
    return ExtClassCoords(base, s.from_cochain([f_c] + f_h + f_k))
