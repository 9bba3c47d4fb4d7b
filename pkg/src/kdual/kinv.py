"""K-theory invariants of the C*-algebras that appear in the duality computations."""

from __future__ import annotations

from dataclasses import dataclass

from .fgab import (
    FgGroup,
    GroupElement,
    GroupHom,
    IntMatrix,
    direct_sum,
    kernel_basis,
    present,
    quotient_presentation,
)


@dataclass(frozen=True)
class KInvariant:
    """(K_0, K_1) with optional unit class [1] and minimal projection class [e]."""

    k0: FgGroup
    k1: FgGroup
    unit: GroupElement | None = None
    e_class: GroupElement | None = None

    def __post_init__(self):
        for name in ("unit", "e_class"):
            x = getattr(self, name)
            if x is not None:
                object.__setattr__(self, name, self.k0.element(x.coords))

    @property
    def is_unital(self) -> bool:
        return self.unit is not None

    def groups(self) -> tuple[FgGroup, FgGroup]:
        return (self.k0, self.k1)

    def forget(self) -> "KInvariant":
        return KInvariant(self.k0, self.k1)

    def to_json(self) -> dict:
        out = {"k0": self.k0.to_json(), "k1": self.k1.to_json()}
        if self.unit is not None:
            out["unit"] = self.unit.to_json()
        if self.e_class is not None:
            out["e_class"] = self.e_class.to_json()
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "KInvariant":
        k0 = FgGroup.from_json(obj["k0"])
        k1 = FgGroup.from_json(obj.get("k1", {}))
        unit = GroupElement.from_json(obj["unit"]) if obj.get("unit") is not None else None
        e = GroupElement.from_json(obj["e_class"]) if obj.get("e_class") is not None else None
        return cls(k0, k1, unit, e)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

C_INVARIANT = KInvariant(FgGroup(1), FgGroup(0), GroupElement((1,)))
S_INVARIANT = KInvariant(FgGroup(0), FgGroup(1))


def cuntz_invariant(n: int) -> KInvariant:
    """K-theory of the Cuntz algebra O_n: (Z/(n-1), [1] = 1, 0)."""
    if n < 2:
        raise ValueError(f"O_n needs n >= 2, got {n}")
    pres = present(IntMatrix.from_rows([[n - 1]]))
    return KInvariant(pres.group, FgGroup(0), pres.element([1]))


def _check_graph_matrix(a: IntMatrix) -> None:
    if a.nrows != a.ncols:
        raise ValueError(f"Cuntz-Krieger matrix must be square, got {a.shape}")
    if any(v < 0 for row in a.rows for v in row):
        raise ValueError("Cuntz-Krieger matrix must have nonnegative entries")


def cuntz_krieger_matrix(a: IntMatrix) -> IntMatrix:
    """I - A^t."""
    n = a.nrows
    return IntMatrix.from_rows(
        ([int(i == j) - a.rows[j][i] for j in range(n)] for i in range(n)), n
    )


def cuntz_krieger_invariant(a: IntMatrix) -> KInvariant:
    """K-theory of O_A: K_0 = coker(I - A^t) with [1] = class of (1,...,1), K_1 = ker(I - A^t).

    Irreducibility of A is not checked.  Nonnegative integer entries are
    accepted (graph algebras), so the 1 x 1 matrix [n] models O_n.
    """
    _check_graph_matrix(a)
    m = cuntz_krieger_matrix(a)
    pres = present(m)
    k1 = FgGroup(kernel_basis(m).ncols)
    return KInvariant(pres.group, k1, pres.element([1] * a.nrows))


def suspension(x: KInvariant) -> KInvariant:
    return KInvariant(x.k1, x.k0)


def direct_sum_invariant(*xs: KInvariant) -> KInvariant:
    """Groups only; units are dropped."""
    return KInvariant(direct_sum(*(x.k0 for x in xs)), direct_sum(*(x.k1 for x in xs)))


# ---------------------------------------------------------------------------
# standard models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StandardModel:
    """C^a + S^b + sum O_{n+1} (n in c_list) + sum S O_{m+1} (m in d_list)."""

    a: int
    b: int
    c_list: tuple[int, ...] = ()
    d_list: tuple[int, ...] = ()

    def reconstruct(self) -> KInvariant:
        return KInvariant(
            FgGroup.from_orders([0] * self.a + list(self.c_list)),
            FgGroup.from_orders([0] * self.b + list(self.d_list)),
        )

    def describe(self) -> str:
        parts = [f"C^{self.a}"] if self.a else []
        parts += [f"S^{self.b}"] if self.b else []
        parts += [f"O_{n + 1}" for n in self.c_list]
        parts += [f"SO_{m + 1}" for m in self.d_list]
        return " + ".join(parts) or "0"


def standard_model(x: KInvariant) -> StandardModel:
    return StandardModel(x.k0.free_rank, x.k1.free_rank, x.k0.torsion, x.k1.torsion)


# ---------------------------------------------------------------------------
# mapping cone of the unit
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cone:
    """K-theory of C_u for the unit map u : C -> A, with the maps of its six-term sequence.

    ``k1_inclusion`` : K_1(A) -> K_0(C_u), ``e_u`` : K_0(C_u) -> Z,
    ``k0_projection`` : K_0(A) -> K_1(C_u).  When [1] has finite order k the
    unit-kernel generator is free coordinate ``k1.free_rank`` of K_0(C_u) and
    is sent to +k by ``e_u``.
    """

    base: KInvariant
    invariant: KInvariant
    e_u: GroupHom
    k1_inclusion: GroupHom
    k0_projection: GroupHom
    unit_order: int  # 0 for infinite order

    @property
    def k0(self) -> FgGroup:
        return self.invariant.k0

    @property
    def k1(self) -> FgGroup:
        return self.invariant.k1


def cone_of_unit(x: KInvariant) -> Cone:
    if x.unit is None:
        raise ValueError("cone of the unit needs a unital invariant")
    k = x.k0.element_order(x.unit)
    qp = quotient_presentation(x.k0, x.unit)
    proj = GroupHom(x.k0, qp.group, qp.to_canon)
    k1 = x.k1
    if k == 0:
        k0c = k1
        incl = GroupHom.identity(k1)
        e_u = GroupHom.zero(k1, FgGroup(1))
    else:
        r1 = k1.free_rank
        k0c = FgGroup(r1 + 1, k1.torsion)
        rows = []
        for i in range(k0c.ngens):
            src = i if i < r1 else (None if i == r1 else i - 1)
            rows.append([int(src == j) for j in range(k1.ngens)])
        incl = GroupHom.from_rows(k1, k0c, rows)
        e_u = GroupHom.from_rows(k0c, FgGroup(1), [[k if i == r1 else 0 for i in range(k0c.ngens)]])
    return Cone(x, KInvariant(k0c, qp.group), e_u, incl, proj, k)


def cone_six_term(x: KInvariant):
    """Six-term sequence of S A -> C_u -> C, starting at K_0(S A) = K_1(A)."""
    from .kkuct import SixTermInstance

    c = cone_of_unit(x)
    z = FgGroup(1)
    zero = FgGroup(0)
    unit_map = GroupHom.from_rows(z, x.k0, [[v] for v in x.unit.coords])
    groups = (x.k1, c.k0, z, x.k0, c.k1, zero)
    maps = (
        c.k1_inclusion,
        c.e_u,
        unit_map,
        c.k0_projection,
        GroupHom.zero(c.k1, zero),
        GroupHom.zero(zero, x.k1),
    )
    return SixTermInstance(groups, maps)
