"""KK-groups through the UCT, Spanier-Whitehead dual invariants, six-term exactness."""

from __future__ import annotations

from dataclasses import dataclass

from .fgab import (
    FgGroup,
    GroupHom,
    direct_sum,
    ext_group,
    hom_group,
    hstack,
    kernel_basis,
    solve_integer,
)
from .kinv import KInvariant, suspension


@dataclass(frozen=True)
class KKGroup:
    total: FgGroup
    hom_part: FgGroup
    ext_part: FgGroup

    def to_json(self) -> dict:
        return {"total": self.total.to_json(), "hom": self.hom_part.to_json(),
                "ext": self.ext_part.to_json()}


def kk_group(a: KInvariant, b: KInvariant, degree: int = 0) -> KKGroup:
    """KK^degree(A, B) = Hom(K_*(A), K_*(B)) + Ext(K_*(A), K_{*+1}(B))."""
    if degree not in (0, 1):
        raise ValueError(f"degree must be 0 or 1, got {degree}")
    if degree == 1:
        b = suspension(b)
    hom = direct_sum(hom_group(a.k0, b.k0), hom_group(a.k1, b.k1))
    ext = direct_sum(ext_group(a.k0, b.k1), ext_group(a.k1, b.k0))
    return KKGroup(direct_sum(hom, ext), hom, ext)


def kk_equivalent(a: KInvariant, b: KInvariant) -> bool:
    return a.k0 == b.k0 and a.k1 == b.k1


def dual_invariant(x: KInvariant) -> KInvariant:
    """Free ranks stay in their degree, torsion changes degree."""
    return KInvariant(
        FgGroup(x.k0.free_rank, x.k1.torsion),
        FgGroup(x.k1.free_rank, x.k0.torsion),
    )


def dual_group_check(a: KInvariant, b: KInvariant) -> bool:
    """KK^d(A, B) and KK^d(D(B), D(A)) agree as abstract groups for d = 0, 1."""
    da, db = dual_invariant(a), dual_invariant(b)
    return all(kk_group(a, b, d).total == kk_group(db, da, d).total for d in (0, 1))


# ---------------------------------------------------------------------------
# six-term sequences
# ---------------------------------------------------------------------------


class ShapeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class SixTermInstance:
    """Six groups in cyclic order; maps[i] : groups[i] -> groups[i + 1 mod 6]."""

    groups: tuple[FgGroup, ...]
    maps: tuple[GroupHom, ...]

    def __post_init__(self):
        if len(self.groups) != 6 or len(self.maps) != 6:
            raise ShapeMismatch("a six-term instance needs six groups and six maps")
        for i, f in enumerate(self.maps):
            if f.source != self.groups[i] or f.target != self.groups[(i + 1) % 6]:
                raise ShapeMismatch(
                    f"map {i} goes {f.source} -> {f.target}, expected "
                    f"{self.groups[i]} -> {self.groups[(i + 1) % 6]}"
                )


@dataclass(frozen=True)
class ExactnessReport:
    exact: bool
    nodes: tuple[bool, ...]

    @property
    def failures(self) -> list[int]:
        return [i for i, ok in enumerate(self.nodes) if not ok]


def exact_at(f: GroupHom, g: GroupHom) -> bool:
    """im f == ker g, compared as lattices in the free cover of the middle group."""
    if f.target != g.source:
        raise ShapeMismatch("maps are not composable")
    mid = f.target
    comp = g.compose(f)
    if any(any(row) for row in comp.matrix.rows):
        return False
    # ker g lifted to Z^n: {x : G x in relations of the target}
    kb = kernel_basis(hstack(g.matrix, g.target.relation_matrix()))
    n = mid.ngens
    image_lattice = hstack(f.matrix, mid.relation_matrix())
    for j in range(kb.ncols):
        x = [kb.rows[i][j] for i in range(n)]
        if solve_integer(image_lattice, x) is None:
            return False
    return True


def check_exactness(s: SixTermInstance) -> ExactnessReport:
    nodes = tuple(exact_at(s.maps[i - 1], s.maps[i]) for i in range(6))
    return ExactnessReport(all(nodes), nodes)

