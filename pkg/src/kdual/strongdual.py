"""Strong K-theoretic duality of unital extensions: verification, dual synthesis, Toeplitz pairs."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .extgrp import (
    ExtClassCoords,
    StrongExtGroup,
    dfrak_invariant,
    ext_strong,
    extension_k_invariant,
    toeplitz_class,
)
from .fgab import (
    BoundExceeded,
    DEFAULT_RANK_BOUND,
    DEFAULT_TORSION_BOUND,
    FgGroup,
    GroupElement,
    GroupHom,
    IntMatrix,
    PointedGroup,
    extension_presentation,
    ext_group,
    pointed_iso,
)
from .kinv import KInvariant


class NoSolutionWithinBounds(Exception):
    def __init__(self, message: str, torsion_bound: int, rank_bound: int):
        super().__init__(message)
        self.torsion_bound = torsion_bound
        self.rank_bound = rank_bound


def _check_eps(epsilon: int) -> None:
    if epsilon not in (1, -1):
        raise ValueError(f"epsilon must be +1 or -1, got {epsilon}")


@dataclass(frozen=True)
class ExtensionDatum:
    """A unital extension K -> E -> A: base invariant, invariant of E, and its class [E]_s."""

    base: KInvariant
    e_inv: KInvariant
    cls: ExtClassCoords

    @classmethod
    def from_class(cls, base: KInvariant, coords, eps_conventions: int = 1) -> "ExtensionDatum":
        if not isinstance(coords, ExtClassCoords):
            s = ext_strong(base)
            coords = ExtClassCoords(base, s.group.element(
                coords.coords if isinstance(coords, GroupElement) else coords))
        return cls(base, extension_k_invariant(base, coords, eps_conventions), coords)

    def strong(self) -> StrongExtGroup:
        return ext_strong(self.base)

    def to_json(self) -> dict:
        return {"base": self.base.to_json(), "class": self.cls.to_json(),
                "e_inv": self.e_inv.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "ExtensionDatum":
        """Rebuilds from base and class; a stored e_inv is recomputed, not trusted."""
        base = KInvariant.from_json(obj["base"])
        return cls.from_class(base, ExtClassCoords.from_json(base, obj.get("class", [])))


@dataclass(frozen=True)
class DualityReport:
    holds: bool
    epsilon: int
    iso_AB: GroupHom | None  # K_0(F) -> Ext_s(A)
    iso_BA: GroupHom | None  # K_0(E) -> Ext_s(B)
    failure_nodes: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "epsilon": self.epsilon,
            "iso_AB": self.iso_AB.matrix.to_json() if self.iso_AB else None,
            "iso_BA": self.iso_BA.matrix.to_json() if self.iso_BA else None,
            "failure_nodes": list(self.failure_nodes),
        }


def _half(e: ExtensionDatum, f: ExtensionDatum, epsilon: int, tb: int, rb: int):
    """(K_0(E), eps[1_E], [e], K_1(E)) against (Ext_s(B), [F]_s, iota_B, K_1(D(B)))."""
    inv = e.e_inv
    sb = f.strong()
    k0 = inv.k0
    p = PointedGroup(k0, (k0.scale(epsilon, inv.unit), inv.e_class))
    q = PointedGroup(sb.group, (f.cls.coords, sb.iota_W))
    iso = pointed_iso(p, q, tb, rb)
    k1_ok = inv.k1 == dfrak_invariant(f.base).k1
    return iso, k1_ok


def verify_strong_duality(
    e: ExtensionDatum,
    f: ExtensionDatum,
    epsilon: int,
    torsion_bound: int = DEFAULT_TORSION_BOUND,
    rank_bound: int = DEFAULT_RANK_BOUND,
) -> DualityReport:
    _check_eps(epsilon)
    iso_ba, k1_e = _half(e, f, epsilon, torsion_bound, rank_bound)
    iso_ab, k1_f = _half(f, e, epsilon, torsion_bound, rank_bound)
    failures = []
    if iso_ba is None:
        failures.append("K0(E) -> Ext_s(B)")
    if not k1_e:
        failures.append("K1(E) -> K1(D(B))")
    if iso_ab is None:
        failures.append("K0(F) -> Ext_s(A)")
    if not k1_f:
        failures.append("K1(F) -> K1(D(A))")
    return DualityReport(not failures, epsilon, iso_ab, iso_ba, tuple(failures))


def _candidate_bases(g: FgGroup, e_class: GroupElement, h: FgGroup):
    """Pointed invariants B whose cone has the K-groups dual to (G, H), in search order."""
    cu0 = FgGroup(g.free_rank, h.torsion)
    cu1 = FgGroup(h.free_rank, g.torsion)
    k = 0
    for c in e_class.coords[: g.free_rank]:
        k = gcd(k, c)
    if k:
        # [1_B] of order k; one free summand of K_0(C_u) is the unit kernel
        k1b = FgGroup(cu0.free_rank - 1, cu0.torsion)
        sub = FgGroup.from_orders([k])
    else:
        k1b = cu0
        sub = FgGroup(1)
    ext = ext_group(cu1, sub)
    for cls in ext.elements():
        pres, incl, _ = extension_presentation(cu1, sub, cls)
        unit = pres.group.element(incl.column(0) if sub.ngens else [0] * pres.group.ngens)
        yield KInvariant(pres.group, k1b, unit)


def solve_dual_extension(
    e: ExtensionDatum,
    epsilon: int,
    torsion_bound: int = DEFAULT_TORSION_BOUND,
    rank_bound: int = DEFAULT_RANK_BOUND,
) -> ExtensionDatum:
    """An extension K -> F -> B strongly K-theoretic dual to e with respect to epsilon.

    B is found by a bounded search over pointed invariants whose unit cone
    has K-theory dual to (K_0(E), K_1(E)) and whose (Ext_s(B), iota_B) is
    isomorphic to (K_0(E), [e]).  [F]_s is then the image of eps [1_E].
    """
    _check_eps(epsilon)
    inv = e.e_inv
    if inv.unit is None or inv.e_class is None:
        raise ValueError("extension datum needs [1_E] and [e]")
    g, h = inv.k0, inv.k1
    target = PointedGroup(g, (inv.e_class,))
    try:
        for b in _candidate_bases(g, inv.e_class, h):
            sb = ext_strong(b)
            phi = pointed_iso(target, PointedGroup(sb.group, (sb.iota_W,)), torsion_bound, rank_bound)
            if phi is None:
                continue
            f_cls = phi(g.scale(epsilon, inv.unit))
            f = ExtensionDatum.from_class(b, f_cls)
            if verify_strong_duality(e, f, epsilon, torsion_bound, rank_bound).holds:
                return f
    except BoundExceeded as exc:
        raise NoSolutionWithinBounds(str(exc), torsion_bound, rank_bound) from exc
    raise NoSolutionWithinBounds(
        f"no dual extension found for K_0(E) = {g}, K_1(E) = {h}",
        torsion_bound,
        rank_bound,
    )


def toeplitz_datum(a_mat: IntMatrix) -> ExtensionDatum:
    cls = toeplitz_class(a_mat)
    return ExtensionDatum.from_class(cls.base, cls)


def matsumoto_pair(
    a_mat: IntMatrix,
    torsion_bound: int = DEFAULT_TORSION_BOUND,
    rank_bound: int = DEFAULT_RANK_BOUND,
) -> tuple[ExtensionDatum, ExtensionDatum, DualityReport]:
    """Toeplitz extensions of O_A and O_{A^t}, checked for strong duality with epsilon = -1."""
    e = toeplitz_datum(a_mat)
    f = toeplitz_datum(a_mat.T)
    return e, f, verify_strong_duality(e, f, -1, torsion_bound, rank_bound)
