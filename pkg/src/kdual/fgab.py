"""Exact integer linear algebra and finitely generated abelian groups.

Everything is carried out with Python integers, so there is no overflow and
no floating point anywhere.  Groups are kept in invariant-factor form

    Z^r + Z/d_1 + ... + Z/d_k,    d_1 | d_2 | ... | d_k,  d_i >= 2,

and elements / homomorphisms are written in the coordinates of that
decomposition (free coordinates first, then torsion coordinates).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd, prod
from typing import Iterable, Iterator, Sequence


class BoundExceeded(Exception):
    """Raised when a decision procedure is asked to leave its configured bounds."""

    def __init__(self, message: str, torsion_bound: int, rank_bound: int):
        super().__init__(message)
        self.torsion_bound = torsion_bound
        self.rank_bound = rank_bound


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b) if a and b else 0


# ---------------------------------------------------------------------------
# integer matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntMatrix:
    """Immutable rows x cols integer matrix.  0 x n and n x 0 are allowed."""

    rows: tuple[tuple[int, ...], ...]
    ncols: int

    def __post_init__(self):
        for row in self.rows:
            if len(row) != self.ncols:
                raise ValueError("ragged matrix")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], ncols: int | None = None) -> "IntMatrix":
        rows = tuple(tuple(int(v) for v in row) for row in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for a matrix without rows")
            ncols = len(rows[0])
        return cls(rows, ncols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @classmethod
    def zeros(cls, m: int, n: int) -> "IntMatrix":
        return cls(tuple((0,) * n for _ in range(m)), n)

    @classmethod
    def diag(cls, entries: Sequence[int]) -> "IntMatrix":
        n = len(entries)
        return cls(tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)), n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def column(self, j: int) -> list[int]:
        return [r[j] for r in self.rows]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(
            tuple(tuple(r[j] for r in self.rows) for j in range(self.ncols)), self.nrows
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.rows)) if other.rows else [()] * other.ncols
        return IntMatrix(
            tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in self.rows),
            other.ncols,
        )

    def apply(self, vec: Sequence[int]) -> list[int]:
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        return [sum(a * b for a, b in zip(row, vec)) for row in self.rows]

    def det(self) -> int:
        """Determinant by fraction-free Bareiss elimination."""
        n = self.nrows
        if n != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        a = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    def to_json(self) -> dict:
        return {"rows": self.tolist()} if self.nrows else {"rows": [], "cols": self.ncols}

    @classmethod
    def from_json(cls, obj) -> "IntMatrix":
        if isinstance(obj, dict):
            return cls.from_rows(obj["rows"], obj.get("cols"))
        return cls.from_rows(obj)


def _ident(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _snf_full(m: IntMatrix):
    """Smith form with both transforms and their inverses (as lists).

    Returns (U, Uinv, D, V, Vinv) with U @ M @ V == D.
    """
    nr, nc = m.shape
    a = m.tolist()
    u, ui = _ident(nr), _ident(nr)
    v, vi = _ident(nc), _ident(nc)

    def row_add(i, k, c):  # row_i += c * row_k
        a[i] = [x + c * y for x, y in zip(a[i], a[k])]
        u[i] = [x + c * y for x, y in zip(u[i], u[k])]
        for row in ui:
            row[k] -= c * row[i]

    def row_swap(i, k):
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]
        for row in ui:
            row[i], row[k] = row[k], row[i]

    def row_neg(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]
        for row in ui:
            row[i] = -row[i]

    def col_add(j, k, c):  # col_j += c * col_k
        for row in a:
            row[j] += c * row[k]
        for row in v:
            row[j] += c * row[k]
        vi[k] = [x - c * y for x, y in zip(vi[k], vi[j])]

    def col_swap(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in v:
            row[j], row[k] = row[k], row[j]
        vi[j], vi[k] = vi[k], vi[j]

    for t in range(min(nr, nc)):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        row_swap(t, best[0])
        col_swap(t, best[1])
        while True:
            p = a[t][t]
            clean = True
            for i in range(t + 1, nr):
                if a[i][t]:
                    row_add(i, t, -(a[i][t] // p))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, nc):
                if a[t][j]:
                    col_add(j, t, -(a[t][j] // p))
                    clean = clean and a[t][j] == 0
            if not clean:
                # smallest remainder becomes the new pivot
                cand = [(abs(a[i][t]), i, t) for i in range(t + 1, nr) if a[i][t]]
                cand += [(abs(a[t][j]), t, j) for j in range(t + 1, nc) if a[t][j]]
                _, i, j = min(cand)
                if j == t:
                    row_swap(t, i)
                else:
                    col_swap(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % p), None
            )
            if bad is None:
                break
            row_add(t, bad, 1)
        if a[t][t] < 0:
            row_neg(t)
    return u, ui, a, v, vi


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with U @ M @ V == D, U and V unimodular, D in Smith form."""
    u, _, d, v, _ = _snf_full(m)
    nr, nc = m.shape
    return IntMatrix.from_rows(u, nr), IntMatrix.from_rows(d, nc), IntMatrix.from_rows(v, nc)


def invariant_factors(m: IntMatrix) -> list[int]:
    """Diagonal of the Smith form, padded with zeros to the number of rows."""
    _, _, d, _, _ = _snf_full(m)
    k = min(m.shape)
    return [d[i][i] for i in range(k)] + [0] * (m.nrows - k)


def rank(m: IntMatrix) -> int:
    return sum(1 for x in invariant_factors(m) if x)


def solve_integer(m: IntMatrix, b: Sequence[int]) -> list[int] | None:
    """Some integer x with M x = b, or None when no integer solution exists."""
    u, _, d, v, _ = _snf_full(m)
    ub = [sum(x * y for x, y in zip(row, b)) for row in u]
    y = [0] * m.ncols
    for i, val in enumerate(ub):
        di = d[i][i] if i < min(m.shape) else 0
        if di == 0:
            if val:
                return None
        else:
            if val % di:
                return None
            y[i] = val // di
    return [sum(row[j] * y[j] for j in range(m.ncols)) for row in v]


def kernel_basis(m: IntMatrix) -> IntMatrix:
    """Columns form a basis of the integer kernel {x : M x = 0}."""
    _, _, d, v, _ = _snf_full(m)
    r = sum(1 for i in range(min(m.shape)) if d[i][i])
    cols = [[row[j] for row in v] for j in range(r, m.ncols)]
    return IntMatrix.from_rows(zip(*cols), len(cols)) if cols else IntMatrix.zeros(m.ncols, 0)


def hstack(*mats: IntMatrix) -> IntMatrix:
    n = mats[0].nrows
    if any(mm.nrows != n for mm in mats):
        raise ValueError("hstack row mismatch")
    return IntMatrix(
        tuple(tuple(itertools.chain.from_iterable(mm.rows[i] for mm in mats)) for i in range(n)),
        sum(mm.ncols for mm in mats),
    )


def vstack(*mats: IntMatrix) -> IntMatrix:
    n = mats[0].ncols
    if any(mm.ncols != n for mm in mats):
        raise ValueError("vstack column mismatch")
    return IntMatrix(tuple(itertools.chain.from_iterable(mm.rows for mm in mats)), n)


# ---------------------------------------------------------------------------
# groups and elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupElement:
    coords: tuple[int, ...]

    def to_json(self) -> dict:
        return {"coords": list(self.coords)}

    @classmethod
    def from_json(cls, obj) -> "GroupElement":
        return cls(tuple(int(c) for c in (obj["coords"] if isinstance(obj, dict) else obj)))


@dataclass(frozen=True)
class FgGroup:
    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for i, d in enumerate(self.torsion):
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
            if i and d % self.torsion[i - 1]:
                raise ValueError(f"divisibility chain broken at {self.torsion}")

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> "FgGroup":
        """Canonical form of a direct sum of cyclic groups Z/n (n = 0 means Z)."""
        orders = [abs(int(n)) for n in orders]
        return cokernel(IntMatrix.diag(orders)) if orders else cls()

    @classmethod
    def Z(cls, r: int = 1) -> "FgGroup":
        return cls(r)

    @classmethod
    def cyclic(cls, n: int) -> "FgGroup":
        return cls.from_orders([n])

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def moduli(self) -> tuple[int, ...]:
        """Per-coordinate modulus, 0 on free coordinates."""
        return (0,) * self.free_rank + self.torsion

    @property
    def order(self) -> int | None:
        return None if self.free_rank else prod(self.torsion)

    @property
    def torsion_order(self) -> int:
        return prod(self.torsion)

    def is_trivial(self) -> bool:
        return self.ngens == 0

    def torsion_part(self) -> "FgGroup":
        return FgGroup(0, self.torsion)

    def relation_matrix(self) -> IntMatrix:
        """ngens x k matrix whose columns span the relations d_i e_i."""
        k = len(self.torsion)
        return IntMatrix(
            tuple(
                tuple(self.torsion[j] if i == self.free_rank + j else 0 for j in range(k))
                for i in range(self.ngens)
            ),
            k,
        )

    def element(self, coords: Sequence[int]) -> GroupElement:
        if len(coords) != self.ngens:
            raise ValueError(f"element of length {len(coords)} in group with {self.ngens} generators")
        return GroupElement(tuple(c % m if m else int(c) for c, m in zip(coords, self.moduli)))

    def zero(self) -> GroupElement:
        return GroupElement((0,) * self.ngens)

    def gen(self, i: int) -> GroupElement:
        return GroupElement(tuple(int(i == j) for j in range(self.ngens)))

    def add(self, x: GroupElement, y: GroupElement) -> GroupElement:
        return self.element([a + b for a, b in zip(x.coords, y.coords)])

    def scale(self, n: int, x: GroupElement) -> GroupElement:
        return self.element([n * a for a in x.coords])

    def neg(self, x: GroupElement) -> GroupElement:
        return self.scale(-1, x)

    def is_valid(self, x: GroupElement) -> bool:
        return len(x.coords) == self.ngens and all(
            0 <= c < m for c, m in zip(x.coords[self.free_rank:], self.torsion)
        )

    def element_order(self, x: GroupElement) -> int:
        """Order of x; 0 stands for infinite order."""
        if any(x.coords[: self.free_rank]):
            return 0
        o = 1
        for c, d in zip(x.coords[self.free_rank:], self.torsion):
            o = _lcm(o, d // gcd(c, d))
        return o

    def elements(self) -> Iterator[GroupElement]:
        if self.free_rank:
            raise ValueError("cannot enumerate an infinite group")
        for c in itertools.product(*(range(d) for d in self.torsion)):
            yield GroupElement(c)

    def killed_by(self, t: int) -> int:
        """|{x : t x = 0}| for a finite group."""
        return prod(gcd(t, d) for d in self.torsion)

    def __str__(self) -> str:
        parts = (["Z"] if self.free_rank == 1 else [f"Z^{self.free_rank}"] if self.free_rank else [])
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) or "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, obj: dict) -> "FgGroup":
        return cls(int(obj.get("free_rank", 0)), tuple(obj.get("torsion", ())))


def direct_sum(*groups: FgGroup) -> FgGroup:
    return FgGroup.from_orders(itertools.chain.from_iterable(g.moduli for g in groups))


# ---------------------------------------------------------------------------
# presentations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Presentation:
    """Z^n / im(M) identified with a canonical group.

    ``to_canon`` maps Z^n onto canonical coordinates; ``from_canon`` lifts
    canonical coordinates back to Z^n (a section of ``to_canon``).
    """

    group: FgGroup
    to_canon: IntMatrix
    from_canon: IntMatrix

    def element(self, vec: Sequence[int]) -> GroupElement:
        return self.group.element(self.to_canon.apply(vec))

    def lift(self, x: GroupElement) -> list[int]:
        return self.from_canon.apply(x.coords)


def present(m: IntMatrix) -> Presentation:
    """Canonical form of Z^rows / im(M) together with the coordinate maps."""
    u, ui, d, _, _ = _snf_full(m)
    k = min(m.shape)
    diag = [d[i][i] if i < k else 0 for i in range(m.nrows)]
    free = [i for i, x in enumerate(diag) if x == 0]
    tors = [i for i, x in enumerate(diag) if x > 1]
    keep = free + tors
    group = FgGroup(len(free), tuple(diag[i] for i in tors))
    to_c = IntMatrix.from_rows((u[i] for i in keep), m.nrows)
    from_c = IntMatrix.from_rows(([row[i] for i in keep] for row in ui), len(keep))
    return Presentation(group, to_c, from_c)


def cokernel(m: IntMatrix) -> FgGroup:
    return present(m).group


def kernel(m: IntMatrix) -> FgGroup:
    """The kernel of M : Z^cols -> Z^rows, always free."""
    return FgGroup(m.ncols - rank(m))


def lattice_contains(gens: IntMatrix, vec: Sequence[int]) -> bool:
    return solve_integer(gens, vec) is not None


# ---------------------------------------------------------------------------
# homomorphisms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism acting on canonical coordinates (target.ngens x source.ngens)."""

    source: FgGroup
    target: FgGroup
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.ngens, self.source.ngens):
            raise ValueError(
                f"matrix shape {self.matrix.shape} does not fit {self.source} -> {self.target}"
            )
        mods = self.target.moduli
        rows = tuple(tuple(v % m if m else v for v in row) for row, m in zip(self.matrix.rows, mods))
        object.__setattr__(self, "matrix", IntMatrix(rows, self.matrix.ncols))
        for j, d in enumerate(self.source.torsion):
            col = [d * x for x in self.matrix.column(self.source.free_rank + j)]
            if not self.target.element(col) == self.target.zero():
                raise ValueError(f"not well defined on torsion generator {j} of {self.source}")

    @classmethod
    def from_rows(cls, source: FgGroup, target: FgGroup, rows) -> "GroupHom":
        return cls(source, target, IntMatrix.from_rows(rows, source.ngens))

    @classmethod
    def identity(cls, g: FgGroup) -> "GroupHom":
        return cls(g, g, IntMatrix.identity(g.ngens))

    @classmethod
    def zero(cls, source: FgGroup, target: FgGroup) -> "GroupHom":
        return cls(source, target, IntMatrix.zeros(target.ngens, source.ngens))

    def __call__(self, x: GroupElement) -> GroupElement:
        return self.target.element(self.matrix.apply(x.coords))

    def compose(self, inner: "GroupHom") -> "GroupHom":
        """self o inner."""
        if inner.target != self.source:
            raise ValueError("composition of incompatible homomorphisms")
        return GroupHom(inner.source, self.target, self.matrix @ inner.matrix)

    def __neg__(self) -> "GroupHom":
        return GroupHom(self.source, self.target,
                        IntMatrix.from_rows(([-v for v in r] for r in self.matrix.rows), self.matrix.ncols))

    def _preimage_of_relations(self) -> IntMatrix:
        """Generators (columns) of {x in Z^n : f(x) = 0 in target}."""
        rt = self.target.relation_matrix()
        kb = kernel_basis(hstack(self.matrix, rt))
        n = self.source.ngens
        return IntMatrix(kb.rows[:n], kb.ncols)

    def kernel(self) -> FgGroup:
        gens = self._preimage_of_relations()
        # kernel = lattice / source relations, expressed on the lattice basis
        basis = lattice_basis(gens)
        rels = [solve_integer(basis, col) for col in _columns(self.source.relation_matrix())]
        rel_m = IntMatrix.from_rows(zip(*rels), len(rels)) if rels else IntMatrix.zeros(basis.ncols, 0)
        return cokernel(rel_m)

    def image(self) -> FgGroup:
        gens = self._preimage_of_relations()
        return cokernel(gens)

    def cokernel(self) -> FgGroup:
        return cokernel(hstack(self.matrix, self.target.relation_matrix()))

    def is_injective(self) -> bool:
        return self.kernel().is_trivial()

    def is_surjective(self) -> bool:
        return self.cokernel().is_trivial()

    def is_iso(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def to_json(self) -> dict:
        return {"source": self.source.to_json(), "target": self.target.to_json(),
                "matrix": self.matrix.to_json()}


def _columns(m: IntMatrix) -> list[list[int]]:
    return [m.column(j) for j in range(m.ncols)]


def lattice_basis(gens: IntMatrix) -> IntMatrix:
    """A basis (as columns) of the lattice spanned by the columns of gens."""
    u, ui, d, _, _ = _snf_full(gens)
    r = sum(1 for i in range(min(gens.shape)) if d[i][i])
    # im(gens) = Uinv . im(D); basis Uinv[:, i] * d_i
    cols = [[row[i] * d[i][i] for row in ui] for i in range(r)]
    return IntMatrix.from_rows(zip(*cols), r) if cols else IntMatrix.zeros(gens.nrows, 0)


# ---------------------------------------------------------------------------
# Hom and Ext
# ---------------------------------------------------------------------------


def hom_group(g: FgGroup, h: FgGroup) -> FgGroup:
    """Hom(G, H), using additivity over the cyclic summands."""
    orders = []
    for a in g.moduli:
        for b in h.moduli:
            if a == 0:
                orders.append(b)
            elif b != 0:
                orders.append(gcd(a, b))
            # Hom(Z/a, Z) = 0
    return FgGroup.from_orders(o for o in orders if o != 1)


def _ext_moduli(g: FgGroup, h: FgGroup) -> list[int]:
    # Ext(Z/q, H) = H / qH, one summand per (torsion generator of G, generator of H)
    return [gcd(q, b) if b else q for q in g.torsion for b in h.moduli]


def ext_presentation(g: FgGroup, h: FgGroup) -> Presentation:
    """Ext(G, H) with raw coordinates c[j][i]: the relation q_j f_j lifts to c_j in H.

    Raw coordinates are ordered with the torsion generator of G outermost.
    """
    mods = _ext_moduli(g, h)
    return present(IntMatrix.diag(mods)) if mods else present(IntMatrix.zeros(0, 0))


def ext_group(g: FgGroup, h: FgGroup) -> FgGroup:
    """Ext^1_Z(G, H)."""
    return ext_presentation(g, h).group


def extension_presentation(
    quotient: FgGroup, sub: FgGroup, cls: GroupElement
) -> tuple[Presentation, IntMatrix, IntMatrix]:
    """Middle group of 0 -> sub -> G -> quotient -> 0 with class cls.

    Returns the presentation of G on generators (sub gens, lifted quotient
    gens) together with the matrices of the inclusion of sub and of the
    chosen lift of the quotient generators, both in canonical coordinates.
    """
    ext = ext_presentation(quotient, sub)
    if len(cls.coords) != ext.group.ngens:
        raise ValueError(
            f"class has {len(cls.coords)} coordinates, Ext({quotient}, {sub}) = {ext.group} "
            f"needs {ext.group.ngens}"
        )
    raw = ext.lift(ext.group.element(cls.coords))
    m, n = sub.ngens, quotient.ngens
    cols = []
    for i, d in enumerate(sub.torsion):
        col = [0] * (m + n)
        col[sub.free_rank + i] = d
        cols.append(col)
    for j, q in enumerate(quotient.torsion):
        col = [0] * (m + n)
        for i in range(m):
            col[i] = -raw[j * m + i]
        col[m + quotient.free_rank + j] = q
        cols.append(col)
    rel = IntMatrix.from_rows(zip(*cols), len(cols)) if cols else IntMatrix.zeros(m + n, 0)
    pres = present(rel)
    tc = pres.to_canon
    incl = IntMatrix(tuple(r[:m] for r in tc.rows), m)
    lift = IntMatrix(tuple(r[m:] for r in tc.rows), n)
    return pres, incl, lift


def extension_middle(quotient: FgGroup, sub: FgGroup, cls: GroupElement) -> FgGroup:
    return extension_presentation(quotient, sub, cls)[0].group


# ---------------------------------------------------------------------------
# cyclic subgroups
# ---------------------------------------------------------------------------


def quotient_presentation(p: FgGroup, x: GroupElement) -> Presentation:
    """P / <x>, with coordinates on the canonical generators of P."""
    rel = hstack(p.relation_matrix(), IntMatrix.from_rows(([c] for c in x.coords), 1))
    return present(rel)


def quotient_by(p: FgGroup, x: GroupElement) -> FgGroup:
    return quotient_presentation(p, x).group


def unit_kernel(p: FgGroup, x: GroupElement) -> FgGroup:
    """Kernel of Z -> P, n -> n x."""
    return FgGroup(0) if p.element_order(x) == 0 else FgGroup(1)


# ---------------------------------------------------------------------------
# pointed groups
# ---------------------------------------------------------------------------

DEFAULT_TORSION_BOUND = 10**4
DEFAULT_RANK_BOUND = 4


@dataclass(frozen=True)
class PointedGroup:
    group: FgGroup
    marked: tuple[GroupElement, ...]

    def __post_init__(self):
        marked = tuple(self.group.element(x.coords) for x in self.marked)
        object.__setattr__(self, "marked", marked)


def _row_hnf(x: list[list[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Row-style Hermite form H = U X, canonical for the left action of GL_r(Z).

    Returns (H, U, Uinv).
    """
    r = len(x)
    s = len(x[0]) if x else 0
    h = [row[:] for row in x]
    u, ui = _ident(r), _ident(r)

    def row_add(i, k, c):
        h[i] = [a + c * b for a, b in zip(h[i], h[k])]
        u[i] = [a + c * b for a, b in zip(u[i], u[k])]
        for row in ui:
            row[k] -= c * row[i]

    def row_swap(i, k):
        h[i], h[k] = h[k], h[i]
        u[i], u[k] = u[k], u[i]
        for row in ui:
            row[i], row[k] = row[k], row[i]

    p = 0
    for col in range(s):
        if p == r:
            break
        while True:
            nz = [i for i in range(p, r) if h[i][col]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(h[i][col]))
            row_swap(p, i0)
            for i in range(p + 1, r):
                if h[i][col]:
                    row_add(i, p, -(h[i][col] // h[p][col]))
            if all(h[i][col] == 0 for i in range(p + 1, r)):
                break
        if h[p][col] == 0:
            continue
        if h[p][col] < 0:
            h[p] = [-a for a in h[p]]
            u[p] = [-a for a in u[p]]
            for row in ui:
                row[p] = -row[p]
        for i in range(p):
            row_add(i, p, -(h[i][col] // h[p][col]))
        p += 1
    return h, u, ui


def automorphisms(torsion: Sequence[int]) -> Iterator[list[list[int]]]:
    """All automorphisms of Z/d_1 + ... + Z/d_k, as k x k matrices (columns = images)."""
    t = FgGroup(0, tuple(torsion))
    k = len(torsion)
    elems = [e.coords for e in t.elements()] if k else []
    by_order: dict[int, list[tuple[int, ...]]] = {}
    for e in elems:
        by_order.setdefault(t.element_order(GroupElement(e)), []).append(e)
    rel = t.relation_matrix()

    def generated_order(cols):
        m = hstack(rel, IntMatrix.from_rows(zip(*cols), len(cols)))
        return t.torsion_order // cokernel(m).torsion_order

    def rec(chosen):
        j = len(chosen)
        if j == k:
            yield [list(row) for row in zip(*chosen)] if k else []
            return
        target = prod(torsion[: j + 1])
        for c in by_order.get(torsion[j], []):
            if generated_order(chosen + [c]) == target:
                yield from rec(chosen + [c])

    yield from rec([])


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _pointed_signature(p: PointedGroup) -> tuple:
    """Isomorphism types of quotients by multiples and pairwise sums of the marked elements.

    Equal signatures are necessary for a pointed isomorphism; they reject most
    negative cases before any automorphism search.
    """
    g = p.group
    exp = g.torsion[-1] if g.torsion else 1
    mults = [1] + [q ** i for q in _prime_factors(exp) for i in range(1, 64) if exp % q ** i == 0]
    xs = list(p.marked)
    xs += [g.add(a, b) for a, b in itertools.combinations(p.marked, 2)]
    xs += [g.add(a, g.neg(b)) for a, b in itertools.combinations(p.marked, 2)]
    return tuple(quotient_by(g, g.scale(t, x)) for x in xs for t in mults)


def _primary_search(hx, rho, r, xt, yt, orders):
    """C in Aut(+ Z/orders) and B with B hx + C xt = yt on every marked element."""
    s, k = len(xt), len(orders)
    for c in automorphisms(orders):
        diff = [[yt[m][j] - sum(c[j][i] * xt[m][i] for i in range(k)) for j in range(k)]
                for m in range(s)]
        b_rows = []
        for j, d in enumerate(orders):
            # sum_i b_i hx[i][m] = diff[m][j]  (mod d) for every marked m
            system = IntMatrix.from_rows(
                ([hx[i][m] for i in range(rho)] + [d * int(mm == m) for mm in range(s)]
                 for m in range(s)),
                rho + s,
            )
            sol = solve_integer(system, [diff[m][j] for m in range(s)])
            if sol is None:
                break
            b_rows.append(sol[:rho] + [0] * (r - rho))
        else:
            return c, b_rows
    return None


def pointed_iso(
    p: PointedGroup,
    q: PointedGroup,
    torsion_bound: int = DEFAULT_TORSION_BOUND,
    rank_bound: int = DEFAULT_RANK_BOUND,
) -> GroupHom | None:
    """An isomorphism carrying the marked elements of p onto those of q, in order.

    Every automorphism of Z^r + T has block form [[A, 0], [B, C]] with A in
    GL_r(Z), B : Z^r -> T arbitrary and C in Aut(T).  The free block is
    decided by Hermite normal forms.  The torsion search splits over the
    primes dividing |T|; per prime, C is searched and B solved for exactly.
    """
    if len(p.marked) != len(q.marked):
        raise ValueError("pointed groups carry different numbers of marked elements")
    if p.group != q.group:
        return None
    g = p.group
    r, tors = g.free_rank, g.torsion
    if r > rank_bound or g.torsion_order > torsion_bound:
        raise BoundExceeded(
            f"pointed isomorphism of {g} outside bounds (torsion <= {torsion_bound}, "
            f"rank <= {rank_bound})",
            torsion_bound,
            rank_bound,
        )
    xf = [[x.coords[i] for x in p.marked] for i in range(r)]
    yf = [[y.coords[i] for y in q.marked] for i in range(r)]
    hx, ux, _ = _row_hnf(xf)
    hy, _, uyi = _row_hnf(yf)
    if hx != hy:
        return None
    if _pointed_signature(p) != _pointed_signature(q):
        return None
    a = (IntMatrix.from_rows(uyi, r) @ IntMatrix.from_rows(ux, r)).tolist() if r else []
    rho = sum(1 for row in hx if any(row))
    k = len(tors)
    xt = [list(x.coords[r:]) for x in p.marked]
    yt = [list(y.coords[r:]) for y in q.marked]

    c_full = [[0] * k for _ in range(k)]
    b_full = [[0] * r for _ in range(k)]
    for pr in _prime_factors(g.torsion_order):
        idx = [j for j, d in enumerate(tors) if d % pr == 0]
        orders = []
        for j in idx:
            e, d = 0, tors[j]
            while d % pr == 0:
                d //= pr
                e += 1
            orders.append(pr ** e)
        found = _primary_search(
            hx, rho, r,
            [[x[j] % o for j, o in zip(idx, orders)] for x in xt],
            [[y[j] % o for j, o in zip(idx, orders)] for y in yt],
            orders,
        )
        if found is None:
            return None
        cp, bp = found
        # idempotent of the p-part of Z/d_j, as an element of Z/d_j
        idem = []
        for j, o in zip(idx, orders):
            co = tors[j] // o
            idem.append(co * pow(co, -1, o) % tors[j])
        for a_pos, j in enumerate(idx):
            for b_pos, i in enumerate(idx):
                c_full[j][i] += cp[a_pos][b_pos] * idem[a_pos]
            for i in range(r):
                b_full[j][i] += bp[a_pos][i] * idem[a_pos]
    bmat = (IntMatrix.from_rows(b_full, r) @ IntMatrix.from_rows(ux, r)).tolist() if k and r \
        else [[0] * r for _ in range(k)]
    rows = [a[i] + [0] * k for i in range(r)] + [bmat[j] + c_full[j] for j in range(k)]
    return GroupHom.from_rows(g, g, rows)
