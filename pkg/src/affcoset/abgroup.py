"""Finitely generated abelian groups and exact integer linear algebra.

A group ``Z^r x Z_{d_1} x ... x Z_{d_s}`` is stored by its invariants and its
elements are integer coordinate vectors with the torsion coordinates reduced
into ``[0, d_i)``.  The acting groups of the affine machinery are written
additively here: the product ``a_1 a_2`` of the multiplicative notation is the
coordinate sum.

Lattice computations work in the cover ``Z^n`` of ``N = Z^n / L`` where ``L`` is
spanned by the rows ``d_i e_{r+i}``.  A subgroup of ``N`` is represented by its
full preimage lattice, which always contains ``L``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

Vector = tuple[int, ...]
Matrix = list[list[int]]

INFINITE = math.inf


class ShapeError(ValueError):
    """An element or matrix does not match the group it is used with."""


# ---------------------------------------------------------------------------
# plain integer matrix helpers


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(a))]


def matvec(m: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in m]


def transpose(m: Sequence[Sequence[int]]) -> Matrix:
    return [list(col) for col in zip(*m)]


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form


def _snf(m: Sequence[Sequence[int]]):
    """Return ``(S, U, V, U_inv, V_inv)`` with ``U M V = S``."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    s = [list(r) for r in m]
    u, u_inv = identity(rows), identity(rows)
    v, v_inv = identity(cols), identity(cols)

    # each helper applies an elementary operation to S and keeps the
    # transforms (and their inverses) in step
    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]
        for row in u_inv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]
        v_inv[i], v_inv[j] = v_inv[j], v_inv[i]

    def add_row(src, dst, c):
        # row_dst += c * row_src
        if c == 0:
            return
        s[dst] = [x + c * y for x, y in zip(s[dst], s[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]
        for row in u_inv:
            row[src] -= c * row[dst]

    def add_col(src, dst, c):
        # col_dst += c * col_src
        if c == 0:
            return
        for row in s:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]
        v_inv[src] = [x - c * y for x, y in zip(v_inv[src], v_inv[dst])]

    def negate_row(i):
        s[i] = [-x for x in s[i]]
        u[i] = [-x for x in u[i]]
        for row in u_inv:
            row[i] = -row[i]

    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    x = s[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                return s, u, v, u_inv, v_inv
            _, pi, pj = best
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = s[t][t]
            dirty = False
            for i in range(t + 1, rows):
                q = s[i][t] // p
                add_row(t, i, -q)
                if s[i][t]:
                    dirty = True
            for j in range(t + 1, cols):
                q = s[t][j] // p
                add_col(t, j, -q)
                if s[t][j]:
                    dirty = True
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if s[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if s[t][t] < 0:
            negate_row(t)
    return s, u, v, u_inv, v_inv


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form ``U M V = S`` with unimodular ``U``, ``V``.

    Pivots are the smallest nonzero absolute value in the active block, ties
    broken by row-major position, so the output is a function of the input.

    >>> smith_normal_form([[2, 0], [0, 3]])[0]
    [[1, 0], [0, 6]]
    """
    s, u, v, _, _ = _snf(m)
    return s, u, v


def invariant_factors(m: Sequence[Sequence[int]]) -> list[int]:
    s = smith_normal_form(m)[0]
    return [s[i][i] for i in range(min(len(s), len(s[0]) if s else 0)) if s[i][i]]


# ---------------------------------------------------------------------------
# Hermite normal form (row style)


def hermite_normal_form(rows: Iterable[Sequence[int]], ncols: int) -> list[Vector]:
    """Row-style HNF of the lattice spanned by ``rows``.

    Nonzero rows only, pivots strictly increasing and positive, entries above a
    pivot reduced into ``[0, pivot)``.
    """
    a = [list(r) for r in rows if any(r)]
    out: list[list[int]] = []
    col = 0
    while a and col < ncols:
        nz = [r for r in a if r[col]]
        if not nz:
            col += 1
            continue
        zero = [r for r in a if not r[col]]
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            rest = []
            for r in nz[1:]:
                q = r[col] // piv[col]
                r = [x - q * y for x, y in zip(r, piv)]
                if r[col]:
                    rest.append(r)
                elif any(r):
                    zero.append(r)
            nz = [piv] + rest
        piv = nz[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        out.append(piv)
        a = zero
        col += 1
    for i, r in enumerate(out):
        pc = _pivot(r)
        for k in range(i):
            q = out[k][pc] // r[pc]
            if q:
                out[k] = [x - q * y for x, y in zip(out[k], r)]
    return [tuple(r) for r in out]


def _pivot(row: Sequence[int]) -> int:
    return next(i for i, x in enumerate(row) if x)


def solve_in_hnf(basis: Sequence[Sequence[int]], v: Sequence[int]) -> list[int] | None:
    """Integer ``c`` with ``c . basis = v`` for an HNF basis, or None."""
    r = list(v)
    coeffs = []
    for row in basis:
        pc = _pivot(row)
        q, rem = divmod(r[pc], row[pc])
        if rem:
            return None
        coeffs.append(q)
        if q:
            r = [x - q * y for x, y in zip(r, row)]
    if any(r):
        return None
    return coeffs


def kernel_basis(vectors: Sequence[Sequence[int]], relations: Sequence[Sequence[int]] = ()) -> list[Vector]:
    """HNF basis of ``{t : sum t_j v_j in span(relations)}``."""
    n = len(vectors)
    if n == 0:
        return []
    width = len(vectors[0]) if vectors else 0
    rows = [list(v) + [int(i == j) for j in range(n)] for i, v in enumerate(vectors)]
    rows += [list(r) + [0] * n for r in relations]
    h = hermite_normal_form(rows, width + n)
    kern = [row[width:] for row in h if not any(row[:width])]
    return hermite_normal_form(kern, n)


# ---------------------------------------------------------------------------
# groups and elements


@dataclass(frozen=True)
class FgAbelianGroup:
    """``Z^free_rank x Z_{d_1} x ... x Z_{d_s}`` with ``d_1 | d_2 | ... | d_s``."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.free_rank < 0:
            raise ValueError("free_rank must be non-negative")
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"torsion invariant {d} < 2")
        for d, e in zip(self.torsion, self.torsion[1:]):
            if e % d:
                raise ValueError(f"torsion invariants break the divisibility chain: {d} does not divide {e}")

    @classmethod
    def from_descriptor(cls, desc: dict) -> "FgAbelianGroup":
        return cls(int(desc.get("free_rank", 0)), tuple(desc.get("torsion", ())))

    def descriptor(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def moduli(self) -> tuple[int, ...]:
        """Per-coordinate modulus, 0 for free coordinates."""
        return (0,) * self.free_rank + self.torsion

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> float | int:
        return math.prod(self.torsion) if self.is_finite else INFINITE

    def reduce(self, coords: Sequence[int]) -> Vector:
        if len(coords) != self.ngens:
            raise ShapeError(f"expected {self.ngens} coordinates, got {len(coords)}")
        return tuple(int(x) % d if d else int(x) for x, d in zip(coords, self.moduli))

    def __call__(self, *coords) -> "GroupElement":
        if len(coords) == 1 and not isinstance(coords[0], int):
            coords = tuple(coords[0])
        return GroupElement(self.reduce(coords), self)

    def zero(self) -> "GroupElement":
        return GroupElement((0,) * self.ngens, self)

    def gens(self) -> list["GroupElement"]:
        return [GroupElement(tuple(int(i == j) for j in range(self.ngens)), self) for i in range(self.ngens)]

    def relation_rows(self) -> list[Vector]:
        n = self.ngens
        return [
            tuple(d if j == self.free_rank + i else 0 for j in range(n))
            for i, d in enumerate(self.torsion)
        ]

    def iter_coords(self) -> Iterator[Vector]:
        """All elements of a finite group, lexicographic in coordinates."""
        if not self.is_finite:
            raise ValueError("cannot enumerate an infinite group")
        return itertools.product(*(range(d) for d in self.torsion))

    def elements(self) -> list["GroupElement"]:
        return [GroupElement(c, self) for c in self.iter_coords()]

    def index(self, coords: Sequence[int]) -> int:
        """Position of ``coords`` in the lexicographic enumeration."""
        i = 0
        for x, d in zip(coords, self.torsion):
            i = i * d + x
        return i

    def from_index(self, i: int) -> Vector:
        out = []
        for d in reversed(self.torsion):
            i, x = divmod(i, d)
            out.append(x)
        return tuple(reversed(out))

    def __str__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z_{d}" for d in self.torsion]
        return " x ".join(parts) if parts else "0"


@dataclass(frozen=True, order=True)
class GroupElement:
    coords: Vector
    parent: FgAbelianGroup = field(compare=False)

    def _check(self, other: "GroupElement"):
        if not isinstance(other, GroupElement) or other.parent != self.parent:
            raise ShapeError("elements belong to different groups")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return self.parent(tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupElement":
        return self.parent(tuple(-x for x in self.coords))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __rmul__(self, k: int) -> "GroupElement":
        return self.parent(tuple(k * x for x in self.coords))

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupElement) and self.parent == other.parent and self.coords == other.coords

    def __hash__(self) -> int:
        return hash((self.coords, self.parent))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __repr__(self) -> str:
        return f"GroupElement({list(self.coords)})"


def _coords(v) -> Vector:
    if isinstance(v, GroupElement):
        return tuple(v.coords)
    if isinstance(v, int):
        return (v,)
    return tuple(v)


# ---------------------------------------------------------------------------
# relations, indices and subgroup lattices


def integer_relation(vectors: Sequence, group: FgAbelianGroup | None = None) -> Vector | None:
    """Nonzero ``t`` with ``sum t_j v_j = 0``, or None if the vectors are independent.

    Among all relations the answer is the least one comparing absolute values
    lexicographically, then preferring a positive leading entry.  Relations of
    the torsion part of ``group`` are honoured when it has any.
    """
    vs = [_coords(v) for v in vectors]
    if not vs:
        raise ValueError("integer_relation needs at least one vector")
    if group is None:
        group = vectors[0].parent if isinstance(vectors[0], GroupElement) else FgAbelianGroup(len(vs[0]))
    kern = kernel_basis(vs, group.relation_rows())
    if not kern:
        return None
    # rows of an HNF basis with pivot >= i span the sublattice with its first
    # i coordinates zero, so the last row is the lexicographic minimum
    t = kern[-1]
    if t[_pivot(t)] < 0:
        t = tuple(-x for x in t)
    return tuple(t)


@dataclass(frozen=True)
class Lattice:
    """A subgroup of ``group`` given by its preimage lattice in ``Z^n`` (HNF rows)."""

    group: FgAbelianGroup
    basis: tuple[Vector, ...]

    @classmethod
    def generated_by(cls, group: FgAbelianGroup, generators: Iterable) -> "Lattice":
        rows = [_coords(g) for g in generators] + group.relation_rows()
        return cls(group, tuple(hermite_normal_form(rows, group.ngens)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def contains(self, v) -> bool:
        return solve_in_hnf(self.basis, _coords(v)) is not None

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def __le__(self, other: "Lattice") -> bool:
        return all(other.contains(b) for b in self.basis)

    def __eq__(self, other) -> bool:
        return isinstance(other, Lattice) and self.group == other.group and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.group, self.basis))

    def add(self, gens: Iterable) -> "Lattice":
        return Lattice.generated_by(self.group, list(self.basis) + [_coords(g) for g in gens])

    def index(self) -> float | int:
        """Index in the parent group."""
        if self.rank < self.group.ngens:
            return INFINITE
        return abs(math.prod(row[_pivot(row)] for row in self.basis))

    def order(self) -> float | int:
        """Order of the subgroup itself."""
        r = self.group.free_rank
        if any(any(row[:r]) for row in self.basis):
            return INFINITE
        # H / L inside the torsion coordinates, where both have full rank
        return math.prod(self.group.torsion) // math.prod(row[_pivot(row)] for row in self.basis)

    def elements(self) -> list[Vector]:
        """Reduced coordinates of every element (finite groups only)."""
        return [c for c in self.group.iter_coords() if self.contains(c)]

    def congruences(self) -> list[tuple[Vector, int]]:
        """Conditions ``(c, m)`` meaning ``c . x = 0 (mod m)``; ``m = 0`` means equality.

        ``x`` lies in the lattice iff it satisfies every condition.
        """
        n = self.group.ngens
        if not self.basis:
            return [(tuple(int(i == j) for j in range(n)), 0) for i in range(n)]
        s, _, v = smith_normal_form([list(r) for r in self.basis])
        out = []
        for j in range(n):
            d = s[j][j] if j < len(s) else 0
            if d == 1:
                continue
            out.append((tuple(v[i][j] for i in range(n)), d))
        return out

    def subgroup_presentation(self) -> "Presentation":
        return present_subgroup(self)

    def quotient_presentation(self) -> "Presentation":
        return present_quotient(self)


def subgroup_index(generators: Sequence, group: FgAbelianGroup | None = None) -> float | int:
    """Index of the subgroup generated by ``generators`` (``INFINITE`` on rank drop).

    Without ``group``, plain coordinate vectors are taken in ``Z^n``.
    """
    if group is None:
        if not generators:
            raise ValueError("group is required when there are no generators")
        first = generators[0]
        group = first.parent if isinstance(first, GroupElement) else FgAbelianGroup(len(_coords(first)), ())
    return Lattice.generated_by(group, generators).index()


# ---------------------------------------------------------------------------
# presentations of subgroups and quotients


@dataclass
class Presentation:
    """An abstract ``FgAbelianGroup`` identified with a subgroup or quotient.

    For a subgroup, ``to_parent`` embeds and ``from_parent`` takes coordinates
    of members.  For a quotient, ``from_parent`` is the projection and
    ``to_parent`` a fixed lift.
    """

    group: FgAbelianGroup
    parent: FgAbelianGroup
    _to: Matrix  # rows: new coordinates -> cover coordinates (row vectors)
    _from: Matrix  # cover row vector -> new coordinates (before selection)
    _keep: list[int]
    _basis: tuple[Vector, ...] | None = None  # HNF basis for subgroups

    def to_parent(self, w: Sequence[int]) -> Vector:
        full = [0] * len(self._to)
        for k, x in zip(self._keep, w):
            full[k] = x
        vec = [sum(full[i] * self._to[i][j] for i in range(len(full))) for j in range(self.parent.ngens)]
        return self.parent.reduce(vec)

    def from_parent(self, x: Sequence[int]) -> Vector:
        x = list(_coords(x))
        if self._basis is not None:
            c = solve_in_hnf(self._basis, x)
            if c is None:
                raise ValueError(f"{x} is not in the subgroup")
            x = c
        full = [sum(x[i] * self._from[i][j] for i in range(len(x))) for j in range(len(self._from[0]) if self._from else 0)]
        return self.group.reduce([full[k] for k in self._keep])


def _select(diag: list[int], width: int) -> tuple[list[int], FgAbelianGroup]:
    free = [k for k in range(width) if (diag[k] if k < len(diag) else 0) == 0]
    tors = [k for k in range(width) if k < len(diag) and diag[k] > 1]
    tors.sort(key=lambda k: diag[k])
    return free + tors, FgAbelianGroup(len(free), tuple(diag[k] for k in tors))


def present_subgroup(lat: Lattice) -> Presentation:
    basis = [list(b) for b in lat.basis]
    k = len(basis)
    rels = [solve_in_hnf(lat.basis, r) for r in lat.group.relation_rows()]
    if k == 0:
        return Presentation(FgAbelianGroup(0), lat.group, [], [], [], lat.basis)
    if rels:
        s, u, v, _, v_inv = _snf(rels)
        diag = [s[i][i] for i in range(min(len(s), k))]
    else:
        diag, v, v_inv = [], identity(k), identity(k)
    keep, group = _select(diag, k)
    # cover coords of new generator i: (e_i V^-1) . basis
    to = matmul(v_inv, basis)
    return Presentation(group, lat.group, to, v, keep, lat.basis)


def present_quotient(lat: Lattice) -> Presentation:
    n = lat.group.ngens
    basis = [list(b) for b in lat.basis]
    if basis:
        s, u, v, _, v_inv = _snf(basis)
        diag = [s[i][i] for i in range(min(len(s), n))]
    else:
        diag, v, v_inv = [], identity(n), identity(n)
    keep, group = _select(diag, n)
    return Presentation(group, lat.group, v_inv, v, keep, None)
