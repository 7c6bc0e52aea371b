"""Z[A]-modules, derivations and the derivation/homomorphism correspondence.

A module ``N`` is a finitely generated abelian group together with one integer
matrix per generator of the acting group ``A``; matrices act on coordinate
column vectors.  A derivation is stored by its values on the generators of
``A`` and extended by the Leibniz rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .abgroup import (
    FgAbelianGroup,
    GroupElement,
    Lattice,
    Matrix,
    Presentation,
    ShapeError,
    Vector,
    _coords,
    smith_normal_form,
)


class ValidationError(ValueError):
    def __init__(self, report: "ValidationReport"):
        super().__init__(report.message)
        self.report = report


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


@dataclass
class ValidationReport:
    ok: bool
    invariant: str | None = None
    message: str = "ok"
    witness: dict = field(default_factory=dict)

    def raise_if_invalid(self):
        if not self.ok:
            raise ValidationError(self)
        return self

    def as_dict(self) -> dict:
        return {"ok": self.ok, "invariant": self.invariant, "message": self.message, "witness": self.witness}


# ---------------------------------------------------------------------------
# affine maps of a fixed group


def reduce_matrix(group: FgAbelianGroup, m: Sequence[Sequence[int]]) -> tuple[Vector, ...]:
    n = group.ngens
    if len(m) != n or any(len(row) != n for row in m):
        raise ShapeError(f"action matrix must be {n}x{n}")
    return tuple(
        tuple(int(x) % d if d else int(x) for x in row) for row, d in zip(m, group.moduli)
    )


@dataclass(frozen=True)
class AffineMap:
    """``x -> M x + v`` on the group ``N``; ``M`` rows reduced by their modulus."""

    group: FgAbelianGroup
    matrix: tuple[Vector, ...]
    shift: Vector

    @classmethod
    def identity(cls, group: FgAbelianGroup) -> "AffineMap":
        n = group.ngens
        return cls(group, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), (0,) * n)

    def apply(self, x: Sequence[int]) -> Vector:
        return self.group.reduce(
            [sum(a * b for a, b in zip(row, x)) + s for row, s in zip(self.matrix, self.shift)]
        )

    def linear(self, x: Sequence[int]) -> Vector:
        return self.group.reduce([sum(a * b for a, b in zip(row, x)) for row in self.matrix])

    def compose(self, other: "AffineMap") -> "AffineMap":
        """``self o other``."""
        n = self.group.ngens
        cols = list(zip(*other.matrix)) if n else []
        m = [[sum(self.matrix[i][k] * cols[j][k] for k in range(n)) for j in range(n)] for i in range(n)]
        shift = [
            sum(a * b for a, b in zip(row, other.shift)) + s for row, s in zip(self.matrix, self.shift)
        ]
        return AffineMap(self.group, reduce_matrix(self.group, m), self.group.reduce(shift))

    def power(self, k: int, inverse: "AffineMap") -> "AffineMap":
        base = self if k >= 0 else inverse
        k = abs(k)
        result = AffineMap.identity(self.group)
        while k:
            if k & 1:
                result = result.compose(base)
            k >>= 1
            if k:
                base = base.compose(base)
        return result


# ---------------------------------------------------------------------------
# modules


class ZAModule:
    """A module ``N`` over ``Z[A]`` for a finitely generated abelian ``A``."""

    def __init__(self, acting: FgAbelianGroup, group: FgAbelianGroup, action: Sequence[Sequence[Sequence[int]]]):
        if len(action) != acting.ngens:
            raise ShapeError(f"need one action matrix per generator of A ({acting.ngens}), got {len(action)}")
        self.acting = acting
        self.group = group
        self.action = tuple(reduce_matrix(group, m) for m in action)
        self._cache: dict[Vector, AffineMap] = {}

    @classmethod
    def from_descriptor(cls, acting: FgAbelianGroup, desc: Mapping) -> "ZAModule":
        return cls(acting, FgAbelianGroup.from_descriptor(desc["group"]), desc["action"])

    def descriptor(self) -> dict:
        return {"group": self.group.descriptor(), "action": [[list(r) for r in m] for m in self.action]}

    @classmethod
    def trivial(cls, acting: FgAbelianGroup, group: FgAbelianGroup) -> "ZAModule":
        n = group.ngens
        eye = [[int(i == j) for j in range(n)] for i in range(n)]
        return cls(acting, group, [eye] * acting.ngens)

    def __repr__(self) -> str:
        return f"ZAModule(A={self.acting}, N={self.group})"

    def element(self, coords) -> GroupElement:
        return self.group(_coords(coords))

    def _column(self, m, k) -> Vector:
        return self.group.reduce([row[k] for row in m])

    # -- validation ---------------------------------------------------------

    def validate(self) -> ValidationReport:
        g = self.group
        n, r = g.ngens, g.free_rank
        for i, m in enumerate(self.action):
            for j, d in enumerate(g.torsion):
                col = r + j
                image = g.reduce([d * row[col] for row in m])
                if any(image) or any(m[k][col] for k in range(r)):
                    return ValidationReport(
                        False, "automorphism",
                        f"matrix {i} does not respect the relation of order {d} on coordinate {col}",
                        {"generator": i, "coordinate": col},
                    )
            cols = [self._column(m, k) for k in range(n)]
            if Lattice.generated_by(g, cols).index() != 1:
                return ValidationReport(
                    False, "automorphism", f"matrix {i} is not invertible on N", {"generator": i}
                )
        for i in range(len(self.action)):
            for j in range(i + 1, len(self.action)):
                a, b = self._map(i), self._map(j)
                for k in range(n):
                    e = tuple(int(t == k) for t in range(n))
                    if a.linear(b.linear(e)) != b.linear(a.linear(e)):
                        return ValidationReport(
                            False, "commutation",
                            f"matrices {i} and {j} do not commute on N",
                            {"generators": [i, j], "basis_vector": k},
                        )
        a_rank = self.acting.free_rank
        for t, order in enumerate(self.acting.torsion):
            i = a_rank + t
            p = self._map(i).power(order, self._map(i))
            if p != AffineMap.identity(g):
                return ValidationReport(
                    False, "order",
                    f"generator {i} has order {order} in A but its matrix power is not the identity",
                    {"generator": i, "order": order},
                )
        return ValidationReport(True)

    def _map(self, i: int) -> AffineMap:
        return AffineMap(self.group, self.action[i], (0,) * self.group.ngens)

    @cached_property
    def inverse_action(self) -> tuple[tuple[Vector, ...], ...]:
        """Matrices of the inverse automorphisms (module must be valid)."""
        g = self.group
        n = g.ngens
        out = []
        for m in self.action:
            cols = [list(row) for row in m]
            rel = [list(r) for r in g.relation_rows()]
            # solve [M | D] w = e_k; all invariant factors are 1 for an automorphism
            big = [cols[i] + [rr[i] for rr in rel] for i in range(n)]
            s, u, v = smith_normal_form(big)
            if any(s[i][i] != 1 for i in range(n)):
                raise DomainError("action matrix is not an automorphism")
            inv_cols = []
            for k in range(n):
                y = [u[i][k] for i in range(n)] + [0] * (len(big[0]) - n)
                w = [sum(v[i][j] * y[j] for j in range(len(y))) for i in range(len(y))]
                inv_cols.append(w[:n])
            out.append(reduce_matrix(g, [[inv_cols[j][i] for j in range(n)] for i in range(n)]))
        return tuple(out)

    # -- action -------------------------------------------------------------

    def generator_map(self, i: int, inverse: bool = False, shift: Sequence[int] | None = None) -> AffineMap:
        mats = self.inverse_action if inverse else self.action
        return AffineMap(self.group, mats[i], tuple(shift) if shift is not None else (0,) * self.group.ngens)

    def linear_map(self, a) -> AffineMap:
        a = self.acting.reduce(_coords(a))
        hit = self._cache.get(a)
        if hit is None:
            hit = compose_generators(self, a, [(0,) * self.group.ngens] * self.acting.ngens)
            self._cache[a] = hit
        return hit

    def act(self, a, nu) -> GroupElement:
        """``a . nu`` for ``a`` in ``A`` and ``nu`` in ``N``."""
        x = _checked(self.group, nu)
        return GroupElement(self.linear_map(a).linear(x), self.group)


def _checked(group: FgAbelianGroup, nu) -> Vector:
    if isinstance(nu, GroupElement) and nu.parent != group:
        raise ShapeError("element does not belong to N")
    c = _coords(nu)
    if len(c) != group.ngens:
        raise ShapeError(f"element of N needs {group.ngens} coordinates, got {len(c)}")
    return group.reduce(c)


def compose_generators(module: ZAModule, a: Sequence[int], shifts: Sequence[Sequence[int]]) -> AffineMap:
    """The affine map of ``a`` when generator ``i`` acts by ``x -> M_i x + shifts[i]``.

    Composition of these maps is the Leibniz rule, so with ``shifts`` the
    derivation values this yields ``x -> a.x + delta(a)``.
    """
    g = module.group
    result = AffineMap.identity(g)
    for i, k in enumerate(a):
        if k == 0:
            continue
        fwd = AffineMap(g, module.action[i], g.reduce(shifts[i]))
        inv_m = AffineMap(g, module.inverse_action[i], (0,) * g.ngens)
        bwd = AffineMap(g, module.inverse_action[i], tuple(-x for x in inv_m.linear(shifts[i])))
        result = result.compose(fwd.power(k, bwd))
    return result


def validate_module(m: ZAModule) -> ValidationReport:
    return m.validate()


def act(m: ZAModule, a, nu) -> GroupElement:
    return m.act(a, nu)


# ---------------------------------------------------------------------------
# derivations


class Derivation:
    """A derivation ``delta: A -> N`` given on the generators of ``A``."""

    def __init__(self, module: ZAModule, values: Sequence):
        if len(values) != module.acting.ngens:
            raise ShapeError(f"need one derivation value per generator of A ({module.acting.ngens})")
        self.module = module
        self.values = tuple(_checked(module.group, v) for v in values)
        self._cache: dict[Vector, AffineMap] = {}

    @classmethod
    def zero(cls, module: ZAModule) -> "Derivation":
        return cls(module, [(0,) * module.group.ngens] * module.acting.ngens)

    @classmethod
    def inner(cls, module: ZAModule, nu) -> "Derivation":
        """The principal derivation ``a -> a.nu - nu``."""
        x = _checked(module.group, nu)
        vals = [module.group.reduce([p - q for p, q in zip(module.act(e, x).coords, x)]) for e in module.acting.gens()]
        return cls(module, vals)

    def descriptor(self) -> dict:
        return {"values": [list(v) for v in self.values]}

    def validate(self) -> ValidationReport:
        rep = self.module.validate()
        if not rep.ok:
            return rep
        mod = self.module
        g = mod.group
        k = mod.acting.ngens
        for i in range(k):
            for j in range(i + 1, k):
                lhs = g.reduce([x + y for x, y in zip(self.values[i], mod.generator_map(i).linear(self.values[j]))])
                rhs = g.reduce([x + y for x, y in zip(self.values[j], mod.generator_map(j).linear(self.values[i]))])
                if lhs != rhs:
                    return ValidationReport(
                        False, "derivation.commutation",
                        f"delta(a_{i}) + a_{i}.delta(a_{j}) != delta(a_{j}) + a_{j}.delta(a_{i})",
                        {"generators": [i, j], "lhs": list(lhs), "rhs": list(rhs)},
                    )
        r = mod.acting.free_rank
        for t, order in enumerate(mod.acting.torsion):
            i = r + t
            m = mod.generator_map(i)
            total = [0] * g.ngens
            x = self.values[i]
            for _ in range(order):
                total = [p + q for p, q in zip(total, x)]
                x = m.linear(x)
            total = g.reduce(total)
            if any(total):
                return ValidationReport(
                    False, "derivation.torsion",
                    f"(1 + a + ... + a^{order - 1}) delta(a_{i}) = {list(total)} is not zero",
                    {"generator": i, "order": order, "value": list(total)},
                )
        return ValidationReport(True)

    def affine_map(self, a) -> AffineMap:
        a = self.module.acting.reduce(_coords(a))
        hit = self._cache.get(a)
        if hit is None:
            hit = compose_generators(self.module, a, self.values)
            self._cache[a] = hit
        return hit

    def delta_of(self, a) -> GroupElement:
        return GroupElement(self.affine_map(a).shift, self.module.group)

    def __call__(self, a) -> GroupElement:
        return self.delta_of(a)


def delta_of(d: Derivation, a) -> GroupElement:
    return d.delta_of(a)


@dataclass
class AugmentationHomView:
    """The homomorphism ``phi: I -> N`` with ``phi(1 - a) = delta(a)``."""

    derivation: Derivation

    def __call__(self, z) -> GroupElement:
        return hom_apply(self, z)

    def to_derivation(self) -> Derivation:
        mod = self.derivation.module
        vals = []
        for e in mod.acting.gens():
            zero = (0,) * mod.acting.ngens
            vals.append(self({zero: 1, e.coords: -1}).coords)
        return Derivation(mod, vals)


def _terms(z) -> dict:
    terms = getattr(z, "terms", z)
    return dict(terms)


def hom_apply(phi: AugmentationHomView, z) -> GroupElement:
    """``phi(z)`` for ``z`` in the augmentation ideal.

    ``z`` is a group ring element or a mapping from exponent vectors to integer
    coefficients.  Writing ``z = -sum c_g (1 - g)`` gives
    ``phi(z) = -sum c_g delta(g)``.
    """
    d = phi.derivation
    g = d.module.group
    terms = _terms(z)
    if sum(terms.values()) != 0:
        raise DomainError("element is not in the augmentation ideal")
    total = [0] * g.ngens
    for exps, c in terms.items():
        if int(c) != c:
            raise DomainError("hom_apply needs integer coefficients")
        v = d.delta_of(exps).coords
        total = [t - int(c) * x for t, x in zip(total, v)]
    return GroupElement(g.reduce(total), g)


# ---------------------------------------------------------------------------
# submodules and quotients


@dataclass
class QuotientModule:
    module: ZAModule
    projection: Presentation
    kernel: "Submodule"

    def project(self, x) -> Vector:
        return self.projection.from_parent(_coords(x))

    def lift(self, w) -> Vector:
        return self.projection.to_parent(_coords(w))


def _transport(module: ZAModule, pres: Presentation, maps: Sequence[AffineMap], acting=None) -> ZAModule:
    n = pres.group.ngens
    mats = []
    for m in maps:
        cols = []
        for k in range(n):
            e = tuple(int(t == k) for t in range(n))
            cols.append(pres.from_parent(m.linear(pres.to_parent(e))))
        mats.append([[cols[j][i] for j in range(n)] for i in range(n)])
    return ZAModule(acting or module.acting, pres.group, mats)


class Submodule:
    """An action-closed subgroup of a module, stored as a preimage lattice."""

    def __init__(self, module: ZAModule, lattice: Lattice):
        self.module = module
        self.lattice = lattice

    @classmethod
    def generated(cls, module: ZAModule, elements: Iterable) -> "Submodule":
        """Smallest action-closed subgroup containing ``elements``.

        Worklist closure: apply every generator matrix and its inverse to each
        basis row, adding images that fall outside, until nothing new appears.
        """
        g = module.group
        lat = Lattice.generated_by(g, [_checked(g, e) for e in elements])
        maps = [module.generator_map(i) for i in range(module.acting.ngens)]
        maps += [module.generator_map(i, inverse=True) for i in range(module.acting.ngens)]
        while True:
            new = []
            for row in lat.basis:
                for m in maps:
                    y = m.linear(g.reduce(row))
                    if not lat.contains(y) and y not in new:
                        new.append(y)
            if not new:
                return cls(module, lat)
            lat = lat.add(new)

    def is_action_closed(self) -> bool:
        m = self.module
        for row in self.lattice.basis:
            for i in range(m.acting.ngens):
                for inv in (False, True):
                    if not self.lattice.contains(m.generator_map(i, inverse=inv).linear(m.group.reduce(row))):
                        return False
        return True

    def contains(self, x) -> bool:
        return self.lattice.contains(_coords(x))

    __contains__ = contains

    def order(self):
        return self.lattice.order()

    def index(self):
        return self.lattice.index()

    def elements(self) -> list[Vector]:
        return self.lattice.elements()

    def generators(self) -> list[Vector]:
        return [self.module.group.reduce(r) for r in self.lattice.basis if any(self.module.group.reduce(r))]

    def presentation(self) -> Presentation:
        return self.lattice.subgroup_presentation()

    def as_module(self) -> tuple[ZAModule, Presentation]:
        """The submodule as a module in its own coordinates, with its embedding."""
        pres = self.presentation()
        maps = [self.module.generator_map(i) for i in range(self.module.acting.ngens)]
        return _transport(self.module, pres, maps), pres

    def quotient(self) -> QuotientModule:
        pres = self.lattice.quotient_presentation()
        maps = [self.module.generator_map(i) for i in range(self.module.acting.ngens)]
        return QuotientModule(_transport(self.module, pres, maps), pres, self)

    def __repr__(self) -> str:
        return f"Submodule(order={self.order()}, generators={self.generators()})"


def submodule_generated(m: ZAModule, elements: Iterable) -> Submodule:
    return Submodule.generated(m, elements)


def torsion_submodule(m: ZAModule) -> Submodule:
    """The Z-torsion subgroup; characteristic, hence a submodule."""
    g = m.group
    gens = [tuple(int(k == g.free_rank + j) for k in range(g.ngens)) for j in range(len(g.torsion))]
    return Submodule(m, Lattice.generated_by(g, gens))


def augmentation_submodule(m: ZAModule) -> Submodule:
    """``IN``, spanned by ``(M_i - 1) nu`` over generators ``a_i`` of ``A`` and of ``N``."""
    g = m.group
    gens = []
    for i in range(m.acting.ngens):
        mp = m.generator_map(i)
        for k in range(g.ngens):
            e = tuple(int(t == k) for t in range(g.ngens))
            gens.append(g.reduce([x - y for x, y in zip(mp.linear(e), e)]))
    return Submodule.generated(m, gens)


def coinvariants(m: ZAModule) -> QuotientModule:
    """``N / IN``; the induced action is trivial."""
    return augmentation_submodule(m).quotient()
