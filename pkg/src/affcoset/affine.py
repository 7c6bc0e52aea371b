"""Affine actions ``a * nu = a.nu + delta(a)`` and their orbits on finite modules."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .abgroup import FgAbelianGroup, GroupElement, Lattice, Presentation, Vector, _coords
from .modact import (
    AffineMap,
    Derivation,
    DomainError,
    QuotientModule,
    Submodule,
    ValidationReport,
    ZAModule,
    _transport,
)

DEFAULT_CAP = 10**7


class InfiniteModuleError(ValueError):
    """Orbit enumeration was asked for on an infinite module."""


class CapExceeded(RuntimeError):
    """A configured size cap was hit."""


@dataclass
class AffineAction:
    module: ZAModule
    derivation: Derivation

    def __post_init__(self):
        if self.derivation.module is not self.module:
            raise ValueError("derivation belongs to a different module")

    @classmethod
    def linear(cls, module: ZAModule) -> "AffineAction":
        return cls(module, Derivation.zero(module))

    @property
    def acting(self) -> FgAbelianGroup:
        return self.module.acting

    @property
    def group(self) -> FgAbelianGroup:
        return self.module.group

    def validate(self) -> ValidationReport:
        return self.derivation.validate()

    def map(self, a) -> AffineMap:
        return self.derivation.affine_map(a)

    def apply(self, a, nu) -> GroupElement:
        return GroupElement(self.map(a).apply(_coords(nu)), self.group)

    def generator_maps(self) -> list[AffineMap]:
        """Forward then inverse maps of each generator of ``A``."""
        out = []
        for e in self.acting.gens():
            out.append(self.map(e.coords))
            out.append(self.map((-e).coords))
        return out


def affine_apply(act: AffineAction, a, nu) -> GroupElement:
    return act.apply(a, nu)


@dataclass
class OrbitPartition:
    group: FgAbelianGroup
    orbits: list[tuple[Vector, ...]]
    labels: np.ndarray  # orbit id per element, indexed by lexicographic position
    transversal: dict[Vector, Vector] | None = field(default=None, repr=False)

    @property
    def representatives(self) -> list[Vector]:
        return [o[0] for o in self.orbits]

    def __len__(self) -> int:
        return len(self.orbits)

    def orbit_id(self, x) -> int:
        return int(self.labels[self.group.index(_coords(x))])

    def orbit_of(self, x) -> tuple[Vector, ...]:
        return self.orbits[self.orbit_id(x)]

    def as_sets(self) -> set[frozenset]:
        return {frozenset(o) for o in self.orbits}

    def as_dict(self) -> dict:
        return {
            "count": len(self.orbits),
            "orbits": [{"representative": list(o[0]), "size": len(o), "elements": [list(x) for x in o]} for o in self.orbits],
        }


def _element_table(group: FgAbelianGroup) -> np.ndarray:
    n = group.ngens
    size = int(group.order())
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    idx = np.arange(size, dtype=np.int64)
    cols = []
    for d in reversed(group.torsion):
        idx, r = np.divmod(idx, d)
        cols.append(r)
    return np.stack(list(reversed(cols)), axis=1)


def permutation_table(group: FgAbelianGroup, maps: Sequence[AffineMap]) -> list[list[int]]:
    """For each map, the image position of every element (lexicographic positions)."""
    table = _element_table(group)
    moduli = np.array(group.torsion, dtype=np.int64)
    weights = np.ones(group.ngens, dtype=np.int64)
    for i in range(group.ngens - 2, -1, -1):
        weights[i] = weights[i + 1] * group.torsion[i + 1]
    out = []
    for m in maps:
        if group.ngens == 0:
            out.append([0])
            continue
        mat = np.array(m.matrix, dtype=np.int64)
        img = (table @ mat.T + np.array(m.shift, dtype=np.int64)) % moduli
        out.append((img @ weights).tolist())
    return out


def _check_finite(group: FgAbelianGroup, cap: int):
    if not group.is_finite:
        raise InfiniteModuleError(f"module {group} is infinite; orbits are only enumerated on finite modules")
    if group.order() > cap:
        raise CapExceeded(f"|N| = {group.order()} exceeds the element cap {cap}")


def enumerate_orbits(act: AffineAction, cap: int = DEFAULT_CAP, transversal: bool = False) -> OrbitPartition:
    """Partition a finite module into affine orbits by breadth-first closure.

    Seeds are taken in lexicographic order, so each seed is the least element
    of its orbit and serves as its representative.  With ``transversal`` the
    partition also records, for every element ``x``, an exponent vector ``t``
    with ``t * representative = x``.
    """
    g = act.group
    _check_finite(g, cap)
    size = int(g.order())
    k = act.acting.ngens
    perms = permutation_table(g, act.generator_maps())
    steps = []
    for i in range(k):
        e = [0] * k
        e[i] = 1
        steps.append(tuple(e))
        steps.append(tuple(-x for x in e))
    labels = np.full(size, -1, dtype=np.int64)
    orbits: list[tuple[Vector, ...]] = []
    trans: dict[Vector, Vector] | None = {} if transversal else None
    zero_a = (0,) * k
    for seed in range(size):
        if labels[seed] >= 0:
            continue
        oid = len(orbits)
        labels[seed] = oid
        members = [seed]
        words = {seed: zero_a} if transversal else None
        queue = deque([seed])
        while queue:
            x = queue.popleft()
            for s, perm in enumerate(perms):
                y = perm[x]
                if labels[y] < 0:
                    labels[y] = oid
                    members.append(y)
                    queue.append(y)
                    if words is not None:
                        words[y] = tuple(p + q for p, q in zip(words[x], steps[s]))
        members.sort()
        orbits.append(tuple(g.from_index(i) for i in members))
        if words is not None:
            for i, w in words.items():
                trans[g.from_index(i)] = act.acting.reduce(w)
    return OrbitPartition(g, orbits, labels, trans)


def scalar_orbit_count(m: ZAModule, cap: int = DEFAULT_CAP) -> int:
    """Number of orbits of the automorphism action (zero derivation)."""
    return len(enumerate_orbits(AffineAction.linear(m), cap))


# ---------------------------------------------------------------------------
# restriction and induction


@dataclass
class InducedAction:
    action: AffineAction
    quotient: QuotientModule


@dataclass
class RestrictedAction:
    stabilizer: Lattice  # A_0 inside A, as a lattice of exponent vectors
    acting_presentation: Presentation  # abstract A_0 and its embedding in A
    action: AffineAction  # A_0 acting on M_0 in M_0's own coordinates
    embedding: Presentation  # M_0 coordinates -> N coordinates

    def index(self):
        return self.stabilizer.index()

    def congruences(self):
        return self.stabilizer.congruences()

    def generators_in_A(self) -> list[Vector]:
        p = self.acting_presentation
        return [p.to_parent(tuple(int(i == j) for j in range(p.group.ngens))) for i in range(p.group.ngens)]


def _require_closed(sub: Submodule):
    if not sub.is_action_closed():
        raise DomainError("M_0 is not closed under the action")


def induced_action(act: AffineAction, sub: Submodule) -> InducedAction:
    """The affine action of ``A`` on ``N / M_0``."""
    _require_closed(sub)
    q = sub.quotient()
    values = [q.project(v) for v in act.derivation.values]
    return InducedAction(AffineAction(q.module, Derivation(q.module, values)), q)


def _orbit_words(act: AffineAction, start: Vector, cap: int) -> dict[Vector, Vector]:
    k = act.acting.ngens
    maps = []
    for i in range(k):
        e = [0] * k
        e[i] = 1
        maps.append((act.map(tuple(e)), tuple(e)))
    words = {start: (0,) * k}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for m, step in maps:
            y = m.apply(x)
            if y not in words:
                if len(words) >= cap:
                    raise CapExceeded("orbit exceeds the element cap")
                words[y] = tuple(p + q for p, q in zip(words[x], step))
                queue.append(y)
    return words


def restrict_action(act: AffineAction, sub: Submodule, cap: int = DEFAULT_CAP) -> RestrictedAction:
    """Restrict to ``A_0 = delta^{-1}(M_0)`` acting on ``M_0``.

    ``A_0`` is the stabiliser of the zero coset in the induced action on
    ``N / M_0``, obtained from Schreier generators of the orbit of zero.
    """
    induced = induced_action(act, sub)
    qa = induced.action
    if not qa.group.is_finite:
        raise DomainError("restriction needs N / M_0 finite")
    A = act.acting
    k = A.ngens
    zero = (0,) * qa.group.ngens
    words = _orbit_words(qa, zero, cap)
    schreier = []
    for x, t in words.items():
        for i in range(k):
            e = tuple(int(j == i) for j in range(k))
            y = qa.map(e).apply(x)
            schreier.append(A.reduce([p + q - r for p, q, r in zip(t, e, words[y])]))
    stab = Lattice.generated_by(A, schreier)
    a_pres = stab.subgroup_presentation()
    a0_gens = [a_pres.to_parent(tuple(int(i == j) for j in range(a_pres.group.ngens))) for i in range(a_pres.group.ngens)]
    m_pres = sub.presentation()
    sub_module = _transport(act.module, m_pres, [act.module.linear_map(a) for a in a0_gens], acting=a_pres.group)
    values = [m_pres.from_parent(act.derivation.delta_of(a).coords) for a in a0_gens]
    return RestrictedAction(stab, a_pres, AffineAction(sub_module, Derivation(sub_module, values)), m_pres)


@dataclass
class RestrictReport:
    ok: bool
    intersections_ok: bool
    images_ok: bool
    orbit_count: int
    restricted_orbit_count: int
    induced_orbit_count: int
    stabilizer_index: float | int
    stabilizer_congruences: list
    witness: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "intersections_ok": self.intersections_ok,
            "images_ok": self.images_ok,
            "orbit_count": self.orbit_count,
            "restricted_orbit_count": self.restricted_orbit_count,
            "induced_orbit_count": self.induced_orbit_count,
            "stabilizer_index": self.stabilizer_index if self.stabilizer_index != float("inf") else "infinite",
            "stabilizer_congruences": [[list(c), m] for c, m in self.stabilizer_congruences],
            "witness": self.witness,
        }


def _sorted_sets(sets) -> list[list[list[int]]]:
    return sorted(sorted(list(x) for x in s) for s in sets)


def check_restrict_properties(act: AffineAction, sub: Submodule, cap: int = DEFAULT_CAP) -> RestrictReport:
    """Compare orbit partitions on ``M_0`` and ``N / M_0`` with those on ``N``.

    Intersections: the ``A_0``-orbits on ``M_0`` are exactly the nonempty sets
    ``O & M_0``.  Images: the ``A``-orbits on ``N / M_0`` are exactly the
    projections of the ``A``-orbits on ``N``.
    """
    whole = enumerate_orbits(act, cap)
    restricted = restrict_action(act, sub, cap)
    induced = induced_action(act, sub)

    expected3 = {frozenset(x for x in o if sub.contains(x)) for o in whole.orbits}
    expected3.discard(frozenset())
    sub_orbits = enumerate_orbits(restricted.action, cap)
    got3 = {frozenset(restricted.embedding.to_parent(x) for x in o) for o in sub_orbits.orbits}

    expected4 = {frozenset(induced.quotient.project(x) for x in o) for o in whole.orbits}
    got4 = enumerate_orbits(induced.action, cap).as_sets()

    witness = {}
    if got3 != expected3:
        witness["intersections"] = {
            "restricted_only": _sorted_sets(got3 - expected3)[:1],
            "expected_only": _sorted_sets(expected3 - got3)[:1],
        }
    if got4 != expected4:
        witness["images"] = {
            "induced_only": _sorted_sets(got4 - expected4)[:1],
            "expected_only": _sorted_sets(expected4 - got4)[:1],
        }
    return RestrictReport(
        ok=not witness,
        intersections_ok=got3 == expected3,
        images_ok=got4 == expected4,
        orbit_count=len(whole),
        restricted_orbit_count=len(sub_orbits),
        induced_orbit_count=len(got4),
        stabilizer_index=restricted.index(),
        stabilizer_congruences=restricted.congruences(),
        witness=witness,
    )
