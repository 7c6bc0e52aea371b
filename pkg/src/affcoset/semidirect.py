"""Semidirect products ``G = N x| A`` and their double cosets ``A g B``.

``B`` is the twin complement ``theta(A)`` with ``theta(a) = (-delta(a), a)``,
so ``G = N x| A = N x| B``.  For ``g = (nu, a)`` the double coset ``A g B``
meets ``N`` in the affine orbit of ``nu + delta(a)``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .abgroup import FgAbelianGroup, Vector, _coords
from .affine import DEFAULT_CAP, AffineAction, CapExceeded, InfiniteModuleError, OrbitPartition, enumerate_orbits
from .modact import Derivation, ZAModule

BRUTEFORCE_CAP = 10**5


@dataclass(frozen=True, order=True)
class SdElement:
    n_part: Vector
    a_part: Vector

    def as_list(self) -> list:
        return [list(self.n_part), list(self.a_part)]


class SemidirectGroup:
    def __init__(self, module: ZAModule, derivation: Derivation):
        self.module = module
        self.derivation = derivation

    @classmethod
    def from_action(cls, act: AffineAction) -> "SemidirectGroup":
        return cls(act.module, act.derivation)

    @property
    def N(self) -> FgAbelianGroup:
        return self.module.group

    @property
    def A(self) -> FgAbelianGroup:
        return self.module.acting

    @property
    def affine_action(self) -> AffineAction:
        return AffineAction(self.module, self.derivation)

    def element(self, nu, a) -> SdElement:
        return SdElement(self.N.reduce(_coords(nu)), self.A.reduce(_coords(a)))

    def identity(self) -> SdElement:
        return SdElement((0,) * self.N.ngens, (0,) * self.A.ngens)

    def order(self):
        return self.N.order() * self.A.order()

    def elements(self) -> list[SdElement]:
        return [SdElement(n, a) for n in self.N.iter_coords() for a in self.A.iter_coords()]

    def mul(self, g1: SdElement, g2: SdElement) -> SdElement:
        return sd_mul(self, g1, g2)

    def inv(self, g: SdElement) -> SdElement:
        return sd_inv(self, g)

    def theta(self, a) -> SdElement:
        return theta(self, a)

    def embed_A(self, a) -> SdElement:
        return SdElement((0,) * self.N.ngens, self.A.reduce(_coords(a)))


def sd_mul(G: SemidirectGroup, g1: SdElement, g2: SdElement) -> SdElement:
    """``(nu1, a1)(nu2, a2) = (nu1 + a1.nu2, a1 a2)``."""
    twisted = G.module.linear_map(g1.a_part).linear(g2.n_part)
    return SdElement(
        G.N.reduce([x + y for x, y in zip(g1.n_part, twisted)]),
        G.A.reduce([x + y for x, y in zip(g1.a_part, g2.a_part)]),
    )


def sd_inv(G: SemidirectGroup, g: SdElement) -> SdElement:
    a_inv = G.A.reduce([-x for x in g.a_part])
    nu = G.module.linear_map(a_inv).linear(g.n_part)
    return SdElement(G.N.reduce([-x for x in nu]), a_inv)


def theta(G: SemidirectGroup, a) -> SdElement:
    a = G.A.reduce(_coords(a))
    d = G.derivation.delta_of(a).coords
    return SdElement(G.N.reduce([-x for x in d]), a)


@dataclass
class DoubleCosets:
    count: int
    representatives: list
    classes: list = field(default_factory=list, repr=False)
    partition: OrbitPartition | None = field(default=None, repr=False)


def double_cosets_via_orbits(G: SemidirectGroup, cap: int = DEFAULT_CAP) -> DoubleCosets:
    """Double cosets counted as affine orbits on ``N`` (``A`` may be infinite)."""
    part = enumerate_orbits(G.affine_action, cap)
    return DoubleCosets(len(part), part.representatives, list(part.orbits), part)


def _check_bruteforce(G: SemidirectGroup, cap: int):
    if not G.A.is_finite:
        raise InfiniteModuleError("brute-force double cosets need a finite acting group")
    if not G.N.is_finite:
        raise InfiniteModuleError("brute-force double cosets need a finite module")
    if G.order() > cap:
        raise CapExceeded(f"|G| = {G.order()} exceeds the brute-force cap {cap}")


def double_cosets_bruteforce(G: SemidirectGroup, cap: int = BRUTEFORCE_CAP, literal: bool = False) -> DoubleCosets:
    """Partition the finite group ``G`` into the sets ``A g B`` by group multiplication.

    By default each class is closed under left multiplication by the
    generators of ``A`` and right multiplication by ``theta`` of them (and
    inverses).  With ``literal`` every product ``a g b`` is formed.  Neither
    path touches the affine orbit code.
    """
    _check_bruteforce(G, cap)
    elements = G.elements()
    seen: set[SdElement] = set()
    classes = []
    if literal:
        a_elems = [G.embed_A(a) for a in G.A.iter_coords()]
        b_elems = [G.theta(a) for a in G.A.iter_coords()]
    else:
        left = []
        right = []
        for e in G.A.gens():
            for s in (1, -1):
                left.append(G.embed_A((s * e).coords))
                right.append(G.theta((s * e).coords))
    for g in elements:
        if g in seen:
            continue
        if literal:
            gb = {G.mul(g, b) for b in b_elems}
            cls = {G.mul(a, x) for a in a_elems for x in gb}
        else:
            cls = {g}
            queue = deque([g])
            while queue:
                x = queue.popleft()
                for y in [G.mul(a, x) for a in left] + [G.mul(x, b) for b in right]:
                    if y not in cls:
                        cls.add(y)
                        queue.append(y)
        seen |= cls
        classes.append(tuple(sorted(cls)))
    return DoubleCosets(len(classes), [c[0] for c in classes], classes)


@dataclass
class BijectionReport:
    ok: bool
    coset_count: int
    orbit_count: int
    matching: list
    witness: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "coset_count": self.coset_count,
            "orbit_count": self.orbit_count,
            "matching": self.matching,
            "witness": self.witness,
        }


def verify_bijection(G: SemidirectGroup, cap: int = BRUTEFORCE_CAP) -> BijectionReport:
    """Match brute-force double cosets with affine orbits, elementwise."""
    brute = double_cosets_bruteforce(G, cap)
    orbits = double_cosets_via_orbits(G)
    part = orbits.partition
    zero_a = (0,) * G.A.ngens
    matching = []
    used: dict[int, int] = {}
    witness: dict = {}
    for ci, cls in enumerate(brute.classes):
        meet = frozenset(g.n_part for g in cls if g.a_part == zero_a)
        if not meet:
            witness = {"coset": cls[0].as_list(), "problem": "double coset does not meet N"}
            break
        oid = part.orbit_id(next(iter(meet)))
        if meet != frozenset(part.orbits[oid]):
            witness = {
                "coset": cls[0].as_list(),
                "problem": "intersection with N differs from the affine orbit",
                "intersection": sorted(list(x) for x in meet),
                "orbit": [list(x) for x in part.orbits[oid]],
            }
            break
        if oid in used:
            witness = {"coset": cls[0].as_list(), "problem": "two double cosets meet the same orbit", "orbit": oid}
            break
        used[oid] = ci
        # every g = (nu, a) in the class must land in the orbit of nu + delta(a)
        for g in cls:
            shifted = G.N.reduce([x + y for x, y in zip(g.n_part, G.derivation.delta_of(g.a_part).coords)])
            if part.orbit_id(shifted) != oid:
                witness = {"element": g.as_list(), "problem": "nu + delta(a) lies in another orbit"}
                break
        if witness:
            break
        matching.append({"coset_representative": cls[0].as_list(), "orbit_representative": list(part.orbits[oid][0])})
    if not witness and len(used) != len(part):
        witness = {"problem": "some orbits meet no double coset", "unmatched": len(part) - len(used)}
    matching.sort(key=lambda m: m["orbit_representative"])
    return BijectionReport(not witness, brute.count, orbits.count, matching, witness)
