"""Seeded random instances for the self-test and the acceptance suite.

Candidates that break a module or derivation invariant are rejected and
redrawn, never repaired.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .abgroup import FgAbelianGroup, Vector
from .groupalg import GroupRing, GroupRingElement
from .modact import AffineMap, Derivation, ZAModule
from .numfield import AlgebraMapPsi, NumberField, find_factor
from .poly import CoefficientRing

MAX_N = 10**4
MAX_RANK = 3
MAX_TORSION = 16


class GenerationFailed(RuntimeError):
    pass


def random_chain(rng: random.Random, max_order: int, max_factors: int, max_part: int | None = None) -> tuple[int, ...]:
    """Invariant factors ``d_1 | d_2 | ...`` with product at most ``max_order``."""
    for _ in range(100):
        k = rng.randint(1, max_factors)
        chain: list[int] = []
        order = 1
        for _ in range(k):
            base = chain[-1] if chain else 1
            options = [base * m for m in range(1 if chain else 2, max_order + 1)
                       if base * m >= 2 and order * base * m <= max_order
                       and (max_part is None or base * m <= max_part)]
            if not options:
                break
            d = rng.choice(options)
            chain.append(d)
            order *= d
        if chain:
            return tuple(chain)
    raise GenerationFailed("no invariant factor chain fits")


def random_group(rng: random.Random, max_order: int, max_factors: int = 2, free_rank: int = 0,
                 max_part: int | None = None) -> FgAbelianGroup:
    if max_order < 2:
        return FgAbelianGroup(free_rank, ())
    return FgAbelianGroup(free_rank, random_chain(rng, max_order, max_factors, max_part))


def _random_matrix(rng: random.Random, group: FgAbelianGroup) -> list[list[int]]:
    n = group.ngens
    mods = group.moduli
    # entry (i, j) only matters modulo the modulus of row i
    return [[rng.randrange(mods[i]) if mods[i] else rng.randint(-2, 2) for j in range(n)] for i in range(n)]


def _map_order(group: FgAbelianGroup, m, limit: int) -> int | None:
    """Order of the automorphism ``m`` of the finite ``group``, if at most ``limit``."""
    f = AffineMap(group, tuple(tuple(r) for r in m), (0,) * group.ngens)
    gens = [g.coords for g in group.gens()]
    cur = list(gens)
    for k in range(1, limit + 1):
        cur = [f.linear(x) for x in cur]
        if cur == gens:
            return k
    return None


def _matrix_power(group: FgAbelianGroup, m, k: int):
    n = group.ngens
    f = AffineMap(group, tuple(tuple(r) for r in m), (0,) * n)
    cols = []
    for g in group.gens():
        x = g.coords
        for _ in range(k):
            x = f.linear(x)
        cols.append(x)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def random_automorphism(rng: random.Random, group: FgAbelianGroup, max_order: int = 64, tries: int = 200):
    """A random automorphism of the finite ``group`` and its order."""
    probe = FgAbelianGroup(1, ())
    for _ in range(tries):
        m = _random_matrix(rng, group)
        if not ZAModule(probe, group, [m]).validate().ok:
            continue
        o = _map_order(group, m, max_order)
        if o is not None:
            return m, o
    # negation always works and has order at most 2
    n = group.ngens
    m = [[-1 if i == j else 0 for j in range(n)] for i in range(n)]
    return m, _map_order(group, m, 2)


def random_module(rng: random.Random, acting: FgAbelianGroup, group: FgAbelianGroup, tries: int = 200) -> ZAModule:
    """Action matrices drawn as powers of one random automorphism (so they commute);
    a draw is rejected unless the module validates."""
    if group.ngens == 0:
        return ZAModule(acting, group, [[] for _ in range(acting.ngens)])
    moduli = acting.moduli
    for _ in range(tries):
        base, o = random_automorphism(rng, group)
        mats = []
        for d in moduli:
            # exponents whose power has order dividing d; validation below still decides
            ks = [k for k in range(o) if d == 0 or d % (o // math.gcd(o, k)) == 0]
            nontrivial = [k for k in ks if k]
            k = rng.choice(nontrivial) if nontrivial and rng.random() < 0.85 else rng.choice(ks)
            mats.append(_matrix_power(group, base, k))
        module = ZAModule(acting, group, mats)
        if module.validate().ok:
            return module
    raise GenerationFailed(f"no module structure on {group} over {acting}")


def random_derivation(rng: random.Random, module: ZAModule, tries: int = 20) -> Derivation:
    """Random generator values, rejected until valid; after ``tries`` misses
    an inner derivation is returned instead."""
    N = module.group
    for _ in range(tries):
        vals = [N.reduce([rng.randrange(m) if m else rng.randint(-3, 3) for m in N.moduli]) for _ in range(module.acting.ngens)]
        d = Derivation(module, vals)
        if d.validate().ok:
            return d
    nu = N.reduce([rng.randrange(m) if m else rng.randint(-3, 3) for m in N.moduli])
    return Derivation.inner(module, nu)


@dataclass
class RandomInstance:
    module: ZAModule
    derivation: Derivation


def random_instance(rng: random.Random, max_g: int = 5000, finite_acting: bool = True, max_n: int = MAX_N) -> RandomInstance:
    """``N x| A`` with ``|N| |A| <= max_g`` when ``A`` is finite."""
    if finite_acting:
        a_order = rng.randint(2, min(64, max_g // 2))
        acting = random_group(rng, a_order, 2, max_part=MAX_TORSION)
        n_max = min(max_n, max_g // acting.order())
    else:
        free = rng.randint(1, 2)
        tors = random_chain(rng, 16, 1, MAX_TORSION) if rng.random() < 0.5 else ()
        acting = FgAbelianGroup(free, tors)
        n_max = max_n
    if acting.ngens > MAX_RANK:
        acting = FgAbelianGroup(acting.free_rank, acting.torsion[: MAX_RANK - acting.free_rank])
    # log-uniform order so small modules with rich automorphism groups are common
    n_cap = max(2, int(round(math.exp(rng.uniform(math.log(2), math.log(max(2, n_max)))))))
    group = random_group(rng, n_cap, 2)
    module = random_module(rng, acting, group)
    return RandomInstance(module, random_derivation(rng, module))


def random_submodule_generators(rng: random.Random, module: ZAModule, k: int | None = None) -> list[Vector]:
    N = module.group
    k = rng.randint(0, 2) if k is None else k
    return [N.reduce([rng.randrange(m) for m in N.moduli]) for _ in range(k)]


# ---------------------------------------------------------------------------
# group-ring quotients


@dataclass
class RandomAlgebraSpec:
    acting: FgAbelianGroup
    field_: CoefficientRing
    ideal: list[GroupRingElement]
    element: Vector
    dim_bound: int


def _random_poly_with_root_one(rng: random.Random, R: CoefficientRing, deg: int) -> list[int]:
    """Coefficients of ``(X - 1) h(X)`` with ``h(0) != 0`` and ``deg = 1 + deg h``."""
    p = R.p
    h = [rng.randrange(1, p)] + [rng.randrange(p) for _ in range(deg - 2)] + [1] if deg > 1 else [1]
    out = [0] * (len(h) + 1)
    for i, c in enumerate(h):
        out[i] -= c
        out[i + 1] += c
    return [c % p for c in out]


def random_algebra(rng: random.Random, primes=(2, 3, 5), max_dim: int = 20,
                   max_quotient: int | None = 2**15) -> RandomAlgebraSpec:
    """``Z_p[A]/J`` with ``J`` inside the augmentation ideal and dimension at most ``max_dim``.

    ``J`` is generated by one polynomial with a root at 1 in each free
    generator, and ``a_i^{d_i} - 1`` is automatic for torsion generators.
    With ``max_quotient`` the dimension is also kept small enough that
    ``|I/J| = p^(dim - 1)`` stays within it, so orbits on ``I/J`` can be listed.
    """
    p = rng.choice(primes)
    R = CoefficientRing.mod(p)
    if max_quotient is not None:
        k = 0
        while p ** (k + 1) <= max_quotient:
            k += 1
        max_dim = min(max_dim, k + 1)
    r = rng.randint(1, 2)
    tors = (rng.choice([2, 3, 4]),) if rng.random() < 0.3 else ()
    acting = FgAbelianGroup(r, tors)
    budget = max_dim // (tors[0] if tors else 1)
    degs = []
    for i in range(r):
        left = budget
        for d in degs:
            left //= d
        cap = max(1, left // (2 ** (r - i - 1)))
        degs.append(rng.randint(1, max(1, min(cap, 10))))
    ring = GroupRing(acting, R)
    ideal = []
    zero = (0,) * acting.ngens
    for i, d in enumerate(degs):
        coeffs = _random_poly_with_root_one(rng, R, d)
        terms = {}
        for k, c in enumerate(coeffs):
            e = list(zero)
            e[i] = k
            terms[tuple(e)] = c
        ideal.append(ring(terms))
    # an extra generator that still lies in the augmentation ideal
    if rng.random() < 0.3 and r >= 1:
        e = list(zero)
        e[0] = 1
        extra = ring({tuple(e): 1, zero: -1}) * ring({tuple(e): rng.randrange(p), zero: rng.randrange(p)})
        if extra.terms:
            ideal.append(extra)
    dim = 1
    for d in degs:
        dim *= d
    dim *= tors[0] if tors else 1
    element = tuple(rng.randint(-2, 2) for _ in range(acting.ngens))
    return RandomAlgebraSpec(acting, R, ideal, element, dim)


# ---------------------------------------------------------------------------
# number fields


def random_monic_irreducible(rng: random.Random, min_deg: int = 1, max_deg: int = 6, bound: int = 9) -> list[int]:
    while True:
        d = rng.randint(min_deg, max_deg)
        mu = [rng.randint(-bound, bound) for _ in range(d)] + [1]
        if d >= 1 and find_factor(mu) is None:
            return mu


def random_psi(rng: random.Random, degrees=(2, 3), rank: int | None = None) -> AlgebraMapPsi:
    """``psi: Q[Z^r] -> K`` with random nonzero images of the generators."""
    mu = random_monic_irreducible(rng, min(degrees), max(degrees), 5)
    while len(mu) - 1 not in degrees:
        mu = random_monic_irreducible(rng, min(degrees), max(degrees), 5)
    K = NumberField(mu)
    r = rng.randint(1, 2) if rank is None else rank
    images = []
    for _ in range(r):
        while True:
            x = K([Fraction(rng.randint(-3, 3)) for _ in range(K.degree)])
            if not x.is_zero():
                images.append(x)
                break
    return AlgebraMapPsi(K, FgAbelianGroup(r, ()), images)


def random_augmentation_element(rng: random.Random, ring: GroupRing, terms: int = 3, spread: int = 2) -> GroupRingElement:
    """A random element of the augmentation ideal of ``ring``."""
    k = ring.acting.ngens
    z = ring.zero()
    for _ in range(terms):
        e = tuple(rng.randint(-spread, spread) for _ in range(k))
        z = z + ring.monomial(e, rng.randint(-3, 3))
    return z - ring.one() * z.augmentation()
