"""Group rings ``R[A]``, finite-dimensional quotients ``R[A]/J`` and the
polynomials killed by their elements.

Two routes produce a nonzero ``f`` with ``f(a) in J``: the minimal polynomial
of ``a`` in the quotient algebra, and the prime-collision construction that
uses only the orbits of the canonical affine action ``a * (x + J) = (ax + 1 - a) + J``
on ``I/J``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import linalg
from . import poly as P
from .abgroup import FgAbelianGroup, Vector, _coords, integer_relation
from .affine import AffineAction, OrbitPartition, enumerate_orbits
from .modact import Derivation, DomainError, ZAModule
from .poly import CoefficientRing

DEFAULT_DIM_CAP = 512


class RingMismatch(TypeError):
    pass


class DimensionCapExceeded(RuntimeError):
    """``J`` does not detectably have finite codimension within the cap."""


class BudgetExhausted(RuntimeError):
    """The prime budget ran out before a certificate was found."""


# ---------------------------------------------------------------------------
# group rings


@dataclass(frozen=True)
class GroupRing:
    acting: FgAbelianGroup
    coeffs: CoefficientRing

    def __call__(self, terms: Mapping | Iterable = ()) -> "GroupRingElement":
        if isinstance(terms, Mapping):
            terms = terms.items()
        return GroupRingElement.from_pairs(self, terms)

    def monomial(self, a, c=1) -> "GroupRingElement":
        return self([(_coords(a), c)])

    def one(self) -> "GroupRingElement":
        return self.monomial((0,) * self.acting.ngens)

    def zero(self) -> "GroupRingElement":
        return GroupRingElement(self, {})

    def from_json(self, pairs) -> "GroupRingElement":
        return self([(tuple(e), c) for e, c in pairs])


@dataclass(frozen=True)
class GroupRingElement:
    ring: GroupRing
    terms: dict = field(hash=False)

    @classmethod
    def from_pairs(cls, ring: GroupRing, pairs) -> "GroupRingElement":
        acc: dict[Vector, object] = {}
        R = ring.coeffs
        for exps, c in pairs:
            e = ring.acting.reduce(_coords(exps))
            acc[e] = R(acc.get(e, 0) + R(c))
        return cls(ring, {e: c for e, c in sorted(acc.items()) if c != 0})

    def _check(self, other: "GroupRingElement"):
        if not isinstance(other, GroupRingElement) or other.ring != self.ring:
            raise RingMismatch("group ring elements over different rings")

    def __add__(self, other):
        self._check(other)
        return GroupRingElement.from_pairs(self.ring, itertools.chain(self.terms.items(), other.terms.items()))

    def __neg__(self):
        return GroupRingElement.from_pairs(self.ring, ((e, -c) for e, c in self.terms.items()))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, GroupRingElement):
            self._check(other)
            pairs = (
                (tuple(x + y for x, y in zip(e, f)), c * d)
                for e, c in self.terms.items()
                for f, d in other.terms.items()
            )
            return GroupRingElement.from_pairs(self.ring, pairs)
        return GroupRingElement.from_pairs(self.ring, ((e, c * other) for e, c in self.terms.items()))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = self.ring.one()
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        return isinstance(other, GroupRingElement) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, tuple(self.terms.items())))

    def augmentation(self):
        return self.ring.coeffs(sum(self.terms.values()))

    def is_zero(self) -> bool:
        return not self.terms

    def to_json(self) -> list:
        return [[list(e), P.as_json((c,))[0] if c != 0 else 0] for e, c in self.terms.items()]

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*a^{list(e)}" for e, c in self.terms.items())


def ring_add(x: GroupRingElement, y: GroupRingElement) -> GroupRingElement:
    return x + y


def ring_mul(x: GroupRingElement, y: GroupRingElement) -> GroupRingElement:
    return x * y


def augmentation(z: GroupRingElement):
    return z.augmentation()


def f_q_element(ring: GroupRing, a, q: int) -> GroupRingElement:
    """``(a - 1)^q`` expanded binomially in ``ring``."""
    a = _coords(a)
    return ring([(tuple(k * x for x in a), comb(q, k) * (-1) ** (q - k)) for k in range(q + 1)])


def canonical_star(a, u: GroupRingElement) -> GroupRingElement:
    """``a * u = a u + 1 - a`` in the group ring."""
    ring = u.ring
    am = ring.monomial(a)
    return am * u + ring.one() - am


# ---------------------------------------------------------------------------
# finite-dimensional quotient algebras


class FiniteDimAlgebra:
    """``Lambda = R[A] / J`` over a field, as a cyclic module generated by 1.

    ``basis`` lists monomials whose cosets form a basis; ``matrices[i]`` is
    multiplication by the ``i``-th generator of ``A`` in that basis (columns
    are images of basis vectors).
    """

    def __init__(self, acting, field_, basis, matrices, inverse_matrices, one, ideal_generators):
        self.acting = acting
        self.field = field_
        self.basis = tuple(basis)
        self.matrices = matrices
        self.inverse_matrices = inverse_matrices
        self._one = one
        self.ideal_generators = tuple(ideal_generators)
        self._cache: dict[Vector, list] = {}

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def ring(self) -> GroupRing:
        return GroupRing(self.acting, self.field)

    def one(self) -> list:
        return list(self._one)

    def zero(self) -> list:
        return [self.field(0)] * self.dim

    @property
    def augmentation(self) -> list:
        """Augmentation functional on the basis (each basis coset is a monomial)."""
        return [self.field(1)] * self.dim

    def ideal_in_augmentation_ideal(self) -> bool:
        return all(g.augmentation() == 0 for g in self.ideal_generators)

    def monomial_matrix(self, a) -> list[list]:
        a = self.acting.reduce(_coords(a))
        hit = self._cache.get(a)
        if hit is None:
            R = self.field
            hit = linalg.eye(self.dim, R)
            for i, k in enumerate(a):
                base = self.matrices[i] if k >= 0 else self.inverse_matrices[i]
                k = abs(k)
                while k:
                    if k & 1:
                        hit = linalg.matmul(base, hit, R)
                    k >>= 1
                    if k:
                        base = linalg.matmul(base, base, R)
            self._cache[a] = hit
        return hit

    def apply(self, a, v: Sequence) -> list:
        return linalg.matvec(self.monomial_matrix(a), v, self.field)

    def reduce(self, z: GroupRingElement) -> list:
        """Coordinates of ``z + J``."""
        R = self.field
        out = self.zero()
        for e, c in z.terms.items():
            col = self.apply(e, self._one)
            out = [R(x + R(c) * y) for x, y in zip(out, col)]
        return out

    def element_matrix(self, v: Sequence) -> list[list]:
        """Matrix of multiplication by the element with coordinates ``v``."""
        R = self.field
        total = [[R(0)] * self.dim for _ in range(self.dim)]
        for coeff, b in zip(v, self.basis):
            if coeff == 0:
                continue
            m = self.monomial_matrix(b)
            total = [[R(x + coeff * y) for x, y in zip(r1, r2)] for r1, r2 in zip(total, m)]
        return total

    def mul(self, x: Sequence, y: Sequence) -> list:
        return linalg.matvec(self.element_matrix(x), y, self.field)

    def star(self, a, v: Sequence) -> list:
        """Canonical affine action ``a * v = a v + 1 - a``."""
        R = self.field
        av = self.apply(a, v)
        a1 = self.apply(a, self._one)
        return [R(x + o - y) for x, o, y in zip(av, self._one, a1)]

    def descriptor(self) -> dict:
        return {
            "field": self.field.descriptor(),
            "dim": self.dim,
            "basis": [list(b) for b in self.basis],
            "matrices": [[[P.as_json((x,))[0] if x != 0 else 0 for x in row] for row in m] for m in self.matrices],
        }


def _innerness(a: FgAbelianGroup, m: Vector):
    free = m[: a.free_rank]
    return (
        max((abs(x) for x in free), default=0),
        sum(abs(x) for x in free),
        tuple(x < 0 for x in free),
        m[a.free_rank:],
        tuple(abs(x) for x in free),
    )


def _box(a: FgAbelianGroup, k: int) -> list[Vector]:
    ranges = [range(-k, k + 1)] * a.free_rank + [range(d) for d in a.torsion]
    return [tuple(c) for c in itertools.product(*ranges)]


def build_quotient_algebra(
    acting: FgAbelianGroup,
    field_: CoefficientRing,
    ideal_generators: Sequence[GroupRingElement],
    dim_cap: int = DEFAULT_DIM_CAP,
    box_cap: int | None = None,
) -> FiniteDimAlgebra:
    """Compute ``R[A]/J`` by linear algebra on growing boxes of monomials.

    For a box ``S`` the relations ``m g`` (``g`` a generator of ``J``, support
    of ``m g`` inside ``S``) are row reduced with outer monomials pivoted
    first.  The surviving inner monomials ``B`` give a candidate basis; it is
    accepted once ``B`` is closed under the generators inside ``S`` and the
    resulting matrices commute, invert each other, respect the torsion of
    ``A`` and kill every generator of ``J`` at 1.  Such matrices present a
    quotient of ``R[A]/J`` of dimension ``|B|``, while the box relations show
    ``R[A]/J`` is spanned by ``B``; so the two agree.
    """
    if not field_.is_field:
        raise DomainError("quotient algebras are built over Z_p or Q only")
    ring = GroupRing(acting, field_)
    gens = [g if isinstance(g, GroupRingElement) else ring(g) for g in ideal_generators]
    gens = [GroupRingElement.from_pairs(ring, g.terms.items()) for g in gens]
    nonzero = [g for g in gens if not g.is_zero()]
    r = acting.free_rank
    if box_cap is None:
        box_cap = max(8 * dim_cap, 64)
    width = max(
        [max(e[i] for e in g.terms) - min(e[i] for e in g.terms) for g in nonzero for i in range(r)] or [0]
    )
    k = max(1, width)
    while True:
        box = _box(acting, k)
        if len(box) > box_cap:
            raise DimensionCapExceeded(f"monomial box of radius {k} exceeds {box_cap} monomials")
        result = _try_box(acting, field_, nonzero, gens, box, k)
        if isinstance(result, FiniteDimAlgebra):
            if result.dim > dim_cap:
                raise DimensionCapExceeded(f"dimension {result.dim} exceeds cap {dim_cap}")
            return result
        if result > dim_cap:
            raise DimensionCapExceeded(f"more than {dim_cap} independent interior monomials at radius {k}")
        if r == 0:
            raise DimensionCapExceeded("closure checks failed on a finite group")  # pragma: no cover
        k += 1


def _try_box(acting, R, nonzero, gens, box, k):
    r = acting.free_rank
    order = sorted(box, key=lambda m: _innerness(acting, m), reverse=True)
    col = {m: i for i, m in enumerate(order)}
    rows = []
    for g in nonzero:
        lo = [min(e[i] for e in g.terms) for i in range(r)]
        hi = [max(e[i] for e in g.terms) for i in range(r)]
        ranges = [range(-k - lo[i], k - hi[i] + 1) for i in range(r)] + [range(d) for d in acting.torsion]
        for shift in itertools.product(*ranges):
            row = {}
            for e, c in g.terms.items():
                m = acting.reduce([x + y for x, y in zip(e, shift)])
                j = col[m]
                row[j] = R(row.get(j, 0) + c)
            row = {j: c for j, c in row.items() if c != 0}
            if row:
                rows.append(row)
    pivots = _sparse_rref(rows, R)
    basis = sorted((m for m in box if col[m] not in pivots), key=lambda m: _innerness(acting, m))
    interior = [b for b in basis if all(abs(x) <= k - 1 for x in b[:r])]
    if len(interior) < len(basis):
        return len(interior)
    bidx = {b: i for i, b in enumerate(basis)}
    n = len(basis)

    def nf(m: Vector) -> list:
        v = [R(0)] * n
        if m in bidx:
            v[bidx[m]] = R(1)
            return v
        for j, c in pivots[col[m]].items():
            if j != col[m]:
                v[bidx[order[j]]] = R(-c)
        return v

    mats, invs = [], []
    for i in range(acting.ngens):
        step = tuple(int(t == i) for t in range(acting.ngens))
        fwd = [nf(acting.reduce([x + y for x, y in zip(b, step)])) for b in basis]
        bwd = [nf(acting.reduce([x - y for x, y in zip(b, step)])) for b in basis]
        mats.append([[fwd[j][row] for j in range(n)] for row in range(n)])
        invs.append([[bwd[j][row] for j in range(n)] for row in range(n)])
    one = nf((0,) * acting.ngens)
    alg = FiniteDimAlgebra(acting, R, basis, mats, invs, one, gens)
    if _consistent(alg, nonzero):
        return alg
    return len(interior)


def _sparse_rref(rows: list[dict], R) -> dict[int, dict]:
    """Fully reduced echelon form keyed by pivot column (pivot = smallest column index)."""
    pivots: dict[int, dict] = {}
    for row in rows:
        row = dict(row)
        # eliminate existing pivots from the new row
        changed = True
        while changed and row:
            changed = False
            for j in sorted(row):
                if j in pivots:
                    c = row[j]
                    for jj, cc in pivots[j].items():
                        v = R(row.get(jj, 0) - c * cc)
                        if v == 0:
                            row.pop(jj, None)
                        else:
                            row[jj] = v
                    changed = True
                    break
        if not row:
            continue
        p = min(row)
        inv = R.inv(row[p])
        row = {j: R(c * inv) for j, c in row.items()}
        for q, prow in pivots.items():
            if p in prow:
                c = prow[p]
                for jj, cc in row.items():
                    v = R(prow.get(jj, 0) - c * cc)
                    if v == 0:
                        prow.pop(jj, None)
                    else:
                        prow[jj] = v
        pivots[p] = row
    return pivots


def _consistent(alg: FiniteDimAlgebra, nonzero) -> bool:
    R = alg.field
    n = alg.dim
    eye = linalg.eye(n, R)
    k = alg.acting.ngens
    for i in range(k):
        if linalg.matmul(alg.matrices[i], alg.inverse_matrices[i], R) != eye:
            return False
        for j in range(i + 1, k):
            if linalg.matmul(alg.matrices[i], alg.matrices[j], R) != linalg.matmul(alg.matrices[j], alg.matrices[i], R):
                return False
    for t, d in enumerate(alg.acting.torsion):
        i = alg.acting.free_rank + t
        m = eye
        for _ in range(d):
            m = linalg.matmul(alg.matrices[i], m, R)
        if m != eye:
            return False
    return all(not any(alg.reduce(g)) for g in nonzero)


# ---------------------------------------------------------------------------
# polynomials in a fixed element


def minimal_polynomial(alg: FiniteDimAlgebra, a) -> tuple:
    """Least-degree monic ``f`` with ``f(a) = 0`` in ``Lambda``."""
    R = alg.field
    m = alg.monomial_matrix(a)
    powers = [alg.one()]
    while True:
        dep = linalg.first_dependency(powers, R)
        if dep is not None:
            return P.normalize(R, dep)
        powers.append(linalg.matvec(m, powers[-1], R))


def evaluate_in_algebra(f: Sequence, a, alg: FiniteDimAlgebra) -> list:
    """``f(a)`` in ``Lambda`` by Horner's rule, as coordinates."""
    R = alg.field
    f = P.normalize(R, f)
    if not f:
        return alg.zero()
    m = alg.monomial_matrix(a)
    one = alg.one()
    if R.kind == "Zp" and alg.dim:
        mat = np.array(m, dtype=np.int64)
        one_np = np.array(one, dtype=np.int64)
        acc = (one_np * f[-1]) % R.p
        for c in reversed(f[:-1]):
            acc = (mat @ acc + one_np * c) % R.p
        return [int(x) for x in acc]
    acc = [R(f[-1] * x) for x in one]
    for c in reversed(f[:-1]):
        acc = [R(x + c * o) for x, o in zip(linalg.matvec(m, acc, R), one)]
    return acc


# ---------------------------------------------------------------------------
# canonical affine action on I/J


@dataclass
class CanonicalAffineAction:
    algebra: FiniteDimAlgebra
    action: AffineAction
    basis: list  # RREF basis of the image of I in Lambda
    pivots: list

    def coords(self, v: Sequence) -> tuple:
        """Coordinates in ``I/J`` of an algebra element lying in it."""
        R = self.algebra.field
        c = tuple(int(v[p]) for p in self.pivots)
        back = [R(sum(ci * row[j] for ci, row in zip(c, self.basis))) for j in range(self.algebra.dim)]
        if back != [R(x) for x in v]:
            raise DomainError("element is not in I/J")
        return c

    def element(self, c: Sequence) -> list:
        R = self.algebra.field
        return [R(sum(ci * row[j] for ci, row in zip(c, self.basis))) for j in range(self.algebra.dim)]


def canonical_affine_action(alg: FiniteDimAlgebra) -> CanonicalAffineAction:
    """The module ``I/J`` (image of the augmentation ideal) with ``a * x = ax + 1 - a``."""
    R = alg.field
    if R.kind != "Zp":
        raise DomainError("the canonical affine action is enumerated over Z_p only")
    one = alg.one()
    spanning = []
    for b in alg.basis:
        v = alg.apply(b, one)
        spanning.append([R(x - o) for x, o in zip(v, one)])
    basis, pivots = linalg.rref(spanning, R) if spanning else ([], [])
    # span{b - 1} is the whole image of I only when J lies in I; close it
    # under multiplication to get the ideal (I + J)/J in general
    while True:
        more = [linalg.matvec(m, row, R) for m in alg.matrices + alg.inverse_matrices for row in basis]
        grown, grown_piv = linalg.rref(basis + more, R) if basis else ([], [])
        if len(grown_piv) == len(pivots):
            break
        basis, pivots = grown, grown_piv
    k = len(basis)
    group = FgAbelianGroup(0, (R.p,) * k)

    def coords(v):
        return tuple(int(v[p]) for p in pivots)

    mats = []
    values = []
    for i in range(alg.acting.ngens):
        cols = [coords(linalg.matvec(alg.matrices[i], row, R)) for row in basis]
        mats.append([[cols[j][r] for j in range(k)] for r in range(k)])
        ai = linalg.matvec(alg.matrices[i], one, R)
        values.append(coords([R(o - x) for o, x in zip(one, ai)]))
    module = ZAModule(alg.acting, group, mats)
    return CanonicalAffineAction(alg, AffineAction(module, Derivation(module, values)), basis, pivots)


# ---------------------------------------------------------------------------
# prime-collision certificates


def primes(skip: int | None = None) -> Iterable[int]:
    n = 2
    while True:
        if all(n % d for d in range(2, int(n**0.5) + 1)) and n != skip:
            yield n
        n += 1


@dataclass
class CollisionCertificate:
    algebra: FiniteDimAlgebra = field(repr=False)
    element: Vector
    q: list[int]
    r: list[int]
    witnesses: list[Vector]
    t: list[int]
    g1: tuple
    g2: tuple
    f: tuple

    def clauses(self) -> dict[str, bool]:
        alg = self.algebra
        R = alg.field
        ps = self.q + self.r
        one = alg.one()
        collisions = True
        for qj, rj, aj in zip(self.q, self.r, self.witnesses):
            fq = evaluate_in_algebra(P.power(R, P.normalize(R, [-1, 1]), qj), self.element, alg)
            fr = evaluate_in_algebra(P.power(R, P.normalize(R, [-1, 1]), rj), self.element, alg)
            if fq != alg.star(aj, fr):
                collisions = False
        relation = alg.acting.reduce(
            [sum(tj * aj[i] for tj, aj in zip(self.t, self.witnesses)) for i in range(alg.acting.ngens)]
        )
        return {
            "primes_distinct": len(set(ps)) == len(ps) and R.p not in ps,
            "exponents_nonnegative_nonzero": all(x >= 0 for x in self.t) and any(self.t),
            "f_nonzero": bool(P.normalize(R, self.f)),
            "f_vanishes": not any(evaluate_in_algebra(self.f, self.element, alg)),
            "collisions_hold": collisions and not any(relation),
        }

    def verify(self) -> bool:
        return all(self.clauses().values())

    def as_dict(self) -> dict:
        return {
            "element": list(self.element),
            "q": self.q,
            "r": self.r,
            "witnesses": [list(a) for a in self.witnesses],
            "t": self.t,
            "deg_g1": P.degree(self.g1),
            "deg_g2": P.degree(self.g2),
            "deg_f": P.degree(self.f),
            "f": P.as_json(self.f),
            "clauses": self.clauses(),
        }


def collision_poly(alg: FiniteDimAlgebra, a, prime_budget: int | Iterable[int] = 25) -> CollisionCertificate:
    """Build ``f = g1 - g2`` from orbit collisions of ``(a - 1)^q + J``.

    Primes ``q != p`` are taken in increasing order.  Two primes whose
    ``(a-1)^q`` share an orbit give ``(q_j, r_j, a_j)`` with
    ``(a-1)^{q_j} = a_j * (a-1)^{r_j}`` in ``I/J``; collisions are gathered
    until the witnesses satisfy an integer relation ``sum t_j a_j = 0``, signs
    are made non-negative by swapping ``q_j`` and ``r_j``, and
    ``g1 = prod ((X-1)^{q_j} - 1)^{t_j}``, ``g2`` likewise with ``r_j``.
    """
    R = alg.field
    a = alg.acting.reduce(_coords(a))
    can = canonical_affine_action(alg)
    part: OrbitPartition = enumerate_orbits(can.action, transversal=True)
    if isinstance(prime_budget, int):
        budget = list(itertools.islice(primes(skip=R.p), prime_budget))
    else:
        budget = [q for q in prime_budget if q != R.p]
    x_minus_1 = P.normalize(R, [-1, 1])
    pending: dict[int, tuple[int, Vector]] = {}
    qs, rs, ws = [], [], []
    A = alg.acting
    for q in budget:
        x = can.coords(evaluate_in_algebra(P.power(R, x_minus_1, q), a, alg))
        oid = part.orbit_id(x)
        word = part.transversal[x]
        if oid not in pending:
            pending[oid] = (q, word)
            continue
        r, rword = pending.pop(oid)
        # x_q = word * rep and x_r = rword * rep, so x_q = (word - rword) * x_r
        qs.append(q)
        rs.append(r)
        ws.append(A.reduce([u - v for u, v in zip(word, rword)]))
        t = integer_relation([A(w) for w in ws], A)
        if t is None:
            continue
        q_out, r_out, w_out, t_out = [], [], [], []
        for qj, rj, wj, tj in zip(qs, rs, ws, t):
            if tj < 0:
                qj, rj, wj, tj = rj, qj, A.reduce([-c for c in wj]), -tj
            q_out.append(qj)
            r_out.append(rj)
            w_out.append(wj)
            t_out.append(tj)
        g1 = g2 = (R(1),)
        for qj, rj, tj in zip(q_out, r_out, t_out):
            g1 = P.mul(R, g1, P.power(R, P.sub(R, P.power(R, x_minus_1, qj), (R(1),)), tj))
            g2 = P.mul(R, g2, P.power(R, P.sub(R, P.power(R, x_minus_1, rj), (R(1),)), tj))
        cert = CollisionCertificate(alg, a, q_out, r_out, w_out, t_out, g1, g2, P.sub(R, g1, g2))
        return cert
    raise BudgetExhausted(f"no certificate within {len(budget)} primes ({len(qs)} collisions)")
