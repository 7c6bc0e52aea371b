"""Number fields ``K = Q[X]/mu(X)``, exact norms, and the integer identities
behind the prime-divisor argument for ``nu(z) = N(psi(z) - 1)``.

Norms are resultants computed in exact rational arithmetic.  The only
floating-point code is :func:`root_magnitude_check`, which is heuristic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from . import linalg
from . import poly as P
from .abgroup import FgAbelianGroup, Vector, _coords
from .groupalg import BudgetExhausted, GroupRing, GroupRingElement, canonical_star
from .modact import DomainError
from .poly import CoefficientRing

QQ = CoefficientRing.rationals()
ZZ = CoefficientRing.integers()
FACTOR_CAP = 2**64
KRONECKER_MAX_DEGREE = 6


class ReducibleError(ValueError):
    pass


# ---------------------------------------------------------------------------
# irreducibility over Q for small degree


def _divisors(n: int) -> list[int]:
    primes, _ = factorize(n, cap=math.inf)
    divs = {1}
    for p in primes:
        divs |= {d * p for d in divs}
    return sorted(divs)


def _interpolate_monic(points: Sequence[int], values: Sequence[int]) -> P.Poly | None:
    """Monic ``h`` of degree ``len(points)`` with ``h(x_i) = v_i``, or None if not integral."""
    base: P.Poly = (Fraction(1),)
    for x in points:
        base = P.mul(QQ, base, P.x_minus(QQ, x))
    lag: P.Poly = ()
    for i, (xi, vi) in enumerate(zip(points, values)):
        term: P.Poly = (Fraction(vi),)
        for j, xj in enumerate(points):
            if j != i:
                term = P.scale(QQ, P.mul(QQ, term, P.x_minus(QQ, xj)), Fraction(1, xi - xj))
        lag = P.add(QQ, lag, term)
    h = P.add(QQ, base, lag)
    if any(c.denominator != 1 for c in h):
        return None
    return h


def find_factor(mu: Sequence) -> P.Poly | None:
    """A monic proper factor of the monic integral ``mu`` over ``Z``, or None.

    Exhaustive search in the style of Kronecker: a monic factor ``h`` of
    degree ``k`` has ``h(x) | mu(x)`` at every integer ``x``, so it is pinned
    down by its values at ``k`` sample points.
    """
    mu = P.normalize(QQ, mu)
    d = P.degree(mu)
    if d <= 1:
        return None
    # integer roots first; also excludes sample points with mu(x) = 0
    samples = []
    for x in range(-64, 65):
        v = P.evaluate(mu, Fraction(x))
        if v == 0:
            return P.x_minus(QQ, x)
        samples.append((abs(v), abs(x), x, int(v)))
    samples.sort()
    for k in range(1, d // 2 + 1):
        chosen = samples[:k]
        pts = [s[2] for s in chosen]
        options = [[sign * t for t in _divisors(v) for sign in (1, -1)] for *_, v in chosen]
        for vals in itertools.product(*options):
            h = _interpolate_monic(pts, vals)
            if h is None or P.degree(h) != k:
                continue
            if not P.divmod_poly(QQ, mu, h)[1]:
                return h
    return None


def is_irreducible(mu: Sequence) -> bool:
    return find_factor(mu) is None


# ---------------------------------------------------------------------------
# fields and elements


class NumberField:
    """``Q[X]/mu`` for a monic irreducible ``mu``."""

    def __init__(self, mu: Sequence, assert_irreducible: bool = False):
        mu = P.normalize(QQ, mu)
        if not mu or mu[-1] != 1:
            raise ValueError("mu must be monic")
        if P.degree(mu) < 1:
            raise ValueError("mu must have positive degree")
        self.mu: P.Poly = mu
        self.degree = P.degree(mu)
        integral = all(c.denominator == 1 for c in mu)
        if self.degree <= KRONECKER_MAX_DEGREE and integral:
            factor = find_factor(mu)
            if factor is not None:
                raise ReducibleError(f"{P.to_str(mu)} has the factor {P.to_str(factor)}")
            self.irreducibility = "verified"
        elif assert_irreducible:
            self.irreducibility = "asserted"
        else:
            raise ReducibleError("irreducibility of mu cannot be checked here; pass assert_irreducible=True")

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.mu == other.mu

    def __hash__(self):
        return hash(self.mu)

    def __repr__(self):
        return f"NumberField({P.to_str(self.mu)})"

    def __call__(self, coeffs) -> "FieldElement":
        if isinstance(coeffs, FieldElement):
            return coeffs
        if isinstance(coeffs, (int, Fraction)):
            coeffs = (coeffs,)
        return FieldElement(self, P.divmod_poly(QQ, P.normalize(QQ, coeffs), self.mu)[1])

    def gen(self) -> "FieldElement":
        return self((0, 1))

    def one(self) -> "FieldElement":
        return self(1)

    def zero(self) -> "FieldElement":
        return self(0)

    def descriptor(self) -> dict:
        return {"mu": P.as_json(self.mu), "irreducibility": self.irreducibility}


@dataclass(frozen=True)
class FieldElement:
    field: NumberField
    poly: P.Poly

    def _lift(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        return self.field(other)

    def __add__(self, other):
        return FieldElement(self.field, P.add(QQ, self.poly, self._lift(other).poly))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, P.neg(QQ, self.poly))

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        return self.field(P.mul(QQ, self.poly, self._lift(other).poly))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if not self.poly:
            raise ZeroDivisionError("zero has no inverse")
        g, s, _ = P.ext_gcd(QQ, self.poly, self.field.mu)
        if P.degree(g) != 0:
            raise ZeroDivisionError("element is a zero divisor; mu is reducible")
        return self.field(s)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __pow__(self, k: int):
        base = self if k >= 0 else self.inverse()
        return self.field(P.power(QQ, base.poly, abs(k))) if k else self.field.one()

    def is_zero(self) -> bool:
        return not self.poly

    def coefficients(self) -> list[Fraction]:
        """Coordinates in the power basis ``1, X, ..., X^(d-1)``."""
        return [self.poly[i] if i < len(self.poly) else Fraction(0) for i in range(self.field.degree)]

    def norm(self) -> Fraction:
        return field_norm(self.field, self)

    def to_json(self) -> list:
        return P.as_json(self.poly)

    def __repr__(self):
        return P.to_str(self.poly)


def field_norm(K: NumberField, alpha) -> Fraction:
    """``N(alpha) = res(mu, alpha)``; with ``mu`` monic this is the product of the conjugates."""
    alpha = K(alpha)
    if alpha.is_zero():
        return Fraction(0)
    return Fraction(P.resultant(QQ, K.mu, alpha.poly))


def element_minpoly(alpha: FieldElement) -> P.Poly:
    """Monic minimal polynomial of ``alpha`` over ``Q`` by the first power dependency."""
    powers = [alpha.field.one().coefficients()]
    cur = alpha.field.one()
    while True:
        cur = cur * alpha
        powers.append(cur.coefficients())
        dep = linalg.first_dependency(powers, QQ)
        if dep is not None:
            return P.normalize(QQ, dep)


# ---------------------------------------------------------------------------
# the map psi: Q[A] -> K


class AlgebraMapPsi:
    """``psi: Q[A] -> K`` given by the images of the generators of ``A``."""

    def __init__(self, field_: NumberField, acting: FgAbelianGroup, images: Sequence, kernel: Iterable = ()):
        if len(images) != acting.ngens:
            raise ValueError(f"need {acting.ngens} generator images, got {len(images)}")
        self.field = field_
        self.acting = acting
        self.images = [field_(x) for x in images]
        self.ring = GroupRing(acting, QQ)
        self.kernel = [self._ring_element(z) for z in kernel]
        self.validate()

    def _ring_element(self, z) -> GroupRingElement:
        if isinstance(z, GroupRingElement):
            if z.ring.acting != self.acting:
                raise ValueError("element of a different group ring")
            return self.ring([(e, Fraction(c)) for e, c in z.terms.items()])
        return self.ring(z)

    def validate(self):
        for i, x in enumerate(self.images):
            if field_norm(self.field, x) == 0:
                raise DomainError(f"psi(a_{i}) = {x} is not invertible")
        for i, d in enumerate(self.acting.torsion):
            g = self.acting.free_rank + i
            if self.images[g] ** d != self.field.one():
                raise DomainError(f"psi(a_{g})^{d} != 1, so psi is not defined on the group")
        for z in self.kernel:
            if not self(z).is_zero():
                raise DomainError(f"J-generator {z!r} does not map to 0")

    def monomial(self, a) -> FieldElement:
        out = self.field.one()
        for x, k in zip(self.images, _coords(a)):
            out = out * x**k
        return out

    def __call__(self, z) -> FieldElement:
        z = self._ring_element(z)
        out = self.field.zero()
        for e, c in z.terms.items():
            out = out + self.monomial(e) * c
        return out

    def descriptor(self) -> dict:
        return {
            "mu": P.as_json(self.field.mu),
            "images": [x.to_json() for x in self.images],
            "kernel": [z.to_json() for z in self.kernel],
        }


def nu(psi: AlgebraMapPsi, z) -> Fraction:
    """``N(psi(z) - 1)``."""
    return field_norm(psi.field, psi(z) - 1)


def nu_scaled(mu: Sequence, n: int) -> int:
    """``(-n)^d mu(1/n)``, an integer for integral monic ``mu``."""
    mu = P.normalize(ZZ, mu)
    if n < 1:
        raise ValueError("n must be a positive integer")
    d = P.degree(mu)
    # (-n)^d mu(1/n) = (-1)^d sum c_k n^(d-k)
    return (-1) ** d * sum(c * n ** (d - k) for k, c in enumerate(mu))


# ---------------------------------------------------------------------------
# integer factorization


_SMALL_PRIMES = [p for p in range(2, 1000) if all(p % q for q in range(2, math.isqrt(p) + 1))]
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)  # deterministic below 3.3e24


def is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _SMALL_PRIMES[:12]:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for b in _MR_BASES:
        x = pow(b, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    """A nontrivial factor of the odd composite ``n`` (deterministic seeds)."""
    for c in itertools.count(1):
        y, r, q, g = 2, 1, 1, 1
        x = ys = 2
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise AssertionError("unreachable")


def factorize(n: int, cap: int = FACTOR_CAP) -> tuple[list[int], bool]:
    """Prime factors of ``|n|`` with multiplicity and a completeness flag.

    Above ``cap`` only trial division by small primes is done and the
    remaining cofactor is reported as an incomplete factor.
    """
    n = abs(n)
    if n < 2:
        return [], True
    out: list[int] = []
    for p in _SMALL_PRIMES:
        while n % p == 0:
            out.append(p)
            n //= p
    if n == 1:
        return out, True
    if n > cap:
        return sorted(out + [n]), False
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_probable_prime(m):
            out.append(m)
            continue
        f = _pollard_brent(m)
        stack += [f, m // f]
    return sorted(out), True


@dataclass
class CoprimalityReport:
    mu: list
    n: int
    value: int
    residue: int
    expected_residue: int
    gcd: int
    prime_factors: list
    complete: bool

    @property
    def congruence_ok(self) -> bool:
        return self.residue == self.expected_residue

    @property
    def ok(self) -> bool:
        return self.congruence_ok and self.gcd == 1

    def as_dict(self) -> dict:
        return {
            "mu": self.mu,
            "n": self.n,
            "value": self.value,
            "residue": self.residue,
            "expected_residue": self.expected_residue,
            "congruence_ok": self.congruence_ok,
            "gcd": self.gcd,
            "prime_factors": self.prime_factors,
            "complete": self.complete,
            "ok": self.ok,
        }


def coprimality_report(mu: Sequence, n: int, cap: int = FACTOR_CAP) -> CoprimalityReport:
    mu = P.normalize(ZZ, mu)
    value = nu_scaled(mu, n)
    d = P.degree(mu)
    factors, complete = factorize(value, cap)
    return CoprimalityReport(
        mu=list(mu),
        n=n,
        value=value,
        residue=value % n,
        expected_residue=(-1) ** d % n,
        gcd=math.gcd(value, n),
        prime_factors=factors,
        complete=complete,
    )


# ---------------------------------------------------------------------------
# multiplicativity of nu along the canonical affine action


@dataclass
class MultiplicativityReport:
    ok: bool
    lhs: Fraction
    rhs: Fraction
    norm_a: Fraction
    nu_u: Fraction

    def as_dict(self) -> dict:
        return {k: (str(v) if isinstance(v, Fraction) else v) for k, v in self.__dict__.items()}


def multiplicativity_check(psi: AlgebraMapPsi, a, u) -> MultiplicativityReport:
    """Check ``nu(a * u) = N(psi(a)) nu(u)`` for ``u`` in the augmentation ideal."""
    u = psi._ring_element(u)
    if u.augmentation() != 0:
        raise DomainError("u must lie in the augmentation ideal")
    a = psi.acting.reduce(_coords(a))
    lhs = nu(psi, canonical_star(a, u))
    norm_a = field_norm(psi.field, psi.monomial(a))
    nu_u = nu(psi, u)
    rhs = norm_a * nu_u
    return MultiplicativityReport(lhs == rhs, lhs, rhs, norm_a, nu_u)


# ---------------------------------------------------------------------------
# primitive elements


@dataclass
class PrimitiveElement:
    z: GroupRingElement
    minpoly: P.Poly
    scale: int
    scaled_z: GroupRingElement
    scaled_minpoly: P.Poly
    candidates_tried: int
    search_order: str = "coefficient vectors of sum c_i (1 - a_i) by max |c_i|, then by |c_i|, then by signs"

    def as_dict(self) -> dict:
        return {
            "z": self.z.to_json(),
            "minpoly": P.as_json(self.minpoly),
            "scale": self.scale,
            "scaled_z": self.scaled_z.to_json(),
            "scaled_minpoly": P.as_json(self.scaled_minpoly),
            "candidates_tried": self.candidates_tried,
            "search_order": self.search_order,
        }


def integral_scale(minpoly: P.Poly) -> tuple[int, P.Poly]:
    """Least ``m >= 1`` with ``m^d f(X/m)`` integral, and that polynomial."""
    d = P.degree(minpoly)
    for m in itertools.count(1):
        scaled = tuple(c * m ** (d - k) for k, c in enumerate(minpoly))
        if all(Fraction(c).denominator == 1 for c in scaled):
            return m, P.normalize(ZZ, scaled)
    raise AssertionError("unreachable")


def _candidate_vectors(r: int, budget: int):
    count = 0
    for h in itertools.count(1):
        shell = [c for c in itertools.product(range(-h, h + 1), repeat=r) if max(map(abs, c)) == h]
        shell.sort(key=lambda c: (tuple(map(abs, c)), tuple(x < 0 for x in c)))
        for c in shell:
            yield c
            count += 1
            if count >= budget:
                return


def primitive_element_search(psi: AlgebraMapPsi, budget: int = 10_000) -> PrimitiveElement:
    """Find ``z = sum c_i (1 - a_i)`` in ``I`` with ``Q[psi(z)] = K``.

    Raises :class:`BudgetExhausted` when no candidate within the budget works.
    """
    d = psi.field.degree
    ring = psi.ring
    one = ring.one()
    basis = [one - ring.monomial(g.coords) for g in psi.acting.gens()]
    if not basis:
        raise BudgetExhausted("A is trivial, so psi(I) = 0")
    tried = 0
    for c in _candidate_vectors(len(basis), budget):
        tried += 1
        z = ring.zero()
        for ci, b in zip(c, basis):
            if ci:
                z = z + b * ci
        alpha = psi(z)
        if d > 1 and alpha.is_zero():
            continue
        f = element_minpoly(alpha)
        if P.degree(f) == d:
            m, g = integral_scale(f)
            return PrimitiveElement(z, f, m, z * m, g, tried)
    raise BudgetExhausted(f"no primitive element among {tried} candidates")


# ---------------------------------------------------------------------------
# root magnitudes


@dataclass
class RootMagnitudeReport:
    status: str  # "pass", "fail" or "indeterminate"
    bound: float
    margin: float
    moduli: list

    def as_dict(self) -> dict:
        return {"status": self.status, "bound": self.bound, "margin": self.margin, "moduli": self.moduli}


def root_magnitude_check(mu: Sequence, bound: float = 2, margin: float = 0.01, tol: float = 1e-9) -> RootMagnitudeReport:
    """Heuristic check that every complex root of ``mu`` has modulus above ``bound + margin``.

    Roots within ``margin`` of ``bound`` (in either direction) give
    ``indeterminate``.
    """
    mu = P.normalize(QQ, mu)
    coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(mu)]
    with mpmath.workdps(40):
        if len(coeffs) == 1:
            roots = []
        else:
            roots, err = mpmath.polyroots(coeffs, maxsteps=200, extraprec=200, error=True)
            if err > tol:
                roots = mpmath.polyroots(coeffs, maxsteps=2000, extraprec=800)
        moduli = sorted(float(abs(r)) for r in roots)
    if not moduli or moduli[0] > bound + margin:
        status = "pass"
    elif moduli[0] >= bound - margin:
        status = "indeterminate"
    else:
        status = "fail"
    return RootMagnitudeReport(status, float(bound), float(margin), [round(m, 9) for m in moduli])


# ---------------------------------------------------------------------------
# prime divisors of nu(n x), for illustration


@dataclass
class PrimeSpreadReport:
    reference_primes: list
    new_primes: dict = field(default_factory=dict)  # n -> primes of nu(n x) outside the reference set
    complete: bool = True

    def as_dict(self) -> dict:
        return {
            "reference_primes": self.reference_primes,
            "new_primes": {str(k): v for k, v in self.new_primes.items()},
            "complete": self.complete,
        }


def prime_spread_report(psi: AlgebraMapPsi, x, units: Iterable = (), n_max: int = 20) -> PrimeSpreadReport:
    """Primes dividing ``nu(n x)`` for ``n <= n_max`` compared with the finite set
    generated by the norms of ``psi(a_i)`` and the numerators of ``nu(u)``."""
    ref: set[int] = set()
    complete = True

    def add_primes(q: Fraction):
        nonlocal complete
        for part in (q.numerator, q.denominator):
            f, ok = factorize(part)
            complete &= ok
            ref.update(f)

    for g in psi.acting.gens():
        add_primes(field_norm(psi.field, psi.monomial(g.coords)))
    for u in units:
        v = nu(psi, u)
        if v:
            add_primes(v)
    x = psi._ring_element(x)
    new = {}
    for n in range(1, n_max + 1):
        v = nu(psi, x * n)
        f, ok = factorize(v.numerator)
        complete &= ok
        outside = sorted(set(f) - ref)
        if outside:
            new[n] = outside
    return PrimeSpreadReport(sorted(ref), new, complete)
