"""Randomized invariant suites.

Every suite draws its cases from one ``random.Random`` seeded from the
run seed and the suite name, so each suite is reproducible on its own.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import poly as P
from .abgroup import FgAbelianGroup
from .affine import AffineAction, CapExceeded, check_restrict_properties
from .generators import (
    random_algebra,
    random_augmentation_element,
    random_instance,
    random_monic_irreducible,
    random_psi,
    random_submodule_generators,
)
from .groupalg import (
    BudgetExhausted,
    GroupRing,
    build_quotient_algebra,
    collision_poly,
    evaluate_in_algebra,
    minimal_polynomial,
)
from .instance import instance_document
from .modact import AugmentationHomView, Submodule, ZAModule
from .numfield import (
    AlgebraMapPsi,
    NumberField,
    field_norm,
    multiplicativity_check,
    nu,
    nu_scaled,
)
from .poly import CoefficientRing
from .semidirect import SemidirectGroup, double_cosets_bruteforce, double_cosets_via_orbits, verify_bijection

DEFAULT_BUDGET = 10


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    passed: int = 0
    failed: int = 0
    inconclusive: int = 0
    first_failure: dict | None = None
    stats: dict = field(default_factory=dict)

    def record(self, ok: bool | None, witness: Callable[[], dict] | None = None):
        self.cases += 1
        if ok is None:
            self.inconclusive += 1
        elif ok:
            self.passed += 1
        else:
            self.failed += 1
            if self.first_failure is None and witness is not None:
                self.first_failure = witness()

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "cases": self.cases,
            "passed": self.passed,
            "failed": self.failed,
            "inconclusive": self.inconclusive,
            "first_failure": self.first_failure,
            "stats": self.stats,
            "ok": self.ok,
        }


def suite_rng(seed: int, name: str) -> random.Random:
    h = hashlib.sha256(f"{seed}:{name}".encode()).digest()
    return random.Random(int.from_bytes(h[:8], "big"))


def _random_a(rng: random.Random, A: FgAbelianGroup, spread: int = 5):
    return tuple(rng.randint(-spread, spread) if m == 0 else rng.randrange(m) for m in A.moduli)


def _random_nu(rng: random.Random, N: FgAbelianGroup, spread: int = 5):
    return tuple(rng.randint(-spread, spread) if m == 0 else rng.randrange(m) for m in N.moduli)


# ---------------------------------------------------------------------------


def suite_bijection(rng: random.Random, count: int, max_g: int = 5000) -> SuiteResult:
    res = SuiteResult("bijection")
    orders = []
    for _ in range(count):
        inst = random_instance(rng, max_g=max_g)
        G = SemidirectGroup(inst.module, inst.derivation)
        orders.append(G.order())
        brute = double_cosets_bruteforce(G)
        orbits = double_cosets_via_orbits(G)
        rep = verify_bijection(G)
        ok = brute.count == orbits.count and rep.ok
        res.record(ok, lambda: {
            "instance": instance_document(inst.module, inst.derivation),
            "bruteforce_count": brute.count,
            "orbit_count": orbits.count,
            "witness": rep.witness,
        })
    if orders:
        res.stats = {"max_order": max(orders), "min_order": min(orders)}
    return res


def suite_action_law(rng: random.Random, count: int, triples: int = 100) -> SuiteResult:
    res = SuiteResult("action_law")
    for i in range(count):
        inst = random_instance(rng, finite_acting=(i % 2 == 0), max_n=2000)
        act = AffineAction(inst.module, inst.derivation)
        A, N = act.acting, act.group
        bad = None
        for _ in range(triples):
            a1, a2, v = _random_a(rng, A), _random_a(rng, A), _random_nu(rng, N)
            lhs = act.apply(a1, act.apply(a2, v))
            rhs = act.apply(A.reduce([x + y for x, y in zip(a1, a2)]), v)
            if lhs != rhs:
                bad = {"a1": list(a1), "a2": list(a2), "nu": list(v), "lhs": list(lhs.coords), "rhs": list(rhs.coords)}
                break
        res.record(bad is None, lambda: {"instance": instance_document(inst.module, inst.derivation), **bad})
    res.stats = {"triples_per_instance": triples}
    return res


def suite_restrict(rng: random.Random, count: int) -> SuiteResult:
    res = SuiteResult("restrict")
    for _ in range(count):
        inst = random_instance(rng, max_g=5000)
        act = AffineAction(inst.module, inst.derivation)
        gens = random_submodule_generators(rng, inst.module)
        sub = Submodule.generated(inst.module, gens)
        rep = check_restrict_properties(act, sub)
        res.record(rep.ok, lambda: {
            "instance": instance_document(inst.module, inst.derivation, gens),
            "report": rep.as_dict(),
        })
    return res


def _leibniz_delta(module: ZAModule, values, a):
    """``delta(a)`` for non-negative ``a``, one generator step at a time
    (independent of the affine-map code)."""
    A, N = module.acting, module.group
    cur = (0,) * A.ngens
    acc = N.zero()
    for i, k in enumerate(A.reduce(a)):
        e = [0] * A.ngens
        e[i] = 1
        for _ in range(k):
            # delta(cur * a_i) = delta(cur) + cur . delta(a_i)
            acc = acc + module.act(cur, values[i])
            cur = tuple(x + y for x, y in zip(cur, e))
    return acc


def suite_hom_roundtrip(rng: random.Random, count: int) -> SuiteResult:
    res = SuiteResult("hom_roundtrip")
    for i in range(count):
        inst = random_instance(rng, finite_acting=(i % 2 == 0), max_n=2000)
        d = inst.derivation
        phi = AugmentationHomView(d)
        back = phi.to_derivation()
        ok = tuple(back.values) == tuple(d.values)
        A = inst.module.acting
        ring = GroupRing(A, CoefficientRing.integers())
        for _ in range(5):
            # phi is ZA-linear on I
            z = random_augmentation_element(rng, ring)
            g = _random_a(rng, A, 3)
            if phi(ring.monomial(g) * z) != inst.module.act(g, phi(z)):
                ok = False
            # phi(1 - g) = delta(g) via the step-by-step Leibniz rule (non-negative exponents)
            g = tuple(abs(x) for x in g)
            if phi(ring.one() - ring.monomial(g)) != _leibniz_delta(inst.module, d.values, g):
                ok = False
        res.record(ok, lambda: {"instance": instance_document(inst.module, d)})
    return res


def suite_group_algebra(rng: random.Random, count: int, prime_budget: int = 25,
                        max_quotient: int | None = 2**15, orbit_cap: int = 2**15) -> SuiteResult:
    """Collision certificates are attempted only while ``|I/J| <= orbit_cap``."""
    res = SuiteResult("group_algebra")
    dims = []
    certs = 0
    skipped = 0
    for _ in range(count):
        spec = random_algebra(rng, max_quotient=max_quotient)
        alg = build_quotient_algebra(spec.acting, spec.field_, spec.ideal)
        dims.append(alg.dim)
        f = minimal_polynomial(alg, spec.element)
        ok = bool(f) and not any(evaluate_in_algebra(f, spec.element, alg)) and P.degree(f) <= alg.dim
        ok = ok and alg.dim <= spec.dim_bound and alg.ideal_in_augmentation_ideal
        cert_info = None
        try:
            if spec.field_.p ** (alg.dim - 1) > orbit_cap:
                raise CapExceeded("I/J too large to list orbits")
            cert = collision_poly(alg, spec.element, prime_budget)
            cert_info = cert.as_dict()
            ok = ok and cert.verify()
            certs += 1
        except BudgetExhausted:
            pass
        except CapExceeded:
            skipped += 1
        res.record(ok, lambda: {
            "acting": spec.acting.descriptor(),
            "field": spec.field_.descriptor(),
            "ideal": [z.to_json() for z in spec.ideal],
            "element": list(spec.element),
            "minpoly": P.as_json(f),
            "certificate": cert_info,
        })
    if dims:
        res.stats = {"max_dim": max(dims), "certificates": certs, "collision_skipped_cap": skipped}
    return res


def suite_norms(rng: random.Random, count: int, n_max: int = 1000) -> SuiteResult:
    res = SuiteResult("norms")
    for _ in range(count):
        mu = random_monic_irreducible(rng, 1, 6)
        n = rng.randint(1, n_max)
        K = NumberField(mu)
        A = FgAbelianGroup(1, ())
        # psi(a) = 1 - X, so x = 1 - a has psi(x) = X with minimal polynomial mu
        if field_norm(K, K((1, -1))) == 0:
            res.record(None)
            continue
        psi = AlgebraMapPsi(K, A, [K((1, -1))])
        x = psi.ring({(0,): 1, (1,): -1})
        v = nu_scaled(mu, n)
        d = len(mu) - 1
        ok = Fraction(v) == nu(psi, x * n) and (v - (-1) ** d) % n == 0 and math.gcd(v, n) == 1
        res.record(ok, lambda: {"mu": mu, "n": n, "nu_scaled": v, "nu": nu(psi, x * n)})
    return res


def suite_multiplicativity(rng: random.Random, count: int) -> SuiteResult:
    res = SuiteResult("multiplicativity")
    degrees = []
    for i in range(count):
        psi = random_psi(rng, degrees=(2,) if i % 2 == 0 else (3,))
        degrees.append(psi.field.degree)
        a = _random_a(rng, psi.acting, 3)
        u = random_augmentation_element(rng, psi.ring)
        rep = multiplicativity_check(psi, a, u)
        res.record(rep.ok, lambda: {"psi": psi.descriptor(), "a": list(a), "u": u.to_json(), **rep.as_dict()})
    res.stats = {"quadratic": degrees.count(2), "cubic": degrees.count(3)}
    return res


def suite_norm_multiplicative(rng: random.Random, count: int) -> SuiteResult:
    res = SuiteResult("norm_multiplicative")
    for _ in range(count):
        mu = random_monic_irreducible(rng, 1, 5)
        K = NumberField(mu)
        x = K([Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(K.degree)])
        y = K([Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(K.degree)])
        ok = field_norm(K, x * y) == field_norm(K, x) * field_norm(K, y)
        res.record(ok, lambda: {"mu": mu, "x": x.to_json(), "y": y.to_json()})
    return res


SUITES: dict[str, Callable[[random.Random, int], SuiteResult]] = {
    "bijection": suite_bijection,
    "action_law": suite_action_law,
    "restrict": suite_restrict,
    "hom_roundtrip": suite_hom_roundtrip,
    "group_algebra": suite_group_algebra,
    "norms": suite_norms,
    "multiplicativity": suite_multiplicativity,
    "norm_multiplicative": suite_norm_multiplicative,
}


def run_suite(name: str, seed: int, count: int, **kwargs) -> SuiteResult:
    return SUITES[name](suite_rng(seed, name), count, **kwargs)


def selftest(seed: int = 42, budget: int = DEFAULT_BUDGET, suites: list[str] | None = None) -> dict:
    """Run every suite with ``budget`` cases; ``budget = 0`` gives an empty, passing report."""
    names = list(SUITES) if suites is None else suites
    results = [run_suite(n, seed, budget).as_dict() for n in names] if budget > 0 else []
    return {
        "budget": budget,
        "suites": results,
        "failed": sum(r["failed"] for r in results),
        "ok": all(r["ok"] for r in results),
    }
