import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from affcoset import linalg
from affcoset import poly as P
from affcoset.abgroup import FgAbelianGroup
from affcoset.affine import enumerate_orbits
from affcoset.generators import random_algebra, random_augmentation_element
from affcoset.groupalg import (
    DimensionCapExceeded,
    GroupRing,
    RingMismatch,
    augmentation,
    build_quotient_algebra,
    canonical_affine_action,
    canonical_star,
    collision_poly,
    evaluate_in_algebra,
    f_q_element,
    minimal_polynomial,
    ring_add,
    ring_mul,
)
from affcoset.poly import CoefficientRing

Z = FgAbelianGroup(1, ())
ZZ = CoefficientRing.integers()
QQ = CoefficientRing.rationals()
F2, F3 = CoefficientRing.mod(2), CoefficientRing.mod(3)


def poly_ideal(R, coeffs, acting=Z):
    ring = GroupRing(acting, R)
    return ring({(k,): c for k, c in enumerate(coeffs)})


def test_augmentation_examples():
    ring = GroupRing(Z, ZZ)
    u = ring({(0,): 1, (1,): -1})
    assert augmentation(u) == 0
    sq = ring_mul(u, u)
    assert sq == ring({(0,): 1, (1,): -2, (2,): 1}) and augmentation(sq) == 0
    r2 = GroupRing(Z, F2)
    x = r2({(1,): 1, (0,): 1})
    assert x * x == r2({(2,): 1, (0,): 1})


def test_ring_mismatch():
    with pytest.raises(RingMismatch):
        ring_add(GroupRing(Z, ZZ).one(), GroupRing(Z, F2).one())


def test_torsion_exponents_reduced():
    ring = GroupRing(FgAbelianGroup(0, (3,)), ZZ)
    assert ring.monomial((4,)) == ring.monomial((1,))


def test_f_q_examples():
    assert f_q_element(GroupRing(Z, ZZ), (1,), 2) == GroupRing(Z, ZZ)({(2,): 1, (1,): -2, (0,): 1})
    assert f_q_element(GroupRing(Z, F3), (1,), 3) == GroupRing(Z, F3)({(3,): 1, (0,): -1})
    assert f_q_element(GroupRing(Z, F2), (1,), 2) == GroupRing(Z, F2)({(2,): 1, (0,): 1})


def test_build_quotient_examples():
    alg = build_quotient_algebra(Z, F2, [poly_ideal(F2, [1, 1, 1])])
    assert alg.dim == 2 and [tuple(b) for b in alg.basis] == [(0,), (1,)]
    assert build_quotient_algebra(Z, QQ, [poly_ideal(QQ, [-1, 1])]).dim == 1
    with pytest.raises(DimensionCapExceeded):
        build_quotient_algebra(Z, QQ, [], dim_cap=50)


def test_canonical_action_examples():
    # J = (a^2 + a + 1) is not inside I over Z_2 (augmentation 1), so (I + J)/J is all of Lambda
    alg = build_quotient_algebra(Z, F2, [poly_ideal(F2, [1, 1, 1])])
    can = canonical_affine_action(alg)
    assert can.action.group.order() == 4
    alg = build_quotient_algebra(Z, F3, [poly_ideal(F3, [-1, 1])])
    can = canonical_affine_action(alg)
    assert can.action.group.order() == 1 and len(enumerate_orbits(can.action)) == 1
    alg = build_quotient_algebra(Z, F3, [poly_ideal(F3, [-1, 0, 1])])
    assert canonical_affine_action(alg).action.group.order() == 3


def test_canonical_action_refuses_q():
    alg = build_quotient_algebra(Z, QQ, [poly_ideal(QQ, [-5, 0, 1])])
    with pytest.raises(ValueError):
        canonical_affine_action(alg)


def test_minimal_polynomial_examples():
    alg = build_quotient_algebra(Z, F2, [poly_ideal(F2, [1, 1, 1])])
    assert minimal_polynomial(alg, (1,)) == (1, 1, 1)
    alg = build_quotient_algebra(Z, F3, [poly_ideal(F3, [-1, 1])])
    assert minimal_polynomial(alg, (1,)) == (2, 1)
    alg = build_quotient_algebra(Z, QQ, [poly_ideal(QQ, [-5, 0, 1])])
    assert minimal_polynomial(alg, (1,)) == (Fraction(-5), 0, 1)


def test_evaluate_examples():
    alg = build_quotient_algebra(Z, F2, [poly_ideal(F2, [1, 1, 1])])
    assert evaluate_in_algebra((0, 1, 1), (1,), alg) == alg.one()
    assert evaluate_in_algebra((1,), (1,), alg) == alg.one()


def test_collision_examples():
    alg = build_quotient_algebra(Z, F2, [poly_ideal(F2, [1, 1, 1])])
    cert = collision_poly(alg, (1,))
    assert cert.verify()
    assert not any(evaluate_in_algebra(cert.f, (1,), alg))
    alg = build_quotient_algebra(Z, F3, [poly_ideal(F3, [-1, 1])])
    cert = collision_poly(alg, (1,))
    assert cert.verify() and all(w == (0,) for w in cert.witnesses)


def test_collision_two_generators():
    A = FgAbelianGroup(2, ())
    ring = GroupRing(A, F3)
    J = [ring({(2, 0): 1, (0, 0): -1}), ring({(0, 3): 1, (0, 0): -1})]
    alg = build_quotient_algebra(A, F3, J)
    assert alg.dim == 6
    cert = collision_poly(alg, (1, 1))
    assert all(cert.clauses().values())


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([ZZ, F2, F3, QQ]))
def test_augmentation_is_a_ring_map(seed, R):
    rng = random.Random(seed)
    ring = GroupRing(FgAbelianGroup(1, (3,)), R)
    x = ring({(rng.randint(-2, 2), rng.randint(0, 2)): rng.randint(-3, 3) for _ in range(3)})
    y = ring({(rng.randint(-2, 2), rng.randint(0, 2)): rng.randint(-3, 3) for _ in range(3)})
    assert augmentation(ring_mul(x, y)) == R(augmentation(x) * augmentation(y))
    assert augmentation(ring_add(x, y)) == R(augmentation(x) + augmentation(y))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_star_identity(seed):
    rng = random.Random(seed)
    ring = GroupRing(FgAbelianGroup(2, ()), ZZ)
    u = random_augmentation_element(rng, ring)
    a = (rng.randint(-3, 3), rng.randint(-3, 3))
    assert canonical_star(a, u) - ring.one() == ring.monomial(a) * (u - ring.one())


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_quotient_algebra_invariants(seed):
    spec = random_algebra(random.Random(seed))
    alg = build_quotient_algebra(spec.acting, spec.field_, spec.ideal)
    R = alg.field
    for z in spec.ideal:
        assert not any(alg.reduce(z))
    for i in range(len(alg.matrices)):
        for j in range(len(alg.matrices)):
            mi, mj = alg.matrices[i], alg.matrices[j]
            assert linalg.matmul(mi, mj, R) == linalg.matmul(mj, mi, R)
        assert linalg.matmul(alg.matrices[i], alg.inverse_matrices[i], R) == linalg.eye(alg.dim, R)


def _sympy_quotient_dim(spec):
    """Dimension of F_p[x]/(gcd of the ideal polynomials) for one free generator."""
    x = sympy.symbols("x")
    polys = []
    for z in spec.ideal:
        polys.append(sympy.Poly(sum(int(c) * x ** e[0] for e, c in z.terms.items()), x, modulus=spec.field_.p))
    g = polys[0]
    for h in polys[1:]:
        g = sympy.gcd(g, h)
    return g.degree()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_dimension_matches_polynomial_gcd(seed):
    rng = random.Random(seed)
    spec = random_algebra(rng)
    if spec.acting.ngens != 1:
        return
    alg = build_quotient_algebra(spec.acting, spec.field_, spec.ideal)
    assert alg.dim == _sympy_quotient_dim(spec)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_minimal_polynomial_is_minimal(seed):
    spec = random_algebra(random.Random(seed))
    alg = build_quotient_algebra(spec.acting, spec.field_, spec.ideal)
    f = minimal_polynomial(alg, spec.element)
    R = alg.field
    assert f and f[-1] == 1 and P.degree(f) <= alg.dim
    assert not any(evaluate_in_algebra(f, spec.element, alg))
    powers = [evaluate_in_algebra(P.normalize(R, [0] * k + [1]), spec.element, alg) for k in range(P.degree(f))]
    assert linalg.rank(powers, R) == len(powers)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_collision_certificates_are_valid(seed):
    spec = random_algebra(random.Random(seed))
    alg = build_quotient_algebra(spec.acting, spec.field_, spec.ideal)
    cert = collision_poly(alg, spec.element)
    clauses = cert.clauses()
    assert all(clauses.values()), clauses
