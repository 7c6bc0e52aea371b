import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from affcoset.abgroup import FgAbelianGroup
from affcoset.generators import random_monic_irreducible
from affcoset.groupalg import BudgetExhausted
from affcoset.modact import DomainError
from affcoset.numfield import (
    AlgebraMapPsi,
    NumberField,
    ReducibleError,
    coprimality_report,
    element_minpoly,
    factorize,
    field_norm,
    find_factor,
    integral_scale,
    multiplicativity_check,
    nu,
    nu_scaled,
    primitive_element_search,
    prime_spread_report,
    root_magnitude_check,
)

X = sympy.symbols("X")
Z = FgAbelianGroup(1, ())


def to_sympy(coeffs):
    return sum(sympy.Rational(str(c)) * X**k for k, c in enumerate(coeffs))


def sqrt5():
    return NumberField([-5, 0, 1])


def test_norm_examples():
    K = sqrt5()
    assert field_norm(K, K.gen()) == -5
    assert field_norm(K, 1) == 1
    assert field_norm(K, 2) == 4


def test_nu_examples():
    K = sqrt5()
    psi = AlgebraMapPsi(K, Z, [K((1, -1))])  # psi(1 - a) = X
    one_minus_a = psi.ring({(0,): 1, (1,): -1})
    assert nu(psi, psi.ring({(0,): 1})) == 0
    assert nu(psi, one_minus_a) == -4
    assert nu(psi, one_minus_a * 2) == -19


def test_nu_scaled_examples():
    assert nu_scaled([-5, 0, 1], 2) == -19
    assert nu_scaled([-2, 1], 1) == 1
    v = nu_scaled([7, -2, 0, 1], 5)
    assert v == -826 and (v - (-1) ** 3) % 5 == 0


def test_coprimality_examples():
    rep = coprimality_report([-5, 0, 1], 2)
    assert (rep.value, rep.gcd, rep.prime_factors) == (-19, 1, [19])
    assert coprimality_report([-5, 0, 1], 1).gcd == 1
    rep = coprimality_report([-5, 0, 1], 3)
    assert rep.value == -44 and rep.residue == 1 and rep.congruence_ok
    assert rep.gcd == 1 and rep.prime_factors == [2, 2, 11] and rep.complete


def test_coprimality_cap_flags_incomplete():
    big = (2**61 - 1) * (2**89 - 1)
    rep = coprimality_report([-big - 1, 1], 1)  # nu_scaled = -(1 - (big + 1)) = big
    assert rep.value == big
    assert not rep.complete


def test_multiplicativity_examples():
    K = sqrt5()
    psi = AlgebraMapPsi(K, Z, [K((2, 1))])
    assert field_norm(K, K((2, 1))) == -1
    u = psi.ring({(0,): 1, (1,): -1})
    rep = multiplicativity_check(psi, (1,), u)
    assert rep.ok and rep.lhs == rep.rhs == field_norm(K, K((2, 1))) * nu(psi, u)
    rep = multiplicativity_check(psi, (0,), u)
    assert rep.ok and rep.lhs == nu(psi, u)
    with pytest.raises(DomainError):
        multiplicativity_check(psi, (1,), psi.ring.one())


def test_primitive_element_examples():
    K = sqrt5()
    found = primitive_element_search(AlgebraMapPsi(K, Z, [K.gen()]))
    assert found.z == found.z.ring({(0,): 1, (1,): -1})
    assert found.minpoly == (Fraction(-4), -2, 1)  # (X - 1)^2 - 5
    Q = NumberField([0, 1])
    found = primitive_element_search(AlgebraMapPsi(Q, Z, [Q(2)]))
    assert len(found.minpoly) == 2
    assert integral_scale((Fraction(-5, 4), 0, 1)) == (2, (-5, 0, 1))


def test_primitive_element_budget():
    K = sqrt5()
    with pytest.raises(BudgetExhausted):
        primitive_element_search(AlgebraMapPsi(K, Z, [K(-1)]), budget=5)


def test_root_magnitude_examples():
    assert root_magnitude_check([-5, 0, 1]).status == "pass"
    assert root_magnitude_check([-1, 1]).status == "fail"
    assert root_magnitude_check([-2, 1]).status == "indeterminate"


def test_reducible_mu_rejected():
    with pytest.raises(ReducibleError):
        NumberField([-1, 0, 1])
    with pytest.raises(ReducibleError):
        NumberField([4, 0, 0, 0, 1])  # X^4 + 4 = (X^2 + 2X + 2)(X^2 - 2X + 2)
    with pytest.raises(ReducibleError):
        NumberField([1] + [0] * 6 + [1], assert_irreducible=False)  # degree 7 needs the assertion
    assert NumberField([1] + [0] * 6 + [1], assert_irreducible=True).irreducibility == "asserted"


def test_psi_validation():
    K = sqrt5()
    with pytest.raises(DomainError):
        AlgebraMapPsi(K, Z, [K(0)])
    C2 = FgAbelianGroup(0, (2,))
    AlgebraMapPsi(K, C2, [K(-1)])
    with pytest.raises(DomainError):
        AlgebraMapPsi(K, C2, [K.gen()])
    with pytest.raises(DomainError):
        AlgebraMapPsi(K, Z, [K.gen()], kernel=[[((1,), 1)]])
    AlgebraMapPsi(K, Z, [K.gen()], kernel=[[((2,), 1), ((0,), -5)]])


def test_prime_spread_report_runs():
    K = sqrt5()
    psi = AlgebraMapPsi(K, Z, [K((1, -1))])
    rep = prime_spread_report(psi, psi.ring({(0,): 1, (1,): -1}), n_max=6)
    assert rep.complete and rep.new_primes[2] == [19]


int_coeffs = st.lists(st.integers(-12, 12), min_size=1, max_size=6).map(lambda c: c + [1])


@settings(max_examples=150, deadline=None)
@given(int_coeffs)
def test_irreducibility_matches_sympy(mu):
    expected = sympy.Poly(to_sympy(mu), X).is_irreducible
    assert (find_factor(mu) is None) == expected


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_norm_matches_sympy_resultant_and_is_multiplicative(seed):
    rng = random.Random(seed)
    mu = random_monic_irreducible(rng, 1, 6)
    K = NumberField(mu)
    a = K([Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(K.degree)])
    b = K([Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(K.degree)])
    if not a.is_zero():
        assert field_norm(K, a) == Fraction(str(sympy.resultant(to_sympy(mu), to_sympy(a.poly), X)))
    assert field_norm(K, a * b) == field_norm(K, a) * field_norm(K, b)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 1000))
def test_nu_scaled_congruence_and_two_routes(seed, n):
    mu = random_monic_irreducible(random.Random(seed), 1, 6)
    K = NumberField(mu)
    v = nu_scaled(mu, n)
    d = len(mu) - 1
    assert (v - (-1) ** d) % n == 0
    assert math.gcd(v, n) == 1
    if field_norm(K, K((1, -1))) != 0:
        psi = AlgebraMapPsi(K, Z, [K((1, -1))])
        assert nu(psi, psi.ring({(0,): n, (1,): -n})) == v


@settings(max_examples=100, deadline=None)
@given(st.integers(-(2**64), 2**64))
def test_factorize_matches_sympy(n):
    factors, complete = factorize(n)
    assert complete
    assert math.prod(factors) == abs(n) or (abs(n) < 2 and factors == [])
    expected = sorted(p for p, k in sympy.factorint(abs(n)).items() for _ in range(k)) if abs(n) > 1 else []
    assert factors == expected


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_root_check_pass_implies_large_values(seed):
    mu = random_monic_irreducible(random.Random(seed), 1, 4, bound=60)
    rep = root_magnitude_check(mu)
    if rep.status == "pass":
        assert all(abs(nu_scaled(mu, n)) > 1 for n in range(1, 40))
    roots = sorted(float(abs(r)) for r in sympy.Poly(to_sympy(mu), X).nroots())
    assert all(abs(a - b) < 1e-6 for a, b in zip(roots, rep.moduli))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_element_minpoly_matches_sympy(seed):
    rng = random.Random(seed)
    mu = random_monic_irreducible(rng, 2, 4)
    K = NumberField(mu)
    a = K([rng.randint(-3, 3) for _ in range(K.degree)])
    ours = element_minpoly(a)
    # oracle: the characteristic polynomial of multiplication by a is a power of its minimal polynomial
    cols = [(a * K([0] * k + [1])).coefficients() for k in range(K.degree)]
    mat = sympy.Matrix(K.degree, K.degree, lambda i, j: sympy.Rational(str(cols[j][i])))
    factors = sympy.factor_list(mat.charpoly(X).as_expr(), X)[1]
    assert len(factors) == 1
    theirs = sympy.Poly(factors[0][0], X).monic()
    assert [sympy.Rational(str(c)) for c in reversed(ours)] == theirs.all_coeffs()
