import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affcoset.abgroup import FgAbelianGroup
from affcoset.generators import random_augmentation_element, random_instance
from affcoset.groupalg import GroupRing
from affcoset.modact import (
    AugmentationHomView,
    Derivation,
    DomainError,
    ZAModule,
    act,
    coinvariants,
    delta_of,
    hom_apply,
    submodule_generated,
    torsion_submodule,
    validate_module,
)
from affcoset.poly import CoefficientRing

Z = FgAbelianGroup(1, ())


def z5_times2():
    return ZAModule(Z, FgAbelianGroup(0, (5,)), [[[2]]])


def test_validate_examples():
    assert validate_module(z5_times2()).ok
    rep = validate_module(ZAModule(Z, FgAbelianGroup(0, (4,)), [[[2]]]))
    assert not rep.ok and rep.invariant == "automorphism"
    assert validate_module(ZAModule.trivial(Z, FgAbelianGroup(1, (3,)))).ok


def test_validate_commutation_and_order():
    A2 = FgAbelianGroup(2, ())
    N = FgAbelianGroup(0, (2, 2))
    m = ZAModule(A2, N, [[[1, 1], [0, 1]], [[1, 0], [1, 1]]])
    assert validate_module(m).invariant == "commutation"
    A = FgAbelianGroup(0, (2,))
    m = ZAModule(A, FgAbelianGroup(0, (5,)), [[[2]]])
    assert validate_module(m).invariant == "order"


def test_act_examples():
    m = z5_times2()
    assert act(m, (1,), (3,)).coords == (1,)
    assert act(m, (0,), (3,)).coords == (3,)
    assert act(m, (-1,), (1,)).coords == (3,)


def test_delta_examples():
    d = Derivation(z5_times2(), [(1,)])
    assert d.validate().ok
    assert delta_of(d, (2,)).coords == (3,)
    assert delta_of(d, (0,)).coords == (0,)
    assert delta_of(d, (-1,)).coords == (2,)


def test_hom_apply_examples():
    d = Derivation(z5_times2(), [(1,)])
    phi = AugmentationHomView(d)
    assert hom_apply(phi, {(0,): 1, (1,): -1}).coords == (1,)
    assert hom_apply(phi, {}).coords == (0,)
    assert hom_apply(phi, {(0,): 2, (1,): -1, (2,): -1}).coords == (4,)
    with pytest.raises(DomainError):
        hom_apply(phi, {(1,): 1})


def test_torsion_submodule_examples():
    for group, order in [((1, (4,)), 4), ((2, ()), 1), ((0, (2, 6)), 12)]:
        m = ZAModule.trivial(Z, FgAbelianGroup(*group))
        assert torsion_submodule(m).order() == order


def test_coinvariants_examples():
    assert coinvariants(z5_times2()).projection.group.order() == 1
    triv = ZAModule.trivial(Z, FgAbelianGroup(0, (2, 6)))
    assert coinvariants(triv).projection.group.order() == 12
    q = coinvariants(ZAModule(Z, FgAbelianGroup(0, (9,)), [[[4]]]))
    assert q.projection.group == FgAbelianGroup(0, (3,))


def test_submodule_generated_examples():
    m = z5_times2()
    zero = submodule_generated(m, [(0,)])
    assert zero.order() == 1 and zero.quotient().projection.group.order() == 5
    assert submodule_generated(m, [(1,)]).order() == 5
    sw = ZAModule.trivial(Z, FgAbelianGroup(0, (2, 2)))
    sub = submodule_generated(sw, [(1, 0)])
    assert sub.order() == 2 and sub.quotient().projection.group.order() == 2


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_action_law_and_leibniz(seed, finite):
    rng = random.Random(seed)
    inst = random_instance(rng, finite_acting=finite, max_n=500)
    m, d = inst.module, inst.derivation
    A, N = m.acting, m.group
    for _ in range(10):
        a = A.reduce([rng.randint(-4, 4) for _ in range(A.ngens)])
        b = A.reduce([rng.randint(-4, 4) for _ in range(A.ngens)])
        v = N.reduce([rng.randint(-50, 50) for _ in range(N.ngens)])
        ab = A.reduce([x + y for x, y in zip(a, b)])
        assert act(m, ab, v) == act(m, a, act(m, b, v).coords)
        assert delta_of(d, ab) == delta_of(d, a) + act(m, a, delta_of(d, b).coords)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_derivation_hom_roundtrip(seed):
    rng = random.Random(seed)
    inst = random_instance(rng, finite_acting=bool(seed % 2), max_n=500)
    d = inst.derivation
    phi = AugmentationHomView(d)
    assert tuple(phi.to_derivation().values) == tuple(d.values)
    ring = GroupRing(inst.module.acting, CoefficientRing.integers())
    z = random_augmentation_element(rng, ring)
    w = random_augmentation_element(rng, ring)
    assert phi(z + w) == phi(z) + phi(w)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_coinvariants_kill_the_action(seed):
    rng = random.Random(seed)
    inst = random_instance(rng, max_n=300)
    m = inst.module
    q = coinvariants(m)
    for _ in range(10):
        a = m.acting.reduce([rng.randint(0, 5) for _ in range(m.acting.ngens)])
        v = m.group.reduce([rng.randint(0, 300) for _ in range(m.group.ngens)])
        assert q.project(act(m, a, v).coords) == q.project(v)


def test_inner_derivation_is_valid():
    m = z5_times2()
    d = Derivation.inner(m, (3,))
    assert d.validate().ok
    # delta(a) = a.nu - nu = 6 - 3 = 3
    assert d.values[0] == (3,)
