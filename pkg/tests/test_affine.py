import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affcoset.abgroup import FgAbelianGroup, Lattice
from affcoset.affine import (
    AffineAction,
    InfiniteModuleError,
    affine_apply,
    check_restrict_properties,
    enumerate_orbits,
    induced_action,
    restrict_action,
    scalar_orbit_count,
)
from affcoset.generators import random_instance, random_submodule_generators
from affcoset.modact import Derivation, DomainError, Submodule, ZAModule

Z = FgAbelianGroup(1, ())


def z5_action():
    m = ZAModule(Z, FgAbelianGroup(0, (5,)), [[[2]]])
    return AffineAction(m, Derivation(m, [(1,)]))


def z4_action():
    m = ZAModule.trivial(Z, FgAbelianGroup(0, (4,)))
    return AffineAction(m, Derivation(m, [(1,)]))


def brute_orbits(act):
    """Orbits by repeated application of every generator and inverse, with plain sets."""
    N, A = act.group, act.acting
    moves = []
    for i in range(A.ngens):
        for s in (1, -1):
            moves.append(tuple(s * int(j == i) for j in range(A.ngens)))
    seen, orbits = set(), set()
    for x in N.iter_coords():
        if x in seen:
            continue
        orbit, stack = {x}, [x]
        while stack:
            y = stack.pop()
            for mv in moves:
                z = affine_apply(act, mv, y).coords
                if z not in orbit:
                    orbit.add(z)
                    stack.append(z)
        seen |= orbit
        orbits.add(frozenset(orbit))
    return orbits


def test_affine_apply_examples():
    act = z5_action()
    assert affine_apply(act, (1,), (3,)).coords == (2,)
    assert affine_apply(act, (0,), (3,)).coords == (3,)
    zero = AffineAction.linear(act.module)
    assert affine_apply(zero, (1,), (3,)).coords == (1,)


def test_enumerate_orbits_examples():
    part = enumerate_orbits(z5_action())
    assert part.as_sets() == {frozenset({(0,), (1,), (2,), (3,)}), frozenset({(4,)})}
    assert part.representatives == [(0,), (4,)]
    triv = ZAModule.trivial(Z, FgAbelianGroup(0, (6,)))
    assert len(enumerate_orbits(AffineAction.linear(triv))) == 6
    z7 = ZAModule(Z, FgAbelianGroup(0, (7,)), [[[3]]])
    part = enumerate_orbits(AffineAction.linear(z7))
    assert part.as_sets() == {frozenset({(0,)}), frozenset({(k,) for k in range(1, 7)})}


def test_enumerate_orbits_refuses_infinite():
    m = ZAModule.trivial(Z, FgAbelianGroup(1, ()))
    with pytest.raises(InfiniteModuleError):
        enumerate_orbits(AffineAction.linear(m))


def test_scalar_orbit_count_examples():
    assert scalar_orbit_count(ZAModule(Z, FgAbelianGroup(0, (7,)), [[[3]]])) == 2
    assert scalar_orbit_count(ZAModule.trivial(Z, FgAbelianGroup(0, (2, 4)))) == 8
    swap = ZAModule(Z, FgAbelianGroup(0, (2, 2)), [[[0, 1], [1, 0]]])
    assert scalar_orbit_count(swap) == 3


def test_restrict_examples():
    act = z4_action()
    m = act.module
    full = Submodule(m, Lattice.generated_by(m.group, [(1,)]))
    assert restrict_action(act, full).index() == 1
    zero_act = AffineAction.linear(m)
    zero = Submodule(m, Lattice.generated_by(m.group, []))
    assert restrict_action(zero_act, zero).index() == 1
    half = Submodule.generated(m, [(2,)])
    r = restrict_action(act, half)
    assert r.index() == 2
    assert r.congruences() == [((1,), 2)]


def test_induced_examples():
    act = z4_action()
    m = act.module
    half = Submodule.generated(m, [(2,)])
    ind = induced_action(act, half).action
    assert ind.group == FgAbelianGroup(0, (2,))
    assert ind.derivation.values[0] == (1,)
    zero = Submodule.generated(m, [])
    same = induced_action(act, zero).action
    assert same.group.order() == 4
    assert len(enumerate_orbits(same)) == len(enumerate_orbits(act))
    whole = Submodule.generated(m, [(1,)])
    assert induced_action(act, whole).action.group.order() == 1


def test_restrict_requires_closed_submodule():
    swap = ZAModule(Z, FgAbelianGroup(0, (2, 2)), [[[0, 1], [1, 0]]])
    bad = Submodule(swap, Lattice.generated_by(swap.group, [(1, 0)]))
    with pytest.raises(DomainError):
        restrict_action(AffineAction.linear(swap), bad)


def test_check_restrict_examples():
    act = z5_action()
    m = act.module
    assert check_restrict_properties(act, Submodule.generated(m, [])).ok
    rep = check_restrict_properties(act, Submodule.generated(m, [(1,)]))
    assert rep.ok and rep.restricted_orbit_count == len(enumerate_orbits(act))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_orbits_partition_and_match_brute_force(seed, finite):
    inst = random_instance(random.Random(seed), finite_acting=finite, max_n=400)
    act = AffineAction(inst.module, inst.derivation)
    part = enumerate_orbits(act)
    elements = [x for o in part.orbits for x in o]
    assert len(elements) == len(set(elements)) == act.group.order()
    assert part.as_sets() == brute_orbits(act)
    assert all(o[0] == min(o) for o in part.orbits)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_restrict_properties_random(seed):
    rng = random.Random(seed)
    inst = random_instance(rng, max_n=400)
    act = AffineAction(inst.module, inst.derivation)
    sub = Submodule.generated(inst.module, random_submodule_generators(rng, inst.module))
    rep = check_restrict_properties(act, sub)
    assert rep.ok, rep.witness
    assert rep.induced_orbit_count <= rep.orbit_count


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_zero_derivation_gives_automorphism_orbits(seed):
    inst = random_instance(random.Random(seed), max_n=400)
    m = inst.module
    assert len(enumerate_orbits(AffineAction.linear(m))) == scalar_orbit_count(m)
