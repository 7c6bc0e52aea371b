"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line."""

import time

import pytest

from affcoset import cli
from affcoset.selftest import run_suite

SEED = 20240601


@pytest.fixture
def report(capsys):
    def emit(label: str, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        assert ok, detail
    return emit


def test_1_bijection(report):
    t = time.perf_counter()
    r = run_suite("bijection", SEED, 100)
    dt = time.perf_counter() - t
    ok = r.cases >= 100 and r.failed == 0 and r.inconclusive == 0 and r.stats["max_order"] <= 5000 and dt < 60
    report("1 bijection", ok, f"{r.passed}/{r.cases} instances, max |G| {r.stats['max_order']}, {dt:.1f}s (< 60s)")


def test_2_action_law(report):
    r = run_suite("action_law", SEED, 50, triples=1000)
    ok = r.cases >= 50 and r.failed == 0 and r.inconclusive == 0
    report("2 affine action law", ok, f"{r.passed}/{r.cases} instances x 1000 triples")


def test_3_restrict(report):
    r = run_suite("restrict", SEED, 50)
    ok = r.cases >= 50 and r.failed == 0 and r.inconclusive == 0
    report("3 restriction", ok, f"{r.passed}/{r.cases} (instance, submodule) pairs")


def test_4_group_algebra(report):
    t = time.perf_counter()
    # orbit-listing range, where a collision certificate is always attempted
    small = run_suite("group_algebra", SEED, 25)
    # full dimension range up to 20 for the minimal polynomial
    large = run_suite("group_algebra", SEED + 1, 25, max_quotient=None)
    dt = time.perf_counter() - t
    ok = (
        small.failed == 0 and large.failed == 0
        and small.stats["collision_skipped_cap"] == 0
        and small.stats["certificates"] > 0
        and max(small.stats["max_dim"], large.stats["max_dim"]) <= 20
        and dt < 30
    )
    report(
        "4 group algebra",
        ok,
        f"{small.passed + large.passed}/{small.cases + large.cases} algebras, max dim "
        f"{max(small.stats['max_dim'], large.stats['max_dim'])}, {small.stats['certificates']} certificates, "
        f"{dt:.1f}s (< 30s)",
    )


def test_5_norms(report):
    t = time.perf_counter()
    r = run_suite("norms", SEED, 100)
    dt = time.perf_counter() - t
    ok = r.passed >= 100 and r.failed == 0 and dt < 30
    report("5 norm identities", ok, f"{r.passed}/{r.cases} (mu, n) pairs, {dt:.1f}s (< 30s)")


def test_6_multiplicativity(report):
    r = run_suite("multiplicativity", SEED, 50)
    ok = r.cases >= 50 and r.failed == 0 and r.stats["quadratic"] > 0 and r.stats["cubic"] > 0
    report("6 multiplicativity", ok, f"{r.passed}/{r.cases} triples ({r.stats['quadratic']} quadratic, "
                                     f"{r.stats['cubic']} cubic)")


def test_7_hom_roundtrip(report):
    r = run_suite("hom_roundtrip", SEED, 100)
    ok = r.cases >= 100 and r.failed == 0
    report("7 derivation/hom roundtrip", ok, f"{r.passed}/{r.cases} derivations")


def test_8_determinism(report, tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    codes = [cli.main(["selftest", "--seed", "42", "--out", str(p)]) for p in (a, b)]
    capsys.readouterr()
    ok = codes == [0, 0] and a.read_bytes() == b.read_bytes()
    report("8 determinism", ok, f"exit codes {codes}, {len(a.read_bytes())} bytes, identical={a.read_bytes() == b.read_bytes()}")
