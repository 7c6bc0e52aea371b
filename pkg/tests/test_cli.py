import json
from pathlib import Path

import pytest

from affcoset import cli
from affcoset.instance import (
    InstanceParseError,
    InstanceSchemaError,
    InvariantViolation,
    instance_document,
    load_instance,
    loads_instance,
    parse_instance,
)
from affcoset.report import canonical_json, dumps_report, make_report

ROOT = Path(__file__).resolve().parent.parent
INSTANCES = ROOT / "instances"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_load_good_instance():
    inst = load_instance(INSTANCES / "z5_times2.json")
    assert inst.module.validate().ok and inst.derivation.validate().ok


def test_load_names_the_derivation():
    with pytest.raises(InvariantViolation) as exc:
        load_instance(INSTANCES / "bad_derivation.json")
    assert exc.value.path == "$.derivation.values"
    assert "derivation" in str(exc.value)


def test_empty_file_is_parse_error(tmp_path):
    p = tmp_path / "empty.json"
    p.write_text("")
    with pytest.raises(InstanceParseError):
        load_instance(p)
    with pytest.raises(InstanceParseError):
        loads_instance("{not json")


def test_schema_errors_carry_paths():
    base = {"schema_version": 1, "acting_group": {"torsion": [4]}}
    with pytest.raises(InstanceSchemaError) as exc:
        parse_instance({**base, "module": {"group": {"torsion": [5]}, "action": [[[2, 1]]]}})
    assert exc.value.path == "$.module.action[0]"
    with pytest.raises(InstanceSchemaError) as exc:
        parse_instance({"schema_version": 2, "acting_group": {"torsion": []}})
    assert exc.value.path == "$.schema_version"
    with pytest.raises(InstanceSchemaError) as exc:
        parse_instance({**base, "acting_group": {"torsion": [4, 6]}})
    assert exc.value.path == "$.acting_group"


def test_module_invariant_violation():
    doc = {
        "schema_version": 1,
        "acting_group": {"free_rank": 1, "torsion": []},
        "module": {"group": {"torsion": [4]}, "action": [[[2]]]},
    }
    with pytest.raises(InvariantViolation) as exc:
        parse_instance(doc)
    assert exc.value.report.invariant == "automorphism"


def test_instance_document_roundtrip():
    inst = load_instance(INSTANCES / "z4_restrict.json")
    doc = instance_document(inst.module, inst.derivation, inst.submodule_generators)
    again = parse_instance(json.loads(json.dumps(doc)))
    assert again.module.descriptor() == inst.module.descriptor()
    assert again.derivation.values == inst.derivation.values


def test_canonical_json_is_sorted_and_compact():
    from fractions import Fraction

    assert canonical_json({"b": 1, "a": [Fraction(1, 2), Fraction(4, 2)]}) == '{"a":["1/2",2],"b":1}'
    r = make_report("x", {"v": 1}, {"k": 2}, 7)
    assert dumps_report(r) == dumps_report(make_report("x", {"v": 1}, {"k": 2}, 7))


def test_orbits_command(capsys, tmp_path):
    part = tmp_path / "part.json"
    code, rep, _ = run(capsys, "orbits", "--instance", str(INSTANCES / "z5_times2.json"), "--partition-out", str(part))
    assert code == 0
    assert rep["results"]["count"] == 2
    assert [o["representative"] for o in rep["results"]["orbits"]] == [[0], [4]]
    assert json.loads(part.read_text())["count"] == 2


def test_doublecosets_both(capsys):
    code, rep, _ = run(capsys, "doublecosets", "--method", "both", "--instance", str(INSTANCES / "z5_times2.json"))
    res = rep["results"]
    assert code == 0 and res["counts_agree"] and res["bijection_ok"] and len(res["matching"]) == 2


def test_verify_bijection_and_restrict(capsys):
    code, rep, _ = run(capsys, "verify-bijection", "--instance", str(INSTANCES / "z5_times2.json"))
    assert code == 0 and rep["results"]["ok"]
    code, rep, _ = run(capsys, "check-restrict", "--instance", str(INSTANCES / "z4_restrict.json"))
    assert code == 0 and rep["results"]["stabilizer_index"] == 2


def test_algebra_commands(capsys):
    code, rep, _ = run(capsys, "minpoly", "--instance", str(INSTANCES / "z2_cyclotomic.json"))
    assert code == 0 and rep["results"]["minpoly"] == [1, 1, 1]
    code, rep, _ = run(capsys, "collision-poly", "--instance", str(INSTANCES / "z2_squared_f3.json"), "--prime-budget", "25")
    assert code == 0 and all(rep["results"]["clauses"].values())


def test_number_commands(capsys):
    code, rep, _ = run(capsys, "norm", "--mu=-5,0,1")
    assert code == 0 and rep["results"]["norm"] == -5
    code, rep, _ = run(capsys, "norm", "--instance", str(INSTANCES / "sqrt5.json"), "--alpha", "2,1")
    assert rep["results"]["norm"] == -1
    code, rep, _ = run(capsys, "nu-scaled", "--mu=7,-2,0,1", "--n", "5")
    assert code == 0 and rep["results"]["value"] == -826
    code, rep, _ = run(capsys, "coprimality", "--mu=-5,0,1", "--n-max", "3")
    assert code == 0 and rep["results"]["reports"][2]["prime_factors"] == [2, 2, 11]


def test_exit_codes_are_distinct(capsys, tmp_path):
    empty = tmp_path / "e.json"
    empty.write_text("")
    schema = tmp_path / "s.json"
    schema.write_text('{"schema_version": 1}')
    codes = {
        "usage": run(capsys, "orbits", "--bogus")[0],
        "parse": run(capsys, "orbits", "--instance", str(empty))[0],
        "schema": run(capsys, "orbits", "--instance", str(schema))[0],
        "invariant": run(capsys, "orbits", "--instance", str(INSTANCES / "bad_derivation.json"))[0],
        "cap": run(capsys, "orbits", "--instance", str(INSTANCES / "z5_times2.json"), "--cap-elements", "2")[0],
        "domain": run(capsys, "collision-poly", "--instance", str(INSTANCES / "sqrt5_ideal_q.json"))[0],
        "inconclusive": run(capsys, "collision-poly", "--instance", str(INSTANCES / "z2_cyclotomic.json"),
                            "--prime-budget", "1")[0],
        "io": run(capsys, "orbits", "--instance", str(tmp_path / "missing.json"))[0],
        "missing": run(capsys, "orbits")[0],
    }
    assert codes == {
        "usage": cli.EXIT_USAGE,
        "parse": cli.EXIT_PARSE,
        "schema": cli.EXIT_SCHEMA,
        "invariant": cli.EXIT_INVARIANT,
        "cap": cli.EXIT_CAP,
        "domain": cli.EXIT_DOMAIN,
        "inconclusive": cli.EXIT_INCONCLUSIVE,
        "io": cli.EXIT_IO,
        "missing": cli.EXIT_MISSING,
    }
    assert len(set(codes.values()) | {cli.EXIT_OK, cli.EXIT_CHECK_FAILED}) == 11


def test_help_documents_exit_codes(capsys):
    assert cli.main(["--help"]) == 0
    out = capsys.readouterr().out
    for code in range(11):
        assert f"\n  {code} " in out


def test_selftest_budget_zero(capsys):
    code, rep, _ = run(capsys, "selftest", "--budget", "0")
    assert code == 0 and rep["results"]["suites"] == [] and rep["seed"] == 42


def test_selftest_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["selftest", "--seed", "7", "--budget", "3", "--out", str(a)]) == 0
    assert cli.main(["selftest", "--seed", "7", "--budget", "3", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_selftest_reports_failure_exit(monkeypatch, capsys):
    from affcoset import semidirect
    from affcoset.semidirect import SdElement

    monkeypatch.setattr(
        semidirect,
        "sd_mul",
        lambda G, g1, g2: SdElement(
            G.N.reduce([x + y for x, y in zip(g1.n_part, g2.n_part)]),
            G.A.reduce([x + y for x, y in zip(g1.a_part, g2.a_part)]),
        ),
    )
    code, rep, _ = run(capsys, "selftest", "--budget", "10", "--suite", "bijection")
    assert code == cli.EXIT_CHECK_FAILED
    assert rep["results"]["suites"][0]["first_failure"]["instance"]["schema_version"] == 1
