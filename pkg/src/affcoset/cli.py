"""Command-line interface: ``affcoset <command> [options]``."""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from . import poly as P
from .affine import DEFAULT_CAP, CapExceeded, InfiniteModuleError, check_restrict_properties, enumerate_orbits
from .groupalg import BudgetExhausted, DimensionCapExceeded, build_quotient_algebra, collision_poly, minimal_polynomial
from .instance import Instance, InstanceError, InstanceParseError, InstanceSchemaError, InvariantViolation, load_instance
from .modact import DomainError, Submodule
from .numfield import NumberField, ReducibleError, coprimality_report, field_norm, nu_scaled, root_magnitude_check
from .poly import CoefficientRing
from .report import dumps_report, make_report
from .selftest import DEFAULT_BUDGET, SUITES, selftest
from .semidirect import (
    BRUTEFORCE_CAP,
    SemidirectGroup,
    double_cosets_bruteforce,
    double_cosets_via_orbits,
    verify_bijection,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_SCHEMA = 4
EXIT_INVARIANT = 5
EXIT_CAP = 6
EXIT_DOMAIN = 7
EXIT_INCONCLUSIVE = 8
EXIT_IO = 9
EXIT_MISSING = 10

EPILOG = """exit codes:
  0   success, every check passed
  1   a verification ran and failed (report written)
  2   command-line usage error
  3   instance file is not valid JSON or is empty
  4   instance violates the schema (message names the JSON path)
  5   instance violates a module, derivation or field invariant
  6   an element or dimension cap was exceeded
  7   input outside the domain of the command (e.g. infinite module)
  8   search budget exhausted, result inconclusive (report written)
  9   file could not be read or written
  10  the instance lacks a section the command needs
"""


class MissingSection(Exception):
    pass


def _parse_coeffs(text: str) -> list[Fraction]:
    text = text.strip().strip("[]")
    try:
        return [Fraction(t.strip()) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad coefficient list {text!r}") from exc


def _parse_ints(text: str) -> tuple[int, ...]:
    text = text.strip().strip("[]")
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer vector {text!r}") from exc


def _integral(mu: list[Fraction]) -> list[int]:
    if any(c.denominator != 1 for c in mu):
        raise DomainError("mu must have integer coefficients")
    return [int(c) for c in mu]


def _need(inst: Instance | None, *keys: str) -> Instance:
    if inst is None:
        raise MissingSection("this command needs --instance")
    for k in keys:
        if k not in inst.raw:
            raise MissingSection(f"instance has no {k!r} section")
    return inst


# ---------------------------------------------------------------------------
# commands; each returns (results, ok)


def cmd_orbits(args, inst):
    inst = _need(inst, "module")
    part = enumerate_orbits(inst.action, args.cap_elements or DEFAULT_CAP)
    res = part.as_dict()
    if args.partition_out:
        Path(args.partition_out).write_text(dumps_report(res))
    return res, True


def cmd_doublecosets(args, inst):
    inst = _need(inst, "module")
    G = SemidirectGroup.from_action(inst.action)
    res: dict = {"method": args.method}
    ok = True
    if args.method in ("orbits", "both"):
        dc = double_cosets_via_orbits(G, args.cap_elements or DEFAULT_CAP)
        res["orbits"] = {"count": dc.count, "representatives": [list(r) for r in dc.representatives]}
    if args.method in ("bruteforce", "both"):
        dc = double_cosets_bruteforce(G, args.cap_elements or BRUTEFORCE_CAP)
        res["bruteforce"] = {"count": dc.count, "representatives": [r.as_list() for r in dc.representatives]}
    if args.method == "both":
        rep = verify_bijection(G, args.cap_elements or BRUTEFORCE_CAP)
        res["matching"] = rep.matching
        res["counts_agree"] = res["orbits"]["count"] == res["bruteforce"]["count"]
        res["bijection_ok"] = rep.ok
        res["witness"] = rep.witness
        ok = rep.ok and res["counts_agree"]
    return res, ok


def cmd_verify_bijection(args, inst):
    inst = _need(inst, "module")
    G = SemidirectGroup.from_action(inst.action)
    rep = verify_bijection(G, args.cap_elements or BRUTEFORCE_CAP)
    return rep.as_dict(), rep.ok


def cmd_check_restrict(args, inst):
    inst = _need(inst, "module", "submodule")
    sub = Submodule.generated(inst.module, inst.submodule_generators)
    rep = check_restrict_properties(inst.action, sub, args.cap_elements or DEFAULT_CAP)
    return rep.as_dict(), rep.ok


def _algebra(args, inst):
    inst = _need(inst, "ideal")
    ideal = inst.ideal
    gens = [inst.group_ring_element(z) for z in ideal["generators"]]
    R = gens[0].ring.coeffs if gens else (
        CoefficientRing.mod(ideal["p"]) if ideal["ring"] == "Zp" else CoefficientRing.rationals()
    )
    alg = build_quotient_algebra(inst.acting, R, gens, args.dim_cap)
    if args.element is not None:
        a = args.element
    elif "element" in ideal:
        a = tuple(ideal["element"])
    else:
        a = tuple(int(i == 0) for i in range(inst.acting.ngens))
    return alg, inst.acting.reduce(a)


def cmd_minpoly(args, inst):
    alg, a = _algebra(args, inst)
    f = minimal_polynomial(alg, a)
    return {"element": list(a), "dim": alg.dim, "basis": [list(b) for b in alg.basis], "minpoly": P.as_json(f),
            "degree": P.degree(f)}, True


def cmd_collision_poly(args, inst):
    alg, a = _algebra(args, inst)
    if alg.field.kind != "Zp":
        raise DomainError("collision-poly needs a prime field Z_p")
    cert = collision_poly(alg, a, args.prime_budget)
    res = cert.as_dict()
    res["dim"] = alg.dim
    return res, cert.verify()


def cmd_norm(args, inst):
    if args.mu is not None:
        K = NumberField(args.mu, args.assert_irreducible)
    else:
        K = _need(inst, "number_field").field_
    alpha = K(args.alpha) if args.alpha is not None else K.gen()
    return {"mu": P.as_json(K.mu), "alpha": alpha.to_json(), "norm": field_norm(K, alpha),
            "irreducibility": K.irreducibility}, True


def _mu_arg(args, inst) -> list[int]:
    if args.mu is not None:
        return _integral(args.mu)
    return _integral(list(_need(inst, "number_field").field_.mu))


def cmd_nu_scaled(args, inst):
    mu = _mu_arg(args, inst)
    v = nu_scaled(mu, args.n)
    d = len(mu) - 1
    return {"mu": mu, "n": args.n, "value": v, "congruent_to_sign": (v - (-1) ** d) % args.n == 0}, True


def cmd_coprimality(args, inst):
    mu = _mu_arg(args, inst)
    reports = [coprimality_report(mu, n).as_dict() for n in range(1, args.n_max + 1)]
    roots = root_magnitude_check(mu)
    ok = all(r["ok"] for r in reports)
    return {
        "mu": mu,
        "n_max": args.n_max,
        "reports": reports,
        "all_ok": ok,
        "incomplete_factorizations": sum(not r["complete"] for r in reports),
        "root_magnitude": roots.as_dict(),
    }, ok


def cmd_selftest(args, inst):
    seed = 42 if args.seed is None else args.seed
    res = selftest(seed, args.budget, args.suite)
    return res, res["ok"]


COMMANDS = {
    "orbits": cmd_orbits,
    "doublecosets": cmd_doublecosets,
    "verify-bijection": cmd_verify_bijection,
    "minpoly": cmd_minpoly,
    "collision-poly": cmd_collision_poly,
    "norm": cmd_norm,
    "nu-scaled": cmd_nu_scaled,
    "coprimality": cmd_coprimality,
    "check-restrict": cmd_check_restrict,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--instance", help="instance JSON file")
    common.add_argument("--seed", type=int, help="random seed (selftest default 42)")
    common.add_argument("--cap-elements", type=int, help="maximum number of group elements to enumerate")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=["json"], default="json", help="report format")

    parser = argparse.ArgumentParser(
        prog="affcoset",
        description="Exact affine-action, double-coset, group-algebra and number-field checks.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_, epilog=EPILOG,
                              formatter_class=argparse.RawDescriptionHelpFormatter)

    p = add("orbits", "partition a finite module into affine orbits")
    p.add_argument("--partition-out", help="also write the partition to this file")
    p = add("doublecosets", "count the double cosets A g B")
    p.add_argument("--method", choices=["orbits", "bruteforce", "both"], default="orbits")
    add("verify-bijection", "match double cosets with affine orbits elementwise")
    add("check-restrict", "check the restriction and induced-action properties for the instance submodule")
    for name, help_ in (("minpoly", "minimal polynomial of a group element in R[A]/J"),
                        ("collision-poly", "polynomial killing a group element from orbit collisions")):
        p = add(name, help_)
        p.add_argument("--element", type=_parse_ints, help="exponent vector, e.g. 1,0 (default: ideal.element or a_1)")
        p.add_argument("--dim-cap", type=int, default=512, help="largest quotient dimension to accept")
        if name == "collision-poly":
            p.add_argument("--prime-budget", type=int, default=25, help="how many primes to try")
    p = add("norm", "norm of a field element")
    p.add_argument("--mu", type=_parse_coeffs, help="monic mu, constant term first, e.g. -5,0,1")
    p.add_argument("--alpha", type=_parse_coeffs, help="element as coefficients (default: X)")
    p.add_argument("--assert-irreducible", action="store_true", help="accept mu of degree above 6 unchecked")
    p = add("nu-scaled", "(-n)^d mu(1/n)")
    p.add_argument("--mu", type=_parse_coeffs)
    p.add_argument("--n", type=int, required=True)
    p = add("coprimality", "congruence, coprimality and factorization of nu(n x) for n = 1..n_max")
    p.add_argument("--mu", type=_parse_coeffs)
    p.add_argument("--n-max", type=int, required=True)
    p = add("selftest", "run the randomized invariant suites")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="cases per suite (0 for none)")
    p.add_argument("--suite", action="append", choices=sorted(SUITES), help="run only these suites")
    return parser


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "n", 1) is not None and getattr(args, "n", 1) < 1:
        print("error: --n must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        inst = load_instance(args.instance) if args.instance else None
        results, ok = COMMANDS[args.command](args, inst)
        seed = args.seed if args.seed is not None else (42 if args.command == "selftest" else None)
        report = make_report(args.command, results, inst.raw if inst else vars_for_digest(args), seed)
        _emit(dumps_report(report), args.out)
        return EXIT_OK if ok else EXIT_CHECK_FAILED
    except InstanceParseError as exc:
        code, msg = EXIT_PARSE, str(exc)
    except InvariantViolation as exc:
        code, msg = EXIT_INVARIANT, str(exc)
    except (InstanceSchemaError, InstanceError) as exc:
        code, msg = EXIT_SCHEMA, str(exc)
    except (CapExceeded, DimensionCapExceeded) as exc:
        code, msg = EXIT_CAP, str(exc)
    except BudgetExhausted as exc:
        code, msg = EXIT_INCONCLUSIVE, str(exc)
        _emit(dumps_report(make_report(args.command, {"inconclusive": msg}, None, args.seed)), args.out)
    except ReducibleError as exc:
        code, msg = EXIT_INVARIANT, str(exc)
    except (InfiniteModuleError, DomainError) as exc:
        code, msg = EXIT_DOMAIN, str(exc)
    except MissingSection as exc:
        code, msg = EXIT_MISSING, str(exc)
    except OSError as exc:
        code, msg = EXIT_IO, str(exc)
    print(f"error: {msg}", file=sys.stderr)
    return code


def vars_for_digest(args) -> dict:
    """Command-line inputs identify the run when there is no instance file."""
    return {k: (list(map(str, v)) if isinstance(v, (list, tuple)) else v)
            for k, v in sorted(vars(args).items()) if k not in ("out", "format")}


if __name__ == "__main__":
    sys.exit(main())
