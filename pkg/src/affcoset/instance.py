"""JSON instance files: schema, loading and invariant checks."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

import jsonschema

from .abgroup import FgAbelianGroup
from .affine import AffineAction
from .groupalg import GroupRing, GroupRingElement
from .modact import Derivation, ValidationReport, ZAModule
from .numfield import AlgebraMapPsi, NumberField
from .poly import CoefficientRing

SCHEMA_VERSION = 1

_int_vector = {"type": "array", "items": {"type": "integer"}}
_rational = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}]}
_group = {
    "type": "object",
    "properties": {
        "free_rank": {"type": "integer", "minimum": 0},
        "torsion": {"type": "array", "items": {"type": "integer", "minimum": 2}},
    },
    "required": ["torsion"],
    "additionalProperties": False,
}
_ring_element = {
    "type": "array",
    "items": {"type": "array", "prefixItems": [_int_vector, _rational], "minItems": 2, "maxItems": 2},
}

SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "acting_group": _group,
        "module": {
            "type": "object",
            "properties": {
                "group": _group,
                "action": {"type": "array", "items": {"type": "array", "items": _int_vector}},
            },
            "required": ["group", "action"],
            "additionalProperties": False,
        },
        "derivation": {
            "type": "object",
            "properties": {"values": {"type": "array", "items": _int_vector}},
            "required": ["values"],
            "additionalProperties": False,
        },
        "submodule": {
            "type": "object",
            "properties": {"generators": {"type": "array", "items": _int_vector}},
            "required": ["generators"],
            "additionalProperties": False,
        },
        "ideal": {
            "type": "object",
            "properties": {
                "ring": {"enum": ["Zp", "Q"]},
                "p": {"type": "integer", "minimum": 2},
                "generators": {"type": "array", "items": _ring_element},
                "element": _int_vector,
            },
            "required": ["ring", "generators"],
            "additionalProperties": False,
        },
        "number_field": {
            "type": "object",
            "properties": {
                "mu": {"type": "array", "items": _rational, "minItems": 2},
                "images": {"type": "array", "items": {"type": "array", "items": _rational}},
                "kernel": {"type": "array", "items": _ring_element},
                "assert_irreducible": {"type": "boolean"},
            },
            "required": ["mu"],
            "additionalProperties": False,
        },
        "seed": {"type": "integer"},
        "caps": {
            "type": "object",
            "properties": {"elements": {"type": "integer", "minimum": 1}},
            "additionalProperties": False,
        },
    },
    "required": ["schema_version", "acting_group"],
    "additionalProperties": False,
}


class InstanceError(ValueError):
    """Base class for instance problems; ``path`` is a JSON path like ``$.module.action[0]``."""

    kind = "instance"

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


class InstanceParseError(InstanceError):
    kind = "parse"


class InstanceSchemaError(InstanceError):
    kind = "schema"


class InvariantViolation(InstanceError):
    kind = "invariant"

    def __init__(self, message: str, path: str, report: ValidationReport | None = None):
        super().__init__(message, path)
        self.report = report


def _json_path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


@dataclass
class Instance:
    raw: dict
    acting: FgAbelianGroup
    module: ZAModule | None = None
    derivation: Derivation | None = None
    submodule_generators: list | None = None
    ideal: dict | None = None
    psi: AlgebraMapPsi | None = None
    field_: NumberField | None = None
    seed: int | None = None
    caps: dict = field(default_factory=dict)

    @property
    def action(self) -> AffineAction:
        if self.module is None:
            raise InstanceError("instance has no module", "$.module")
        d = self.derivation if self.derivation is not None else Derivation.zero(self.module)
        return AffineAction(self.module, d)

    def group_ring_element(self, pairs) -> GroupRingElement:
        R = _ideal_ring(self.ideal) if self.ideal else CoefficientRing.rationals()
        return GroupRing(self.acting, R).from_json([(e, Fraction(c)) for e, c in pairs])


def _ideal_ring(ideal: dict) -> CoefficientRing:
    if ideal["ring"] == "Zp":
        return CoefficientRing.mod(int(ideal["p"]))
    return CoefficientRing.rationals()


def _check_lengths(data: dict, acting: FgAbelianGroup):
    k = acting.ngens
    if "module" in data:
        n = FgAbelianGroup.from_descriptor(data["module"]["group"]).ngens
        action = data["module"]["action"]
        if len(action) != k:
            raise InstanceSchemaError(f"expected {k} action matrices, got {len(action)}", "$.module.action")
        for i, m in enumerate(action):
            if len(m) != n or any(len(row) != n for row in m):
                raise InstanceSchemaError(f"action matrix must be {n}x{n}", f"$.module.action[{i}]")
    if "derivation" in data:
        if "module" not in data:
            raise InstanceSchemaError("a derivation needs a module", "$.derivation")
        vals = data["derivation"]["values"]
        if len(vals) != k:
            raise InstanceSchemaError(f"expected {k} derivation values, got {len(vals)}", "$.derivation.values")
        for i, v in enumerate(vals):
            if len(v) != n:
                raise InstanceSchemaError(f"expected a vector of length {n}", f"$.derivation.values[{i}]")
    if "submodule" in data:
        if "module" not in data:
            raise InstanceSchemaError("a submodule needs a module", "$.submodule")
        for i, v in enumerate(data["submodule"]["generators"]):
            if len(v) != n:
                raise InstanceSchemaError(f"expected a vector of length {n}", f"$.submodule.generators[{i}]")
    for key in ("ideal", "number_field"):
        gens = data.get(key, {}).get("generators" if key == "ideal" else "kernel", [])
        for i, z in enumerate(gens):
            for j, (e, _) in enumerate(z):
                if len(e) != k:
                    raise InstanceSchemaError(
                        f"exponent vector must have length {k}",
                        f"$.{key}.{'generators' if key == 'ideal' else 'kernel'}[{i}][{j}][0]",
                    )
    if "ideal" in data:
        if data["ideal"]["ring"] == "Zp" and "p" not in data["ideal"]:
            raise InstanceSchemaError("ring Zp needs p", "$.ideal")
        if "element" in data["ideal"] and len(data["ideal"]["element"]) != k:
            raise InstanceSchemaError(f"element must have length {k}", "$.ideal.element")
    nf = data.get("number_field")
    if nf and "images" in nf and len(nf["images"]) != k:
        raise InstanceSchemaError(f"expected {k} images", "$.number_field.images")


def parse_instance(data: Any) -> Instance:
    """Validate a decoded JSON document and build the instance objects."""
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        e = errors[0]
        raise InstanceSchemaError(e.message, _json_path(e.absolute_path))
    try:
        acting = FgAbelianGroup.from_descriptor(data["acting_group"])
    except ValueError as exc:
        raise InstanceSchemaError(str(exc), "$.acting_group") from exc
    _check_lengths(data, acting)
    inst = Instance(raw=data, acting=acting, seed=data.get("seed"), caps=dict(data.get("caps", {})))
    if "module" in data:
        try:
            inst.module = ZAModule.from_descriptor(acting, data["module"])
        except ValueError as exc:
            raise InstanceSchemaError(str(exc), "$.module.group") from exc
        rep = inst.module.validate()
        if not rep.ok:
            raise InvariantViolation(f"module invariant {rep.invariant!r} fails: {rep.message}", "$.module.action", rep)
    if "derivation" in data:
        inst.derivation = Derivation(inst.module, data["derivation"]["values"])
        rep = inst.derivation.validate()
        if not rep.ok:
            raise InvariantViolation(
                f"derivation invariant {rep.invariant!r} fails: {rep.message}", "$.derivation.values", rep
            )
    if "submodule" in data:
        inst.submodule_generators = [tuple(v) for v in data["submodule"]["generators"]]
    if "ideal" in data:
        inst.ideal = dict(data["ideal"])
    if "number_field" in data:
        nf = data["number_field"]
        try:
            inst.field_ = NumberField([Fraction(c) for c in nf["mu"]], nf.get("assert_irreducible", False))
        except ValueError as exc:
            raise InvariantViolation(str(exc), "$.number_field.mu") from exc
        if "images" in nf:
            images = [[Fraction(c) for c in x] for x in nf["images"]]
            kernel = [[(tuple(e), Fraction(c)) for e, c in z] for z in nf.get("kernel", [])]
            try:
                inst.psi = AlgebraMapPsi(inst.field_, acting, images, kernel)
            except ValueError as exc:
                raise InvariantViolation(str(exc), "$.number_field.images") from exc
    return inst


def loads_instance(text: str) -> Instance:
    if not text.strip():
        raise InstanceParseError("empty document")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceParseError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return parse_instance(data)


def load_instance(path: str | Path) -> Instance:
    return loads_instance(Path(path).read_text())


def instance_document(
    module: ZAModule,
    derivation: Derivation | None = None,
    submodule: list | None = None,
    seed: int | None = None,
) -> dict:
    """The JSON document for an in-memory instance (inverse of :func:`parse_instance`)."""
    doc: dict = {
        "schema_version": SCHEMA_VERSION,
        "acting_group": module.acting.descriptor(),
        "module": module.descriptor(),
    }
    if derivation is not None:
        doc["derivation"] = derivation.descriptor()
    if submodule is not None:
        doc["submodule"] = {"generators": [list(v) for v in submodule]}
    if seed is not None:
        doc["seed"] = seed
    return doc
