"""Schema-validated loading of pipeline inputs and bundled fixtures."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema
from referencing import Registry, Resource

from .idealkit import XPolynomial
from .tgeom import Line, PolyhedralDivisor, line_from_divisor
from .valkit import HomogeneousValuation

SCHEMA_NAMES = ("divisor", "input", "valuation")


class InputError(ValueError):
    def __init__(self, message: str, pointer: str = ""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer or "/"


def _schema(name: str) -> dict:
    return json.loads(resources.files("semicanonical").joinpath(f"schemas/{name}.schema.json").read_text())


def _registry() -> Registry:
    res = [(s["$id"], Resource.from_contents(s)) for s in map(_schema, SCHEMA_NAMES)]
    return Registry().with_resources(res)


def validate(data: Any, name: str = "input") -> None:
    schema = _schema(name)
    v = jsonschema.Draft202012Validator(schema, registry=_registry())
    errors = sorted(v.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        pointer = "/" + "/".join(str(p) for p in err.absolute_path)
        raise InputError(err.message, pointer)


@dataclass(frozen=True)
class Problem:
    name: str
    divisor: PolyhedralDivisor
    line: Line
    grading: tuple[int, ...] | None = None
    valuation: HomogeneousValuation | None = None
    degrees: tuple[tuple[int, ...], ...] | None = None
    generators: tuple[XPolynomial, ...] | None = None

    @property
    def hand_supplied(self) -> bool:
        return self.degrees is not None


def parse_divisor(data: dict) -> PolyhedralDivisor:
    validate(data, "divisor")
    try:
        return PolyhedralDivisor.from_json(data)
    except ValueError as exc:
        raise InputError(str(exc), "/") from exc


def load_problem(source: str | Path | dict) -> Problem:
    if isinstance(source, dict):
        data = source
    else:
        try:
            data = json.loads(Path(source).read_text())
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from exc
    if isinstance(data, dict) and "rank_N" in data:
        data = {"divisor": data}
    validate(data, "input")
    try:
        d = PolyhedralDivisor.from_json(data["divisor"])
    except ValueError as exc:
        raise InputError(str(exc), "/divisor") from exc
    try:
        line = Line.from_json(data["line"]) if "line" in data else line_from_divisor(d)
    except ValueError as exc:
        raise InputError(str(exc), "/line") from exc
    if line.m != d.m:
        raise InputError("line and divisor have different numbers of points", "/line")
    grading = tuple(data["grading"]) if "grading" in data else None
    if grading is not None and len(grading) != d.lattice_rank:
        raise InputError("grading length differs from rank_N", "/grading")
    val = None
    if "valuation" in data:
        try:
            val = HomogeneousValuation.from_json(data["valuation"])
        except ValueError as exc:
            raise InputError(str(exc), "/valuation") from exc
        if any(len(row) != d.lattice_rank for row in val.psi):
            raise InputError("psi columns differ from rank_N", "/valuation/psi")
    degrees = gens = None
    if "embedding" in data:
        emb = data["embedding"]
        degrees = tuple(tuple(c) for c in emb["degrees"])
        if any(len(c) != d.lattice_rank + d.m for c in degrees):
            raise InputError("degree length differs from rank_N + m", "/embedding/degrees")
        gens = tuple(XPolynomial.from_json(g, len(degrees)) for g in emb["generators"])
        for k, g in enumerate(gens):
            if any(len(a) != len(degrees) for a, _ in g.terms):
                raise InputError("exponent length differs from the number of variables", f"/embedding/generators/{k}")
    return Problem(data.get("name", ""), d, line, grading, val, degrees, gens)


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("semicanonical").joinpath(f"data/{name}.json")))


def load_fixture(name: str) -> Problem:
    return load_problem(fixture_path(name))
