"""Rubrics: target parameters with tolerances, loaded from JSON and scored against a ParameterSet."""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Mapping

from .extract import EXTRACTORS, ParameterSet, _jsonable

BUILTIN_RUBRICS = ("prompt1", "prompt2", "prompt3")
CATEGORIES = ("SystemDefinition", "Thermodynamics", "Dynamics", "Execution")


class SchemaError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class Verdict(str, enum.Enum):
    PASS = "Pass"
    FAIL = "Fail"
    NOT_FOUND = "NotFound"


@dataclass(frozen=True)
class Tolerance:
    kind: str  # "rel" or "abs"
    value: float

    def band(self, expected: float) -> float:
        return self.value * abs(expected) if self.kind == "rel" else self.value

    def to_dict(self) -> dict:
        return {"kind": self.kind, "value": self.value}


@dataclass(frozen=True)
class Interval:
    min: float
    max: float


@dataclass(frozen=True)
class AnyOf:
    words: tuple[str, ...]


# an expected value is a number, Interval, word, AnyOf, or a tuple of those
Expected = Any


@dataclass(frozen=True)
class Criterion:
    id: str
    category: str
    extractor: str
    expected: Expected
    tolerance: Tolerance | None = None
    units: str = ""
    description: str = ""

    def to_dict(self) -> dict:
        d: dict[str, Any] = {
            "id": self.id,
            "category": self.category,
            "extractor": self.extractor,
            "expected": _expected_to_json(self.expected),
        }
        if self.tolerance:
            d["tolerance"] = self.tolerance.to_dict()
        if self.units:
            d["units"] = self.units
        if self.description:
            d["description"] = self.description
        return d


@dataclass(frozen=True)
class Rubric:
    id: str
    criteria: tuple[Criterion, ...] = ()
    description: str = ""
    metadata: Mapping[str, Any] = field(default_factory=dict)

    def without_extractors(self, extractors: Iterable[str]) -> "Rubric":
        drop = set(extractors)
        kept = tuple(c for c in self.criteria if c.extractor not in drop)
        return Rubric(self.id, kept, self.description, self.metadata)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "description": self.description,
            "metadata": dict(self.metadata),
            "criteria": [c.to_dict() for c in self.criteria],
        }


def _expected_to_json(e: Expected) -> Any:
    if isinstance(e, Interval):
        return {"min": e.min, "max": e.max}
    if isinstance(e, AnyOf):
        return {"any_of": list(e.words)}
    if isinstance(e, tuple):
        return [_expected_to_json(x) for x in e]
    return e


def _is_number(x: Any) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _parse_expected(raw: Any, path: str, allow_tuple: bool = True) -> tuple[Expected, bool]:
    """Returns (expected, needs_tolerance)."""
    if _is_number(raw):
        if not math.isfinite(raw):
            raise SchemaError(path, "expected number must be finite")
        return float(raw), True
    if isinstance(raw, str):
        if not raw:
            raise SchemaError(path, "expected word is empty")
        return raw, False
    if isinstance(raw, dict):
        if set(raw) == {"min", "max"}:
            lo, hi = raw["min"], raw["max"]
            if not (_is_number(lo) and _is_number(hi)) or lo > hi:
                raise SchemaError(path, "interval needs numeric min <= max")
            return Interval(float(lo), float(hi)), False
        if set(raw) == {"any_of"}:
            words = raw["any_of"]
            if not isinstance(words, list) or not words or not all(isinstance(w, str) and w for w in words):
                raise SchemaError(f"{path}.any_of", "needs a non-empty list of words")
            return AnyOf(tuple(words)), False
        raise SchemaError(path, "object must be {min, max} or {any_of}")
    if isinstance(raw, list) and allow_tuple:
        if not raw:
            raise SchemaError(path, "expected tuple is empty")
        items, needs = [], False
        for i, x in enumerate(raw):
            item, n = _parse_expected(x, f"{path}[{i}]", allow_tuple=False)
            items.append(item)
            needs = needs or n
        return tuple(items), needs
    raise SchemaError(path, f"unsupported expected value {raw!r}")


def _parse_tolerance(raw: Any, path: str) -> Tolerance:
    if not isinstance(raw, dict) or set(raw) - {"kind", "value"} or "kind" not in raw or "value" not in raw:
        raise SchemaError(path, "tolerance must be {kind, value}")
    if raw["kind"] not in ("rel", "abs"):
        raise SchemaError(f"{path}.kind", "must be 'rel' or 'abs'")
    value = raw["value"]
    if not _is_number(value) or value < 0 or not math.isfinite(value):
        raise SchemaError(f"{path}.value", "must be a finite non-negative number")
    return Tolerance(raw["kind"], float(value))


_CRITERION_KEYS = {"id", "category", "extractor", "expected", "tolerance", "units", "description"}


def load_rubric(doc: Mapping[str, Any] | str) -> Rubric:
    """Validate a rubric document (mapping or JSON text)."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise SchemaError("$", f"not valid JSON: {exc}") from None
    if not isinstance(doc, Mapping):
        raise SchemaError("$", "rubric must be an object")
    if not isinstance(doc.get("id"), str) or not doc["id"]:
        raise SchemaError("id", "missing or empty")
    raw_criteria = doc.get("criteria")
    if not isinstance(raw_criteria, list):
        raise SchemaError("criteria", "must be a list")
    criteria = []
    seen = set()
    for i, c in enumerate(raw_criteria):
        path = f"criteria[{i}]"
        if not isinstance(c, Mapping):
            raise SchemaError(path, "must be an object")
        unknown = set(c) - _CRITERION_KEYS
        if unknown:
            raise SchemaError(f"{path}.{sorted(unknown)[0]}", "unknown field")
        for key in ("id", "category", "extractor"):
            if not isinstance(c.get(key), str) or not c[key]:
                raise SchemaError(f"{path}.{key}", "missing or empty")
        if c["id"] in seen:
            raise SchemaError(f"{path}.id", f"duplicate criterion id {c['id']!r}")
        seen.add(c["id"])
        if c["category"] not in CATEGORIES:
            raise SchemaError(f"{path}.category", f"must be one of {', '.join(CATEGORIES)}")
        if c["extractor"] not in EXTRACTORS:
            raise SchemaError(f"{path}.extractor", f"unknown extractor {c['extractor']!r}")
        if "expected" not in c:
            raise SchemaError(f"{path}.expected", "missing")
        expected, needs_tol = _parse_expected(c["expected"], f"{path}.expected")
        tolerance = None
        if "tolerance" in c:
            tolerance = _parse_tolerance(c["tolerance"], f"{path}.tolerance")
        elif needs_tol:
            raise SchemaError(f"{path}.tolerance", "numeric criterion needs a tolerance")
        criteria.append(
            Criterion(
                c["id"], c["category"], c["extractor"], expected, tolerance,
                str(c.get("units", "")), str(c.get("description", "")),
            )
        )
    return Rubric(doc["id"], tuple(criteria), str(doc.get("description", "")), dict(doc.get("metadata", {})))


def builtin_rubric(name: str) -> Rubric:
    if name not in BUILTIN_RUBRICS:
        raise KeyError(f"no built-in rubric {name!r}; choose from {', '.join(BUILTIN_RUBRICS)}")
    text = resources.files("lammps_lint").joinpath("data").joinpath("rubrics").joinpath(f"{name}.rubric.json")
    return load_rubric(text.read_text("utf-8"))


def load_rubric_file(path: str | Path) -> Rubric:
    return load_rubric(Path(path).read_text(encoding="utf-8"))


# -- scoring ---------------------------------------------------------------------


def _match(value: Any, expected: Expected, tol: Tolerance | None) -> bool:
    if isinstance(expected, tuple):
        if not isinstance(value, (tuple, list)) or len(value) != len(expected):
            return False
        return all(_match(v, e, tol) for v, e in zip(value, expected))
    if isinstance(expected, Interval):
        return _is_number(value) and expected.min <= value <= expected.max
    if isinstance(expected, AnyOf):
        return isinstance(value, str) and value in expected.words
    if isinstance(expected, str):
        return value == expected
    if not _is_number(value):
        return False
    band = tol.band(expected) if tol else 0.0
    return expected - band <= value <= expected + band


@dataclass(frozen=True)
class CriterionResult:
    criterion: Criterion
    verdict: Verdict
    extracted: Any = None
    detail: str = ""

    def to_dict(self) -> dict:
        d = {
            "id": self.criterion.id,
            "category": self.criterion.category,
            "extractor": self.criterion.extractor,
            "verdict": self.verdict.value,
            "extracted": _jsonable(self.extracted),
            "expected": _expected_to_json(self.criterion.expected),
        }
        if self.criterion.tolerance:
            d["tolerance"] = self.criterion.tolerance.to_dict()
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass(frozen=True)
class RubricResult:
    rubric_id: str
    results: tuple[CriterionResult, ...] = ()

    @property
    def overall(self) -> Verdict:
        return Verdict.PASS if all(r.verdict is Verdict.PASS for r in self.results) else Verdict.FAIL

    @property
    def passed(self) -> bool:
        return self.overall is Verdict.PASS

    def failing(self) -> list[str]:
        return [r.criterion.id for r in self.results if r.verdict is not Verdict.PASS]

    def verdicts(self) -> dict[str, Verdict]:
        return {r.criterion.id: r.verdict for r in self.results}

    def to_dict(self) -> dict:
        return {
            "rubric": self.rubric_id,
            "overall": self.overall.value,
            "criteria": [r.to_dict() for r in self.results],
        }

    def table(self) -> str:
        rows = [("criterion", "verdict", "extracted", "expected")]
        for r in self.results:
            exp = json.dumps(_expected_to_json(r.criterion.expected))
            if r.criterion.tolerance:
                t = r.criterion.tolerance
                exp += f" ±{t.value * 100:g}%" if t.kind == "rel" else f" ±{t.value:g}"
            if r.criterion.units:
                exp += f" {r.criterion.units}"
            rows.append((r.criterion.id, r.verdict.value, json.dumps(_jsonable(r.extracted)), exp))
        widths = [max(len(row[i]) for row in rows) for i in range(3)]
        lines = ["  ".join(row[i].ljust(widths[i]) for i in range(3)) + "  " + row[3] for row in rows]
        lines.append(f"overall: {self.overall.value}")
        return "\n".join(lines)


def evaluate_rubric(params: ParameterSet, rubric: Rubric) -> RubricResult:
    out = []
    for c in rubric.criteria:
        p = params[c.extractor]
        if not p.found:
            out.append(CriterionResult(c, Verdict.NOT_FOUND, None, p.detail))
            continue
        verdict = Verdict.PASS if _match(p.value, c.expected, c.tolerance) else Verdict.FAIL
        out.append(CriterionResult(c, verdict, p.value, p.detail))
    return RubricResult(rubric.id, tuple(out))
