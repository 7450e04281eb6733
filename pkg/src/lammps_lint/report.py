"""Aggregate stage records into per-slice class counts and funnel metrics."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Mapping

from .pipeline import TABLE_CLASSES, FinalClass, StageRecord, natural_key

CLASS_NAMES = tuple(c.value for c in FinalClass)
PARSER_PASS_DEFINITION = (
    "normalize ok and parse ok, where parse ok means no parser errors and no "
    "UndefinedReference (S001) or DanglingUnfix (S003) findings"
)


@dataclass(frozen=True)
class Counts:
    by_class: Mapping[str, int] = field(default_factory=dict)

    @classmethod
    def of(cls, classes: Iterable[str]) -> "Counts":
        return cls(dict(Counter(classes)))

    def __getitem__(self, name: str) -> int:
        return self.by_class.get(name, 0)

    def __add__(self, other: "Counts") -> "Counts":
        return Counts(dict(Counter(self.by_class) + Counter(other.by_class)))

    @property
    def n(self) -> int:
        return sum(self.by_class.values())

    @property
    def parser_pass(self) -> int:
        return self.n - self["Parser_F"] - self["Sanitizer_F"]

    @property
    def exec_success(self) -> int:
        return self["Acc_C"] + self["Acc_F"] + self["PSZ_Acc_C"] + self["PSZ_Acc_F"]

    @property
    def one_shot(self) -> int:
        return self["Acc_C"]

    def metrics(self) -> dict:
        return {
            "parser_pass": self.parser_pass,
            "execution_success": self.exec_success,
            "one_shot_accuracy": self.one_shot,
            "n": self.n,
        }

    def to_dict(self) -> dict:
        return {
            "counts": {name: self[name] for name in CLASS_NAMES},
            "n": self.n,
            "metrics": self.metrics(),
        }


def _percent(k: int, n: int) -> str:
    if n == 0:
        return "-"
    pct = (Decimal(100 * k) / Decimal(n)).quantize(Decimal(1), rounding=ROUND_HALF_UP)
    return f"{pct}%"


def fraction(k: int, n: int) -> str:
    return f"{k}/{n} ({_percent(k, n)})"


@dataclass(frozen=True)
class Report:
    slices: Mapping[tuple[str, str], Counts] = field(default_factory=dict)

    def merge(self, other: "Report") -> "Report":
        keys = set(self.slices) | set(other.slices)
        empty = Counts()
        return Report({k: self.slices.get(k, empty) + other.slices.get(k, empty) for k in keys})

    def _group(self, pos: int) -> dict[str, Counts]:
        out: dict[str, Counts] = {}
        for key, counts in self.slices.items():
            out[key[pos]] = out.get(key[pos], Counts()) + counts
        return dict(sorted(out.items()))

    def by_model(self) -> dict[str, Counts]:
        return self._group(0)

    def by_prompt(self) -> dict[str, Counts]:
        return self._group(1)

    def totals(self) -> Counts:
        total = Counts()
        for counts in self.slices.values():
            total = total + counts
        return total

    def __eq__(self, other) -> bool:
        return isinstance(other, Report) and self.to_dict() == other.to_dict()

    def to_dict(self) -> dict:
        return {
            "metadata": {
                "classes": list(CLASS_NAMES),
                "parser_pass_definition": PARSER_PASS_DEFINITION,
                "execution_success_definition": "Acc_C + Acc_F + PSZ_Acc_C + PSZ_Acc_F",
                "one_shot_accuracy_definition": "Acc_C",
                "reference_before_definition": "S004 is a warning and does not fail the parse stage",
            },
            "slices": [
                {"model": m, "prompt": p, **c.to_dict()}
                for (m, p), c in sorted(self.slices.items())
                if c.n
            ],
            "by_model": {k: v.to_dict() for k, v in self.by_model().items()},
            "by_prompt": {k: v.to_dict() for k, v in self.by_prompt().items()},
            "totals": self.totals().to_dict(),
        }

    def metrics_table(self, by: str = "model") -> str:
        groups = self.by_model() if by == "model" else self.by_prompt()
        header = ("Model" if by == "model" else "Prompt", "Parser pass", "Execution success", "One-shot accuracy")
        rows = [header] + [
            (name, fraction(c.parser_pass, c.n), fraction(c.exec_success, c.n), fraction(c.one_shot, c.n))
            for name, c in groups.items()
        ]
        return _render(rows)

    def class_table(self) -> str:
        shown = list(TABLE_CLASSES)
        if self.totals()["StaticPass"]:
            shown.append(FinalClass.STATIC_PASS)
        rows = [("Prompt", "Model", *(c.value for c in shown))]
        for (m, p), c in sorted(self.slices.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            rows.append((p, m, *(str(c[x.value]) for x in shown)))
        t = self.totals()
        rows.append(("all", f"{t.n} scripts", *(str(t[x.value]) for x in shown)))
        return _render(rows)

    def text(self) -> str:
        return "\n\n".join([self.class_table(), self.metrics_table("model"), self.metrics_table("prompt")])


def _render(rows: list[tuple[str, ...]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def aggregate(records: Iterable[StageRecord]) -> Report:
    grouped: dict[tuple[str, str], Counter] = {}
    for r in records:
        grouped.setdefault((r.model, r.prompt), Counter())[r.final_class.value] += 1
    return Report({k: Counts(dict(v)) for k, v in grouped.items()})


def report_json(records: list[StageRecord], report: Report | None = None) -> str:
    """Deterministic JSON: sorted keys, records in (model, prompt, sample) order, no timestamps."""
    report = report or aggregate(records)
    ordered = sorted(records, key=lambda r: (r.model, r.prompt, natural_key(r.sample), r.origin))
    doc = {"report": report.to_dict(), "records": [r.to_dict() for r in ordered]}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def report_from_json(text: str) -> tuple[Report, list[StageRecord]]:
    doc = json.loads(text)
    records = [StageRecord.from_dict(d) for d in doc.get("records", [])]
    return aggregate(records), records
