"""Per-script evaluation funnel and its outcome classes.

normalize -> parse + analyze -> truncated run -> run with the zero pair
style -> rubric.  Each stage's outcome is recorded on a :class:`StageRecord`
and the final class is a pure function of those outcomes.
"""

from __future__ import annotations

import enum
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping

from .analyzer import analyze
from .extract import extract_parameters
from .normalizer import DEFAULT_LOOP_BUDGET, DEFAULT_NOISE_COMMANDS, NormalizeError, RawScript, normalize
from .parser import parse, serialize
from .registry import Registry, load_registry
from .rubric import Rubric, evaluate_rubric
from .runner import ExecOutcome, RunnerConfig, run_external
from .transforms import DEFAULT_MAX_STEPS, DEFAULT_ZERO_CUTOFF, apply_pair_style_zero, truncate_runs


class ConfigError(ValueError):
    pass


class FinalClass(str, enum.Enum):
    ACC_C = "Acc_C"
    ACC_F = "Acc_F"
    PSZ_ACC_C = "PSZ_Acc_C"
    PSZ_ACC_F = "PSZ_Acc_F"
    PSZ_EXEC_F = "PSZ_Exec_F"
    PARSER_F = "Parser_F"
    SANITIZER_F = "Sanitizer_F"
    STATIC_PASS = "StaticPass"


TABLE_CLASSES = tuple(c for c in FinalClass if c is not FinalClass.STATIC_PASS)

OK, FAIL, SKIPPED, NOT_NEEDED, PASS = "ok", "fail", "skipped", "not_needed", "pass"
PSZ_TRIGGERS = ("any", "pair")
PAIR_FAILURE_RE = re.compile(r"pair|potential|eam|kim|coeff|setfl|funcfl", re.IGNORECASE)
# the pair style criterion is ignored when judging a run that needed the zero pair style
PSZ_IGNORED_EXTRACTORS = ("pair_style_word",)


def classify(normalize: str, parse: str, exec_: str, psz_exec: str, rubric: str) -> FinalClass:
    """Map stage statuses to an outcome class; total over every status combination."""
    if normalize != OK:
        return FinalClass.SANITIZER_F
    if parse != OK:
        return FinalClass.PARSER_F
    if exec_ == SKIPPED:
        return FinalClass.STATIC_PASS
    if exec_ == OK:
        return FinalClass.ACC_C if rubric == PASS else FinalClass.ACC_F
    if psz_exec == OK:
        return FinalClass.PSZ_ACC_C if rubric == PASS else FinalClass.PSZ_ACC_F
    return FinalClass.PSZ_EXEC_F


@dataclass(frozen=True)
class Stage:
    status: str
    detail: Any = None

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"status": self.status}
        if self.detail is not None:
            d["detail"] = self.detail
        return d

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "Stage":
        return cls(d["status"], d.get("detail"))


_SKIP = Stage(SKIPPED)


@dataclass(frozen=True)
class StageRecord:
    origin: str
    model: str = ""
    prompt: str = ""
    sample: str = ""
    normalize: Stage = _SKIP
    parse: Stage = _SKIP
    exec: Stage = _SKIP
    psz_exec: Stage = _SKIP
    rubric: Stage = _SKIP
    final_class: FinalClass = FinalClass.SANITIZER_F

    def to_dict(self) -> dict:
        return {
            "origin": self.origin,
            "model": self.model,
            "prompt": self.prompt,
            "sample": self.sample,
            "stages": {
                "normalize": self.normalize.to_dict(),
                "parse": self.parse.to_dict(),
                "exec": self.exec.to_dict(),
                "psz_exec": self.psz_exec.to_dict(),
                "rubric": self.rubric.to_dict(),
            },
            "final_class": self.final_class.value,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "StageRecord":
        stages = d.get("stages", {})
        get = lambda k: Stage.from_dict(stages[k]) if k in stages else _SKIP  # noqa: E731
        return cls(
            origin=d.get("origin", ""),
            model=d.get("model", ""),
            prompt=d.get("prompt", ""),
            sample=str(d.get("sample", "")),
            normalize=get("normalize"),
            parse=get("parse"),
            exec=get("exec"),
            psz_exec=get("psz_exec"),
            rubric=get("rubric"),
            final_class=FinalClass(d["final_class"]),
        )


@dataclass(frozen=True)
class PipelineConfig:
    rubric: Rubric | None = None
    # per-prompt rubrics for batches; used when ``rubric`` is not set
    rubrics: Mapping[str, Rubric] = field(default_factory=dict)
    runner: RunnerConfig | None = None
    registry: Registry | None = None
    noise_commands: tuple[str, ...] = DEFAULT_NOISE_COMMANDS
    loop_budget: int = DEFAULT_LOOP_BUDGET
    max_steps: int = DEFAULT_MAX_STEPS
    psz_cutoff: float = DEFAULT_ZERO_CUTOFF
    psz_trigger: str = "any"

    def __post_init__(self):
        if self.psz_trigger not in PSZ_TRIGGERS:
            raise ConfigError(f"psz_trigger must be one of {PSZ_TRIGGERS}")

    def rubric_for(self, prompt: str) -> Rubric:
        if self.rubric is not None:
            return self.rubric
        if prompt in self.rubrics:
            return self.rubrics[prompt]
        raise ConfigError(f"no rubric configured for prompt {prompt!r}")


def _exec_stage(outcome: ExecOutcome) -> Stage:
    detail = {"exit_status": outcome.exit_status, "last_log_line": outcome.last_log_line}
    if outcome.error_line:
        detail["error_line"] = outcome.error_line
    if outcome.timed_out:
        detail["timed_out"] = True
    return Stage(OK if outcome.ok else FAIL, detail)


def _psz_wanted(outcome: ExecOutcome, trigger: str) -> bool:
    signal = outcome.error_line or outcome.last_log_line
    return trigger == "any" or bool(PAIR_FAILURE_RE.search(signal))


def evaluate_script(
    raw: RawScript | str,
    config: PipelineConfig,
    model: str = "",
    prompt: str = "",
    sample: str = "",
) -> StageRecord:
    if isinstance(raw, str):
        raw = RawScript(raw)
    rubric = config.rubric_for(prompt)
    registry = config.registry or load_registry()
    tags = dict(origin=raw.origin, model=model, prompt=prompt, sample=sample)

    try:
        canonical = normalize(raw, config.noise_commands, config.loop_budget)
    except NormalizeError as exc:
        stage = Stage(FAIL, exc.to_dict())
        return StageRecord(**tags, normalize=stage, final_class=FinalClass.SANITIZER_F)
    norm_stage = Stage(OK, {"lines": len(canonical)})

    lint = analyze(parse(canonical, registry))
    diags = [d.to_dict() for d in lint.diagnostics]
    if not lint.parser_pass:
        return StageRecord(
            **tags, normalize=norm_stage, parse=Stage(FAIL, diags), final_class=FinalClass.PARSER_F
        )
    parse_stage = Stage(OK, diags or None)
    ast = lint.parse.ast
    params = extract_parameters(ast)

    if config.runner is None:
        result = evaluate_rubric(params, rubric)
        rubric_stage = Stage(PASS if result.passed else FAIL, result.to_dict())
        return StageRecord(
            **tags, normalize=norm_stage, parse=parse_stage, rubric=rubric_stage,
            final_class=FinalClass.STATIC_PASS,
        )

    truncated, _ = truncate_runs(ast, config.max_steps, registry)
    first = run_external(serialize(truncated).text, config.runner)
    exec_stage = _exec_stage(first)
    psz_stage = Stage(NOT_NEEDED)
    scored = rubric
    if not first.ok:
        if _psz_wanted(first, config.psz_trigger):
            zeroed, _ = apply_pair_style_zero(truncated, config.psz_cutoff, registry)
            psz_stage = _exec_stage(run_external(serialize(zeroed).text, config.runner))
        else:
            psz_stage = Stage(SKIPPED, "exec failure not attributed to the pair style")
        scored = rubric.without_extractors(PSZ_IGNORED_EXTRACTORS)

    if first.ok or psz_stage.status == OK:
        result = evaluate_rubric(params, scored)
        rubric_stage = Stage(PASS if result.passed else FAIL, result.to_dict())
    else:
        rubric_stage = _SKIP
    final = classify(OK, OK, exec_stage.status, psz_stage.status, rubric_stage.status)
    return StageRecord(
        **tags, normalize=norm_stage, parse=parse_stage, exec=exec_stage,
        psz_exec=psz_stage, rubric=rubric_stage, final_class=final,
    )


@dataclass(frozen=True)
class CorpusEntry:
    path: Path
    model: str
    prompt: str
    sample: str


def discover_corpus(root: str | Path) -> list[CorpusEntry]:
    """Scripts laid out as ``<root>/<model>/<prompt>/<sample>.in``, sorted."""
    root = Path(root)
    if not root.is_dir():
        raise ConfigError(f"corpus directory {str(root)!r} does not exist")
    entries = [
        CorpusEntry(p, p.parent.parent.name, p.parent.name, p.stem)
        for p in root.glob("*/*/*.in")
        if p.is_file()
    ]
    return sorted(entries, key=lambda e: (e.model, e.prompt, natural_key(e.sample)))


def natural_key(s: str):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", s)]


def evaluate_corpus(entries: Iterable[CorpusEntry], config: PipelineConfig, jobs: int = 1) -> list[StageRecord]:
    entries = list(entries)
    for e in entries:
        config.rubric_for(e.prompt)  # fail fast before any work

    def one(e: CorpusEntry) -> StageRecord:
        text = e.path.read_text(encoding="utf-8")
        origin = f"{e.model}/{e.prompt}/{e.path.name}"
        return evaluate_script(RawScript(text, origin), config, e.model, e.prompt, e.sample)

    if jobs <= 1:
        return [one(e) for e in entries]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(one, entries))
