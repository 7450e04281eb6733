import itertools
import json

import pytest

from lammps_lint.normalizer import RawScript
from lammps_lint.pipeline import (
    FAIL,
    NOT_NEEDED,
    OK,
    PASS,
    SKIPPED,
    ConfigError,
    FinalClass,
    PipelineConfig,
    StageRecord,
    classify,
    discover_corpus,
    evaluate_corpus,
    evaluate_script,
)
from lammps_lint.report import aggregate, report_json
from lammps_lint.rubric import builtin_rubric
from lammps_lint.runner import RunnerConfig, RunnerUnavailable
from rubric_mutations import exemplar

STATUSES = (OK, FAIL, SKIPPED, NOT_NEEDED, PASS)
BROKEN_ORDER = "units metal\nregion b block 0 1 0 1 0 1\ncreate_atoms 1 box\ncreate_box 1 b\nrun 100\n"


# -- classification ---------------------------------------------------------------


@pytest.mark.parametrize(
    "stages, expected",
    [
        ((FAIL, SKIPPED, SKIPPED, SKIPPED, SKIPPED), FinalClass.SANITIZER_F),
        ((OK, FAIL, SKIPPED, SKIPPED, SKIPPED), FinalClass.PARSER_F),
        ((OK, OK, SKIPPED, SKIPPED, PASS), FinalClass.STATIC_PASS),
        ((OK, OK, OK, NOT_NEEDED, PASS), FinalClass.ACC_C),
        ((OK, OK, OK, NOT_NEEDED, FAIL), FinalClass.ACC_F),
        ((OK, OK, FAIL, OK, PASS), FinalClass.PSZ_ACC_C),
        ((OK, OK, FAIL, OK, FAIL), FinalClass.PSZ_ACC_F),
        ((OK, OK, FAIL, FAIL, SKIPPED), FinalClass.PSZ_EXEC_F),
        ((OK, OK, FAIL, SKIPPED, SKIPPED), FinalClass.PSZ_EXEC_F),
    ],
)
def test_classify_table(stages, expected):
    assert classify(*stages) is expected


def test_classify_is_total_and_ordered():
    for combo in itertools.product(STATUSES, repeat=5):
        cls = classify(*combo)
        assert isinstance(cls, FinalClass)
        norm, parse, exec_, psz, rubric = combo
        # an earlier failure always wins over anything later
        if norm != OK:
            assert cls is FinalClass.SANITIZER_F
        elif parse != OK:
            assert cls is FinalClass.PARSER_F
        elif exec_ == OK:
            assert cls in (FinalClass.ACC_C, FinalClass.ACC_F)


# -- static mode ----------------------------------------------------------------------

STATIC = PipelineConfig(rubric=builtin_rubric("prompt1"))


def test_static_pass_records_rubric():
    rec = evaluate_script(exemplar("prompt1"), STATIC)
    assert rec.final_class is FinalClass.STATIC_PASS
    assert rec.exec.status == SKIPPED
    assert rec.rubric.status == PASS


def test_static_sanitizer_and_parser_failures():
    rec = evaluate_script("run ${nope}\n", STATIC)
    assert rec.final_class is FinalClass.SANITIZER_F
    assert rec.normalize.detail["kind"] == "UnresolvableVariable"
    rec = evaluate_script("run ten\n", STATIC)
    assert rec.final_class is FinalClass.PARSER_F
    assert rec.parse.detail[0]["code"] == "P003"
    rec = evaluate_script("fix 1 ghost nve\n", STATIC)
    assert rec.final_class is FinalClass.PARSER_F


def test_record_round_trip():
    rec = evaluate_script(RawScript(exemplar("prompt1"), "x.in"), STATIC, "m", "prompt1", "1")
    again = StageRecord.from_dict(json.loads(json.dumps(rec.to_dict())))
    assert again == rec


def test_config_errors():
    with pytest.raises(ConfigError):
        PipelineConfig(psz_trigger="sometimes")
    with pytest.raises(ConfigError):
        PipelineConfig().rubric_for("prompt1")
    cfg = PipelineConfig(rubrics={"prompt2": builtin_rubric("prompt2")})
    assert cfg.rubric_for("prompt2").id == "prompt2"


# -- with an engine -----------------------------------------------------------------------


def engine(exe, potentials=None, **kw):
    return PipelineConfig(rubric=builtin_rubric("prompt1"), runner=RunnerConfig(exe, 30, potentials), **kw)


def test_acc_c_when_the_potential_is_available(stub_lammps, potentials):
    rec = evaluate_script(exemplar("prompt1"), engine(stub_lammps, potentials))
    assert rec.final_class is FinalClass.ACC_C
    assert rec.exec.detail["exit_status"] == 0
    assert rec.psz_exec.status == NOT_NEEDED


def test_acc_f(stub_lammps, potentials):
    text = exemplar("prompt1").replace("fcc 4.05", "fcc 1.0")
    rec = evaluate_script(text, engine(stub_lammps, potentials))
    assert rec.final_class is FinalClass.ACC_F
    assert [c["id"] for c in rec.rubric.detail["criteria"] if c["verdict"] != "Pass"] == ["lattice_constant"]


def test_psz_acc_c_when_the_potential_is_missing(stub_lammps):
    rec = evaluate_script(exemplar("prompt1"), engine(stub_lammps))
    assert rec.final_class is FinalClass.PSZ_ACC_C
    assert "potential" in rec.exec.detail["error_line"]
    assert rec.psz_exec.status == OK
    # the pair style criterion is not scored after the swap
    assert "pair_style" not in {c["id"] for c in rec.rubric.detail["criteria"]}


def test_psz_acc_f(stub_lammps):
    text = exemplar("prompt1").replace("fcc 4.05", "fcc 1.0")
    assert evaluate_script(text, engine(stub_lammps)).final_class is FinalClass.PSZ_ACC_F


def test_psz_exec_f(stub_lammps):
    rec = evaluate_script(BROKEN_ORDER, engine(stub_lammps))
    assert rec.final_class is FinalClass.PSZ_EXEC_F
    assert rec.psz_exec.status == FAIL
    assert rec.rubric.status == SKIPPED


def test_pair_trigger_skips_unrelated_failures(stub_lammps):
    rec = evaluate_script(BROKEN_ORDER, engine(stub_lammps, psz_trigger="pair"))
    assert rec.final_class is FinalClass.PSZ_EXEC_F
    assert rec.psz_exec.status == SKIPPED
    rec = evaluate_script(exemplar("prompt1"), engine(stub_lammps, psz_trigger="pair"))
    assert rec.final_class is FinalClass.PSZ_ACC_C


def test_engine_sees_the_truncated_script(stub_lammps, potentials, tmp_path):
    keep = tmp_path / "runs"
    cfg = PipelineConfig(rubric=builtin_rubric("prompt1"), runner=RunnerConfig(stub_lammps, 30, potentials, str(keep)))
    evaluate_script(exemplar("prompt1"), cfg)
    (script,) = keep.glob("*/case/model/sample/in.lammps")
    runs = [line for line in script.read_text().splitlines() if line.startswith("run")]
    assert runs == ["run 10"]


def test_missing_executable_is_a_config_problem(tmp_path):
    with pytest.raises(RunnerUnavailable):
        evaluate_script(exemplar("prompt1"), engine(str(tmp_path / "no-such-lmp")))


# -- corpus ---------------------------------------------------------------------------------


def _corpus(root):
    for model in ("m1", "m2"):
        for prompt in ("prompt1", "prompt3"):
            d = root / model / prompt
            d.mkdir(parents=True)
            (d / "1.in").write_text(exemplar(prompt))
            (d / "2.in").write_text("run ten\n")
            (d / "10.in").write_text(BROKEN_ORDER)
    return root


def test_discovery_is_sorted_naturally(tmp_path):
    entries = discover_corpus(_corpus(tmp_path / "c"))
    assert [e.sample for e in entries[:3]] == ["1", "2", "10"]
    assert {(e.model, e.prompt) for e in entries} == {("m1", "prompt1"), ("m1", "prompt3"), ("m2", "prompt1"), ("m2", "prompt3")}
    with pytest.raises(ConfigError):
        discover_corpus(tmp_path / "missing")


def test_batch_is_reproducible_across_job_counts(tmp_path, stub_lammps):
    entries = discover_corpus(_corpus(tmp_path / "c"))
    cfg = PipelineConfig(
        rubrics={p: builtin_rubric(p) for p in ("prompt1", "prompt3")},
        runner=RunnerConfig(stub_lammps, 30),
    )
    first = evaluate_corpus(entries, cfg, jobs=1)
    second = evaluate_corpus(entries, cfg, jobs=4)
    assert report_json(first, aggregate(first)) == report_json(second, aggregate(second))
    classes = {r.final_class for r in first}
    assert classes == {FinalClass.PSZ_ACC_C, FinalClass.PARSER_F, FinalClass.PSZ_EXEC_F}


def test_batch_fails_fast_on_a_missing_rubric(tmp_path):
    entries = discover_corpus(_corpus(tmp_path / "c"))
    with pytest.raises(ConfigError):
        evaluate_corpus(entries, PipelineConfig(rubrics={"prompt1": builtin_rubric("prompt1")}))
