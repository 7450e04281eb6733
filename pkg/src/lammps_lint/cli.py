"""Command-line entry point: ``lammps-lint <subcommand>``.

Exit codes: 0 success, 1 the script or corpus has findings, 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analyzer import analyze
from .extract import extract_parameters
from .normalizer import NormalizeError, RawScript, normalize
from .parser import parse, serialize
from .pipeline import ConfigError, FinalClass, PSZ_TRIGGERS, PipelineConfig, discover_corpus, evaluate_corpus
from .registry import RegistryError, load_registry
from .report import Report, aggregate, report_from_json, report_json
from .rubric import BUILTIN_RUBRICS, Rubric, SchemaError, builtin_rubric, evaluate_rubric, load_rubric_file
from .runner import RunnerConfig, RunnerUnavailable, resolve_executable
from .transforms import DEFAULT_ZERO_CUTOFF, apply_pair_style_zero, truncate_runs

EXIT_OK, EXIT_FINDINGS, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read_script(path: str) -> RawScript:
    if path == "-":
        return RawScript(sys.stdin.read(), "<stdin>")
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such script: {path}")
    return RawScript(p.read_text(encoding="utf-8"), str(p))


def _registry(args):
    return load_registry(args.registry) if args.registry else load_registry()


def _normalized(args):
    return normalize(_read_script(args.script), tuple(args.noise), args.loop_budget)


def _single_rubric(spec: str) -> Rubric:
    if spec in BUILTIN_RUBRICS:
        return builtin_rubric(spec)
    p = Path(spec)
    if not p.is_file():
        raise UsageError(f"rubric {spec!r} is neither a file nor one of {', '.join(BUILTIN_RUBRICS)}")
    return load_rubric_file(p)


def _rubric_config(spec: str) -> dict:
    """``builtin``, a directory of ``<prompt>.rubric.json`` files, or a single rubric."""
    if spec == "builtin":
        return {"rubrics": {name: builtin_rubric(name) for name in BUILTIN_RUBRICS}}
    p = Path(spec)
    if p.is_dir():
        rubrics = {f.name[: -len(".rubric.json")]: load_rubric_file(f) for f in sorted(p.glob("*.rubric.json"))}
        if not rubrics:
            raise UsageError(f"no *.rubric.json files in {spec}")
        return {"rubrics": rubrics}
    return {"rubric": _single_rubric(spec)}


def cmd_normalize(args) -> int:
    sys.stdout.write(_normalized(args).text)
    return EXIT_OK


def cmd_parse(args) -> int:
    result = parse(_normalized(args), _registry(args))
    json.dump(result.ast.to_dict(), sys.stdout, indent=2)
    sys.stdout.write("\n")
    for d in result.diagnostics:
        print(d.format(), file=sys.stderr)
    return EXIT_OK if result.ok else EXIT_FINDINGS


def cmd_lint(args) -> int:
    try:
        canonical = _normalized(args)
    except NormalizeError as exc:
        if args.json:
            print(json.dumps({"normalize_error": exc.to_dict(), "diagnostics": [], "parser_pass": False}, indent=2))
        else:
            print(f"error {exc}")
        return EXIT_FINDINGS
    lint = analyze(parse(canonical, _registry(args)))
    if args.json:
        doc = {"diagnostics": [d.to_dict() for d in lint.diagnostics], "parser_pass": lint.parser_pass}
        print(json.dumps(doc, indent=2))
    else:
        for d in lint.diagnostics:
            print(d.format())
    return EXIT_OK if lint.parser_pass else EXIT_FINDINGS


def cmd_transform(args) -> int:
    registry = _registry(args)
    result = parse(_normalized(args), registry)
    if not result.ok:
        for d in result.errors:
            print(d.format(), file=sys.stderr)
        return EXIT_FINDINGS
    ast = result.ast
    reports = []
    if args.truncate_runs is not None:
        ast, rep = truncate_runs(ast, args.truncate_runs, registry)
        reports.append(rep)
    if args.psz:
        ast, rep = apply_pair_style_zero(ast, args.psz_cutoff, registry)
        reports.append(rep)
    sys.stdout.write(serialize(ast).text)
    for rep in reports:
        for i, before, after in rep.edits:
            print(f"{rep.name}: [{i}] {before!r} -> {after!r}", file=sys.stderr)
        for w in rep.warnings:
            print(f"{rep.name}: warning: {w}", file=sys.stderr)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    rubric = _single_rubric(args.rubric)
    lint = analyze(parse(_normalized(args), _registry(args)))
    if not lint.parse.ok:
        for d in lint.parse.errors:
            print(d.format(), file=sys.stderr)
        return EXIT_FINDINGS
    result = evaluate_rubric(extract_parameters(lint.parse.ast), rubric)
    if args.json:
        print(json.dumps(result.to_dict(), indent=2))
    else:
        print(result.table())
    return EXIT_OK if result.passed else EXIT_FINDINGS


def cmd_batch(args) -> int:
    runner = None
    exe = RunnerConfig.from_env(args.runner)
    if exe is not None:
        resolve_executable(exe.executable)
        runner = RunnerConfig(exe.executable, args.timeout, args.potentials, args.keep_runs)
    config = PipelineConfig(
        registry=_registry(args),
        runner=runner,
        noise_commands=tuple(args.noise),
        loop_budget=args.loop_budget,
        max_steps=args.max_steps,
        psz_cutoff=args.psz_cutoff,
        psz_trigger=args.psz_trigger,
        **_rubric_config(args.rubric),
    )
    records = evaluate_corpus(discover_corpus(args.corpus), config, args.jobs)
    report = aggregate(records)
    text = report_json(records, report)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    print(report.text())
    good = {FinalClass.ACC_C, FinalClass.STATIC_PASS}
    return EXIT_OK if all(r.final_class in good for r in records) else EXIT_FINDINGS


def cmd_report(args) -> int:
    combined = Report()
    for path in args.reports:
        p = Path(path)
        if not p.is_file():
            raise UsageError(f"no such report: {path}")
        report, _ = report_from_json(p.read_text(encoding="utf-8"))
        combined = combined.merge(report)
    if args.json:
        print(json.dumps(combined.to_dict(), indent=2, sort_keys=True))
    else:
        print(combined.text())
    return EXIT_OK


def _add_normalize_options(p: argparse.ArgumentParser) -> None:
    from .normalizer import DEFAULT_LOOP_BUDGET, DEFAULT_NOISE_COMMANDS

    p.add_argument("--noise", nargs="*", default=list(DEFAULT_NOISE_COMMANDS), metavar="CMD",
                   help="commands dropped before parsing (default: %(default)s)")
    p.add_argument("--loop-budget", type=int, default=DEFAULT_LOOP_BUDGET,
                   help="maximum lines produced by loop expansion")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lammps-lint", description="Static checks and rubric scoring for LAMMPS inputs.")
    ap.add_argument("--registry", help="command signature JSON (default: shipped core registry)")
    sub = ap.add_subparsers(dest="command", required=True)

    def script_cmd(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("script", nargs="?", default="-", help="input script, '-' for stdin")
        _add_normalize_options(p)
        p.set_defaults(func=func)
        return p

    script_cmd("normalize", cmd_normalize, "print the canonical form of a script")
    script_cmd("parse", cmd_parse, "print the typed AST as JSON")
    p = script_cmd("lint", cmd_lint, "parser and cross-reference diagnostics")
    p.add_argument("--json", action="store_true")
    p = script_cmd("transform", cmd_transform, "truncate runs and/or apply the zero pair style")
    p.add_argument("--truncate-runs", type=int, metavar="N")
    p.add_argument("--psz", action="store_true", help="replace the potential with pair_style zero")
    p.add_argument("--psz-cutoff", type=float, default=DEFAULT_ZERO_CUTOFF)
    p = script_cmd("evaluate", cmd_evaluate, "score a script against a rubric")
    p.add_argument("--rubric", required=True, help=f"rubric file or one of {', '.join(BUILTIN_RUBRICS)}")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("batch", help="run the full funnel over a corpus DIR/<model>/<prompt>/<k>.in")
    p.add_argument("--corpus", required=True)
    p.add_argument("--rubric", required=True, help="'builtin', a directory of <prompt>.rubric.json, or one rubric file")
    p.add_argument("--runner", help="LAMMPS executable; $LAMMPS_LINT_RUNNER takes precedence")
    p.add_argument("--potentials", help="directory made available as ../../../potentials")
    p.add_argument("--timeout", type=float, default=300.0)
    p.add_argument("--keep-runs", metavar="DIR", help="keep scratch run directories here")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--max-steps", type=int, default=10)
    p.add_argument("--psz-cutoff", type=float, default=DEFAULT_ZERO_CUTOFF)
    p.add_argument("--psz-trigger", choices=PSZ_TRIGGERS, default="any")
    p.add_argument("--out", help="write the JSON report here")
    _add_normalize_options(p)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("report", help="print tables from one or more saved batch reports (merged)")
    p.add_argument("reports", nargs="+")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NormalizeError as exc:
        print(f"normalize: {exc}", file=sys.stderr)
        return EXIT_FINDINGS
    except (UsageError, ConfigError, SchemaError, RegistryError, RunnerUnavailable, OSError) as exc:
        print(f"lammps-lint: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
