"""Symbol tables and cross-reference checks over a parsed script.

IDs are tracked for five namespaces: region, group, fix, compute and dump.
Which argument defines or references an ID is declared on the registry slots
(``defines``/``refers``); ``c_ID`` and ``f_ID`` words inside free-form
arguments (thermo_style custom, fix ave/time, ...) count as references too.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator

from .parser import AstCommand, AstScript, Diagnostic, ParseResult, Severity, TypedArg

KINDS = ("region", "group", "fix", "compute", "dump")
PREDEFINED_INDEX = -1
PREDEFINED = {
    "group": ("all",),
    "compute": ("thermo_temp", "thermo_press", "thermo_pe"),
}

# commands that remove a live ID, keyed by the namespace they act on
_REMOVERS = {"unfix": "fix", "uncompute": "compute", "undump": "dump"}
_PREFIX_REF = re.compile(r"\A([cf])_([A-Za-z0-9_]+)(?:\[[^\]]*\])?\Z")


@dataclass
class SymbolTable:
    regions: dict[str, int] = field(default_factory=dict)
    groups: dict[str, int] = field(default_factory=dict)
    fixes: dict[str, int] = field(default_factory=dict)
    computes: dict[str, int] = field(default_factory=dict)
    dumps: dict[str, int] = field(default_factory=dict)
    predefined: frozenset = frozenset({"all"})
    # (kind, id, command index) for every definition after the first
    duplicates: list[tuple[str, str, int]] = field(default_factory=list)
    # every definition index per (kind, id), in command order
    definitions: dict[tuple[str, str], list[int]] = field(default_factory=dict)

    def namespace(self, kind: str) -> dict[str, int]:
        return {
            "region": self.regions,
            "group": self.groups,
            "fix": self.fixes,
            "compute": self.computes,
            "dump": self.dumps,
        }[kind]

    def defined(self, kind: str, ident: str) -> bool:
        return ident in self.namespace(kind)

    def defined_after(self, kind: str, ident: str, index: int) -> bool:
        return any(i > index for i in self.definitions.get((kind, ident), ()))


@dataclass(frozen=True)
class _Use:
    role: str  # "defines" or "refers"
    kind: str
    ident: str
    arg: TypedArg


def _uses(cmd: AstCommand) -> Iterator[_Use]:
    for arg in cmd.all_args():
        slot = arg.slot
        if slot.defines:
            yield _Use("defines", slot.defines, str(arg.value), arg)
        elif slot.refers:
            if arg.value in ("NULL",):
                continue
            yield _Use("refers", slot.refers, str(arg.value), arg)
        elif isinstance(arg.value, str):
            m = _PREFIX_REF.match(arg.value)
            if m:
                yield _Use("refers", "compute" if m.group(1) == "c" else "fix", m.group(2), arg)


def _is_group_delete(cmd: AstCommand) -> bool:
    return cmd.name == "group" and cmd.style == "delete"


def build_symbol_table(ast: AstScript) -> SymbolTable:
    table = SymbolTable()
    for kind, names in PREDEFINED.items():
        for name in names:
            table.namespace(kind)[name] = PREDEFINED_INDEX
            table.definitions[(kind, name)] = [PREDEFINED_INDEX]
    for idx, cmd in enumerate(ast.commands):
        if _is_group_delete(cmd):
            continue
        for use in _uses(cmd):
            if use.role != "defines":
                continue
            table.definitions.setdefault((use.kind, use.ident), []).append(idx)
            ns = table.namespace(use.kind)
            if use.ident in ns:
                table.duplicates.append((use.kind, use.ident, idx))
            else:
                ns[use.ident] = idx
    return table


def _diag(severity: Severity, code: str, message: str, cmd: AstCommand, arg: TypedArg | None) -> Diagnostic:
    start, end = arg.span if arg is not None else (0, len(cmd.name))
    return Diagnostic(severity, code, message, cmd.line, start, end, cmd.provenance)


def check_references(ast: AstScript, table: SymbolTable) -> list[Diagnostic]:
    """Linear scan with a live-ID set; reports S001-S004 sorted by (line, code)."""
    live: dict[str, set[str]] = {k: set(PREDEFINED.get(k, ())) for k in KINDS}
    out: list[Diagnostic] = []
    for idx, cmd in enumerate(ast.commands):
        remover = _REMOVERS.get(cmd.name)
        group_delete = _is_group_delete(cmd)
        for use in _uses(cmd):
            kind, ident = use.kind, use.ident
            if use.role == "defines":
                if group_delete:
                    continue
                if ident in live[kind]:
                    out.append(_diag(Severity.WARNING, "S002", f"{kind} {ident!r} is defined again", cmd, use.arg))
                live[kind].add(ident)
                continue
            if ident in live[kind]:
                if remover == kind:
                    live[kind].discard(ident)
                continue
            if table.defined_after(kind, ident, idx):
                out.append(
                    _diag(Severity.WARNING, "S004", f"{kind} {ident!r} is used before it is defined", cmd, use.arg)
                )
            elif remover == "fix" and (kind, ident) not in table.definitions:
                out.append(_diag(Severity.ERROR, "S003", f"unfix names fix {ident!r}, which is never defined", cmd, use.arg))
            elif (kind, ident) in table.definitions:
                out.append(_diag(Severity.ERROR, "S001", f"{kind} {ident!r} was removed before this use", cmd, use.arg))
            else:
                out.append(_diag(Severity.ERROR, "S001", f"undefined {kind} {ident!r}", cmd, use.arg))
        if group_delete:
            gid = cmd.value("id")
            if gid in live["group"]:
                live["group"].discard(gid)
    out.sort(key=lambda d: (d.line, d.code, d.col_start))
    return out


@dataclass(frozen=True)
class LintResult:
    parse: ParseResult
    semantic: tuple[Diagnostic, ...] = ()

    @property
    def diagnostics(self) -> list[Diagnostic]:
        return sorted((*self.parse.diagnostics, *self.semantic), key=lambda d: (d.line, d.code, d.col_start))

    @property
    def parser_pass(self) -> bool:
        """No parser errors and no S001/S003; S002/S004 are warnings only."""
        return self.parse.ok and not any(d.is_error for d in self.semantic)


def analyze(result: ParseResult) -> LintResult:
    """Semantic checks run only on a clean parse, since a dropped line would fake undefined IDs."""
    if not result.ok:
        return LintResult(result)
    table = build_symbol_table(result.ast)
    return LintResult(result, tuple(check_references(result.ast, table)))
