"""Registry-driven parser from canonical script text to a typed AST.

Parsing never aborts: each canonical line either becomes an
:class:`AstCommand` or produces an error :class:`Diagnostic` and is left out
of the tree.  A script passes the parser when no error diagnostics remain.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .normalizer import CanonicalScript, SourceLine
from .registry import ArgSlot, CommandSignature, KeywordGroup, Registry, SlotKind, load_registry

CODES = {
    "P001": "UnknownCommand",
    "P002": "ArityMismatch",
    "P003": "TypeMismatch",
    "P004": "UnknownKeyword",
    "P005": "BadEnumValue",
    "P006": "UnterminatedQuote",
    "S001": "UndefinedReference",
    "S002": "DuplicateDefinition",
    "S003": "DanglingUnfix",
    "S004": "ReferenceBeforeDefinition",
}


class Severity(str, enum.Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    code: str
    message: str
    line: int  # canonical line index, 0-based
    col_start: int = 0
    col_end: int = 0
    provenance: tuple[int, ...] = ()

    def __post_init__(self):
        if self.code not in CODES:
            raise ValueError(f"diagnostic code {self.code!r} is not in the catalog")

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    @property
    def raw_line(self) -> int:
        return self.provenance[0] if self.provenance else self.line + 1

    def format(self) -> str:
        return f"{self.severity.value} {self.code} {self.raw_line}:{self.col_start + 1} {self.message}"

    def to_dict(self) -> dict:
        return {
            "severity": self.severity.value,
            "code": self.code,
            "name": CODES[self.code],
            "line": self.raw_line,
            "canonical_line": self.line,
            "col": self.col_start + 1,
            "col_end": self.col_end + 1,
            "message": self.message,
        }


# -- tokens ------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int


class UnterminatedQuote(ValueError):
    def __init__(self, col: int):
        super().__init__(f"unterminated quote starting at column {col + 1}")
        self.col = col


def tokenize(line: str) -> list[Token]:
    """Whitespace-separated tokens; a quoted chunk stays inside one token, quotes included."""
    tokens = []
    i = 0
    n = len(line)
    while i < n:
        if line[i].isspace():
            i += 1
            continue
        start = i
        while i < n and not line[i].isspace():
            if line[i] in "\"'":
                q = '"""' if line.startswith('"""', i) else line[i]
                close = line.find(q, i + len(q))
                if close < 0:
                    raise UnterminatedQuote(i)
                i = close + len(q)
            else:
                i += 1
        tokens.append(Token(line[start:i], start, i))
    return tokens


# -- AST ---------------------------------------------------------------------


@dataclass(frozen=True)
class TypedArg:
    raw: str
    value: Any
    slot: ArgSlot
    span: tuple[int, int] = field(default=(0, 0), compare=False)

    @property
    def kind(self) -> SlotKind:
        return self.slot.kind

    def to_dict(self) -> dict:
        return {"slot": self.slot.name, "kind": self.slot.kind.value, "raw": self.raw, "value": self.value}


@dataclass(frozen=True)
class KeywordArg:
    word: str
    args: tuple[TypedArg, ...] = ()
    span: tuple[int, int] = field(default=(0, 0), compare=False)

    def to_dict(self) -> dict:
        return {"keyword": self.word, "args": [a.to_dict() for a in self.args]}


@dataclass(frozen=True)
class AstCommand:
    name: str
    args: tuple[TypedArg, ...] = ()
    keywords: tuple[KeywordArg, ...] = ()
    style: str | None = None
    line: int = field(default=0, compare=False)
    provenance: tuple[int, ...] = field(default=(), compare=False)

    def arg(self, slot_name: str) -> TypedArg | None:
        return next((a for a in self.args if a.slot.name == slot_name), None)

    def value(self, slot_name: str, default: Any = None) -> Any:
        a = self.arg(slot_name)
        return default if a is None else a.value

    def keyword(self, word: str) -> KeywordArg | None:
        """Last occurrence of *word* (LAMMPS lets later keywords override earlier ones)."""
        found = None
        for k in self.keywords:
            if k.word == word:
                found = k
        return found

    def all_args(self) -> Iterable[TypedArg]:
        yield from self.args
        for k in self.keywords:
            yield from k.args

    @property
    def text(self) -> str:
        parts = [self.name, *(a.raw for a in self.args)]
        for k in self.keywords:
            parts.append(k.word)
            parts.extend(a.raw for a in k.args)
        return " ".join(parts)

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"name": self.name, "line": self.provenance[0] if self.provenance else None}
        if self.style:
            d["style"] = self.style
        d["args"] = [a.to_dict() for a in self.args]
        if self.keywords:
            d["keywords"] = [k.to_dict() for k in self.keywords]
        return d


@dataclass(frozen=True)
class AstScript:
    commands: tuple[AstCommand, ...] = ()
    registry_version: str = ""

    def __len__(self) -> int:
        return len(self.commands)

    def __iter__(self):
        return iter(self.commands)

    def find(self, name: str) -> list[tuple[int, AstCommand]]:
        return [(i, c) for i, c in enumerate(self.commands) if c.name == name]

    def to_dict(self) -> dict:
        return {"registry_version": self.registry_version, "commands": [c.to_dict() for c in self.commands]}


@dataclass(frozen=True)
class ParseResult:
    ast: AstScript
    diagnostics: tuple[Diagnostic, ...]

    @property
    def errors(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.is_error]

    @property
    def ok(self) -> bool:
        return not self.errors


# -- matching ----------------------------------------------------------------


class _Fail(Exception):
    def __init__(self, code: str, message: str, span: tuple[int, int]):
        super().__init__(message)
        self.code = code
        self.message = message
        self.span = span


def _typed(slot: ArgSlot, tok: Token) -> TypedArg:
    try:
        value = slot.convert(tok.text)
    except ValueError as exc:
        code = "P005" if slot.kind is SlotKind.ENUM else "P003"
        raise _Fail(code, f"{slot.name}: {exc}", (tok.start, tok.end)) from None
    return TypedArg(tok.text, value, slot, (tok.start, tok.end))


class _LineMatcher:
    def __init__(self, sig: CommandSignature, toks: list[Token]):
        self.sig = sig
        self.toks = toks
        self.pos = 1
        self.args: list[TypedArg] = []
        self.keywords: list[KeywordArg] = []
        self.warnings: list[tuple[str, str, tuple[int, int]]] = []

    @property
    def last_span(self) -> tuple[int, int]:
        tok = self.toks[min(self.pos, len(self.toks)) - 1]
        return tok.start, tok.end

    def positionals(self, owner: str, slots: Sequence[ArgSlot], min_count: int, kwset, start: int = 0, stop=None):
        stop = len(slots) if stop is None else stop
        for k in range(start, stop):
            slot = slots[k]
            if self.pos >= len(self.toks):
                if k < min_count:
                    raise _Fail(
                        "P002",
                        f"{owner} expects at least {min_count} argument(s), missing {slot.name!r}",
                        self.last_span,
                    )
                return False
            tok = self.toks[self.pos]
            if k >= min_count and tok.text in kwset:
                return False
            self.args.append(_typed(slot, tok))
            self.pos += 1
        return True

    def variadic(self, owner: str, slot: ArgSlot, min_count: int, kwset):
        count = 0
        while self.pos < len(self.toks) and self.toks[self.pos].text not in kwset:
            self.args.append(_typed(slot, self.toks[self.pos]))
            self.pos += 1
            count += 1
        if count < min_count:
            raise _Fail("P002", f"{owner} expects at least {min_count} {slot.name!r} value(s)", self.last_span)

    def keyword_groups(self, owner: str, kwset: dict[str, KeywordGroup]):
        seen = set()
        while self.pos < len(self.toks):
            tok = self.toks[self.pos]
            group = kwset.get(tok.text)
            if group is None:
                if not kwset:
                    raise _Fail("P002", f"{owner}: unexpected extra argument {tok.text!r}", (tok.start, tok.end))
                raise _Fail("P004", f"{owner}: unknown keyword {tok.text!r}", (tok.start, tok.end))
            if tok.text in seen and not group.repeatable:
                self.warnings.append(("P004", f"{owner}: keyword {tok.text!r} repeated; last value wins", (tok.start, tok.end)))
            seen.add(tok.text)
            self.pos += 1
            kargs = []
            for slot in group.args:
                if self.pos >= len(self.toks):
                    raise _Fail(
                        "P002", f"{owner}: keyword {group.word!r} expects {len(group.args)} value(s)", (tok.start, tok.end)
                    )
                kargs.append(_typed(slot, self.toks[self.pos]))
                self.pos += 1
            if group.variadic is not None:
                while self.pos < len(self.toks) and self.toks[self.pos].text not in kwset:
                    kargs.append(_typed(group.variadic, self.toks[self.pos]))
                    self.pos += 1
            end = self.toks[self.pos - 1].end
            self.keywords.append(KeywordArg(group.word, tuple(kargs), (tok.start, end)))
        return seen

    def run(self) -> str | None:
        sig = self.sig
        owner = sig.name
        kwset = dict(sig.keywords)
        required = list(sig.required_keywords)
        variadic = sig.variadic
        style = None
        anchor = (self.toks[0].start, self.toks[0].end)

        if sig.dispatch is not None:
            d = sig.dispatch_index
            self.positionals(owner, sig.positional, sig.min_positional, kwset, 0, d + 1)
            style_arg = self.args[-1]
            style = style_arg.value
            anchor = style_arg.span
            sub = sig.styles.get(style)
            if sub is None:
                if style_arg.kind is not SlotKind.ENUM:
                    raise _Fail("P001", f"unknown {sig.name} style {style!r}", style_arg.span)
                sub = CommandSignature(f"{sig.name} {style}")
            kwset.update(sub.keywords)
            required.extend(sub.required_keywords)
            owner = f"{sig.name} {style}"
            complete = self.positionals(owner, sig.positional, sig.min_positional, kwset, d + 1)
            if complete:
                self.positionals(owner, sub.positional, sub.min_positional, kwset)
            variadic = sub.variadic or variadic
        else:
            self.positionals(owner, sig.positional, sig.min_positional, kwset)

        if variadic is not None:
            self.variadic(owner, variadic.slot, variadic.min_count, kwset)
        seen = self.keyword_groups(owner, kwset)
        for alternatives in required:
            if not seen.intersection(alternatives):
                raise _Fail("P002", f"{owner} requires one of the keywords: {', '.join(alternatives)}", anchor)
        return style


def parse_command(
    text: str, registry: Registry | None = None, line: int = 0, provenance: tuple[int, ...] = ()
) -> tuple[AstCommand | None, list[Diagnostic]]:
    """Parse one canonical line."""
    registry = registry or load_registry()
    provenance = provenance or (line + 1,)

    def diag(code: str, message: str, span: tuple[int, int], severity=Severity.ERROR) -> Diagnostic:
        return Diagnostic(severity, code, message, line, span[0], span[1], provenance)

    try:
        toks = tokenize(text)
    except UnterminatedQuote as exc:
        return None, [diag("P006", str(exc), (exc.col, len(text)))]
    if not toks:
        return None, []
    sig = registry.get(toks[0].text)
    if sig is None:
        return None, [diag("P001", f"unknown command {toks[0].text!r}", (toks[0].start, toks[0].end))]
    matcher = _LineMatcher(sig, toks)
    try:
        style = matcher.run()
    except _Fail as fail:
        return None, [diag(fail.code, fail.message, fail.span)]
    warnings = [diag(code, msg, span, Severity.WARNING) for code, msg, span in matcher.warnings]
    cmd = AstCommand(sig.name, tuple(matcher.args), tuple(matcher.keywords), style, line, provenance)
    return cmd, warnings


def parse(script: CanonicalScript | str, registry: Registry | None = None) -> ParseResult:
    """Parse every canonical line; bad lines become diagnostics and are skipped."""
    registry = registry or load_registry()
    if isinstance(script, str):
        lines = [SourceLine(t, (i,)) for i, t in enumerate(script.splitlines(), start=1) if t.strip()]
    else:
        lines = list(script.lines)
    commands = []
    diagnostics: list[Diagnostic] = []
    for idx, src in enumerate(lines):
        cmd, diags = parse_command(src.text, registry, idx, src.provenance)
        diagnostics.extend(diags)
        if cmd is not None:
            commands.append(cmd)
    return ParseResult(AstScript(tuple(commands), registry.version), tuple(diagnostics))


def serialize(ast: AstScript) -> CanonicalScript:
    lines = tuple(
        SourceLine(cmd.text, cmd.provenance or (i + 1,)) for i, cmd in enumerate(ast.commands)
    )
    return CanonicalScript(lines, steps_applied=("serialize",))
