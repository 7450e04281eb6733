"""Canonical normalization of LAMMPS input scripts.

The passes run in a fixed order::

    strip_comments_and_noise -> merge_continuations -> expand_loops -> resolve_variables

Every intermediate result is a :class:`RawScript` whose lines remember which
raw source lines produced them, so diagnostics from later stages can point
back at the file the user actually wrote.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .expressions import ExpressionError, evaluate, render_number

DEFAULT_NOISE_COMMANDS = ("print", "log", "echo", "shell")
DEFAULT_LOOP_BUDGET = 100_000
MAX_LOOP_DEPTH = 2

PASS_NAMES = ("strip_comments_and_noise", "merge_continuations", "expand_loops", "resolve_variables")

QUOTES = ('"""', '"', "'")


class ErrorKind(str, enum.Enum):
    UNRESOLVABLE_VARIABLE = "UnresolvableVariable"
    MALFORMED_EXPRESSION = "MalformedExpression"
    UNTERMINATED_LOOP = "UnterminatedLoop"
    LOOP_BUDGET_EXCEEDED = "LoopBudgetExceeded"
    UNKNOWN_CONTINUATION = "UnknownContinuation"


class NormalizeError(Exception):
    """A script that cannot be brought into canonical form.

    ``line`` is a 1-based line number in the raw source; ``pass_name`` is
    filled in by :func:`normalize`.
    """

    def __init__(self, kind: ErrorKind, line: int, message: str, pass_name: str | None = None):
        super().__init__(message)
        self.kind = ErrorKind(kind)
        self.line = line
        self.message = message
        self.pass_name = pass_name

    def __str__(self) -> str:
        where = f"[{self.pass_name}] " if self.pass_name else ""
        return f"{where}line {self.line}: {self.kind.value}: {self.message}"

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "line": self.line, "message": self.message, "pass": self.pass_name}


@dataclass(frozen=True)
class SourceLine:
    text: str
    provenance: tuple[int, ...]


def _split_source(source: str) -> tuple[SourceLine, ...]:
    return tuple(SourceLine(text, (i,)) for i, text in enumerate(source.split("\n"), start=1))


@dataclass(frozen=True)
class RawScript:
    """Script text plus per-line provenance.

    Built from plain text, each line's provenance is its own line number.
    CRLF line endings are folded to LF on construction.
    """

    source: str
    origin: str = "<string>"
    lines: tuple[SourceLine, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if "\r" in self.source:
            object.__setattr__(self, "source", self.source.replace("\r\n", "\n"))
        if not self.lines and self.source:
            object.__setattr__(self, "lines", _split_source(self.source))

    @classmethod
    def from_lines(cls, lines: Iterable[SourceLine], origin: str = "<string>") -> "RawScript":
        lines = tuple(lines)
        return cls("\n".join(line.text for line in lines), origin, lines)

    @property
    def n_raw_lines(self) -> int:
        return max((max(line.provenance) for line in self.lines), default=0)


@dataclass
class VariableEnvironment:
    bindings: dict[str, float | str] = field(default_factory=dict)
    styles: dict[str, str] = field(default_factory=dict)
    # (name, previous value, new value, raw line) for every redefinition
    audit: list[tuple[str, float | str, float | str, int]] = field(default_factory=list)

    def bind(self, name: str, style: str, value: float | str, line: int) -> None:
        if name in self.bindings:
            self.audit.append((name, self.bindings[name], value, line))
        self.bindings[name] = value
        self.styles[name] = style


@dataclass(frozen=True)
class CanonicalScript:
    lines: tuple[SourceLine, ...]
    steps_applied: tuple[str, ...] = PASS_NAMES
    origin: str = "<string>"
    env: VariableEnvironment | None = field(default=None, compare=False, repr=False)

    @property
    def text(self) -> str:
        return "".join(line.text + "\n" for line in self.lines)

    def __len__(self) -> int:
        return len(self.lines)


# -- quoting helpers ---------------------------------------------------------


def iter_segments(text: str) -> Iterator[tuple[str, bool]]:
    """Split *text* into (chunk, is_quoted) pieces.

    Quoted chunks include their delimiters.  An unterminated quote swallows
    the rest of the line as a quoted chunk.
    """
    i = 0
    start = 0
    n = len(text)
    while i < n:
        for q in QUOTES:
            if text.startswith(q, i):
                if start < i:
                    yield text[start:i], False
                end = text.find(q, i + len(q))
                stop = n if end < 0 else end + len(q)
                yield text[i:stop], True
                i = start = stop
                break
        else:
            i += 1
    if start < n:
        yield text[start:], False


def _strip_comment(text: str) -> str:
    out = []
    for chunk, quoted in iter_segments(text):
        if not quoted and "#" in chunk:
            out.append(chunk[: chunk.index("#")])
            break
        out.append(chunk)
    return "".join(out)


def split_words(text: str) -> list[str]:
    """Whitespace split that keeps quoted chunks (and their quotes) intact."""
    words: list[str] = []
    current = ""
    for chunk, quoted in iter_segments(text):
        if quoted:
            current += chunk
            continue
        parts = re.split(r"(\s+)", chunk)
        for part in parts:
            if not part:
                continue
            if part.isspace():
                if current:
                    words.append(current)
                current = ""
            else:
                current += part
    if current:
        words.append(current)
    return words


def _first_word(text: str) -> str:
    words = text.split(None, 1)
    return words[0] if words else ""


# -- passes ------------------------------------------------------------------


def strip_comments_and_noise(raw: RawScript, noise_commands: Sequence[str] = DEFAULT_NOISE_COMMANDS) -> RawScript:
    """Drop comments, blank lines and I/O-only commands; trim trailing whitespace."""
    noise = set(noise_commands)
    kept = []
    in_noise_continuation = False
    for line in raw.lines:
        text = _strip_comment(line.text).rstrip()
        if in_noise_continuation:
            # continuation lines of a dropped command go with it
            in_noise_continuation = text.endswith("&")
            continue
        if not text.strip():
            continue
        if _first_word(text) in noise:
            in_noise_continuation = text.endswith("&")
            continue
        kept.append(SourceLine(text, line.provenance))
    return RawScript.from_lines(kept, raw.origin)


def merge_continuations(raw: RawScript) -> RawScript:
    """Join every line ending in ``&`` with its successor."""
    merged: list[SourceLine] = []
    pending: SourceLine | None = None
    for line in raw.lines:
        if pending is not None:
            text = pending.text + " " + line.text.lstrip()
            line = SourceLine(text, pending.provenance + line.provenance)
            pending = None
        if line.text.endswith("&"):
            pending = SourceLine(line.text[:-1].rstrip(), line.provenance)
        else:
            merged.append(line)
    if pending is not None:
        raise NormalizeError(
            ErrorKind.UNKNOWN_CONTINUATION,
            pending.provenance[-1],
            "last line ends with '&' but nothing follows it",
        )
    return RawScript.from_lines(merged, raw.origin)


# -- loop expansion ----------------------------------------------------------


@dataclass
class _Line:
    src: SourceLine
    depth: int = 0  # loop nesting depth this line was produced at

    @property
    def words(self) -> list[str]:
        return split_words(self.src.text)

    @property
    def first_line(self) -> int:
        return self.src.provenance[0]


def _loop_values(style: str, args: list[str], line: int, env: VariableEnvironment) -> list[str]:
    if style == "index":
        if not args:
            raise NormalizeError(ErrorKind.MALFORMED_EXPRESSION, line, "index variable without values")
        return [_unquote(a) for a in args]
    pad = False
    if args and args[-1] == "pad":
        pad = True
        args = args[:-1]
    if len(args) not in (1, 2):
        raise NormalizeError(ErrorKind.MALFORMED_EXPRESSION, line, "loop variable needs N or N1 N2")
    bounds = [_static_int(a, line, env) for a in args]
    lo, hi = (1, bounds[0]) if len(bounds) == 1 else bounds
    values = [str(v) for v in range(lo, hi + 1)]
    if pad:
        width = len(str(hi))
        values = [v.zfill(width) for v in values]
    return values


def _static_int(text: str, line: int, env: VariableEnvironment) -> int:
    text = _substitute(text, env, line)
    try:
        value = evaluate(text, env.bindings)
    except ExpressionError as exc:
        kind = ErrorKind.UNRESOLVABLE_VARIABLE if exc.unresolvable else ErrorKind.MALFORMED_EXPRESSION
        raise NormalizeError(kind, line, str(exc)) from None
    if value != int(value):
        raise NormalizeError(ErrorKind.MALFORMED_EXPRESSION, line, f"loop bound {text!r} is not an integer")
    return int(value)


def _prefix_environment(lines: Sequence[_Line]) -> VariableEnvironment:
    """Best-effort bindings from the variable commands in *lines* (for loop bounds)."""
    env = VariableEnvironment()
    for line in lines:
        words = line.words
        if len(words) >= 3 and words[0] == "variable":
            try:
                _bind_variable(words, env, line.first_line)
            except NormalizeError:
                continue
    return env


def expand_loops(raw: RawScript, budget: int = DEFAULT_LOOP_BUDGET) -> RawScript:
    """Unroll ``variable X loop N`` / ``label`` / ``next`` / ``jump SELF`` loops.

    Each iteration starts with a synthetic ``variable X index <value>`` line
    carrying the declaration's provenance, so the resolver sees the loop
    variable bound to the right value in every copy.
    """
    lines = [_Line(src) for src in raw.lines]
    while True:
        jump_at = next((i for i, ln in enumerate(lines) if _first_word(ln.src.text) == "jump"), None)
        if jump_at is None:
            break
        lines = _unroll_one(lines, jump_at, budget)
    kept = [ln.src for ln in lines if _first_word(ln.src.text) not in ("label", "next")]
    return RawScript.from_lines(kept, raw.origin)


def _unroll_one(lines: list[_Line], jump_at: int, budget: int) -> list[_Line]:
    jump = lines[jump_at]
    words = jump.words
    if len(words) < 2 or _unquote(words[1]) != "SELF":
        raise NormalizeError(
            ErrorKind.MALFORMED_EXPRESSION, jump.first_line, "only 'jump SELF <label>' is supported"
        )
    if len(words) < 3:
        raise NormalizeError(ErrorKind.UNTERMINATED_LOOP, jump.first_line, "jump SELF without a label")
    label = words[2]
    label_at = None
    for i in range(jump_at - 1, -1, -1):
        w = lines[i].words
        if len(w) >= 2 and w[0] == "label" and w[1] == label:
            label_at = i
            break
    if label_at is None:
        raise NormalizeError(
            ErrorKind.UNTERMINATED_LOOP, jump.first_line, f"jump target label {label!r} not found before the jump"
        )

    next_at = None
    for i in range(jump_at - 1, label_at, -1):
        if lines[i].words[0] == "next":
            next_at = i
            break
    if next_at is None:
        raise NormalizeError(
            ErrorKind.LOOP_BUDGET_EXCEEDED,
            jump.first_line,
            f"loop to label {label!r} has no 'next' and would never terminate",
        )
    loop_vars = lines[next_at].words[1:]
    if not loop_vars:
        raise NormalizeError(ErrorKind.MALFORMED_EXPRESSION, lines[next_at].first_line, "'next' without a variable")

    # the most recent loop/index declaration of each loop variable
    decls: dict[str, int] = {}
    for name in loop_vars:
        for i in range(next_at - 1, -1, -1):
            w = lines[i].words
            if len(w) >= 3 and w[0] == "variable" and w[1] == name:
                if w[2] not in ("loop", "index"):
                    raise NormalizeError(
                        ErrorKind.MALFORMED_EXPRESSION,
                        lines[next_at].first_line,
                        f"'next {name}' needs a loop or index variable, not {w[2]!r}",
                    )
                decls[name] = i
                break
        else:
            raise NormalizeError(
                ErrorKind.UNRESOLVABLE_VARIABLE,
                lines[next_at].first_line,
                f"loop variable {name!r} is never declared",
            )

    value_lists = []
    for name in loop_vars:
        d = decls[name]
        w = lines[d].words
        env = _prefix_environment(lines[:d])
        value_lists.append(_loop_values(w[2], w[3:], lines[d].first_line, env))
    n_iter = min(len(v) for v in value_lists)

    body = [
        ln
        for i, ln in enumerate(lines[label_at + 1 : jump_at], start=label_at + 1)
        if i != next_at and i not in decls.values()
    ]
    depth = 1 + max((ln.depth for ln in body), default=0)
    if depth > MAX_LOOP_DEPTH:
        raise NormalizeError(
            ErrorKind.LOOP_BUDGET_EXCEEDED,
            jump.first_line,
            f"loops nested deeper than {MAX_LOOP_DEPTH} are not expanded",
        )

    head = [ln for i, ln in enumerate(lines[:label_at]) if i not in decls.values()]
    tail = lines[jump_at + 1 :]
    projected = len(head) + len(tail) + n_iter * (len(body) + len(loop_vars))
    if projected > budget:
        raise NormalizeError(
            ErrorKind.LOOP_BUDGET_EXCEEDED,
            jump.first_line,
            f"expanding this loop would produce {projected} lines (budget {budget})",
        )

    unrolled: list[_Line] = []
    for k in range(n_iter):
        for name, values in zip(loop_vars, value_lists):
            prov = lines[decls[name]].src.provenance
            unrolled.append(_Line(SourceLine(f"variable {name} index {values[k]}", prov), depth))
        unrolled.extend(_Line(ln.src, depth) for ln in body)
    return head + unrolled + tail


# -- variable resolution -----------------------------------------------------

_REF_RE = re.compile(r"\$(\{(?P<braced>[^}]*)\}|\((?P<inline>)|(?P<single>[A-Za-z0-9_]))")


def _unquote(word: str) -> str:
    for q in QUOTES:
        if len(word) >= 2 * len(q) and word.startswith(q) and word.endswith(q):
            return word[len(q) : -len(q)]
    return word


def _lookup_text(name: str, env: VariableEnvironment, line: int) -> str:
    if name not in env.bindings:
        raise NormalizeError(ErrorKind.UNRESOLVABLE_VARIABLE, line, f"variable {name!r} is not defined")
    value = env.bindings[name]
    return value if isinstance(value, str) else render_number(value)


def _matching_paren(text: str, open_at: int) -> int:
    depth = 0
    for i in range(open_at, len(text)):
        if text[i] == "(":
            depth += 1
        elif text[i] == ")":
            depth -= 1
            if depth == 0:
                return i
    return -1


def _inline_value(body: str, env: VariableEnvironment, line: int) -> str:
    fmt = None
    if ":" in body:
        body, fmt = body.rsplit(":", 1)
    value = _evaluate(body, env, line)
    if fmt:
        try:
            return fmt % value
        except (TypeError, ValueError):
            raise NormalizeError(ErrorKind.MALFORMED_EXPRESSION, line, f"bad format {fmt!r}") from None
    return render_number(value)


def _substitute_chunk(chunk: str, env: VariableEnvironment, line: int) -> str:
    out = []
    i = 0
    while True:
        j = chunk.find("$", i)
        if j < 0:
            out.append(chunk[i:])
            return "".join(out)
        out.append(chunk[i:j])
        m = _REF_RE.match(chunk, j)
        if m is None:
            raise NormalizeError(ErrorKind.MALFORMED_EXPRESSION, line, f"stray '$' in {chunk.strip()!r}")
        if m.group("braced") is not None:
            name = m.group("braced")
            if not name:
                raise NormalizeError(ErrorKind.MALFORMED_EXPRESSION, line, "empty ${} reference")
            out.append(_lookup_text(name, env, line))
            i = m.end()
        elif m.group("single") is not None:
            out.append(_lookup_text(m.group("single"), env, line))
            i = m.end()
        else:
            close = _matching_paren(chunk, j + 1)
            if close < 0:
                raise NormalizeError(ErrorKind.MALFORMED_EXPRESSION, line, "unbalanced $( ... )")
            out.append(_inline_value(chunk[j + 2 : close], env, line))
            i = close + 1


def _substitute(text: str, env: VariableEnvironment, line: int, max_rounds: int = 10) -> str:
    """Replace ``$`` references outside quotes, re-scanning substituted text."""
    for _ in range(max_rounds):
        if not any("$" in chunk for chunk, quoted in iter_segments(text) if not quoted):
            return text
        text = "".join(
            chunk if quoted else _substitute_chunk(chunk, env, line) for chunk, quoted in iter_segments(text)
        )
    raise NormalizeError(ErrorKind.MALFORMED_EXPRESSION, line, "variable substitution does not terminate")


def _evaluate(expr: str, env: VariableEnvironment, line: int) -> float:
    expr = _substitute_anywhere(expr, env, line)
    try:
        return evaluate(expr, env.bindings)
    except ExpressionError as exc:
        kind = ErrorKind.UNRESOLVABLE_VARIABLE if exc.unresolvable else ErrorKind.MALFORMED_EXPRESSION
        raise NormalizeError(kind, line, str(exc)) from None


def _substitute_anywhere(text: str, env: VariableEnvironment, line: int) -> str:
    # inside a formula quotes are just delimiters, so references get replaced there too
    for _ in range(10):
        if "$" not in text:
            return text
        text = _substitute_chunk(text, env, line)
    raise NormalizeError(ErrorKind.MALFORMED_EXPRESSION, line, "variable substitution does not terminate")


def _bind_variable(words: list[str], env: VariableEnvironment, line: int) -> None:
    if len(words) < 3:
        raise NormalizeError(ErrorKind.MALFORMED_EXPRESSION, line, "variable command needs a name and a style")
    name, style, args = words[1], words[2], words[3:]
    if style == "delete":
        raise NormalizeError(ErrorKind.MALFORMED_EXPRESSION, line, "'variable ... delete' is not supported")
    if style == "equal":
        if not args:
            raise NormalizeError(ErrorKind.MALFORMED_EXPRESSION, line, f"variable {name!r} has no formula")
        formula = " ".join(_unquote(a) for a in args)
        env.bind(name, style, _evaluate(formula, env, line), line)
    elif style == "string":
        if not args:
            raise NormalizeError(ErrorKind.MALFORMED_EXPRESSION, line, f"variable {name!r} has no value")
        env.bind(name, style, _unquote(" ".join(args)), line)
    elif style == "index":
        if not args:
            raise NormalizeError(ErrorKind.MALFORMED_EXPRESSION, line, f"variable {name!r} has no value")
        env.bind(name, style, _unquote(args[0]), line)
    elif style == "loop":
        values = _loop_values("loop", args, line, env)
        if not values:
            raise NormalizeError(ErrorKind.MALFORMED_EXPRESSION, line, f"loop variable {name!r} is empty")
        env.bind(name, style, values[0], line)
    else:
        raise NormalizeError(
            ErrorKind.MALFORMED_EXPRESSION, line, f"variable style {style!r} cannot be resolved statically"
        )


def _collapse_whitespace(text: str) -> str:
    return " ".join(split_words(text))


def resolve_variables(raw: RawScript, steps_applied: Sequence[str] = PASS_NAMES) -> CanonicalScript:
    """Evaluate and remove ``variable`` commands, inlining their values elsewhere."""
    env = VariableEnvironment()
    out: list[SourceLine] = []
    for line in raw.lines:
        lineno = line.provenance[0]
        first = _first_word(line.text)
        if first == "variable":
            # references in the name/style part are substituted; formulas are evaluated lazily
            words = split_words(line.text)
            if len(words) >= 2:
                words[1] = _substitute(words[1], env, lineno)
            if len(words) >= 3 and words[2] in ("string", "index", "loop"):
                words = words[:3] + [_substitute(w, env, lineno) for w in words[3:]]
            _bind_variable(words, env, lineno)
            continue
        text = _collapse_whitespace(_substitute(line.text, env, lineno))
        if text:
            out.append(SourceLine(text, line.provenance))
    return CanonicalScript(tuple(out), tuple(steps_applied), raw.origin, env)


def normalize(
    raw: RawScript | str,
    noise_commands: Sequence[str] = DEFAULT_NOISE_COMMANDS,
    loop_budget: int = DEFAULT_LOOP_BUDGET,
) -> CanonicalScript:
    """Run all passes in order; errors carry the name of the failing pass."""
    if isinstance(raw, str):
        raw = RawScript(raw)
    passes = (
        ("strip_comments_and_noise", lambda s: strip_comments_and_noise(s, noise_commands)),
        ("merge_continuations", merge_continuations),
        ("expand_loops", lambda s: expand_loops(s, loop_budget)),
    )
    current = raw
    for name, fn in passes:
        try:
            current = fn(current)
        except NormalizeError as exc:
            exc.pass_name = name
            raise
    try:
        return resolve_variables(current, PASS_NAMES)
    except NormalizeError as exc:
        exc.pass_name = "resolve_variables"
        raise


def check_canonical(script: CanonicalScript) -> list[str]:
    """Return the canonical-form invariants *script* violates (empty when clean)."""
    problems = []
    banned = {"variable", "print", "log", "echo", "shell", "label", "jump", "next"}
    for k, line in enumerate(script.lines):
        unquoted = "".join(chunk for chunk, quoted in iter_segments(line.text) if not quoted)
        if "#" in unquoted:
            problems.append(f"line {k}: comment")
        if line.text.endswith("&"):
            problems.append(f"line {k}: continuation")
        if "$" in unquoted:
            problems.append(f"line {k}: variable reference")
        if _first_word(line.text) in banned:
            problems.append(f"line {k}: {_first_word(line.text)} command")
        if not line.provenance:
            problems.append(f"line {k}: no provenance")
    return problems
