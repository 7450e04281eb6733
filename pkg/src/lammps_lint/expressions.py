"""Evaluator for LAMMPS equal-style variable formulas.

Only the static subset is supported: numeric literals, the usual arithmetic,
comparison and logical operators, a handful of math functions and references
to previously bound variables.  Anything that needs a running simulation
(thermo keywords, compute/fix references) is reported as unresolvable.

Precedence follows LAMMPS rather than C: unary minus and ``!`` bind tighter
than ``^``, and ``^`` is evaluated left to right, so ``-2^2 == 4``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Mapping

RUNTIME_KEYWORDS = frozenset(
    "step elapsed dt time temp press pe ke etotal enthalpy vol density lx ly lz atoms".split()
)

CONSTANTS = {
    "PI": math.pi,
    "version": 0.0,
    "on": 1.0,
    "off": 0.0,
    "true": 1.0,
    "false": 0.0,
    "yes": 1.0,
    "no": 0.0,
}


FUNCTIONS: dict[str, tuple[int, Callable[..., float]]] = {
    "sqrt": (1, math.sqrt),
    "exp": (1, math.exp),
    "ln": (1, math.log),
    "log": (1, math.log10),
    "abs": (1, abs),
    "floor": (1, math.floor),
    "ceil": (1, math.ceil),
    "round": (1, lambda x: float(math.floor(x + 0.5))),
    "sin": (1, math.sin),
    "cos": (1, math.cos),
    "tan": (1, math.tan),
    "asin": (1, math.asin),
    "acos": (1, math.acos),
    "atan": (1, math.atan),
    "atan2": (2, math.atan2),
}


class ExpressionError(Exception):
    """Base class; ``unresolvable`` distinguishes missing names from bad syntax."""

    unresolvable = False


class MalformedExpressionError(ExpressionError):
    pass


class UnresolvableReferenceError(ExpressionError):
    unresolvable = True


_TOKEN_RE = re.compile(
    r"""
    (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*(?:\[[^\]]*\])?)
  | (?P<op>\*\*|==|!=|<=|>=|&&|\|\||[-+*/%^()<>!,])
  | (?P<ws>\s+)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


def _lex(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise MalformedExpressionError(f"unexpected character {text[pos]!r} in {text!r}")
        kind = m.lastgroup
        if kind != "ws":
            tok_text = m.group()
            if tok_text == "**":
                raise MalformedExpressionError(f"'**' is not an operator in {text!r}; use '^'")
            toks.append(_Tok(kind, tok_text, pos))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


# binding powers for binary operators (higher binds tighter)
_BINARY = {
    "||": 1,
    "&&": 2,
    "==": 3,
    "!=": 3,
    "<": 4,
    "<=": 4,
    ">": 4,
    ">=": 4,
    "+": 5,
    "-": 5,
    "*": 6,
    "/": 6,
    "%": 6,
    "^": 7,
}


class _Parser:
    def __init__(self, text: str, lookup: Callable[[str], float]):
        self.text = text
        self.toks = _lex(text)
        self.i = 0
        self.lookup = lookup

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> None:
        tok = self.take()
        if tok.text != text:
            raise MalformedExpressionError(f"expected {text!r} at column {tok.pos + 1} in {self.text!r}")

    def parse(self) -> float:
        if self.peek().kind == "end":
            raise MalformedExpressionError("empty expression")
        value = self.expr(0)
        if self.peek().kind != "end":
            tok = self.peek()
            raise MalformedExpressionError(f"unexpected {tok.text!r} at column {tok.pos + 1} in {self.text!r}")
        return value

    def expr(self, min_bp: int) -> float:
        left = self.prefix()
        while True:
            tok = self.peek()
            bp = _BINARY.get(tok.text) if tok.kind == "op" else None
            if bp is None or bp <= min_bp:
                return left
            self.take()
            right = self.expr(bp)
            left = _apply(tok.text, left, right, self.text)

    def prefix(self) -> float:
        tok = self.take()
        if tok.kind == "num":
            return float(tok.text)
        if tok.kind == "op" and tok.text in ("-", "+", "!"):
            # unary operators bind tighter than '^' in LAMMPS
            operand = self.prefix()
            if tok.text == "-":
                return -operand
            if tok.text == "!":
                return 0.0 if operand != 0.0 else 1.0
            return operand
        if tok.text == "(":
            value = self.expr(0)
            self.expect(")")
            return value
        if tok.kind == "name":
            return self.name(tok)
        if tok.kind == "end":
            raise MalformedExpressionError(f"unexpected end of expression in {self.text!r}")
        raise MalformedExpressionError(f"unexpected {tok.text!r} at column {tok.pos + 1} in {self.text!r}")

    def name(self, tok: _Tok) -> float:
        word = tok.text
        if self.peek().text == "(":
            return self.call(word)
        if word.startswith("v_"):
            return self.lookup(word[2:])
        if word[:2] in ("c_", "f_", "i_", "d_") or "[" in word:
            raise UnresolvableReferenceError(f"{word!r} is only known while the simulation runs")
        if word in CONSTANTS:
            return CONSTANTS[word]
        if word in RUNTIME_KEYWORDS:
            raise UnresolvableReferenceError(f"thermo keyword {word!r} is only known while the simulation runs")
        raise UnresolvableReferenceError(f"unknown name {word!r} in {self.text!r}")

    def call(self, fname: str) -> float:
        if fname not in FUNCTIONS:
            raise MalformedExpressionError(f"unsupported function {fname}() in {self.text!r}")
        arity, fn = FUNCTIONS[fname]
        self.expect("(")
        args = [self.expr(0)]
        while self.peek().text == ",":
            self.take()
            args.append(self.expr(0))
        self.expect(")")
        if len(args) != arity:
            raise MalformedExpressionError(f"{fname}() takes {arity} argument(s), got {len(args)}")
        try:
            return float(fn(*args))
        except (ValueError, OverflowError) as exc:
            raise MalformedExpressionError(f"{fname}{tuple(args)}: {exc}") from None


def _apply(op: str, a: float, b: float, text: str) -> float:
    try:
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            if b == 0.0:
                raise MalformedExpressionError(f"division by zero in {text!r}")
            return a / b
        if op == "%":
            if b == 0.0:
                raise MalformedExpressionError(f"modulo by zero in {text!r}")
            return math.fmod(a, b)
        if op == "^":
            result = a**b
            if isinstance(result, complex):
                raise MalformedExpressionError(f"complex result of {a}^{b} in {text!r}")
            return float(result)
        if op == "==":
            return float(a == b)
        if op == "!=":
            return float(a != b)
        if op == "<":
            return float(a < b)
        if op == "<=":
            return float(a <= b)
        if op == ">":
            return float(a > b)
        if op == ">=":
            return float(a >= b)
        if op == "&&":
            return float(a != 0.0 and b != 0.0)
        if op == "||":
            return float(a != 0.0 or b != 0.0)
    except (OverflowError, ZeroDivisionError) as exc:
        raise MalformedExpressionError(f"{a} {op} {b}: {exc}") from None
    raise MalformedExpressionError(f"unknown operator {op!r}")  # pragma: no cover


def evaluate(text: str, variables: Mapping[str, float | str] | None = None) -> float:
    """Evaluate a formula; ``v_name`` references are looked up in *variables*.

    String-valued bindings are accepted when they spell a number.
    """
    variables = variables or {}

    def lookup(name: str) -> float:
        if name not in variables:
            raise UnresolvableReferenceError(f"variable {name!r} is not defined")
        value = variables[name]
        if isinstance(value, str):
            try:
                return float(value)
            except ValueError:
                raise UnresolvableReferenceError(
                    f"variable {name!r} holds non-numeric text {value!r}"
                ) from None
        return float(value)

    value = _Parser(text, lookup).parse()
    if not math.isfinite(value):
        raise MalformedExpressionError(f"{text!r} does not evaluate to a finite number")
    return value


def render_number(value: float) -> str:
    """Integers without a decimal point, everything else as the shortest round-trip decimal."""
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(float(value))
