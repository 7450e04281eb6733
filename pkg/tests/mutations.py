"""Single-token mutations that must be rejected at the mutated token."""

from __future__ import annotations

from dataclasses import dataclass

from hypothesis import given, settings
from hypothesis import strategies as st

from lammps_lint.parser import parse_command
from lammps_lint.registry import SlotKind
from strategies import REGISTRY, command_text

# a replacement that no slot of this kind can accept
BREAKERS = {
    SlotKind.INT: "1.5",
    SlotKind.FLOAT: "x1.5",
    SlotKind.NUMBER: "x1.5",
    SlotKind.ENUM: "zz_bad",
    SlotKind.IDENTIFIER: "bad-id",
    SlotKind.STAR: "a*",
    SlotKind.QUOTED: "bare",
}


@dataclass(frozen=True)
class Mutation:
    original: str
    mutated: str
    span: tuple[int, int]
    slot: str


def mutate(text: str, choice: int) -> Mutation | None:
    cmd, diags = parse_command(text, REGISTRY)
    assert cmd is not None, (text, diags)
    candidates = [a for a in cmd.all_args() if a.kind in BREAKERS and BREAKERS[a.kind] not in a.slot.accept]
    if not candidates:
        return None
    arg = candidates[choice % len(candidates)]
    start, end = arg.span
    bad = BREAKERS[arg.kind]
    return Mutation(text, text[:start] + bad + text[end:], (start, start + len(bad)), arg.slot.name)


def check(m: Mutation) -> str | None:
    """None when the mutant is rejected with an error on exactly the mutated token."""
    cmd, diags = parse_command(m.mutated, REGISTRY)
    errors = [d for d in diags if d.is_error]
    if cmd is not None or not errors:
        return f"accepted: {m.mutated!r}"
    d = errors[0]
    if (d.col_start, d.col_end) != m.span:
        return f"{m.mutated!r}: error at {d.col_start}:{d.col_end}, mutated {m.span} ({d.code} {d.message})"
    return None


def campaign(n: int = 600) -> tuple[int, list[str]]:
    """Generate *n* commands, mutate one typed token in each; return (mutants checked, failures)."""
    checked = 0
    failures: list[str] = []

    @settings(max_examples=n, database=None)
    @given(command_text(), st.integers(0, 50))
    def run(text, choice):
        nonlocal checked
        m = mutate(text, choice)
        if m is None:
            return
        checked += 1
        problem = check(m)
        if problem:
            failures.append(problem)

    run()
    return checked, failures
