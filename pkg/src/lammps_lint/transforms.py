"""AST rewrites used before execution: run truncation and the zero pair style."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .parser import AstCommand, AstScript, parse_command
from .registry import Registry, load_registry

DEFAULT_MAX_STEPS = 10
DEFAULT_ZERO_CUTOFF = 10.0

_POTENTIAL_COMMANDS = ("pair_style", "pair_coeff", "kim", "kim_init", "kim_interactions")
_ATOM_COMMANDS = ("create_atoms", "read_data", "read_restart")


@dataclass(frozen=True)
class TransformReport:
    name: str
    edits: tuple[tuple[int, str, str], ...] = ()
    warnings: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "edits": [{"index": i, "before": b, "after": a} for i, b, a in self.edits],
            "warnings": list(self.warnings),
        }


def _reparse(text: str, like: AstCommand, registry: Registry) -> AstCommand:
    cmd, diags = parse_command(text, registry, like.line, like.provenance)
    if cmd is None:  # pragma: no cover - the rewrites only emit registered forms
        raise ValueError(f"rewrite produced an unparseable command {text!r}: {diags}")
    return cmd


def truncate_runs(
    ast: AstScript, max_steps: int = DEFAULT_MAX_STEPS, registry: Registry | None = None
) -> tuple[AstScript, TransformReport]:
    """Cap every ``run N`` at *max_steps*; keywords after N are kept."""
    if max_steps < 1:
        raise ValueError("max_steps must be a positive integer")
    registry = registry or load_registry()
    commands = list(ast.commands)
    edits = []
    for i, cmd in enumerate(commands):
        if cmd.name != "run" or cmd.value("n", 0) <= max_steps:
            continue
        before = cmd.text
        parts = before.split(" ")
        parts[1] = str(max_steps)
        commands[i] = _reparse(" ".join(parts), cmd, registry)
        edits.append((i, before, commands[i].text))
    return replace(ast, commands=tuple(commands)), TransformReport("truncate_runs", tuple(edits))


def _format_cutoff(cutoff: float) -> str:
    return repr(float(cutoff))


def _kim_units(cmd: AstCommand) -> str | None:
    """Unit system named by ``kim init MODEL UNITS`` or ``kim_init MODEL UNITS``."""
    if cmd.name == "kim_init" or (cmd.name == "kim" and cmd.style == "init"):
        return cmd.value("units")
    return None


def _is_kim_interactions(cmd: AstCommand) -> bool:
    return cmd.name == "kim_interactions" or (cmd.name == "kim" and cmd.style == "interactions")


def apply_pair_style_zero(
    ast: AstScript, cutoff: float = DEFAULT_ZERO_CUTOFF, registry: Registry | None = None
) -> tuple[AstScript, TransformReport]:
    """Swap the interatomic potential for ``pair_style zero`` so execution no longer depends on it.

    ``kim init`` keeps only its unit system (``units U``); ``kim interactions``
    becomes the ``pair_style zero``/``pair_coeff * *`` pair.  Other kim
    subcommands (query, param, property) are left alone.
    """
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    registry = registry or load_registry()
    style_line = f"pair_style zero {_format_cutoff(cutoff)}"
    coeff_line = "pair_coeff * *"
    out: list[AstCommand] = []
    edits = []
    for cmd in ast.commands:
        replacement: list[str] | None = None
        if cmd.name == "pair_style":
            replacement = [style_line]
        elif cmd.name == "pair_coeff":
            replacement = [coeff_line]
        elif _kim_units(cmd) is not None:
            replacement = [f"units {_kim_units(cmd)}"]
        elif _is_kim_interactions(cmd):
            replacement = [style_line, coeff_line]
        if replacement is None or [cmd.text] == replacement:
            out.append(cmd)
            continue
        new = [_reparse(t, cmd, registry) for t in replacement]
        edits.append((len(out), cmd.text, "\n".join(c.text for c in new)))
        out.extend(new)

    warnings = []
    has_atoms = any(c.name in _ATOM_COMMANDS for c in ast.commands)
    has_pair = any(c.name in _POTENTIAL_COMMANDS for c in ast.commands)
    if has_atoms and not has_pair:
        warnings.append("NoPairStylePresent: script creates atoms but selects no pair style")
    return replace(ast, commands=tuple(out)), TransformReport("pair_style_zero", tuple(edits), tuple(warnings))
