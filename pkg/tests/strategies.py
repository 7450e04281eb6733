"""Hypothesis strategies that generate commands straight from the signature registry."""

from __future__ import annotations

import re
from functools import lru_cache

from hypothesis import strategies as st

from lammps_lint.expressions import render_number
from lammps_lint.normalizer import split_words
from lammps_lint.registry import ArgSlot, CommandSignature, Registry, SlotKind, load_registry

REGISTRY = load_registry()
COMMAND_NAMES = sorted(sig.name for sig in REGISTRY)

_words = st.from_regex(r"\Aw[a-z0-9_]{0,5}\Z", fullmatch=True)
_idents = st.from_regex(r"\A[A-Za-z_][A-Za-z0-9_]{0,5}\Z", fullmatch=True)
_files = st.from_regex(r"\A[a-z]{1,6}\.[a-z]{1,4}\Z", fullmatch=True)
_ints = st.integers(min_value=-50, max_value=500000).map(str)
_floats = st.one_of(
    st.floats(min_value=-1e4, max_value=1e4, allow_nan=False, allow_infinity=False).map(render_number),
    st.sampled_from(["0.001", "1e-3", "2.5E+2", "-0.5", ".25", "3."]),
)
_stars = st.sampled_from(["*", "1", "2", "1*", "*2", "1*2"])
_quoted = st.from_regex(r'\A"[a-z ]{0,8}"\Z', fullmatch=True)


@lru_cache(maxsize=None)
def slot_value(slot: ArgSlot, avoid: frozenset[str]) -> st.SearchStrategy[str]:
    kind = slot.kind
    if kind is SlotKind.INT:
        base = _ints
    elif kind in (SlotKind.FLOAT, SlotKind.NUMBER):
        base = st.one_of(_ints, _floats) if kind is SlotKind.NUMBER else _floats
    elif kind is SlotKind.ENUM:
        base = st.sampled_from(slot.values)
    elif kind is SlotKind.IDENTIFIER:
        base = _idents
    elif kind is SlotKind.STAR:
        base = _stars
    elif kind is SlotKind.QUOTED:
        base = _quoted
    elif kind is SlotKind.FILE:
        base = _files
    else:
        base = _words
    if slot.accept:
        base = st.one_of(base, st.sampled_from(slot.accept))
    # free-form values must not be mistaken for a keyword
    return base.filter(lambda v: v not in avoid)


@st.composite
def command_text(draw, sig: CommandSignature | None = None, style: str | None = None, registry: Registry = REGISTRY) -> str:
    """One conforming command line for *sig* (random signature if None), optionally pinned to *style*."""
    if sig is None:
        sig = registry.get(draw(st.sampled_from(COMMAND_NAMES)))
    keywords = dict(sig.keywords)
    required = list(sig.required_keywords)
    sub = None
    tokens = [sig.name]
    positional = list(sig.positional)
    if sig.dispatch is not None:
        slot = positional[sig.dispatch_index]
        choices = sorted(sig.styles) or list(slot.values)
        if slot.kind is SlotKind.ENUM:
            choices = list(slot.values)
        if style is None:
            style = draw(st.sampled_from(choices))
        sub = sig.styles.get(style) or CommandSignature(f"{sig.name} {style}")
        keywords.update(sub.keywords)
        required.extend(sub.required_keywords)
    avoid = frozenset(keywords)

    def positionals(slots, min_count, fixed=None):
        count = len(slots) if min_count == len(slots) else draw(st.integers(min_count, len(slots)))
        for k in range(count):
            if fixed is not None and k == fixed[0]:
                tokens.append(fixed[1])
            else:
                tokens.append(draw(slot_value(slots[k], avoid)))
        return count == len(slots)

    if sub is not None:
        complete = positionals(positional, sig.min_positional, (sig.dispatch_index, style))
        if complete:
            complete = positionals(sub.positional, sub.min_positional)
        variadic = sub.variadic or sig.variadic
    else:
        complete = positionals(positional, sig.min_positional)
        variadic = sig.variadic
    if variadic is not None and complete:
        n = draw(st.integers(variadic.min_count, variadic.min_count + 2))
        tokens.extend(draw(slot_value(variadic.slot, avoid)) for _ in range(n))
    elif variadic is not None and variadic.min_count:
        tokens.extend(draw(slot_value(variadic.slot, avoid)) for _ in range(variadic.min_count))

    if keywords:
        chosen = set(draw(st.lists(st.sampled_from(sorted(keywords)), max_size=3, unique=True)))
        for alternatives in required:
            if not chosen.intersection(alternatives):
                chosen.add(draw(st.sampled_from(alternatives)))
        for word in sorted(chosen, key=lambda w: draw(st.integers(0, 100))):
            group = keywords[word]
            tokens.append(word)
            tokens.extend(draw(slot_value(a, avoid)) for a in group.args)
            if group.variadic is not None:
                n = draw(st.integers(0, 2))
                tokens.extend(draw(slot_value(group.variadic, avoid)) for _ in range(n))
    return " ".join(tokens)


def script_text(min_size: int = 1, max_size: int = 8) -> st.SearchStrategy[list[str]]:
    return st.lists(command_text(), min_size=min_size, max_size=max_size)


_ws = st.sampled_from([" ", "  ", "\t", " \t "])


@st.composite
def decorated(draw):
    """(plain, decorated, decorated with renamed variables) for one generated script."""
    commands = draw(st.lists(command_text(), min_size=1, max_size=6))
    plain_lines = list(commands)
    names: list[str] = []
    bodies: list[list[str]] = []
    for cmd in commands:
        tokens = split_words(cmd)
        out = [tokens[0]]
        for tok in tokens[1:]:
            if re.fullmatch(r"[\w./*+-]+", tok) and draw(st.booleans()):
                names.append(tok)
                out.append(len(names) - 1)
            else:
                out.append(tok)
        bodies.append(out)

    def render(prefix: str, rng_draw) -> str:
        lines = []
        for k, value in enumerate(names):
            lines.append(f"variable {prefix}{k} string {value}")
        for body in bodies:
            words = [f"${{{prefix}{w}}}" if isinstance(w, int) else w for w in body]
            seps = [rng_draw(_ws) for _ in words[1:]]
            text = words[0] + "".join(s + w for s, w in zip(seps, words[1:]))
            if rng_draw(st.booleans()) and len(words) > 2:
                cut = len(words[0]) + len(seps[0]) + len(words[1])
                text = text[:cut] + " &\n" + rng_draw(_ws) + text[cut:].lstrip()
            if rng_draw(st.booleans()):
                lines.append("# " + rng_draw(st.sampled_from(["note", "set up", "a#b"])))
            lines.append(rng_draw(st.sampled_from(["", " ", "\t"])) + text + rng_draw(st.sampled_from(["", "  ", " # end"])))
        return "\n".join(lines) + "\n"

    first = render("v", draw)
    renamed = render(draw(st.sampled_from(["w", "q_", "Var"])), draw)
    return "\n".join(plain_lines) + "\n", first, renamed
