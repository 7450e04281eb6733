"""Random scripts built from variables and (possibly nested) loops."""

from __future__ import annotations

import random


def _body_command(rng: random.Random, names: list[str]) -> str:
    ref = rng.choice(names)
    form = rng.choice(["${%s}", "$%s" if len(ref) == 1 else "${%s}"]) % ref
    return rng.choice(
        [
            f"run {form}",
            f"region r{form} block 0 {form} 0 1 0 1",
            f"thermo {form}",
            f"fix f{form} all nve",
            f"mass {form} 1.0",
        ]
    )


def _equal(rng: random.Random, name: str, names: list[str]) -> str:
    terms = [str(rng.randint(0, 9))] + [f"v_{n}" for n in rng.sample(names, min(len(names), rng.randint(0, 2)))]
    ops = [rng.choice(["+", "*", "-"]) for _ in terms[1:]]
    expr = terms[0] + "".join(f"{op}{t}" for op, t in zip(ops, terms[1:]))
    return f"variable {name} equal {expr}"


def _loop(rng: random.Random, label: str, var: str, visible: list[str], depth: int, counter: list[int]) -> list[str]:
    style = rng.choice(["loop1", "loop2", "index"])
    if style == "loop1":
        decl = f"variable {var} loop {rng.randint(1, 4)}"
    elif style == "loop2":
        lo = rng.randint(0, 3)
        decl = f"variable {var} loop {lo} {lo + rng.randint(0, 3)}"
    else:
        decl = f"variable {var} index " + " ".join(str(rng.randint(0, 50)) for _ in range(rng.randint(1, 4)))
    inner_names = visible + [var]
    body: list[str] = []
    for _ in range(rng.randint(1, 4)):
        roll = rng.random()
        if roll < 0.25:
            counter[0] += 1
            name = f"e{counter[0]}"
            body.append(_equal(rng, name, inner_names))
            inner_names = inner_names + [name]
        elif roll < 0.4 and depth < 2:
            counter[0] += 1
            body += _loop(rng, f"{label}n{counter[0]}", f"k{counter[0]}", inner_names, depth + 1, counter)
        else:
            body.append(_body_command(rng, inner_names))
    return [decl, f"label {label}", *body, f"next {var}", f"jump SELF {label}"]


def loop_script(seed: int) -> str:
    """A script whose commands only reference values that stay fixed after they are bound."""
    rng = random.Random(seed)
    counter = [0]
    names: list[str] = []
    lines: list[str] = []
    for _ in range(rng.randint(0, 2)):
        counter[0] += 1
        name = f"c{counter[0]}"
        lines.append(_equal(rng, name, names))
        names.append(name)
    for k in range(rng.randint(1, 2)):
        if names and rng.random() < 0.5:
            lines.append(_body_command(rng, names))
        counter[0] += 1
        lines += _loop(rng, f"L{k}", rng.choice("ijm") + str(counter[0]) if rng.random() < 0.7 else "i", names, 1, counter)
    if names:
        lines.append(_body_command(rng, names))
    # decorate: comments, blank lines, continuations
    out = []
    for line in lines:
        if rng.random() < 0.2:
            out.append("# " + rng.choice(["setup", "loop", "x"]))
        if rng.random() < 0.2 and " " in line:
            head, tail = line.split(" ", 1)
            out.append(f"{head} &")
            out.append(f"   {tail}")
            continue
        out.append(line + (" # trailing" if rng.random() < 0.1 else ""))
        if rng.random() < 0.1:
            out.append("")
    return "\n".join(out) + "\n"
