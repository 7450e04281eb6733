"""Declarative command signatures for the supported LAMMPS subset.

Signatures are data: the shipped set lives in ``data/signatures/lammps-core.json``
and can be extended at run time with :func:`register_signature` or by loading
another JSON document.  A signature describes positional slots, optional
variadic trailing arguments, keyword groups, and (for commands such as ``fix``)
a style slot that dispatches to a per-style sub-signature.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

DEFAULT_SIGNATURES = "lammps-core.json"

_INT_RE = re.compile(r"[+-]?\d+\Z")
_FLOAT_RE = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?\Z")
_IDENT_RE = re.compile(r"[A-Za-z0-9_]+\Z")
_STAR_RE = re.compile(r"(?:\*|\d+|\d+\*|\*\d+|\d+\*\d+)\Z")


class RegistryError(ValueError):
    """Malformed signature data."""


class DuplicateSignature(RegistryError):
    pass


class SlotKind(str, enum.Enum):
    INT = "int"
    FLOAT = "float"
    NUMBER = "number"
    WORD = "word"
    QUOTED = "quoted"
    IDENTIFIER = "identifier"
    ENUM = "enum"
    STAR = "star"
    FILE = "file"


def is_quoted(token: str) -> bool:
    return len(token) >= 2 and token[0] in "\"'" and token[-1] == token[0]


def unquote(token: str) -> str:
    if token.startswith('"""') and token.endswith('"""') and len(token) >= 6:
        return token[3:-3]
    return token[1:-1] if is_quoted(token) else token


@dataclass(frozen=True)
class ArgSlot:
    name: str
    kind: SlotKind
    values: tuple[str, ...] = ()
    # literal words accepted in addition to the kind (e.g. INF/EDGE for region bounds)
    accept: tuple[str, ...] = ()
    # symbol-table role: "region", "group", "fix", "compute" or "dump"
    defines: str | None = None
    refers: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", SlotKind(self.kind))
        if self.kind is SlotKind.ENUM and not self.values:
            raise RegistryError(f"enum slot {self.name!r} has no values")

    def convert(self, token: str) -> Any:
        """Typed value of *token* for this slot; raises ValueError if it does not fit."""
        text = unquote(token)
        if text in self.accept:
            return text
        kind = self.kind
        if kind is SlotKind.INT:
            if not _INT_RE.match(text):
                raise ValueError(f"expected an integer, got {token!r}")
            return int(text)
        if kind is SlotKind.FLOAT:
            if not _FLOAT_RE.match(text):
                raise ValueError(f"expected a number, got {token!r}")
            return float(text)
        if kind is SlotKind.NUMBER:
            if _INT_RE.match(text):
                return int(text)
            if not _FLOAT_RE.match(text):
                raise ValueError(f"expected a number, got {token!r}")
            return float(text)
        if kind is SlotKind.ENUM:
            if text not in self.values:
                raise ValueError(f"expected one of {', '.join(self.values)}, got {token!r}")
            return text
        if kind is SlotKind.IDENTIFIER:
            if not _IDENT_RE.match(text):
                raise ValueError(f"expected an ID (letters, digits, underscore), got {token!r}")
            return text
        if kind is SlotKind.STAR:
            if not _STAR_RE.match(text):
                raise ValueError(f"expected a type index, '*' or a range like 1*3, got {token!r}")
            return text
        if kind is SlotKind.QUOTED:
            if not is_quoted(token):
                raise ValueError(f"expected a quoted string, got {token!r}")
            return text
        # WORD and FILE accept any token
        if not text:
            raise ValueError("expected a non-empty argument")
        return text

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"name": self.name, "kind": self.kind.value}
        if self.values:
            d["values"] = list(self.values)
        if self.accept:
            d["accept"] = list(self.accept)
        if self.defines:
            d["defines"] = self.defines
        if self.refers:
            d["refers"] = self.refers
        return d


@dataclass(frozen=True)
class Variadic:
    slot: ArgSlot
    min_count: int = 0


@dataclass(frozen=True)
class KeywordGroup:
    word: str
    args: tuple[ArgSlot, ...] = ()
    repeatable: bool = False
    variadic: ArgSlot | None = None


@dataclass(frozen=True)
class CommandSignature:
    name: str
    positional: tuple[ArgSlot, ...] = ()
    min_positional: int | None = None
    keywords: Mapping[str, KeywordGroup] = field(default_factory=dict)
    variadic: Variadic | None = None
    # name of the positional slot whose value selects a sub-signature
    dispatch: str | None = None
    styles: Mapping[str, "CommandSignature"] = field(default_factory=dict)
    # each inner tuple lists alternatives; at least one of them must appear
    required_keywords: tuple[tuple[str, ...], ...] = ()
    doc_ref: str = ""

    def __post_init__(self):
        if self.min_positional is None:
            object.__setattr__(self, "min_positional", len(self.positional))
        names = [s.name for s in self.positional]
        if len(set(names)) != len(names):
            raise RegistryError(f"{self.name}: positional slot names are not unique: {names}")
        if not 0 <= self.min_positional <= len(self.positional):
            raise RegistryError(f"{self.name}: min_positional {self.min_positional} out of range")
        if self.dispatch is not None:
            if self.dispatch not in names:
                raise RegistryError(f"{self.name}: dispatch slot {self.dispatch!r} is not a positional slot")
            if names.index(self.dispatch) >= self.min_positional:
                raise RegistryError(f"{self.name}: dispatch slot must be required")
        if not self.styles:
            for group in self.required_keywords:
                undeclared = [w for w in group if w not in self.keywords]
                if undeclared:
                    raise RegistryError(f"{self.name}: required keywords {undeclared} are not declared")

    @property
    def dispatch_index(self) -> int | None:
        if self.dispatch is None:
            return None
        return [s.name for s in self.positional].index(self.dispatch)


def _slot_from_dict(d: Mapping[str, Any], where: str) -> ArgSlot:
    if "name" not in d or "kind" not in d:
        raise RegistryError(f"{where}: slot needs 'name' and 'kind'")
    try:
        kind = SlotKind(d["kind"])
    except ValueError:
        raise RegistryError(f"{where}: unknown slot kind {d['kind']!r}") from None
    return ArgSlot(
        name=d["name"],
        kind=kind,
        values=tuple(str(v) for v in d.get("values", ())),
        accept=tuple(d.get("accept", ())),
        defines=d.get("defines"),
        refers=d.get("refers"),
    )


def _keyword_from_dict(word: str, d: Mapping[str, Any], where: str) -> KeywordGroup:
    args = tuple(_slot_from_dict(a, f"{where}.args[{i}]") for i, a in enumerate(d.get("args", ())))
    names = [a.name for a in args]
    if len(set(names)) != len(names):
        raise RegistryError(f"{where}: keyword slot names are not unique")
    variadic = _slot_from_dict(d["variadic"], f"{where}.variadic") if d.get("variadic") else None
    return KeywordGroup(word, args, bool(d.get("repeatable", False)), variadic)


def signature_from_dict(d: Mapping[str, Any], where: str = "command") -> CommandSignature:
    if "name" not in d:
        raise RegistryError(f"{where}: missing 'name'")
    where = f"{where}({d['name']})"
    positional = tuple(_slot_from_dict(s, f"{where}.positional[{i}]") for i, s in enumerate(d.get("positional", ())))
    keywords = {w: _keyword_from_dict(w, k, f"{where}.keywords.{w}") for w, k in d.get("keywords", {}).items()}
    variadic = None
    if d.get("variadic"):
        v = d["variadic"]
        variadic = Variadic(_slot_from_dict(v, f"{where}.variadic"), int(v.get("min", 0)))
    styles = {
        style: signature_from_dict({"name": f"{d['name']} {style}", **sub}, f"{where}.styles")
        for style, sub in d.get("styles", {}).items()
    }
    return CommandSignature(
        name=d["name"],
        positional=positional,
        min_positional=d.get("min_positional"),
        keywords=keywords,
        variadic=variadic,
        dispatch=d.get("dispatch"),
        styles=styles,
        required_keywords=tuple(tuple(g) for g in d.get("required_keywords", ())),
        doc_ref=d.get("doc_ref", ""),
    )


def signature_to_dict(sig: CommandSignature, *, sub: bool = False) -> dict:
    d: dict[str, Any] = {} if sub else {"name": sig.name}
    if sig.positional:
        d["positional"] = [s.to_dict() for s in sig.positional]
    if sig.min_positional != len(sig.positional):
        d["min_positional"] = sig.min_positional
    if sig.variadic:
        d["variadic"] = {**sig.variadic.slot.to_dict(), "min": sig.variadic.min_count}
    if sig.keywords:
        d["keywords"] = {}
        for w, k in sig.keywords.items():
            kd: dict[str, Any] = {"args": [a.to_dict() for a in k.args]}
            if k.repeatable:
                kd["repeatable"] = True
            if k.variadic:
                kd["variadic"] = k.variadic.to_dict()
            d["keywords"][w] = kd
    if sig.dispatch:
        d["dispatch"] = sig.dispatch
        d["styles"] = {s: signature_to_dict(v, sub=True) for s, v in sig.styles.items()}
    if sig.required_keywords:
        d["required_keywords"] = [list(g) for g in sig.required_keywords]
    if sig.doc_ref:
        d["doc_ref"] = sig.doc_ref
    return d


def _no_duplicate_keys(pairs):
    d = {}
    for k, v in pairs:
        if k in d:
            raise RegistryError(f"duplicate key {k!r} in signature document")
        d[k] = v
    return d


@dataclass(frozen=True)
class Registry:
    """Immutable name -> signature map; :meth:`register` returns a new registry."""

    signatures: Mapping[str, CommandSignature] = field(default_factory=dict)
    version: str = "custom"

    def get(self, name: str) -> CommandSignature | None:
        return self.signatures.get(name)

    def __contains__(self, name: str) -> bool:
        return name in self.signatures

    def __iter__(self):
        return iter(self.signatures.values())

    def __len__(self) -> int:
        return len(self.signatures)

    def register(self, sig: CommandSignature, overwrite: bool = False) -> "Registry":
        if sig.name in self.signatures and not overwrite:
            raise DuplicateSignature(f"command {sig.name!r} is already registered")
        return replace(self, signatures={**self.signatures, sig.name: sig})

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "Registry":
        if not isinstance(doc, Mapping) or not isinstance(doc.get("commands"), list):
            raise RegistryError("signature document needs a 'commands' list")
        registry = cls(version=str(doc.get("version", "custom")))
        for i, entry in enumerate(doc["commands"]):
            registry = registry.register(signature_from_dict(entry, f"commands[{i}]"))
        return registry

    @classmethod
    def from_json(cls, text: str) -> "Registry":
        return cls.from_dict(json.loads(text, object_pairs_hook=_no_duplicate_keys))

    def to_dict(self) -> dict:
        return {"version": self.version, "commands": [signature_to_dict(s) for s in self.signatures.values()]}


def register_signature(registry: Registry, sig: CommandSignature, overwrite: bool = False) -> Registry:
    return registry.register(sig, overwrite=overwrite)


_default: Registry | None = None


def load_registry(path: str | Path | None = None) -> Registry:
    """Load a signature file; with no path, the shipped core registry (cached)."""
    global _default
    if path is not None:
        return Registry.from_json(Path(path).read_text(encoding="utf-8"))
    if _default is None:
        text = resources.files("lammps_lint").joinpath("data").joinpath("signatures").joinpath(DEFAULT_SIGNATURES).read_text("utf-8")
        _default = Registry.from_json(text)
    return _default
