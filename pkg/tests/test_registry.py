import json

import pytest

from lammps_lint.registry import (
    ArgSlot,
    CommandSignature,
    DuplicateSignature,
    Registry,
    RegistryError,
    SlotKind,
    load_registry,
    register_signature,
)


def test_core_registry_loads_and_round_trips():
    reg = load_registry()
    assert reg.version == "lammps-core/1.0"
    assert len(reg) >= 50
    again = Registry.from_dict(reg.to_dict())
    assert again.to_dict() == reg.to_dict()


def test_load_from_file(tmp_path):
    path = tmp_path / "sig.json"
    path.write_text(json.dumps({"version": "t", "commands": [{"name": "hello", "positional": [{"name": "n", "kind": "int"}]}]}))
    reg = load_registry(path)
    assert "hello" in reg and reg.version == "t"


@pytest.mark.parametrize(
    "kind, token, value",
    [
        (SlotKind.INT, "-3", -3),
        (SlotKind.FLOAT, "1e-3", 0.001),
        (SlotKind.NUMBER, "4", 4),
        (SlotKind.NUMBER, "4.5", 4.5),
        (SlotKind.IDENTIFIER, "my_id2", "my_id2"),
        (SlotKind.STAR, "1*3", "1*3"),
        (SlotKind.QUOTED, '"a b"', "a b"),
        (SlotKind.WORD, "anything/goes", "anything/goes"),
    ],
)
def test_slot_conversion(kind, token, value):
    assert ArgSlot("x", kind).convert(token) == value


@pytest.mark.parametrize(
    "kind, token",
    [(SlotKind.INT, "1.5"), (SlotKind.FLOAT, "abc"), (SlotKind.IDENTIFIER, "a-b"), (SlotKind.STAR, "a*"), (SlotKind.QUOTED, "bare")],
)
def test_slot_rejects(kind, token):
    with pytest.raises(ValueError):
        ArgSlot("x", kind).convert(token)


def test_accept_words_and_enums():
    slot = ArgSlot("lo", SlotKind.FLOAT, accept=("INF", "EDGE"))
    assert slot.convert("INF") == "INF"
    enum = ArgSlot("u", SlotKind.ENUM, values=("metal", "real"))
    assert enum.convert("real") == "real"
    with pytest.raises(ValueError):
        enum.convert("lj")
    with pytest.raises(RegistryError):
        ArgSlot("e", SlotKind.ENUM)


def test_register_is_immutable():
    base = load_registry()
    sig = CommandSignature("brand_new")
    extended = register_signature(base, sig)
    assert "brand_new" in extended and "brand_new" not in base
    with pytest.raises(DuplicateSignature):
        extended.register(sig)
    assert extended.register(sig, overwrite=True).get("brand_new") is sig


@pytest.mark.parametrize(
    "doc",
    [
        {},
        {"commands": [{"positional": []}]},
        {"commands": [{"name": "a", "positional": [{"name": "x"}]}]},
        {"commands": [{"name": "a", "positional": [{"name": "x", "kind": "complex"}]}]},
        {"commands": [{"name": "a", "dispatch": "nope"}]},
        {"commands": [{"name": "a"}, {"name": "a"}]},
        {"commands": [{"name": "a", "required_keywords": [["k"]]}]},
    ],
)
def test_malformed_documents(doc):
    with pytest.raises(RegistryError):
        Registry.from_dict(doc)


def test_duplicate_json_keys_are_rejected():
    with pytest.raises(RegistryError):
        Registry.from_json('{"commands": [], "commands": []}')
