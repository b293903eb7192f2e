"""Knowledge base loading: strict manifests, merging, lookup, env override."""

import json

import pytest

from kchlint.errors import DanglingRuleError, ManifestError
from kchlint.kb import (
    KB_PATH_ENV,
    SCHEMA_VERSION,
    KnowledgeBase,
    bundled_kb,
    default_kb,
    load_kb,
    load_manifest,
    parse_manifest,
)


def minimal_doc(**overrides):
    doc = {
        "schema_version": SCHEMA_VERSION,
        "libraries": {
            "tinylib": {
                "version": "1.0",
                "canonical_alias": "tl",
                "callables": ["alpha", "beta", "make_thing"],
                "constructors": {"make_thing": "Thing"},
                "object_methods": {"Thing": ["run", "stop"]},
            }
        },
        "semantic": {
            "extension_map": [],
            "reader_family": [],
            "intent_synonyms": [],
            "preferences": [],
        },
    }
    doc.update(overrides)
    return doc


def parse_doc(doc, path="<test>"):
    return parse_manifest(doc, path)


# -- strict validation -----------------------------------------------------------


def test_minimal_manifest_parses():
    kb = parse_doc(minimal_doc())
    assert kb.has_library("tinylib")
    assert kb.lookup_callable("tinylib", "alpha")
    assert kb.canonical_alias("tinylib") == "tl"


def test_wrong_schema_version_rejected():
    with pytest.raises(ManifestError) as exc:
        parse_doc(minimal_doc(schema_version="99"))
    assert "schema_version" in str(exc.value)


def test_error_message_names_document_path():
    with pytest.raises(ManifestError) as exc:
        parse_manifest(minimal_doc(schema_version="99"), "manifests/broken.json")
    assert "manifests/broken.json" in str(exc.value)


def test_unknown_top_level_field_rejected():
    with pytest.raises(ManifestError):
        parse_doc(minimal_doc(surprise=True))


def test_missing_version_rejected():
    doc = minimal_doc()
    del doc["libraries"]["tinylib"]["version"]
    with pytest.raises(ManifestError):
        parse_doc(doc)


def test_non_identifier_callable_rejected():
    doc = minimal_doc()
    doc["libraries"]["tinylib"]["callables"] = ["ok", "not ok"]
    with pytest.raises(ManifestError):
        parse_doc(doc)


def test_constructor_must_name_known_callable():
    doc = minimal_doc()
    doc["libraries"]["tinylib"]["constructors"] = {"ghost": "Thing"}
    with pytest.raises(ManifestError):
        parse_doc(doc)


def test_constructor_type_must_have_methods():
    doc = minimal_doc()
    doc["libraries"]["tinylib"]["constructors"] = {"alpha": "Phantom"}
    with pytest.raises(ManifestError):
        parse_doc(doc)


def test_extension_rule_must_point_at_known_callable():
    doc = minimal_doc()
    doc["semantic"]["extension_map"] = [
        {"library": "tinylib", "ext": ".xyz", "callable": "missing"}
    ]
    with pytest.raises(DanglingRuleError):
        parse_doc(doc)


def test_reader_family_must_point_at_known_callable():
    doc = minimal_doc()
    doc["semantic"]["reader_family"] = [{"library": "tinylib", "callable": "missing"}]
    with pytest.raises(DanglingRuleError):
        parse_doc(doc)


def test_synonym_rule_must_point_at_known_library():
    doc = minimal_doc()
    doc["semantic"]["intent_synonyms"] = [
        {"word": "speed", "library": "nowhere", "callable": "alpha"}
    ]
    with pytest.raises(DanglingRuleError):
        parse_doc(doc)


def test_rule_record_extra_field_rejected():
    doc = minimal_doc()
    doc["semantic"]["reader_family"] = [
        {"library": "tinylib", "callable": "alpha", "bonus": 1}
    ]
    with pytest.raises(ManifestError):
        parse_doc(doc)


def test_load_manifest_rejects_bad_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ManifestError):
        load_manifest(str(path))


def test_load_manifest_rejects_missing_file(tmp_path):
    with pytest.raises(ManifestError):
        load_manifest(str(tmp_path / "absent.json"))


# -- merging ----------------------------------------------------------------------


def other_doc():
    return {
        "schema_version": SCHEMA_VERSION,
        "libraries": {
            "otherlib": {
                "version": "2.0",
                "canonical_alias": "ol",
                "callables": ["alpha", "gamma"],
                "constructors": {},
                "object_methods": {},
            }
        },
        "semantic": {
            "extension_map": [],
            "reader_family": [],
            "intent_synonyms": [],
            "preferences": [],
        },
    }


def test_merge_unions_libraries():
    merged = parse_doc(minimal_doc()).merge(parse_doc(other_doc()))
    assert merged.has_library("tinylib")
    assert merged.has_library("otherlib")
    assert merged.providers_of("alpha") == ("otherlib", "tinylib")


def test_merge_right_side_wins_on_same_library():
    updated = minimal_doc()
    updated["libraries"]["tinylib"]["version"] = "9.9"
    updated["libraries"]["tinylib"]["callables"] = ["alpha"]
    updated["libraries"]["tinylib"]["constructors"] = {}
    updated["libraries"]["tinylib"]["object_methods"] = {}
    merged = parse_doc(minimal_doc()).merge(parse_doc(updated))
    entry = merged.libraries["tinylib"]
    assert entry.version == "9.9"
    assert merged.lookup_callable("tinylib", "beta") is False


def test_merge_with_self_is_identity(kb):
    assert kb.merge(kb).to_manifest() == kb.to_manifest()
    small = parse_doc(minimal_doc())
    assert small.merge(small).to_manifest() == small.to_manifest()


def test_merge_checks_rules_still_resolve():
    base = minimal_doc()
    base["semantic"]["reader_family"] = [{"library": "tinylib", "callable": "alpha"}]
    shrunk = minimal_doc()
    shrunk["libraries"]["tinylib"]["callables"] = ["beta"]
    shrunk["libraries"]["tinylib"]["constructors"] = {}
    shrunk["libraries"]["tinylib"]["object_methods"] = {}
    with pytest.raises(DanglingRuleError):
        parse_doc(base).merge(parse_doc(shrunk))


def test_to_manifest_round_trips(tmp_path):
    kb = parse_doc(minimal_doc())
    doc = kb.to_manifest()
    again = parse_manifest(doc, "<round-trip>")
    assert again.to_manifest() == doc


# -- directory and environment loading ----------------------------------------------


def write_doc(path, doc):
    path.write_text(json.dumps(doc))


def test_load_kb_from_file(tmp_path):
    path = tmp_path / "one.json"
    write_doc(path, minimal_doc())
    kb = load_kb(str(path))
    assert kb.has_library("tinylib")


def test_load_kb_from_directory_merges_sorted(tmp_path):
    write_doc(tmp_path / "a.json", minimal_doc())
    write_doc(tmp_path / "b.json", other_doc())
    kb = load_kb(str(tmp_path))
    assert kb.has_library("tinylib") and kb.has_library("otherlib")


def test_load_kb_empty_directory_rejected(tmp_path):
    with pytest.raises(ManifestError):
        load_kb(str(tmp_path))


def test_env_override_replaces_bundled(tmp_path, monkeypatch):
    path = tmp_path / "only.json"
    write_doc(path, minimal_doc())
    monkeypatch.setenv(KB_PATH_ENV, str(path))
    kb = default_kb()
    assert kb.has_library("tinylib")
    assert not kb.has_library("pandas")


def test_default_without_env_is_bundled(monkeypatch):
    monkeypatch.delenv(KB_PATH_ENV, raising=False)
    kb = default_kb()
    assert kb.has_library("pandas")


# -- bundled content -----------------------------------------------------------------


def test_bundled_covers_five_libraries(kb):
    for lib in ["pandas", "numpy", "matplotlib.pyplot", "requests", "json"]:
        assert kb.has_library(lib), lib
        assert kb.libraries[lib].version


def test_bundled_lookups(kb):
    assert kb.lookup_callable("pandas", "read_csv")
    assert not kb.lookup_callable("pandas", "read_exel")
    assert kb.lookup_method("pandas", "DataFrame", "head")
    assert kb.lookup_method("requests", "Response", "raise_for_status")
    assert kb.canonical_alias("numpy") == "np"
    assert kb.canonical_alias("matplotlib.pyplot") == "plt"


def test_bundled_providers_index(kb):
    assert kb.providers_of("read_csv") == ("pandas",)
    assert kb.providers_of("get") == ("matplotlib.pyplot", "requests")
    assert kb.providers_of("load") == ("json", "numpy")
    assert kb.providers_of("no_such_callable") == ()


def test_bundled_semantic_rules(kb):
    assert kb.extension_callable("pandas", ".csv") == "read_csv"
    assert kb.extension_callable("pandas", ".XLSX") == "read_excel"
    assert kb.is_reader("pandas", "read_excel")
    assert not kb.is_reader("pandas", "to_csv")
    assert kb.intent_target("average") == ("numpy", "mean")
    assert kb.constructor_type("pandas", "read_csv") == "DataFrame"
    assert kb.constructor_type("requests", "get") == "Response"


def test_bundled_alias_and_module_maps(kb):
    assert kb.library_for_alias("pd") == "pandas"
    assert kb.library_for_alias("plt") == "matplotlib.pyplot"
    assert "matplotlib" in kb.module_first_segments
    assert "pandas" in kb.module_first_segments


def test_nearest_callable_returns_closest(kb):
    assert kb.nearest_callable("pandas", "read_exel") == ("read_excel", 1)
    assert kb.nearest_callable("no_such_library", "x") is None


def test_nearest_method(kb):
    assert kb.nearest_method("pandas", "DataFrame", "hed") == ("head", 1)


def test_nearest_recalls_every_known_name_exactly(kb):
    for library_name, entry in kb.libraries.items():
        for name in entry.callables:
            assert kb.nearest_callable(library_name, name) == (name, 0)
        for type_name, methods in entry.object_methods.items():
            for method in methods:
                assert kb.nearest_method(library_name, type_name, method) == (
                    method,
                    0,
                )


def test_knowledge_base_is_value_like(kb):
    assert isinstance(kb, KnowledgeBase)
    assert bundled_kb().to_manifest() == kb.to_manifest()
