import json
import subprocess

import pytest

from kb_builder import ImportFailure, IntrospectionSpec, build_all, build_manifest
from kb_builder.introspect import write_manifests


def library_entry(document, name):
    return document["libraries"][name]


def test_json_manifest_has_core_callables_and_version():
    doc = build_manifest(IntrospectionSpec(("json",)))
    entry = library_entry(doc, "json")
    assert {"load", "loads", "dump", "dumps"} <= set(entry["callables"])
    assert isinstance(entry["version"], str) and entry["version"]


def test_pandas_manifest_enumerates_frame_and_series_methods():
    doc = build_manifest(IntrospectionSpec(("pandas",)))
    entry = library_entry(doc, "pandas")
    assert "DataFrame" in entry["object_methods"]
    assert "Series" in entry["object_methods"]
    assert "head" in entry["object_methods"]["DataFrame"]
    assert "describe" in entry["object_methods"]["Series"]


def test_unimportable_library_raises():
    with pytest.raises(ImportFailure) as exc:
        build_manifest(IntrospectionSpec(("not_a_lib",)))
    assert exc.value.library == "not_a_lib"


def test_bad_module_path_rejected():
    with pytest.raises(ValueError):
        IntrospectionSpec(("os; import sys",))


def test_build_all_keeps_going_past_failures():
    result = build_all(IntrospectionSpec(("json", "not_a_lib")))
    assert sorted(result.documents) == ["json"]
    assert [f.library for f in result.failures] == ["not_a_lib"]
    assert result.merged is not None
    assert sorted(result.merged["libraries"]) == ["json"]


def test_all_failures_means_no_merged_document():
    result = build_all(IntrospectionSpec(("not_a_lib",)))
    assert result.documents == {}
    assert result.merged is None


def test_callables_and_methods_are_sorted():
    doc = build_manifest(IntrospectionSpec(("numpy",)))
    entry = library_entry(doc, "numpy")
    assert entry["callables"] == sorted(entry["callables"])
    for methods in entry["object_methods"].values():
        assert methods == sorted(methods)


def test_two_builds_are_identical():
    spec = IntrospectionSpec(("json", "numpy"))
    assert build_manifest(spec) == build_manifest(spec)


def test_constructors_only_reference_surviving_names():
    doc = build_manifest(IntrospectionSpec(("pandas", "requests", "numpy")))
    for name, entry in doc["libraries"].items():
        known = set(entry["callables"])
        for callee, type_name in entry["constructors"].items():
            assert callee in known
            assert type_name in entry["object_methods"]


def test_object_type_override_narrows_enumeration():
    spec = IntrospectionSpec(("pandas",), object_types={"pandas": ("Series",)})
    entry = library_entry(build_manifest(spec), "pandas")
    assert sorted(entry["object_methods"]) == ["Series"]
    # DataFrame constructors drop out because the type is not enumerated
    assert "read_csv" not in entry["constructors"]
    assert entry["constructors"].get("Series") == "Series"


def test_version_walks_up_to_parent_package():
    import matplotlib

    doc = build_manifest(IntrospectionSpec(("matplotlib.pyplot",)))
    entry = library_entry(doc, "matplotlib.pyplot")
    assert entry["version"] == matplotlib.__version__


def test_seed_rules_attach_to_their_library():
    doc = build_manifest(IntrospectionSpec(("json",)))
    assert {"ext": ".json", "library": "json", "callable": "load"} in doc[
        "semantic"
    ]["extension_map"]
    doc = build_manifest(IntrospectionSpec(("numpy",)))
    assert {"word": "average", "library": "numpy", "callable": "mean"} in doc[
        "semantic"
    ]["intent_synonyms"]


def test_every_emitted_manifest_validates_in_the_checker(tmp_path):
    spec = IntrospectionSpec(
        ("numpy", "pandas", "requests", "matplotlib.pyplot", "json")
    )
    written = write_manifests(build_all(spec), tmp_path)
    assert [p.name for p in written] == [
        "json.json",
        "matplotlib.pyplot.json",
        "numpy.json",
        "pandas.json",
        "requests.json",
        "all.json",
    ]
    proc = subprocess.run(
        ["kchlint", "kb", "validate", *[str(p) for p in written]],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.count("OK ") == 6


def test_merged_document_carries_all_libraries(tmp_path):
    result = build_all(IntrospectionSpec(("json", "requests")))
    write_manifests(result, tmp_path)
    merged = json.loads((tmp_path / "all.json").read_text(encoding="utf-8"))
    assert sorted(merged["libraries"]) == ["json", "requests"]
    assert merged["schema_version"] == "1"
