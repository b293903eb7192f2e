"""Versioned knowledge base of library APIs and semantic usage rules.

A knowledge base is assembled from JSON manifest documents.  Each document
declares one or more libraries (exported callables, per-type methods,
constructor return types, canonical import alias, version) plus semantic
rules that reference those libraries.  Loading is strict: a malformed field
raises :class:`ManifestError` naming the offending document path, and a
semantic rule pointing at an undeclared library or callable raises
:class:`DanglingRuleError`.  Documents merge left to right with the right
side winning on key collisions.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from kchlint.distance import nearest
from kchlint.errors import DanglingRuleError, ManifestError

SCHEMA_VERSION = "1"
KB_PATH_ENV = "KCHLINT_KB_PATH"

_BUNDLED_DIR = Path(__file__).parent / "data" / "manifests"


@dataclass(frozen=True)
class LibraryEntry:
    """One library's API surface at a pinned version."""

    name: str
    version: str
    canonical_alias: str
    callables: frozenset[str]
    object_methods: dict[str, frozenset[str]]
    constructors: dict[str, str]  # callable -> object type it returns


@dataclass(frozen=True)
class SemanticRules:
    """Usage rules that relate call sites to preferred APIs."""

    # (library, file extension) -> callable that reads that format
    extension_map: dict[tuple[str, str], str] = field(default_factory=dict)
    # callables that ingest external files, as (library, callable)
    reader_family: frozenset[tuple[str, str]] = field(default_factory=frozenset)
    # natural-language intent word -> (library, callable)
    intent_synonyms: dict[str, tuple[str, str]] = field(default_factory=dict)
    # named intent -> (library, callable) preferred for it
    preferences: dict[str, tuple[str, str]] = field(default_factory=dict)


class KnowledgeBase:
    """Immutable lookup structure over merged manifest documents."""

    def __init__(self, libraries: dict[str, LibraryEntry],
                 semantic: SemanticRules) -> None:
        self.libraries = dict(libraries)
        self.semantic = semantic
        providers: dict[str, list[str]] = {}
        for lib_name in sorted(self.libraries):
            for symbol in self.libraries[lib_name].callables:
                providers.setdefault(symbol, []).append(lib_name)
        self._providers = {name: tuple(libs) for name, libs in providers.items()}
        self._alias_to_library = {
            entry.canonical_alias: entry.name for entry in self.libraries.values()}
        self._module_segments = frozenset(
            name.split(".")[0] for name in self.libraries)

    # -- membership ----------------------------------------------------------

    def has_library(self, library: str) -> bool:
        return library in self.libraries

    def lookup_callable(self, library: str, name: str) -> bool:
        entry = self.libraries.get(library)
        return entry is not None and name in entry.callables

    def lookup_method(self, library: str, type_name: str, name: str) -> bool:
        entry = self.libraries.get(library)
        if entry is None:
            return False
        return name in entry.object_methods.get(type_name, frozenset())

    def providers_of(self, name: str) -> tuple[str, ...]:
        """Libraries exporting *name*, sorted; empty tuple when none do."""
        return self._providers.get(name, ())

    def constructor_type(self, library: str, name: str) -> str | None:
        entry = self.libraries.get(library)
        if entry is None:
            return None
        return entry.constructors.get(name)

    def library_for_alias(self, alias: str) -> str | None:
        return self._alias_to_library.get(alias)

    def canonical_alias(self, library: str) -> str | None:
        entry = self.libraries.get(library)
        return entry.canonical_alias if entry else None

    @property
    def module_first_segments(self) -> frozenset[str]:
        """First dotted segments of all library names, e.g. `matplotlib`."""
        return self._module_segments

    # -- fuzzy lookup --------------------------------------------------------

    def nearest_callable(self, library: str, name: str) -> tuple[str, int] | None:
        entry = self.libraries.get(library)
        if entry is None or not entry.callables:
            return None
        return nearest(name, entry.callables)

    def nearest_method(self, library: str, type_name: str,
                       name: str) -> tuple[str, int] | None:
        entry = self.libraries.get(library)
        if entry is None:
            return None
        methods = entry.object_methods.get(type_name)
        if not methods:
            return None
        return nearest(name, methods)

    # -- semantic rules ------------------------------------------------------

    def extension_callable(self, library: str, ext: str) -> str | None:
        return self.semantic.extension_map.get((library, ext.lower()))

    def is_reader(self, library: str, name: str) -> bool:
        return (library, name) in self.semantic.reader_family

    def intent_target(self, word: str) -> tuple[str, str] | None:
        return self.semantic.intent_synonyms.get(word)

    # -- composition ---------------------------------------------------------

    def merge(self, other: KnowledgeBase) -> KnowledgeBase:
        """New knowledge base with *other* layered on top of this one."""
        libraries = dict(self.libraries)
        libraries.update(other.libraries)
        semantic = SemanticRules(
            extension_map={**self.semantic.extension_map,
                           **other.semantic.extension_map},
            reader_family=self.semantic.reader_family | other.semantic.reader_family,
            intent_synonyms={**self.semantic.intent_synonyms,
                             **other.semantic.intent_synonyms},
            preferences={**self.semantic.preferences,
                         **other.semantic.preferences},
        )
        merged = KnowledgeBase(libraries, semantic)
        _check_rules_resolve(merged, path="<merge>")
        return merged

    def to_manifest(self) -> dict:
        """Single manifest document equivalent to this knowledge base."""
        libraries = {}
        for name in sorted(self.libraries):
            entry = self.libraries[name]
            libraries[name] = {
                "version": entry.version,
                "canonical_alias": entry.canonical_alias,
                "callables": sorted(entry.callables),
                "object_methods": {t: sorted(ms) for t, ms
                                   in sorted(entry.object_methods.items())},
                "constructors": dict(sorted(entry.constructors.items())),
            }
        rules = self.semantic
        return {
            "schema_version": SCHEMA_VERSION,
            "libraries": libraries,
            "semantic": {
                "extension_map": [
                    {"ext": ext, "library": lib, "callable": target}
                    for (lib, ext), target in sorted(rules.extension_map.items(),
                                                     key=lambda kv: kv[0])],
                "reader_family": [
                    {"library": lib, "callable": name}
                    for lib, name in sorted(rules.reader_family)],
                "intent_synonyms": [
                    {"word": word, "library": lib, "callable": name}
                    for word, (lib, name) in sorted(rules.intent_synonyms.items())],
                "preferences": [
                    {"intent": intent, "library": lib, "callable": name}
                    for intent, (lib, name) in sorted(rules.preferences.items())],
            },
        }


# -- strict document parsing -------------------------------------------------


def _require(condition: bool, path: str, where: str, reason: str) -> None:
    if not condition:
        raise ManifestError(f"{path}: {where}", reason)


def _str_field(obj: dict, key: str, path: str, where: str) -> str:
    _require(key in obj, path, where, f"missing required field {key!r}")
    value = obj[key]
    _require(isinstance(value, str) and value != "", path,
             f"{where}.{key}", "must be a non-empty string")
    return value


def _name_list(value: object, path: str, where: str) -> frozenset[str]:
    _require(isinstance(value, list), path, where, "must be a list of names")
    names = []
    for i, item in enumerate(value):
        _require(isinstance(item, str) and item.isidentifier(), path,
                 f"{where}[{i}]", "must be an identifier string")
        names.append(item)
    return frozenset(names)


def _parse_library(name: str, raw: object, path: str) -> LibraryEntry:
    where = f"libraries.{name}"
    _require(isinstance(raw, dict), path, where, "must be an object")
    assert isinstance(raw, dict)
    version = _str_field(raw, "version", path, where)
    alias = _str_field(raw, "canonical_alias", path, where)
    _require(alias.isidentifier(), path, f"{where}.canonical_alias",
             "must be an identifier")
    callables = _name_list(raw.get("callables"), path, f"{where}.callables")
    raw_methods = raw.get("object_methods", {})
    _require(isinstance(raw_methods, dict), path, f"{where}.object_methods",
             "must be an object mapping type names to method lists")
    object_methods = {}
    for type_name, methods in raw_methods.items():
        _require(isinstance(type_name, str) and type_name.isidentifier(), path,
                 f"{where}.object_methods", f"bad type name {type_name!r}")
        object_methods[type_name] = _name_list(
            methods, path, f"{where}.object_methods.{type_name}")
    raw_ctors = raw.get("constructors", {})
    _require(isinstance(raw_ctors, dict), path, f"{where}.constructors",
             "must be an object mapping callables to type names")
    constructors = {}
    for ctor, type_name in raw_ctors.items():
        ctor_where = f"{where}.constructors.{ctor}"
        _require(isinstance(ctor, str) and ctor in callables, path, ctor_where,
                 "constructor must be one of the declared callables")
        _require(isinstance(type_name, str) and type_name in object_methods,
                 path, ctor_where,
                 "constructor type must appear in object_methods")
        constructors[ctor] = type_name
    return LibraryEntry(name=name, version=version, canonical_alias=alias,
                        callables=callables, object_methods=object_methods,
                        constructors=constructors)


def _rule_record(raw: object, keys: tuple[str, ...], path: str,
                 where: str) -> dict[str, str]:
    _require(isinstance(raw, dict), path, where, "must be an object")
    assert isinstance(raw, dict)
    record = {}
    for key in keys:
        record[key] = _str_field(raw, key, path, where)
    extra = set(raw) - set(keys)
    _require(not extra, path, where, f"unexpected fields {sorted(extra)}")
    return record


def _check_rule_target(libraries: dict[str, LibraryEntry], library: str,
                       callable_name: str, path: str, where: str) -> None:
    if library not in libraries:
        raise DanglingRuleError(f"{path}: {where}",
                                f"references undeclared library {library!r}")
    if callable_name not in libraries[library].callables:
        raise DanglingRuleError(
            f"{path}: {where}",
            f"references unknown callable {library}.{callable_name}")


def _parse_semantic(raw: object, libraries: dict[str, LibraryEntry],
                    path: str) -> SemanticRules:
    _require(isinstance(raw, dict), path, "semantic", "must be an object")
    assert isinstance(raw, dict)
    extra = set(raw) - {"extension_map", "reader_family",
                        "intent_synonyms", "preferences"}
    _require(not extra, path, "semantic", f"unexpected fields {sorted(extra)}")

    extension_map: dict[tuple[str, str], str] = {}
    raw_ext = raw.get("extension_map", [])
    _require(isinstance(raw_ext, list), path, "semantic.extension_map",
             "must be a list")
    for i, item in enumerate(raw_ext):
        where = f"semantic.extension_map[{i}]"
        record = _rule_record(item, ("ext", "library", "callable"), path, where)
        _require(record["ext"].startswith("."), path, where,
                 "ext must start with '.'")
        _check_rule_target(libraries, record["library"], record["callable"],
                           path, where)
        extension_map[(record["library"], record["ext"].lower())] = record["callable"]

    family = set()
    raw_family = raw.get("reader_family", [])
    _require(isinstance(raw_family, list), path, "semantic.reader_family",
             "must be a list")
    for i, item in enumerate(raw_family):
        where = f"semantic.reader_family[{i}]"
        record = _rule_record(item, ("library", "callable"), path, where)
        _check_rule_target(libraries, record["library"], record["callable"],
                           path, where)
        family.add((record["library"], record["callable"]))

    synonyms: dict[str, tuple[str, str]] = {}
    raw_syn = raw.get("intent_synonyms", [])
    _require(isinstance(raw_syn, list), path, "semantic.intent_synonyms",
             "must be a list")
    for i, item in enumerate(raw_syn):
        where = f"semantic.intent_synonyms[{i}]"
        record = _rule_record(item, ("word", "library", "callable"), path, where)
        _check_rule_target(libraries, record["library"], record["callable"],
                           path, where)
        synonyms[record["word"].lower()] = (record["library"], record["callable"])

    preferences: dict[str, tuple[str, str]] = {}
    raw_pref = raw.get("preferences", [])
    _require(isinstance(raw_pref, list), path, "semantic.preferences",
             "must be a list")
    for i, item in enumerate(raw_pref):
        where = f"semantic.preferences[{i}]"
        record = _rule_record(item, ("intent", "library", "callable"), path, where)
        _check_rule_target(libraries, record["library"], record["callable"],
                           path, where)
        preferences[record["intent"]] = (record["library"], record["callable"])

    return SemanticRules(extension_map=extension_map,
                         reader_family=frozenset(family),
                         intent_synonyms=synonyms, preferences=preferences)


def _check_rules_resolve(kb: KnowledgeBase, path: str) -> None:
    rules = kb.semantic
    targets = ([(lib, name) for (lib, _), name in rules.extension_map.items()]
               + list(rules.reader_family)
               + list(rules.intent_synonyms.values())
               + list(rules.preferences.values()))
    for library, name in targets:
        if not kb.lookup_callable(library, name):
            raise DanglingRuleError(
                path, f"semantic rule references {library}.{name}, "
                      "which the merged libraries do not declare")


def parse_manifest(document: object, path: str = "<manifest>") -> KnowledgeBase:
    """Validate one manifest document and build a knowledge base from it."""
    _require(isinstance(document, dict), path, "$", "document must be an object")
    assert isinstance(document, dict)
    extra = set(document) - {"schema_version", "libraries", "semantic"}
    _require(not extra, path, "$", f"unexpected fields {sorted(extra)}")
    version = document.get("schema_version")
    _require(version == SCHEMA_VERSION, path, "schema_version",
             f"expected {SCHEMA_VERSION!r}, got {version!r}")
    raw_libraries = document.get("libraries")
    _require(isinstance(raw_libraries, dict) and raw_libraries, path,
             "libraries", "must be a non-empty object")
    assert isinstance(raw_libraries, dict)
    libraries = {}
    for name, raw in raw_libraries.items():
        _require(isinstance(name, str) and name != "", path, "libraries",
                 f"bad library name {name!r}")
        libraries[name] = _parse_library(name, raw, path)
    semantic = _parse_semantic(document.get("semantic", {}), libraries, path)
    return KnowledgeBase(libraries, semantic)


def load_manifest(path: str | Path) -> KnowledgeBase:
    """Load and validate a single manifest file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ManifestError(str(path), f"cannot read file: {exc}") from exc
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifestError(str(path), f"invalid JSON: {exc}") from exc
    return parse_manifest(document, path=str(path))


def load_kb(path: str | Path) -> KnowledgeBase:
    """Load a knowledge base from a manifest file or a directory of them.

    Directory entries merge in sorted filename order, later files winning
    on collisions.
    """
    path = Path(path)
    if path.is_dir():
        files = sorted(path.glob("*.json"))
        if not files:
            raise ManifestError(str(path), "directory holds no *.json manifests")
        kb = load_manifest(files[0])
        for manifest in files[1:]:
            kb = kb.merge(load_manifest(manifest))
        return kb
    return load_manifest(path)


def bundled_kb() -> KnowledgeBase:
    """The knowledge base shipped with the package."""
    return load_kb(_BUNDLED_DIR)


def default_kb() -> KnowledgeBase:
    """Bundled knowledge base, unless KCHLINT_KB_PATH points elsewhere."""
    override = os.environ.get(KB_PATH_ENV)
    if override:
        return load_kb(override)
    return bundled_kb()
