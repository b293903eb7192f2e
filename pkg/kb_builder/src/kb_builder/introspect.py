"""Builds manifest documents by importing libraries and enumerating their
public surface.

A name counts as a public callable when it does not start with an
underscore, it is a Python identifier, and the imported attribute is
callable; when the module defines an export list, only listed names are
considered. Versions come from the nearest ``__version__`` walking from the
module up through its parent packages, falling back to installed package
metadata. Constructor return types and canonical aliases come from the
curated tables, filtered against what introspection actually found, so a
manifest never references a callable or type it does not itself define.

Only top-level module namespaces are enumerated; submodules must be
requested explicitly (for example matplotlib.pyplot).
"""

import importlib
import importlib.metadata
import importlib.resources
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from kb_builder.tables import CANONICAL_ALIASES, CONSTRUCTORS, OBJECT_TYPES

SCHEMA_VERSION = "1"
RULE_KINDS = ("extension_map", "reader_family", "intent_synonyms", "preferences")


class ImportFailure(Exception):
    """A requested library could not be imported."""

    def __init__(self, library: str, reason: str):
        super().__init__(f"{library}: {reason}")
        self.library = library
        self.reason = reason


@dataclass(frozen=True)
class IntrospectionSpec:
    """What to introspect and where the manifests go."""

    libraries: tuple[str, ...]
    # per-library override of which object types to enumerate
    object_types: dict[str, tuple[str, ...]] = field(default_factory=dict)
    out_dir: Path | None = None

    def __post_init__(self):
        for library in self.libraries:
            if not all(part.isidentifier() for part in library.split(".")):
                raise ValueError(f"not an importable module path: {library!r}")

    def types_for(self, library: str) -> tuple[str, ...]:
        if library in self.object_types:
            return self.object_types[library]
        return tuple(OBJECT_TYPES.get(library, ()))


def _import(library: str):
    try:
        return importlib.import_module(library)
    except Exception as exc:  # ImportError, but also module-level crashes
        raise ImportFailure(library, f"{type(exc).__name__}: {exc}") from exc


def _public_callables(module) -> list[str]:
    exported = getattr(module, "__all__", None)
    candidates = list(exported) if exported is not None else dir(module)
    names = set()
    for name in candidates:
        if not isinstance(name, str) or name.startswith("_"):
            continue
        if not name.isidentifier():
            continue
        try:
            attr = getattr(module, name)
        except AttributeError:
            continue
        if callable(attr):
            names.add(name)
    return sorted(names)


def _discover_version(library: str) -> str:
    parts = library.split(".")
    for depth in range(len(parts), 0, -1):
        owner = sys.modules.get(".".join(parts[:depth]))
        version = getattr(owner, "__version__", None)
        if isinstance(version, str) and version:
            return version
    try:
        return importlib.metadata.version(parts[0])
    except importlib.metadata.PackageNotFoundError:
        return "0"


def _object_methods(module, type_names: tuple[str, ...]) -> dict[str, list[str]]:
    out = {}
    for type_name in type_names:
        cls = getattr(module, type_name, None)
        if cls is None:
            continue
        methods = set()
        for name in dir(cls):
            if name.startswith("_") or not name.isidentifier():
                continue
            try:
                attr = getattr(cls, name)
            except Exception:
                continue
            if callable(attr):
                methods.add(name)
        if methods:
            out[type_name] = sorted(methods)
    return out


def _constructors(library: str, callables: list[str],
                  object_methods: dict[str, list[str]]) -> dict[str, str]:
    known = set(callables)
    table = CONSTRUCTORS.get(library, {})
    return {
        name: type_name
        for name, type_name in sorted(table.items())
        if name in known and type_name in object_methods
    }


def _seed_rules() -> dict:
    raw = (
        importlib.resources.files("kb_builder")
        .joinpath("data/seed_rules.json")
        .read_text(encoding="utf-8")
    )
    return json.loads(raw)


def _rules_for(library: str, callables: list[str]) -> dict:
    """Curated semantic rules, minus any whose target did not survive."""
    block = _seed_rules().get(library, {})
    known = set(callables)
    rules = {}
    for kind in RULE_KINDS:
        rules[kind] = [
            record for record in block.get(kind, [])
            if record.get("callable") in known
        ]
    return rules


def _build_library(library: str, type_names: tuple[str, ...]) -> dict:
    module = _import(library)
    callables = _public_callables(module)
    object_methods = _object_methods(module, type_names)
    return {
        "version": _discover_version(library),
        "canonical_alias": CANONICAL_ALIASES.get(library, library.split(".")[-1]),
        "callables": callables,
        "constructors": _constructors(library, callables, object_methods),
        "object_methods": object_methods,
    }


def _document(entries: dict[str, dict]) -> dict:
    semantic = {kind: [] for kind in RULE_KINDS}
    for library in sorted(entries):
        rules = _rules_for(library, entries[library]["callables"])
        for kind in RULE_KINDS:
            semantic[kind].extend(rules[kind])
    return {
        "schema_version": SCHEMA_VERSION,
        "libraries": dict(sorted(entries.items())),
        "semantic": semantic,
    }


def build_manifest(spec: IntrospectionSpec) -> dict:
    """One manifest document covering every library in the spec.

    Raises ImportFailure on the first library that cannot be imported;
    use build_all to keep going and collect failures instead.
    """
    entries = {
        library: _build_library(library, spec.types_for(library))
        for library in spec.libraries
    }
    return _document(entries)


@dataclass(frozen=True)
class BuildResult:
    documents: dict[str, dict]  # per-library manifest documents
    merged: dict | None  # all built libraries in one document
    failures: tuple[ImportFailure, ...]


def build_all(spec: IntrospectionSpec) -> BuildResult:
    """Lenient driver: emits every library that imports, collects the rest."""
    entries: dict[str, dict] = {}
    failures: list[ImportFailure] = []
    for library in spec.libraries:
        try:
            entries[library] = _build_library(library, spec.types_for(library))
        except ImportFailure as failure:
            failures.append(failure)
    documents = {
        library: _document({library: entry})
        for library, entry in entries.items()
    }
    merged = _document(entries) if entries else None
    return BuildResult(documents, merged, tuple(failures))


def write_manifests(result: BuildResult, out_dir: str | Path) -> list[Path]:
    """One file per library plus all.json; returns the paths written."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for library in sorted(result.documents):
        path = out_dir / f"{library}.json"
        path.write_text(_render(result.documents[library]), encoding="utf-8")
        written.append(path)
    if result.merged is not None:
        path = out_dir / "all.json"
        path.write_text(_render(result.merged), encoding="utf-8")
        written.append(path)
    return written


def _render(document: dict) -> str:
    return json.dumps(document, indent=2, sort_keys=True) + "\n"
