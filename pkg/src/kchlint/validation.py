"""Deterministic detection rules over extracted features.

Five rules run against an immutable knowledge base: unknown API names on
known libraries, bare calls that need a module qualifier, argument shapes
that contradict the callee (a .csv path passed to an Excel reader), intent
words that contradict the callee, and identifier uses with no definition in
scope.  Output is a source-ordered list of diagnostics; a clean snippet
yields an empty list.  Total cost is O(call sites x KB symbols).
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from kchlint.distance import api_threshold, identifier_threshold, nearest
from kchlint.extraction import (
    BARE,
    BUILTIN_NAMES,
    METHOD_ON_VALUE,
    QUALIFIED,
    AliasMap,
    CallSite,
    ScopeTable,
    extract_call_sites,
    extract_imports,
    extract_scopes,
)
from kchlint.kb import KnowledgeBase
from kchlint.syntax.nodes import (
    Assign,
    Call,
    Comment,
    For,
    FunctionDef,
    If,
    Import,
    ImportFrom,
    Module,
    Name,
    Span,
    Stmt,
)

_CONSTANT_NAMES = frozenset({"True", "False", "None"})
_WORD_RE = re.compile(r"[A-Za-z]+")


class Category(str, enum.Enum):
    UNKNOWN_API = "unknown_api"
    BARE_CRITICAL_CALL = "bare_critical_call"
    SEMANTIC_ARGUMENT_SHAPE = "semantic_argument_shape"
    SEMANTIC_INTENT = "semantic_intent"
    IDENTIFIER_CONFLICT = "identifier_conflict"


class FixKind(str, enum.Enum):
    RENAME_CALLEE = "rename_callee"
    REWRITE_CALLEE_FOR_CONTEXT = "rewrite_callee_for_context"
    INSERT_IMPORT_AND_QUALIFY = "insert_import_and_qualify"
    RENAME_IDENTIFIER = "rename_identifier"


EXACT_RULE = "exact-rule"
EDIT_DISTANCE = "edit-distance"


@dataclass(frozen=True)
class SuggestedFix:
    kind: FixKind
    replacement: str
    required_import: tuple[str, str] | None = None  # (module_path, alias)


@dataclass(frozen=True)
class Diagnostic:
    category: Category
    span: Span                     # the offending name token
    name: str                      # callee or identifier text
    evidence: str
    suggestion: SuggestedFix | None
    confidence: str                # EXACT_RULE or EDIT_DISTANCE

    def sort_key(self) -> tuple[int, int, str]:
        return (self.span.start, self.span.end, self.category.value)


# -- receiver type tracking ----------------------------------------------


def receiver_types(module: Module, sites: list[CallSite],
                   kb: KnowledgeBase) -> dict[str, tuple[str, str]]:
    """Variable -> (library, object type) for single-assignment constructor
    results, e.g. `df = pd.read_csv(...)` binds df to (pandas, DataFrame).

    A name bound more than once anywhere in the snippet is not tracked.
    """
    events: dict[str, int] = {}

    def bound(name: str) -> None:
        events[name] = events.get(name, 0) + 1

    for stmt in _walk_statements(module.body):
        if isinstance(stmt, Import):
            for path, alias in stmt.names:
                bound(alias if alias is not None else path.split(".")[0])
        elif isinstance(stmt, ImportFrom):
            for name, alias in stmt.names:
                bound(alias or name)
        elif isinstance(stmt, Assign):
            for target in stmt.targets:
                if isinstance(target, Name):
                    bound(target.identifier)
        elif isinstance(stmt, For):
            bound(stmt.target.identifier)
        elif isinstance(stmt, FunctionDef):
            bound(stmt.name)
            for param in stmt.params:
                bound(param.name)

    site_by_call = {id(site.call_node): site for site in sites}
    types: dict[str, tuple[str, str]] = {}
    for stmt in _walk_statements(module.body):
        if not isinstance(stmt, Assign) or len(stmt.targets) != 1:
            continue
        target = stmt.targets[0]
        if not isinstance(target, Name) or not isinstance(stmt.value, Call):
            continue
        name = target.identifier
        if events.get(name, 0) != 1:
            continue
        site = site_by_call.get(id(stmt.value))
        if site is None:
            continue
        library = _resolved_library(site, kb)
        if library is None:
            continue
        object_type = kb.constructor_type(library, site.func_name)
        if object_type is not None:
            types[name] = (library, object_type)
    return types


def _walk_statements(body: list[Stmt]):
    for stmt in body:
        yield stmt
        if isinstance(stmt, (FunctionDef, For)):
            yield from _walk_statements(stmt.body)
        elif isinstance(stmt, If):
            yield from _walk_statements(stmt.body)
            yield from _walk_statements(stmt.orelse)


def _resolved_library(site: CallSite, kb: KnowledgeBase) -> str | None:
    """KB library a qualified call site targets, or None."""
    if site.callee_kind == QUALIFIED and kb.has_library(site.base_path):
        return site.base_path
    return None


def _first_string_extension(site: CallSite) -> tuple[str, str] | None:
    """(value, extension) of the first string argument carrying one."""
    for arg in site.args:
        if arg.literal_kind == "string":
            if arg.file_extension is not None:
                return arg.string_value or "", arg.file_extension
            return None  # first string argument has no extension cue
    return None


# -- rules -----------------------------------------------------------------


def check_unknown_api(site: CallSite, kb: KnowledgeBase,
                      types: dict[str, tuple[str, str]]) -> Diagnostic | None:
    """Flag a callee missing from its library or its receiver's type."""
    if site.callee_kind == QUALIFIED:
        library = _resolved_library(site, kb)
        if library is None or kb.lookup_callable(library, site.func_name):
            return None
        return _unknown_qualified(site, kb, library)
    if site.callee_kind == METHOD_ON_VALUE:
        if not site.base_path or site.base_path not in types:
            return None  # untracked receiver: skipped, not flagged
        library, object_type = types[site.base_path]
        if kb.lookup_method(library, object_type, site.func_name):
            return None
        suggestion = None
        confidence = EXACT_RULE
        found = kb.nearest_method(library, object_type, site.func_name)
        if found is not None:
            candidate, dist = found
            if dist <= api_threshold(site.func_name):
                suggestion = SuggestedFix(FixKind.RENAME_CALLEE, candidate)
                confidence = EDIT_DISTANCE
        return Diagnostic(
            Category.UNKNOWN_API, site.callee_span, site.func_name,
            f"{object_type} (from {library}) has no method "
            f"{site.func_name!r}", suggestion, confidence)
    return None


def _unknown_qualified(site: CallSite, kb: KnowledgeBase,
                       library: str) -> Diagnostic:
    found = kb.nearest_callable(library, site.func_name)
    suggestion = None
    confidence = EXACT_RULE
    evidence = f"{library} has no callable {site.func_name!r}"
    if found is not None:
        candidate, dist = found
        if dist <= api_threshold(site.func_name):
            # A file-extension cue wins over the plain nearest symbol when
            # the near-miss is a file reader: read_exel('f.csv') means
            # read_csv, not read_excel.
            override = None
            if kb.is_reader(library, candidate):
                cue = _first_string_extension(site)
                if cue is not None:
                    mapped = kb.extension_callable(library, cue[1])
                    if mapped is not None and mapped != candidate:
                        override = (mapped, cue)
            if override is not None:
                mapped, (value, ext) = override
                evidence += (f"; nearest match {candidate!r} reads files, and "
                             f"argument {value!r} has extension {ext}, "
                             f"which {mapped!r} handles")
                suggestion = SuggestedFix(
                    FixKind.REWRITE_CALLEE_FOR_CONTEXT, mapped)
            else:
                evidence += f"; closest match is {candidate!r} (distance {dist})"
                suggestion = SuggestedFix(FixKind.RENAME_CALLEE, candidate)
            confidence = EDIT_DISTANCE
        else:
            evidence += "; no close match"
    return Diagnostic(Category.UNKNOWN_API, site.callee_span, site.func_name,
                      evidence, suggestion, confidence)


def check_bare_call(site: CallSite, aliases: AliasMap, scopes: ScopeTable,
                    kb: KnowledgeBase,
                    callee_scope: int | None) -> Diagnostic | None:
    """Flag a bare call whose name belongs to a knowledge-base library."""
    if site.callee_kind != BARE:
        return None
    name = site.func_name
    if name in BUILTIN_NAMES or name in _CONSTANT_NAMES:
        return None
    if scopes.is_defined(callee_scope, name):
        # Covers local defs and from-imports; a from-imported name that the
        # library does not export is skipped rather than guessed at.
        return None
    providers = kb.providers_of(name)
    if not providers:
        return None
    if len(providers) == 1:
        library = providers[0]
        alias = kb.canonical_alias(library) or library
        return Diagnostic(
            Category.BARE_CRITICAL_CALL, site.callee_span, name,
            f"{name!r} is exported by {library} and needs its qualifier",
            SuggestedFix(FixKind.INSERT_IMPORT_AND_QUALIFY, f"{alias}.{name}",
                         required_import=(library, alias)),
            EXACT_RULE)
    listed = ", ".join(providers)
    return Diagnostic(
        Category.BARE_CRITICAL_CALL, site.callee_span, name,
        f"{name!r} is exported by several libraries ({listed}); "
        "qualifier is ambiguous", None, EXACT_RULE)


def check_argument_shape(site: CallSite, kb: KnowledgeBase) -> Diagnostic | None:
    """Flag a file reader whose argument extension maps to a sibling reader."""
    library = _resolved_library(site, kb)
    if library is None or not kb.lookup_callable(library, site.func_name):
        return None
    if not kb.is_reader(library, site.func_name):
        return None
    cue = _first_string_extension(site)
    if cue is None:
        return None
    value, ext = cue
    mapped = kb.extension_callable(library, ext)
    if mapped is None or mapped == site.func_name:
        return None
    return Diagnostic(
        Category.SEMANTIC_ARGUMENT_SHAPE, site.callee_span, site.func_name,
        f"argument {value!r} has extension {ext}, which {library} reads "
        f"with {mapped!r}, not {site.func_name!r}",
        SuggestedFix(FixKind.REWRITE_CALLEE_FOR_CONTEXT, mapped),
        EXACT_RULE)


def check_intent_synonym(site: CallSite, kb: KnowledgeBase) -> Diagnostic | None:
    """Flag a call that contradicts an intent word in its statement."""
    library = _resolved_library(site, kb)
    if library is None or not kb.lookup_callable(library, site.func_name):
        return None
    words = _intent_words(site.statement)
    for word in sorted(words):
        target = kb.intent_target(word)
        if target is None:
            continue
        target_library, target_name = target
        if target_library != library or target_name == site.func_name:
            continue
        return Diagnostic(
            Category.SEMANTIC_INTENT, site.callee_span, site.func_name,
            f"statement mentions {word!r}, which {library} expresses as "
            f"{target_name!r}, but the call uses {site.func_name!r}",
            SuggestedFix(FixKind.REWRITE_CALLEE_FOR_CONTEXT, target_name),
            EDIT_DISTANCE)
    return None


def _intent_words(stmt: Stmt) -> set[str]:
    """Lowercased cue words from the statement's comments and, for an
    assignment, its target identifiers."""
    words: set[str] = set()

    def add_comment(comment: Comment | None) -> None:
        if comment is not None:
            words.update(w.lower() for w in _WORD_RE.findall(comment.text))

    for comment in stmt.leading_comments:
        add_comment(comment)
    add_comment(stmt.trailing_comment)
    if isinstance(stmt, Assign):
        for target in stmt.targets:
            if isinstance(target, Name):
                words.update(part.lower()
                             for part in target.identifier.split("_") if part)
    return words


def check_identifiers(scopes: ScopeTable, kb: KnowledgeBase) -> list[Diagnostic]:
    """Flag name uses with no definition in their scope chain."""
    diagnostics = []
    exempt_modules = kb.module_first_segments
    for use in scopes.uses:
        name = use.name
        if scopes.is_defined(use.scope_id, name):
            continue
        if name in BUILTIN_NAMES or name in _CONSTANT_NAMES:
            continue
        if kb.library_for_alias(name) is not None or name in exempt_modules:
            continue  # looks like a module handle, not a local identifier
        if use.is_callee and kb.providers_of(name):
            continue  # the bare-call rule owns this occurrence
        candidates = scopes.names_in_chain(use.scope_id) - {name}
        suggestion = None
        confidence = EXACT_RULE
        found = nearest(name, candidates)
        if found is not None:
            candidate, dist = found
            if dist <= identifier_threshold(name):
                suggestion = SuggestedFix(FixKind.RENAME_IDENTIFIER, candidate)
                confidence = EDIT_DISTANCE
        evidence = f"{name!r} is never defined in this snippet"
        if suggestion is not None:
            evidence += f"; nearest defined name is {suggestion.replacement!r}"
        diagnostics.append(Diagnostic(
            Category.IDENTIFIER_CONFLICT, use.span, name, evidence,
            suggestion, confidence))
    return diagnostics


# -- driver ------------------------------------------------------------------


def validate(module: Module, kb: KnowledgeBase) -> list[Diagnostic]:
    """Run every rule and return diagnostics in source order."""
    aliases = extract_imports(module)
    sites = extract_call_sites(module, aliases)
    scopes = extract_scopes(module)
    types = receiver_types(module, sites, kb)
    callee_scope = {(use.span.start, use.span.end): use.scope_id
                    for use in scopes.uses if use.is_callee}

    diagnostics: list[Diagnostic] = []
    for site in sites:
        flagged = check_unknown_api(site, kb, types)
        if flagged is not None:
            diagnostics.append(flagged)
            continue  # one diagnostic per callee token at most
        scope_id = callee_scope.get(
            (site.callee_span.start, site.callee_span.end))
        flagged = check_bare_call(site, aliases, scopes, kb, scope_id)
        if flagged is not None:
            diagnostics.append(flagged)
            continue
        flagged = check_argument_shape(site, kb)
        if flagged is not None:
            diagnostics.append(flagged)
            continue
        flagged = check_intent_synonym(site, kb)
        if flagged is not None:
            diagnostics.append(flagged)
    diagnostics.extend(check_identifiers(scopes, kb))
    diagnostics.sort(key=Diagnostic.sort_key)
    return diagnostics
