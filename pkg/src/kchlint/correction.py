"""Localized AST repair driven by diagnostics.

Each fixable diagnostic becomes one edit group: a callee or identifier
token replacement, or a call qualification plus a deduplicated import
insertion.  Edits never overlap; when two diagnostics target the same
token, the earlier one in source order wins and the later is reported as
unfixed.  Output is rendered canonically, and fixing a fixed snippet
applies zero edits.
"""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass

from kchlint.errors import LexError, ParseError
from kchlint.extraction import extract_imports
from kchlint.kb import KnowledgeBase
from kchlint.syntax.nodes import (
    Assign,
    Attribute,
    BinOp,
    Call,
    DictLit,
    Expr,
    ExprStmt,
    For,
    FunctionDef,
    If,
    Import,
    ImportFrom,
    ListLit,
    Module,
    Name,
    Return,
    Span,
    Stmt,
    Subscript,
)
from kchlint.syntax.parser import parse
from kchlint.syntax.unparser import unparse
from kchlint.validation import Category, Diagnostic, FixKind, validate

_SYNTHETIC = Span(0, 0, 0, 0, 0, 0)


class EditKind(enum.Enum):
    REPLACE_ATTR_NAME = "replace-attr-name"
    REPLACE_NAME = "replace-name"
    QUALIFY_CALL = "qualify-call"
    INSERT_IMPORT = "insert-import"


@dataclass(frozen=True)
class FixEdit:
    kind: EditKind
    span: Span | None              # None for insert-import
    replacement: str               # new name, or alias for qualify-call
    module_path: str | None = None
    alias: str | None = None
    diagnostic_index: int = -1


@dataclass(frozen=True)
class FixResult:
    fixed_source: str
    applied: list[Diagnostic]
    unfixed: list[Diagnostic]
    note: str | None = None


# -- planning ------------------------------------------------------------


def _token_kinds(module: Module) -> dict[tuple[int, int], str]:
    """Span key -> whether that token is a Name or an Attribute's attr."""
    kinds: dict[tuple[int, int], str] = {}

    def visit(expr: Expr) -> None:
        if isinstance(expr, Name):
            kinds[(expr.span.start, expr.span.end)] = "name"
        elif isinstance(expr, Attribute):
            kinds[(expr.attr_span.start, expr.attr_span.end)] = "attr"
            visit(expr.value)
        elif isinstance(expr, Call):
            visit(expr.func)
            for arg in expr.args:
                visit(arg)
            for _, value in expr.keywords:
                visit(value)
        elif isinstance(expr, Subscript):
            visit(expr.value)
            visit(expr.index)
        elif isinstance(expr, BinOp):
            visit(expr.left)
            visit(expr.right)
        elif isinstance(expr, ListLit):
            for item in expr.items:
                visit(item)
        elif isinstance(expr, DictLit):
            for key, value in expr.pairs:
                visit(key)
                visit(value)

    def visit_stmt(stmt: Stmt) -> None:
        if isinstance(stmt, Assign):
            for target in stmt.targets:
                visit(target)
            visit(stmt.value)
        elif isinstance(stmt, ExprStmt):
            visit(stmt.value)
        elif isinstance(stmt, Return):
            if stmt.value is not None:
                visit(stmt.value)
        elif isinstance(stmt, FunctionDef):
            for param in stmt.params:
                if param.default is not None:
                    visit(param.default)
            for child in stmt.body:
                visit_stmt(child)
        elif isinstance(stmt, For):
            visit(stmt.iter)
            for child in stmt.body:
                visit_stmt(child)
        elif isinstance(stmt, If):
            visit(stmt.test)
            for child in stmt.body:
                visit_stmt(child)
            for child in stmt.orelse:
                visit_stmt(child)

    for stmt in module.body:
        visit_stmt(stmt)
    return kinds


def plan_fixes(module: Module, diagnostics: list[Diagnostic],
               fix_intent: bool = False) -> list[FixEdit]:
    """Edit list for every fixable diagnostic, imports deduplicated.

    Intent-synonym fixes are included only when *fix_intent* is set; that
    rule is the weakest and defaults to detect-only.
    """
    kinds = _token_kinds(module)
    existing = extract_imports(module)
    edits: list[FixEdit] = []
    claimed: list[Span] = []
    queued_imports: set[tuple[str, str]] = set()

    ordered = sorted(enumerate(diagnostics),
                     key=lambda pair: pair[1].sort_key())
    for index, diagnostic in ordered:
        suggestion = diagnostic.suggestion
        if suggestion is None:
            continue
        if diagnostic.category is Category.SEMANTIC_INTENT and not fix_intent:
            continue
        span = diagnostic.span
        if any(span.start < c.end and c.start < span.end for c in claimed):
            continue  # earlier-in-source fix already owns this token
        if suggestion.kind is FixKind.INSERT_IMPORT_AND_QUALIFY:
            assert suggestion.required_import is not None
            module_path, alias = suggestion.required_import
            edits.append(FixEdit(EditKind.QUALIFY_CALL, span, alias,
                                 diagnostic_index=index))
            key = (module_path, alias)
            if (key not in queued_imports
                    and existing.resolve_module(alias) != module_path):
                queued_imports.add(key)
                edits.append(FixEdit(EditKind.INSERT_IMPORT, None, "",
                                     module_path=module_path, alias=alias,
                                     diagnostic_index=index))
        else:
            token_kind = kinds.get((span.start, span.end))
            if token_kind is None:
                continue  # diagnostic does not target a rewritable token
            edit_kind = (EditKind.REPLACE_ATTR_NAME if token_kind == "attr"
                         else EditKind.REPLACE_NAME)
            edits.append(FixEdit(edit_kind, span, suggestion.replacement,
                                 diagnostic_index=index))
        claimed.append(span)
    return edits


# -- application ---------------------------------------------------------


def apply_fixes(module: Module, edits: list[FixEdit]) -> Module:
    """New tree with *edits* applied; untouched nodes are unchanged."""
    by_span: dict[tuple[int, int], FixEdit] = {}
    inserts: list[FixEdit] = []
    for edit in edits:
        if edit.kind is EditKind.INSERT_IMPORT:
            inserts.append(edit)
        else:
            assert edit.span is not None
            by_span[(edit.span.start, edit.span.end)] = edit

    def tx(expr: Expr) -> Expr:
        if isinstance(expr, Name):
            edit = by_span.get((expr.span.start, expr.span.end))
            if edit is None:
                return expr
            if edit.kind is EditKind.REPLACE_NAME:
                return Name(edit.replacement, expr.span)
            if edit.kind is EditKind.QUALIFY_CALL:
                return Attribute(Name(edit.replacement, expr.span),
                                 expr.identifier, expr.span, expr.span)
            return expr
        if isinstance(expr, Attribute):
            edit = by_span.get((expr.attr_span.start, expr.attr_span.end))
            attr_name = expr.attr_name
            if edit is not None and edit.kind is EditKind.REPLACE_ATTR_NAME:
                attr_name = edit.replacement
            return dataclasses.replace(expr, value=tx(expr.value),
                                       attr_name=attr_name)
        if isinstance(expr, Call):
            return dataclasses.replace(
                expr, func=tx(expr.func), args=[tx(a) for a in expr.args],
                keywords=[(k, tx(v)) for k, v in expr.keywords])
        if isinstance(expr, Subscript):
            return dataclasses.replace(expr, value=tx(expr.value),
                                       index=tx(expr.index))
        if isinstance(expr, BinOp):
            return dataclasses.replace(expr, left=tx(expr.left),
                                       right=tx(expr.right))
        if isinstance(expr, ListLit):
            return dataclasses.replace(expr, items=[tx(i) for i in expr.items])
        if isinstance(expr, DictLit):
            return dataclasses.replace(
                expr, pairs=[(tx(k), tx(v)) for k, v in expr.pairs])
        return expr

    def tx_stmt(stmt: Stmt) -> Stmt:
        if isinstance(stmt, Assign):
            return dataclasses.replace(
                stmt, targets=[tx(t) for t in stmt.targets],
                value=tx(stmt.value))
        if isinstance(stmt, ExprStmt):
            return dataclasses.replace(stmt, value=tx(stmt.value))
        if isinstance(stmt, Return):
            if stmt.value is None:
                return stmt
            return dataclasses.replace(stmt, value=tx(stmt.value))
        if isinstance(stmt, FunctionDef):
            params = [p if p.default is None
                      else dataclasses.replace(p, default=tx(p.default))
                      for p in stmt.params]
            return dataclasses.replace(
                stmt, params=params, body=[tx_stmt(s) for s in stmt.body])
        if isinstance(stmt, For):
            return dataclasses.replace(
                stmt, iter=tx(stmt.iter), body=[tx_stmt(s) for s in stmt.body])
        if isinstance(stmt, If):
            return dataclasses.replace(
                stmt, test=tx(stmt.test), body=[tx_stmt(s) for s in stmt.body],
                orelse=[tx_stmt(s) for s in stmt.orelse])
        return stmt

    body = [tx_stmt(stmt) for stmt in module.body]
    if inserts:
        position = 0
        while position < len(body) and isinstance(body[position],
                                                  (Import, ImportFrom)):
            position += 1
        new_imports = [
            Import(
                [(edit.module_path or "",
                  None if edit.alias == edit.module_path else edit.alias)],
                _SYNTHETIC)
            for edit in sorted(inserts,
                               key=lambda e: (e.module_path or "", e.alias or ""))]
        body = body[:position] + new_imports + body[position:]
    return dataclasses.replace(module, body=body)


# -- pipeline ------------------------------------------------------------


def fix(source: str, kb: KnowledgeBase, fix_intent: bool = False) -> FixResult:
    """Parse, validate, repair, and render canonically.

    Snippets that fail to parse come back unchanged with a note; they are
    never treated as detections.
    """
    try:
        module = parse(source)
    except (LexError, ParseError) as exc:
        return FixResult(source, [], [], note=f"parse failure: {exc}")
    diagnostics = validate(module, kb)
    edits = plan_fixes(module, diagnostics, fix_intent=fix_intent)
    applied_indices = {edit.diagnostic_index for edit in edits}
    applied = [d for i, d in enumerate(diagnostics) if i in applied_indices]
    unfixed = [d for i, d in enumerate(diagnostics) if i not in applied_indices]
    fixed_module = apply_fixes(module, edits)
    return FixResult(unparse(fixed_module), applied, unfixed)
