"""Structural feature extraction from parsed snippets.

Walks the AST once per concern and produces the inputs the validation rules
consume: the import alias map, every call site with resolved base path and
argument features, and a scope table of defined names and name usages.
All extractors are pure functions of the tree; re-running them yields
identical results.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from kchlint.syntax.nodes import (
    Assign,
    Attribute,
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
    BinOp,
    Module,
    Name,
    NumberLit,
    Param,
    Return,
    Span,
    Stmt,
    StringLit,
    Subscript,
)
from kchlint.syntax.unparser import unparse_statement

# Common builtins exempt from bare-call and identifier checks.
BUILTIN_NAMES = frozenset({
    "print", "len", "range", "open", "sum", "min", "max", "str", "int",
    "float", "list", "dict", "enumerate", "zip", "abs", "sorted",
})

QUALIFIED = "qualified"
BARE = "bare"
METHOD_ON_VALUE = "method-on-value"


@dataclass(frozen=True)
class AliasBinding:
    """One name bound by an import statement."""

    alias: str
    target: str              # "pandas", "matplotlib.pyplot", or "json.loads"
    module_path: str         # module part of target
    imported_symbol: str | None  # set for `from M import N` bindings
    node: Stmt               # the Import/ImportFrom that created the binding


@dataclass
class AliasMap:
    """Local alias -> import binding; later imports shadow earlier ones."""

    entries: dict[str, AliasBinding] = field(default_factory=dict)

    def resolve_module(self, alias: str) -> str | None:
        """Module path an alias stands for; None for from-import symbols."""
        binding = self.entries.get(alias)
        if binding is None or binding.imported_symbol is not None:
            return None
        return binding.target

    def symbol_binding(self, name: str) -> AliasBinding | None:
        """Binding for a `from M import N` name, if any."""
        binding = self.entries.get(name)
        if binding is not None and binding.imported_symbol is not None:
            return binding
        return None

    def __contains__(self, alias: str) -> bool:
        return alias in self.entries


@dataclass(frozen=True)
class ArgFeature:
    """Shape summary of one call argument."""

    position: int | None     # positional index, or None for keyword args
    keyword: str | None
    literal_kind: str        # "string" | "number" | "other"
    string_value: str | None = None
    file_extension: str | None = None  # ".csv" style, lowercased


@dataclass(frozen=True)
class CallSite:
    """One Call node with its callee resolved through the alias map."""

    callee_kind: str          # QUALIFIED | BARE | METHOD_ON_VALUE
    base_path: str            # module path, receiver name, or ""
    func_name: str
    args: tuple[ArgFeature, ...]
    span: Span                # whole call expression
    callee_span: Span         # just the final callee name token
    enclosing_statement_text: str
    call_node: Call
    statement: Stmt
    line: int


@dataclass(frozen=True)
class NameUse:
    """One Name occurrence read in an expression."""

    name: str
    span: Span
    scope_id: int
    is_callee: bool           # Name sits directly in call position


@dataclass
class Scope:
    scope_id: int
    parent: int | None
    kind: str                 # "module" | "function"
    defined: dict[str, Span] = field(default_factory=dict)


@dataclass
class ScopeTable:
    """Defined names per lexical scope plus every name usage."""

    scopes: list[Scope] = field(default_factory=list)
    uses: list[NameUse] = field(default_factory=list)

    def new_scope(self, parent: int | None, kind: str) -> int:
        scope = Scope(len(self.scopes), parent, kind)
        self.scopes.append(scope)
        return scope.scope_id

    def define(self, scope_id: int, name: str, span: Span) -> None:
        self.scopes[scope_id].defined.setdefault(name, span)

    def is_defined(self, scope_id: int | None, name: str) -> bool:
        while scope_id is not None:
            scope = self.scopes[scope_id]
            if name in scope.defined:
                return True
            scope_id = scope.parent
        return False

    def names_in_chain(self, scope_id: int | None) -> set[str]:
        names: set[str] = set()
        while scope_id is not None:
            scope = self.scopes[scope_id]
            names.update(scope.defined)
            scope_id = scope.parent
        return names


# -- imports -------------------------------------------------------------


def extract_imports(module: Module) -> AliasMap:
    """Alias bindings from every import statement, in source order."""
    aliases = AliasMap()
    for stmt in _iter_statements(module.body):
        if isinstance(stmt, Import):
            for path, alias in stmt.names:
                if alias is not None:
                    binding = AliasBinding(alias, path, path, None, stmt)
                else:
                    head = path.split(".")[0]
                    binding = AliasBinding(head, head, head, None, stmt)
                aliases.entries[binding.alias] = binding
        elif isinstance(stmt, ImportFrom):
            for name, alias in stmt.names:
                local = alias if alias is not None else name
                target = f"{stmt.module_path}.{name}"
                aliases.entries[local] = AliasBinding(
                    local, target, stmt.module_path, name, stmt)
    return aliases


def _iter_statements(body: list[Stmt]):
    for stmt in body:
        yield stmt
        if isinstance(stmt, (FunctionDef, For)):
            yield from _iter_statements(stmt.body)
        elif isinstance(stmt, If):
            yield from _iter_statements(stmt.body)
            yield from _iter_statements(stmt.orelse)


# -- call sites ----------------------------------------------------------


def _arg_feature(position: int | None, keyword: str | None,
                 value: Expr) -> ArgFeature:
    if isinstance(value, StringLit):
        return ArgFeature(position, keyword, "string", value.value,
                          _file_extension(value.value))
    if isinstance(value, NumberLit):
        return ArgFeature(position, keyword, "number")
    return ArgFeature(position, keyword, "other")


def _file_extension(text: str) -> str | None:
    dot = text.rfind(".")
    if dot <= 0 or dot == len(text) - 1:
        return None
    suffix = text[dot + 1:]
    if suffix.isalnum():
        return "." + suffix.lower()
    return None


def _call_site(call: Call, aliases: AliasMap, stmt: Stmt,
               stmt_text: str) -> CallSite:
    args = tuple(
        [_arg_feature(i, None, a) for i, a in enumerate(call.args)]
        + [_arg_feature(None, k, v) for k, v in call.keywords])
    func = call.func
    if isinstance(func, Name):
        return CallSite(BARE, "", func.identifier, args, call.span,
                        func.span, stmt_text, call, stmt, call.span.line)
    if isinstance(func, Attribute):
        segments = _attribute_chain(func)
        if segments is not None:
            head = segments[0]
            middle = segments[1:-1]
            resolved = aliases.resolve_module(head)
            if resolved is not None:
                base_path = ".".join([resolved] + middle)
                return CallSite(QUALIFIED, base_path, func.attr_name, args,
                                call.span, func.attr_span, stmt_text, call,
                                stmt, call.span.line)
            if len(segments) == 2 and head not in aliases:
                return CallSite(METHOD_ON_VALUE, head, func.attr_name, args,
                                call.span, func.attr_span, stmt_text, call,
                                stmt, call.span.line)
        # Method on a computed value: df["a"].sum(), get_df().head(), ...
        return CallSite(METHOD_ON_VALUE, "", func.attr_name, args, call.span,
                        func.attr_span, stmt_text, call, stmt, call.span.line)
    # Calling a call result or a subscripted value: handlers[0](x)
    return CallSite(METHOD_ON_VALUE, "", "", args, call.span, call.span,
                    stmt_text, call, stmt, call.span.line)


def _attribute_chain(expr: Expr) -> list[str] | None:
    """`pd.io.read` -> ["pd", "io", "read"]; None when the base is not a Name."""
    parts: list[str] = []
    node = expr
    while isinstance(node, Attribute):
        parts.append(node.attr_name)
        node = node.value
    if isinstance(node, Name):
        parts.append(node.identifier)
        parts.reverse()
        return parts
    return None


def _iter_calls(expr: Expr):
    if isinstance(expr, Call):
        yield expr
        yield from _iter_calls(expr.func)
        for arg in expr.args:
            yield from _iter_calls(arg)
        for _, value in expr.keywords:
            yield from _iter_calls(value)
    elif isinstance(expr, Attribute):
        yield from _iter_calls(expr.value)
    elif isinstance(expr, Subscript):
        yield from _iter_calls(expr.value)
        yield from _iter_calls(expr.index)
    elif isinstance(expr, BinOp):
        yield from _iter_calls(expr.left)
        yield from _iter_calls(expr.right)
    elif isinstance(expr, ListLit):
        for item in expr.items:
            yield from _iter_calls(item)
    elif isinstance(expr, DictLit):
        for key, value in expr.pairs:
            yield from _iter_calls(key)
            yield from _iter_calls(value)


def _statement_exprs(stmt: Stmt) -> list[Expr]:
    if isinstance(stmt, Assign):
        return [*stmt.targets, stmt.value]
    if isinstance(stmt, ExprStmt):
        return [stmt.value]
    if isinstance(stmt, Return):
        return [stmt.value] if stmt.value is not None else []
    if isinstance(stmt, FunctionDef):
        return [p.default for p in stmt.params if p.default is not None]
    if isinstance(stmt, For):
        return [stmt.iter]
    if isinstance(stmt, If):
        return [stmt.test]
    return []


def extract_call_sites(module: Module, aliases: AliasMap) -> list[CallSite]:
    """One CallSite per Call node, in source order."""
    sites: list[CallSite] = []

    def visit(stmt: Stmt) -> None:
        stmt_text = unparse_statement(stmt)
        for expr in _statement_exprs(stmt):
            for call in _iter_calls(expr):
                sites.append(_call_site(call, aliases, stmt, stmt_text))
        if isinstance(stmt, (FunctionDef, For)):
            for child in stmt.body:
                visit(child)
        elif isinstance(stmt, If):
            for child in stmt.body:
                visit(child)
            for child in stmt.orelse:
                visit(child)

    for stmt in module.body:
        visit(stmt)
    sites.sort(key=lambda s: s.span.start)
    return sites


# -- scopes ----------------------------------------------------------------


def extract_scopes(module: Module) -> ScopeTable:
    """Defined names for the module and each function, plus all name uses."""
    table = ScopeTable()
    module_scope = table.new_scope(None, "module")

    def visit_expr(expr: Expr, scope_id: int, is_callee: bool = False) -> None:
        if isinstance(expr, Name):
            table.uses.append(NameUse(expr.identifier, expr.span,
                                      scope_id, is_callee))
        elif isinstance(expr, Attribute):
            visit_expr(expr.value, scope_id)
        elif isinstance(expr, Call):
            visit_expr(expr.func, scope_id,
                       is_callee=isinstance(expr.func, Name))
            for arg in expr.args:
                visit_expr(arg, scope_id)
            for _, value in expr.keywords:
                visit_expr(value, scope_id)
        elif isinstance(expr, Subscript):
            visit_expr(expr.value, scope_id)
            visit_expr(expr.index, scope_id)
        elif isinstance(expr, BinOp):
            visit_expr(expr.left, scope_id)
            visit_expr(expr.right, scope_id)
        elif isinstance(expr, ListLit):
            for item in expr.items:
                visit_expr(item, scope_id)
        elif isinstance(expr, DictLit):
            for key, value in expr.pairs:
                visit_expr(key, scope_id)
                visit_expr(value, scope_id)

    def define_target(target: Expr, scope_id: int) -> None:
        if isinstance(target, Name):
            table.define(scope_id, target.identifier, target.span)
        else:
            # df.attr = v / d[k] = v read their base rather than define it.
            visit_expr(target, scope_id)

    def visit_stmt(stmt: Stmt, scope_id: int) -> None:
        if isinstance(stmt, Import):
            for path, alias in stmt.names:
                bound = alias if alias is not None else path.split(".")[0]
                table.define(scope_id, bound, stmt.span)
        elif isinstance(stmt, ImportFrom):
            for name, alias in stmt.names:
                table.define(scope_id, alias or name, stmt.span)
        elif isinstance(stmt, Assign):
            visit_expr(stmt.value, scope_id)
            for target in stmt.targets:
                define_target(target, scope_id)
        elif isinstance(stmt, ExprStmt):
            visit_expr(stmt.value, scope_id)
        elif isinstance(stmt, Return):
            if stmt.value is not None:
                visit_expr(stmt.value, scope_id)
        elif isinstance(stmt, FunctionDef):
            table.define(scope_id, stmt.name, stmt.span)
            inner = table.new_scope(scope_id, "function")
            for param in stmt.params:
                table.define(inner, param.name, param.span)
                if param.default is not None:
                    visit_expr(param.default, scope_id)  # defaults evaluate outside
            for child in stmt.body:
                visit_stmt(child, inner)
        elif isinstance(stmt, For):
            visit_expr(stmt.iter, scope_id)
            table.define(scope_id, stmt.target.identifier, stmt.target.span)
            for child in stmt.body:
                visit_stmt(child, scope_id)
        elif isinstance(stmt, If):
            visit_expr(stmt.test, scope_id)
            for child in stmt.body:
                visit_stmt(child, scope_id)
            for child in stmt.orelse:
                visit_stmt(child, scope_id)

    for stmt in module.body:
        visit_stmt(stmt, module_scope)
    return table
