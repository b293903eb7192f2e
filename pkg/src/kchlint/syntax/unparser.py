"""Canonical source renderer.

Prints one statement per line with 4-space indents, single spaces around
binary operators and `=` in assignments, unspaced `k=v` keyword arguments,
original string quote styles, and minimal parentheses derived from operator
precedence.  Comments attach as `# text` lines or `  # text` trailers.
Rendering the parse of canonical output reproduces it byte for byte.
"""

from __future__ import annotations

from kchlint.syntax.nodes import (
    Assign,
    Attribute,
    BinOp,
    Call,
    Comment,
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
    NumberLit,
    Return,
    Stmt,
    StringLit,
    Subscript,
    encode_string,
)

_INDENT = "    "

_PRECEDENCE = {
    "or": 1, "and": 2,
    "==": 3, "!=": 3, "<": 3, ">": 3, "<=": 3, ">=": 3, "in": 3,
    "+": 4, "-": 4,
    "*": 5, "/": 5, "//": 5, "%": 5,
    "**": 6,
}
_ATOM_LEVEL = 7
_COMPARISON_LEVEL = 3
_RIGHT_ASSOC = frozenset({"**"})


def _level(expr: Expr) -> int:
    if isinstance(expr, BinOp):
        return _PRECEDENCE[expr.op]
    return _ATOM_LEVEL


def _render_expr(expr: Expr) -> str:
    if isinstance(expr, Name):
        return expr.identifier
    if isinstance(expr, NumberLit):
        return expr.raw
    if isinstance(expr, StringLit):
        return encode_string(expr.value, expr.quote_style)
    if isinstance(expr, Attribute):
        return f"{_child(expr.value, _ATOM_LEVEL, tight=True)}.{expr.attr_name}"
    if isinstance(expr, Subscript):
        value = _child(expr.value, _ATOM_LEVEL, tight=True)
        return f"{value}[{_render_expr(expr.index)}]"
    if isinstance(expr, Call):
        func = _child(expr.func, _ATOM_LEVEL, tight=True)
        parts = [_render_expr(a) for a in expr.args]
        parts += [f"{name}={_render_expr(value)}" for name, value in expr.keywords]
        return f"{func}({', '.join(parts)})"
    if isinstance(expr, ListLit):
        return f"[{', '.join(_render_expr(i) for i in expr.items)}]"
    if isinstance(expr, DictLit):
        inner = ", ".join(f"{_render_expr(k)}: {_render_expr(v)}"
                          for k, v in expr.pairs)
        return f"{{{inner}}}"
    if isinstance(expr, BinOp):
        level = _PRECEDENCE[expr.op]
        right_assoc = expr.op in _RIGHT_ASSOC
        non_assoc = level == _COMPARISON_LEVEL
        left = _render_expr(expr.left)
        if (_level(expr.left) < level
                or (_level(expr.left) == level and (right_assoc or non_assoc))):
            left = f"({left})"
        right = _render_expr(expr.right)
        if (_level(expr.right) < level
                or (_level(expr.right) == level and not right_assoc)):
            right = f"({right})"
        return f"{left} {expr.op} {right}"
    raise TypeError(f"cannot render expression of type {type(expr).__name__}")


def _child(expr: Expr, level: int, tight: bool = False) -> str:
    text = _render_expr(expr)
    if _level(expr) < level:
        return f"({text})"
    if tight and isinstance(expr, NumberLit):
        return f"({text})"  # (2).mean, never 2.mean
    return text


def _comment_line(comment: Comment) -> str:
    text = comment.text.strip()
    return f"# {text}" if text else "#"


def _emit(stmt: Stmt, indent: int, lines: list[str]) -> None:
    pad = _INDENT * indent
    for comment in stmt.leading_comments:
        lines.append(pad + _comment_line(comment))
    head = _render_head(stmt)
    if stmt.trailing_comment is not None:
        head = f"{head}  {_comment_line(stmt.trailing_comment)}"
    lines.append(pad + head)
    if isinstance(stmt, (FunctionDef, For)):
        for child in stmt.body:
            _emit(child, indent + 1, lines)
    elif isinstance(stmt, If):
        for child in stmt.body:
            _emit(child, indent + 1, lines)
        _emit_orelse(stmt.orelse, indent, lines)


def _emit_orelse(orelse: list[Stmt], indent: int, lines: list[str]) -> None:
    if not orelse:
        return
    pad = _INDENT * indent
    only = orelse[0]
    if len(orelse) == 1 and isinstance(only, If) and not only.leading_comments:
        head = f"elif {_render_expr(only.test)}:"
        if only.trailing_comment is not None:
            head = f"{head}  {_comment_line(only.trailing_comment)}"
        lines.append(pad + head)
        for child in only.body:
            _emit(child, indent + 1, lines)
        _emit_orelse(only.orelse, indent, lines)
        return
    lines.append(pad + "else:")
    for child in orelse:
        _emit(child, indent + 1, lines)


def _render_head(stmt: Stmt) -> str:
    if isinstance(stmt, Import):
        parts = [path if alias is None else f"{path} as {alias}"
                 for path, alias in stmt.names]
        return f"import {', '.join(parts)}"
    if isinstance(stmt, ImportFrom):
        parts = [name if alias is None else f"{name} as {alias}"
                 for name, alias in stmt.names]
        return f"from {stmt.module_path} import {', '.join(parts)}"
    if isinstance(stmt, Assign):
        targets = " = ".join(_render_expr(t) for t in stmt.targets)
        return f"{targets} = {_render_expr(stmt.value)}"
    if isinstance(stmt, ExprStmt):
        return _render_expr(stmt.value)
    if isinstance(stmt, Return):
        if stmt.value is None:
            return "return"
        return f"return {_render_expr(stmt.value)}"
    if isinstance(stmt, FunctionDef):
        params = []
        for param in stmt.params:
            if param.default is None:
                params.append(param.name)
            else:
                params.append(f"{param.name}={_render_expr(param.default)}")
        return f"def {stmt.name}({', '.join(params)}):"
    if isinstance(stmt, For):
        return f"for {stmt.target.identifier} in {_render_expr(stmt.iter)}:"
    if isinstance(stmt, If):
        return f"if {_render_expr(stmt.test)}:"
    raise TypeError(f"cannot render statement of type {type(stmt).__name__}")


def unparse(module: Module) -> str:
    """Render *module* in canonical form, ending with a newline."""
    lines: list[str] = []
    for stmt in module.body:
        _emit(stmt, 0, lines)
    for comment in module.trailing_comments:
        lines.append(_comment_line(comment))
    return "\n".join(lines) + "\n" if lines else ""


def unparse_statement(stmt: Stmt) -> str:
    """Render one statement (plus nested body and comments), no final newline."""
    lines: list[str] = []
    _emit(stmt, 0, lines)
    return "\n".join(lines)
