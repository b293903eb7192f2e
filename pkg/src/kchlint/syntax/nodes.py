"""AST node types for the supported subset, plus structural helpers.

Nodes are plain dataclasses carrying a :class:`Span`.  Comments survive
parsing: each statement holds the comments written directly above it and an
optional same-line trailing comment, because downstream rules read them.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Iterator, Union

from kchlint.syntax.tokens import Span


@dataclass(frozen=True)
class Comment:
    text: str  # content without the leading '#'
    attached_line: int


class Expr:
    """Marker base for expression nodes."""

    span: Span


class Stmt:
    """Marker base for statement nodes."""

    span: Span
    leading_comments: list[Comment]
    trailing_comment: Comment | None


# -- expressions -------------------------------------------------------------

@dataclass
class Name(Expr):
    identifier: str
    span: Span


@dataclass
class Attribute(Expr):
    value: Expr
    attr_name: str
    span: Span
    attr_span: Span  # the attribute-name token alone; edit target for renames


@dataclass
class Call(Expr):
    func: Expr
    args: list[Expr]
    keywords: list[tuple[str, Expr]]
    span: Span


@dataclass
class StringLit(Expr):
    value: str
    quote_style: str  # single | double | triple_single | triple_double
    span: Span
    raw: str = ""  # exact source lexeme; rebuilt from value when absent

    def __post_init__(self) -> None:
        if not self.raw:
            self.raw = encode_string(self.value, self.quote_style)


@dataclass
class NumberLit(Expr):
    raw: str
    span: Span


@dataclass
class ListLit(Expr):
    items: list[Expr]
    span: Span


@dataclass
class DictLit(Expr):
    pairs: list[tuple[Expr, Expr]]
    span: Span


@dataclass
class BinOp(Expr):
    left: Expr
    op: str
    right: Expr
    span: Span


@dataclass
class Subscript(Expr):
    value: Expr
    index: Expr
    span: Span


# -- statements --------------------------------------------------------------

@dataclass
class Import(Stmt):
    # (module_path, alias-or-None) pairs, one per imported module
    names: list[tuple[str, str | None]]
    span: Span
    leading_comments: list[Comment] = field(default_factory=list, kw_only=True)
    trailing_comment: Comment | None = field(default=None, kw_only=True)


@dataclass
class ImportFrom(Stmt):
    module_path: str
    names: list[tuple[str, str | None]]
    span: Span
    leading_comments: list[Comment] = field(default_factory=list, kw_only=True)
    trailing_comment: Comment | None = field(default=None, kw_only=True)


@dataclass
class Assign(Stmt):
    targets: list[Expr]
    value: Expr
    span: Span
    leading_comments: list[Comment] = field(default_factory=list, kw_only=True)
    trailing_comment: Comment | None = field(default=None, kw_only=True)


@dataclass
class ExprStmt(Stmt):
    value: Expr
    span: Span
    leading_comments: list[Comment] = field(default_factory=list, kw_only=True)
    trailing_comment: Comment | None = field(default=None, kw_only=True)


@dataclass
class Param:
    name: str
    default: Expr | None
    span: Span


@dataclass
class FunctionDef(Stmt):
    name: str
    params: list[Param]
    body: list[Stmt]
    span: Span
    leading_comments: list[Comment] = field(default_factory=list, kw_only=True)
    trailing_comment: Comment | None = field(default=None, kw_only=True)


@dataclass
class Return(Stmt):
    value: Expr | None
    span: Span
    leading_comments: list[Comment] = field(default_factory=list, kw_only=True)
    trailing_comment: Comment | None = field(default=None, kw_only=True)


@dataclass
class For(Stmt):
    target: Name
    iter: Expr
    body: list[Stmt]
    span: Span
    leading_comments: list[Comment] = field(default_factory=list, kw_only=True)
    trailing_comment: Comment | None = field(default=None, kw_only=True)


@dataclass
class If(Stmt):
    test: Expr
    body: list[Stmt]
    orelse: list[Stmt]
    span: Span
    leading_comments: list[Comment] = field(default_factory=list, kw_only=True)
    trailing_comment: Comment | None = field(default=None, kw_only=True)


@dataclass
class Module:
    body: list[Stmt]
    span: Span
    source: str = ""
    trailing_comments: list[Comment] = field(default_factory=list)


AstNode = Union[Module, Stmt, Expr]


# -- string literal encoding -------------------------------------------------

_QUOTES = {
    "single": "'",
    "double": '"',
    "triple_single": "'''",
    "triple_double": '"""',
}

_ESCAPES = {"\\": "\\\\", "\n": "\\n", "\t": "\\t", "\r": "\\r"}


def quote_style_for(delim: str) -> str:
    for style, q in _QUOTES.items():
        if q == delim:
            return style
    raise ValueError(f"unknown quote delimiter {delim!r}")


def encode_string(value: str, quote_style: str) -> str:
    delim = _QUOTES[quote_style]
    triple = len(delim) == 3
    out: list[str] = []
    for ch in value:
        if ch in _ESCAPES and not (triple and ch == "\n"):
            out.append(_ESCAPES[ch])
        elif ch == delim[0] and not triple:
            out.append("\\" + ch)
        else:
            out.append(ch)
    return delim + "".join(out) + delim


# -- traversal and structural equality ----------------------------------------

# Positional fields excluded from structural comparison.  StringLit.raw is
# presentation (the decoded value is compared); NumberLit.raw is the payload.
_SKIP_FIELDS = {"span", "attr_span", "source", "attached_line"}


def _children(value) -> Iterator:
    if isinstance(value, (Module, Stmt, Expr, Param)):
        yield value
    elif isinstance(value, (list, tuple)):
        for item in value:
            yield from _children(item)


def walk(node) -> Iterator:
    """Yield *node* and every descendant node, depth-first, source order."""
    yield node
    for f in dataclasses.fields(node):
        for child in _children(getattr(node, f.name)):
            yield from walk(child)


def structurally_equal(a, b) -> bool:
    """Span-insensitive tree equality (comments compared by text)."""
    return _eq(a, b)


def _eq(a, b) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, (list, tuple)):
        return len(a) == len(b) and all(_eq(x, y) for x, y in zip(a, b))
    if isinstance(a, Comment):
        return a.text == b.text
    if dataclasses.is_dataclass(a) and not isinstance(a, Span):
        for f in dataclasses.fields(a):
            if f.name in _SKIP_FIELDS:
                continue
            if f.name == "raw" and isinstance(a, StringLit):
                continue
            if not _eq(getattr(a, f.name), getattr(b, f.name)):
                return False
        return True
    return a == b


def dotted_path(expr: Expr) -> list[str] | None:
    """Linearize a pure attribute chain to its name segments.

    ``pd.read_csv`` -> ``["pd", "read_csv"]``; returns None when the chain
    bottoms out in anything but a plain name.
    """
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
