"""Lexer, parser, AST nodes, and canonical renderer for the supported subset."""

from kchlint.syntax import nodes
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
    Param,
    Return,
    Stmt,
    StringLit,
    Subscript,
    dotted_path,
    structurally_equal,
    walk,
)
from kchlint.syntax.parser import parse
from kchlint.syntax.tokens import Span, Token, TokenKind, tokenize
from kchlint.syntax.unparser import unparse

__all__ = [
    "Assign", "Attribute", "BinOp", "Call", "Comment", "DictLit", "Expr",
    "ExprStmt", "For", "FunctionDef", "If", "Import", "ImportFrom", "ListLit",
    "Module", "Name", "NumberLit", "Param", "Return", "Span", "Stmt",
    "StringLit", "Subscript", "Token", "TokenKind", "dotted_path", "nodes",
    "parse", "structurally_equal", "tokenize", "unparse", "walk",
]
