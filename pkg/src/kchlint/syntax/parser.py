"""Recursive-descent parser for the supported subset.

Grammar covers module-level statements (imports, assignments, expression
statements, function defs, for/if), calls with positional and keyword
arguments, attribute chains, subscripts, literals, and binary operators.
Anything outside the subset raises :class:`ParseError` rather than being
skipped.  Negative numeric literals are fused into the literal token.
"""

from __future__ import annotations

from kchlint.errors import ParseError
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
    quote_style_for,
)
from kchlint.syntax.tokens import Span, Token, TokenKind, tokenize

_COMPARISON_OPS = frozenset({"==", "!=", "<", ">", "<=", ">="})
_TERM_OPS = frozenset({"*", "/", "//", "%"})


class _Parser:
    def __init__(self, tokens: list[Token], source: str) -> None:
        self.tokens = tokens
        self.source = source
        self.pos = 0
        self.pending: list[Comment] = []

    # -- token access --------------------------------------------------------

    def _current(self) -> Token:
        return self.tokens[self.pos]

    def _advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind is not TokenKind.EOF:
            self.pos += 1
        return tok

    def _at(self, kind: TokenKind, lexeme: str | None = None) -> bool:
        tok = self._current()
        return tok.kind is kind and (lexeme is None or tok.lexeme == lexeme)

    def _at_op(self, lexeme: str) -> bool:
        return self._at(TokenKind.OPERATOR, lexeme)

    def _at_kw(self, lexeme: str) -> bool:
        return self._at(TokenKind.KEYWORD, lexeme)

    def _expect(self, kind: TokenKind, lexeme: str | None = None,
                expected: str | None = None) -> Token:
        if not self._at(kind, lexeme):
            raise self._error(expected or lexeme or kind.value)
        return self._advance()

    def _error(self, expected: str) -> ParseError:
        tok = self._current()
        found = tok.lexeme if tok.lexeme else tok.kind.value
        return ParseError(tok.span, expected, found)

    def _collect_comments(self) -> None:
        while self._at(TokenKind.COMMENT):
            tok = self._advance()
            self.pending.append(Comment(tok.value or "", tok.span.line))

    # -- module --------------------------------------------------------------

    def parse_module(self) -> Module:
        body: list[Stmt] = []
        while True:
            self._collect_comments()
            if self._at(TokenKind.EOF):
                break
            body.append(self.parse_statement())
        span = Span(1, 0, self._current().span.end_line,
                    self._current().span.end_col, 0, len(self.source))
        module = Module(body, span, source=self.source,
                        trailing_comments=self.pending)
        self.pending = []
        return module

    # -- statements ----------------------------------------------------------

    def parse_statement(self) -> Stmt:
        self._collect_comments()
        leading, self.pending = self.pending, []
        if self._at_kw("import"):
            stmt = self._parse_import()
        elif self._at_kw("from"):
            stmt = self._parse_import_from()
        elif self._at_kw("def"):
            stmt = self._parse_function_def()
        elif self._at_kw("for"):
            stmt = self._parse_for()
        elif self._at_kw("if"):
            stmt = self._parse_if()
        elif self._at_kw("return"):
            stmt = self._parse_return()
        elif self._at(TokenKind.KEYWORD):
            raise self._error("statement")
        else:
            stmt = self._parse_assign_or_expr()
        stmt.leading_comments = leading
        return stmt

    def _finish_simple(self, stmt: Stmt) -> Stmt:
        if self._at(TokenKind.COMMENT):
            tok = self._advance()
            stmt.trailing_comment = Comment(tok.value or "", tok.span.line)
        self._expect(TokenKind.NEWLINE, expected="end of statement")
        return stmt

    def _parse_dotted(self) -> tuple[str, Span]:
        first = self._expect(TokenKind.NAME, expected="module name")
        parts = [first.lexeme]
        end = first.span
        while self._at_op("."):
            self._advance()
            tok = self._expect(TokenKind.NAME, expected="name after '.'")
            parts.append(tok.lexeme)
            end = tok.span
        return ".".join(parts), Span.merge(first.span, end)

    def _parse_import(self) -> Stmt:
        start = self._advance().span
        names: list[tuple[str, str | None]] = []
        while True:
            path, path_span = self._parse_dotted()
            alias = None
            end = path_span
            if self._at_kw("as"):
                self._advance()
                tok = self._expect(TokenKind.NAME, expected="alias name")
                alias = tok.lexeme
                end = tok.span
            names.append((path, alias))
            if not self._at_op(","):
                break
            self._advance()
        return self._finish_simple(Import(names, Span.merge(start, end)))

    def _parse_import_from(self) -> Stmt:
        start = self._advance().span
        path, _ = self._parse_dotted()
        self._expect(TokenKind.KEYWORD, "import")
        names: list[tuple[str, str | None]] = []
        while True:
            tok = self._expect(TokenKind.NAME, expected="imported name")
            alias = None
            end = tok.span
            if self._at_kw("as"):
                self._advance()
                alias_tok = self._expect(TokenKind.NAME, expected="alias name")
                alias = alias_tok.lexeme
                end = alias_tok.span
            names.append((tok.lexeme, alias))
            if not self._at_op(","):
                break
            self._advance()
        return self._finish_simple(ImportFrom(path, names, Span.merge(start, end)))

    def _parse_return(self) -> Stmt:
        start = self._advance().span
        if self._at(TokenKind.NEWLINE) or self._at(TokenKind.COMMENT):
            return self._finish_simple(Return(None, start))
        value = self.parse_expression()
        return self._finish_simple(Return(value, Span.merge(start, value.span)))

    def _parse_assign_or_expr(self) -> Stmt:
        first = self.parse_expression()
        if not self._at_op("="):
            return self._finish_simple(ExprStmt(first, first.span))
        exprs = [first]
        while self._at_op("="):
            self._advance()
            exprs.append(self.parse_expression())
        targets, value = exprs[:-1], exprs[-1]
        for target in targets:
            if not isinstance(target, (Name, Attribute, Subscript)):
                raise ParseError(target.span, "assignable target", type(target).__name__)
        span = Span.merge(first.span, value.span)
        return self._finish_simple(Assign(targets, value, span))

    def _parse_function_def(self) -> Stmt:
        start = self._advance().span
        name_tok = self._expect(TokenKind.NAME, expected="function name")
        self._expect(TokenKind.OPERATOR, "(")
        params: list[Param] = []
        if not self._at_op(")"):
            while True:
                ptok = self._expect(TokenKind.NAME, expected="parameter name")
                default = None
                pspan = ptok.span
                if self._at_op("="):
                    self._advance()
                    default = self.parse_expression()
                    pspan = Span.merge(ptok.span, default.span)
                params.append(Param(ptok.lexeme, default, pspan))
                if not self._at_op(","):
                    break
                self._advance()
        self._expect(TokenKind.OPERATOR, ")")
        trailing, body, end = self._parse_block()
        stmt = FunctionDef(name_tok.lexeme, params, body, Span.merge(start, end))
        stmt.trailing_comment = trailing
        return stmt

    def _parse_for(self) -> Stmt:
        start = self._advance().span
        target_tok = self._expect(TokenKind.NAME, expected="loop variable")
        target = Name(target_tok.lexeme, target_tok.span)
        self._expect(TokenKind.KEYWORD, "in")
        it = self.parse_expression()
        trailing, body, end = self._parse_block()
        stmt = For(target, it, body, Span.merge(start, end))
        stmt.trailing_comment = trailing
        return stmt

    def _parse_if(self) -> Stmt:
        start = self._advance().span
        test = self.parse_expression()
        trailing, body, end = self._parse_block()
        orelse: list[Stmt] = []
        if self._at_kw("elif"):
            nested = self._parse_if()  # elif chain nests in orelse
            orelse = [nested]
            end = nested.span
        elif self._at_kw("else"):
            self._advance()
            else_trailing, orelse, end = self._parse_block()
            if orelse and else_trailing is not None and orelse[0].trailing_comment is None:
                orelse[0].leading_comments.insert(0, else_trailing)
        stmt = If(test, body, orelse, Span.merge(start, end))
        stmt.trailing_comment = trailing
        return stmt

    def _parse_block(self) -> tuple[Comment | None, list[Stmt], Span]:
        self._expect(TokenKind.OPERATOR, ":")
        trailing = None
        if self._at(TokenKind.COMMENT):
            tok = self._advance()
            trailing = Comment(tok.value or "", tok.span.line)
        self._expect(TokenKind.NEWLINE, expected="newline after ':'")
        self._collect_comments()
        self._expect(TokenKind.INDENT, expected="indented block")
        body: list[Stmt] = []
        while True:
            self._collect_comments()
            if self._at(TokenKind.DEDENT) or self._at(TokenKind.EOF):
                break
            body.append(self.parse_statement())
        end = self._advance().span  # DEDENT (or EOF at end of input)
        if not body:
            raise self._error("statement in block")
        return trailing, body, Span.merge(body[-1].span, end)

    # -- expressions ---------------------------------------------------------

    def parse_expression(self) -> Expr:
        return self._parse_or()

    def _binop_loop(self, parse_next, match) -> Expr:
        left = parse_next()
        while True:
            op = match()
            if op is None:
                return left
            self._advance()
            right = parse_next()
            left = BinOp(left, op, right, Span.merge(left.span, right.span))

    def _parse_or(self) -> Expr:
        return self._binop_loop(
            self._parse_and, lambda: "or" if self._at_kw("or") else None)

    def _parse_and(self) -> Expr:
        return self._binop_loop(
            self._parse_comparison, lambda: "and" if self._at_kw("and") else None)

    def _parse_comparison(self) -> Expr:
        left = self._parse_arith()
        op = None
        if self._at(TokenKind.OPERATOR) and self._current().lexeme in _COMPARISON_OPS:
            op = self._advance().lexeme
        elif self._at_kw("in"):
            self._advance()
            op = "in"
        if op is None:
            return left
        right = self._parse_arith()
        return BinOp(left, op, right, Span.merge(left.span, right.span))

    def _parse_arith(self) -> Expr:
        return self._binop_loop(
            self._parse_term,
            lambda: self._current().lexeme
            if self._at(TokenKind.OPERATOR) and self._current().lexeme in ("+", "-")
            else None)

    def _parse_term(self) -> Expr:
        return self._binop_loop(
            self._parse_power,
            lambda: self._current().lexeme
            if self._at(TokenKind.OPERATOR) and self._current().lexeme in _TERM_OPS
            else None)

    def _parse_power(self) -> Expr:
        base = self._parse_postfix()
        if self._at_op("**"):
            self._advance()
            exp = self._parse_power()
            return BinOp(base, "**", exp, Span.merge(base.span, exp.span))
        return base

    def _parse_postfix(self) -> Expr:
        expr = self._parse_atom()
        while True:
            if self._at_op("("):
                expr = self._parse_call(expr)
            elif self._at_op("."):
                self._advance()
                tok = self._expect(TokenKind.NAME, expected="attribute name")
                expr = Attribute(expr, tok.lexeme,
                                 Span.merge(expr.span, tok.span), tok.span)
            elif self._at_op("["):
                self._advance()
                index = self.parse_expression()
                close = self._expect(TokenKind.OPERATOR, "]")
                expr = Subscript(expr, index, Span.merge(expr.span, close.span))
            else:
                return expr

    def _parse_call(self, func: Expr) -> Expr:
        self._expect(TokenKind.OPERATOR, "(")
        args: list[Expr] = []
        keywords: list[tuple[str, Expr]] = []
        while not self._at_op(")"):
            if (self._at(TokenKind.NAME)
                    and self.tokens[self.pos + 1].kind is TokenKind.OPERATOR
                    and self.tokens[self.pos + 1].lexeme == "="):
                name_tok = self._advance()
                self._advance()
                keywords.append((name_tok.lexeme, self.parse_expression()))
            else:
                if keywords:
                    raise self._error("keyword argument (positional follows keyword)")
                args.append(self.parse_expression())
            if self._at_op(","):
                self._advance()
            elif not self._at_op(")"):
                raise self._error("',' or ')'")
        close = self._advance()
        return Call(func, args, keywords, Span.merge(func.span, close.span))

    def _parse_atom(self) -> Expr:
        tok = self._current()
        if tok.kind is TokenKind.NAME:
            self._advance()
            return Name(tok.lexeme, tok.span)
        if tok.kind is TokenKind.NUMBER:
            self._advance()
            return NumberLit(tok.lexeme, tok.span)
        if tok.kind is TokenKind.OPERATOR and tok.lexeme == "-":
            self._advance()
            num = self._expect(TokenKind.NUMBER, expected="numeric literal after '-'")
            return NumberLit("-" + num.lexeme, Span.merge(tok.span, num.span))
        if tok.kind is TokenKind.STRING:
            self._advance()
            delim = tok.lexeme[:3] if tok.lexeme[:3] in ("'''", '"""') else tok.lexeme[0]
            return StringLit(tok.value or "", quote_style_for(delim), tok.span,
                             raw=tok.lexeme)
        if tok.kind is TokenKind.OPERATOR and tok.lexeme == "(":
            self._advance()
            inner = self.parse_expression()
            self._expect(TokenKind.OPERATOR, ")")
            return inner
        if tok.kind is TokenKind.OPERATOR and tok.lexeme == "[":
            self._advance()
            items: list[Expr] = []
            while not self._at_op("]"):
                items.append(self.parse_expression())
                if self._at_op(","):
                    self._advance()
                elif not self._at_op("]"):
                    raise self._error("',' or ']'")
            close = self._advance()
            return ListLit(items, Span.merge(tok.span, close.span))
        if tok.kind is TokenKind.OPERATOR and tok.lexeme == "{":
            self._advance()
            pairs: list[tuple[Expr, Expr]] = []
            while not self._at_op("}"):
                key = self.parse_expression()
                self._expect(TokenKind.OPERATOR, ":")
                pairs.append((key, self.parse_expression()))
                if self._at_op(","):
                    self._advance()
                elif not self._at_op("}"):
                    raise self._error("',' or '}'")
            close = self._advance()
            return DictLit(pairs, Span.merge(tok.span, close.span))
        raise self._error("expression")


def parse(source: str) -> Module:
    """Parse *source* into a :class:`Module`.

    Raises :class:`~kchlint.errors.LexError` or
    :class:`~kchlint.errors.ParseError` for input outside the subset; an
    unknown-but-wellformed call name is never a parse error.
    """
    return _Parser(tokenize(source), source).parse_module()
