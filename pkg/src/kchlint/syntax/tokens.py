"""Tokenizer for the supported Python subset.

Produces a flat token stream with explicit ``indent``/``dedent``/``newline``
tokens, Python-style implicit line joining inside brackets, and comments kept
as first-class tokens (the intent rule reads them downstream).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from kchlint.errors import LexError


class TokenKind(enum.Enum):
    NAME = "name"
    NUMBER = "number"
    STRING = "string"
    OPERATOR = "operator"
    KEYWORD = "keyword"
    NEWLINE = "newline"
    INDENT = "indent"
    DEDENT = "dedent"
    COMMENT = "comment"
    EOF = "eof"


@dataclass(frozen=True)
class Span:
    """Source range: 1-based line, 0-based column, byte offsets."""

    line: int
    col: int
    end_line: int
    end_col: int
    start: int
    end: int

    @staticmethod
    def merge(a: "Span", b: "Span") -> "Span":
        first, last = (a, b) if a.start <= b.start else (b, a)
        return Span(first.line, first.col, last.end_line, last.end_col, first.start, last.end)


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    span: Span
    # Decoded literal payload: string value without quotes/escapes.
    value: str | None = None


KEYWORDS = frozenset({
    "import", "from", "as", "def", "return", "for", "in",
    "if", "elif", "else", "and", "or",
})

# Longest-first so multi-char operators win over their prefixes.
OPERATORS = (
    "**", "//", "==", "!=", "<=", ">=",
    "+", "-", "*", "/", "%", "=", "<", ">",
    "(", ")", "[", "]", "{", "}", ",", ":", ".",
)

OPEN_BRACKETS = {"(", "[", "{"}
CLOSE_BRACKETS = {")", "]", "}"}

_SIMPLE_ESCAPES = {"\\": "\\", "'": "'", '"': '"', "n": "\n", "t": "\t", "r": "\r"}


class _Lexer:
    def __init__(self, source: str) -> None:
        self.src = source
        self.pos = 0
        self.line = 1
        self.col = 0
        self.tokens: list[Token] = []
        self.indents = [0]
        self.depth = 0  # bracket nesting
        self.at_line_start = True

    # -- primitives --------------------------------------------------------

    def _peek(self, offset: int = 0) -> str:
        i = self.pos + offset
        return self.src[i] if i < len(self.src) else ""

    def _advance(self, n: int = 1) -> str:
        text = self.src[self.pos:self.pos + n]
        for ch in text:
            if ch == "\n":
                self.line += 1
                self.col = 0
            else:
                self.col += 1
        self.pos += n
        return text

    def _here(self) -> tuple[int, int, int]:
        return self.line, self.col, self.pos

    def _emit(self, kind: TokenKind, start: tuple[int, int, int], lexeme: str,
              value: str | None = None) -> None:
        line, col, pos = start
        span = Span(line, col, self.line, self.col, pos, self.pos)
        self.tokens.append(Token(kind, lexeme, span, value))

    def _error(self, reason: str) -> LexError:
        span = Span(self.line, self.col, self.line, self.col + 1, self.pos, self.pos + 1)
        return LexError(span, reason)

    # -- line structure ----------------------------------------------------

    def _handle_indentation(self) -> None:
        # Measure leading spaces; blank and comment-only lines carry no
        # indentation semantics, matching the stdlib tokenizer.
        start = self.pos
        width = 0
        while self._peek() == " ":
            self._advance()
            width += 1
        if self._peek() == "\t":
            raise self._error("tab in indentation")
        nxt = self._peek()
        if nxt in ("\n", "\r", "", "#"):
            return
        if width > self.indents[-1]:
            self.indents.append(width)
            span = Span(self.line, 0, self.line, width, start, self.pos)
            self.tokens.append(Token(TokenKind.INDENT, "", span))
        else:
            while width < self.indents[-1]:
                self.indents.pop()
                span = Span(self.line, width, self.line, width, self.pos, self.pos)
                self.tokens.append(Token(TokenKind.DEDENT, "", span))
            if width != self.indents[-1]:
                raise self._error("unindent does not match any outer indentation level")

    # -- token scanners ----------------------------------------------------

    def _scan_string(self) -> None:
        start = self._here()
        quote = self._peek()
        if self.src.startswith(quote * 3, self.pos):
            self._scan_string_body(quote * 3, allow_newline=True, start=start)
        else:
            self._scan_string_body(quote, allow_newline=False, start=start)

    def _scan_string_body(self, delim: str, allow_newline: bool,
                          start: tuple[int, int, int]) -> None:
        self._advance(len(delim))
        chars: list[str] = []
        while True:
            if self.pos >= len(self.src):
                raise self._error("unterminated string literal")
            if self.src.startswith(delim, self.pos):
                self._advance(len(delim))
                break
            ch = self._peek()
            if ch == "\n" and not allow_newline:
                raise self._error("unterminated string literal")
            if ch == "\\":
                esc = self._peek(1)
                if esc in _SIMPLE_ESCAPES:
                    chars.append(_SIMPLE_ESCAPES[esc])
                    self._advance(2)
                    continue
                # Unrecognized escape: keep both characters, like CPython.
                chars.append("\\")
                self._advance()
                continue
            chars.append(self._advance())
        lexeme = self.src[start[2]:self.pos]
        self._emit(TokenKind.STRING, start, lexeme, value="".join(chars))

    def _scan_number(self) -> None:
        start = self._here()
        while self._peek().isdigit():
            self._advance()
        if self._peek() == "." and self._peek(1).isdigit():
            self._advance()
            while self._peek().isdigit():
                self._advance()
        if self._peek() in ("e", "E") and (
            self._peek(1).isdigit()
            or (self._peek(1) in "+-" and self._peek(2).isdigit())
        ):
            self._advance()
            if self._peek() in "+-":
                self._advance()
            while self._peek().isdigit():
                self._advance()
        self._emit(TokenKind.NUMBER, start, self.src[start[2]:self.pos])

    def _scan_name(self) -> None:
        start = self._here()
        while self._peek().isalnum() or self._peek() == "_":
            self._advance()
        lexeme = self.src[start[2]:self.pos]
        kind = TokenKind.KEYWORD if lexeme in KEYWORDS else TokenKind.NAME
        self._emit(kind, start, lexeme)

    def _scan_comment(self) -> None:
        start = self._here()
        while self._peek() not in ("\n", ""):
            self._advance()
        lexeme = self.src[start[2]:self.pos]
        self._emit(TokenKind.COMMENT, start, lexeme, value=lexeme.lstrip("#").strip())

    def _scan_operator(self) -> None:
        for op in OPERATORS:
            if self.src.startswith(op, self.pos):
                start = self._here()
                self._advance(len(op))
                self._emit(TokenKind.OPERATOR, start, op)
                if op in OPEN_BRACKETS:
                    self.depth += 1
                elif op in CLOSE_BRACKETS:
                    self.depth = max(0, self.depth - 1)
                return
        raise self._error(f"illegal character {self._peek()!r}")

    # -- driver ------------------------------------------------------------

    def run(self) -> list[Token]:
        emitted_code = False  # current logical line produced a code token
        while self.pos < len(self.src):
            if self.at_line_start and self.depth == 0:
                self.at_line_start = False
                emitted_code = False
                self._handle_indentation()
                continue
            ch = self._peek()
            if ch == " " or ch == "\t":
                self._advance()
            elif ch == "\r":
                if self._peek(1) != "\n":
                    raise self._error("bare carriage return")
                start = self._here()
                self._advance(2)
                if self.depth == 0:
                    if emitted_code:
                        self._emit(TokenKind.NEWLINE, start, "\r\n")
                    emitted_code = False
                    self.at_line_start = True
            elif ch == "\n":
                start = self._here()
                self._advance()
                if self.depth == 0:
                    # Blank / comment-only lines do not yield newline tokens.
                    if emitted_code:
                        self._emit(TokenKind.NEWLINE, start, "\n")
                    emitted_code = False
                    self.at_line_start = True
            elif ch == "#":
                self._scan_comment()
            elif ch in ("'", '"'):
                self._scan_string()
                emitted_code = True
            elif ch.isdigit():
                self._scan_number()
                emitted_code = True
            elif ch.isalpha() or ch == "_":
                self._scan_name()
                emitted_code = True
            else:
                self._scan_operator()
                emitted_code = True
        # Close any open logical line, then unwind indentation.
        if emitted_code:
            here = self._here()
            self._emit(TokenKind.NEWLINE, here, "")
        while len(self.indents) > 1:
            self.indents.pop()
            here = self._here()
            self._emit(TokenKind.DEDENT, here, "")
        self._emit(TokenKind.EOF, self._here(), "")
        return self.tokens


def tokenize(source: str) -> list[Token]:
    """Tokenize *source*, raising :class:`LexError` on malformed input."""
    return _Lexer(source).run()
