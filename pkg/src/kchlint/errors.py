"""Exception types shared across the package."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from kchlint.syntax.tokens import Span


class KchlintError(Exception):
    """Base class for all errors raised by this package."""


class LexError(KchlintError):
    """Source text could not be tokenized (unterminated string, bad char)."""

    def __init__(self, span: "Span", reason: str) -> None:
        super().__init__(f"{span.line}:{span.col}: {reason}")
        self.span = span
        self.reason = reason


class ParseError(KchlintError):
    """Snippet is malformed or outside the supported grammar subset.

    Deliberately distinct from a lint diagnostic: a snippet that does not
    parse is reported as a parse failure, never as a finding.
    """

    def __init__(self, span: "Span", expected: str, found: str) -> None:
        super().__init__(f"{span.line}:{span.col}: expected {expected}, found {found}")
        self.span = span
        self.expected = expected
        self.found = found


class ManifestError(KchlintError):
    """A knowledge-base manifest violates the schema."""

    def __init__(self, path: str, reason: str) -> None:
        super().__init__(f"{path}: {reason}")
        self.path = path
        self.reason = reason


class DanglingRuleError(ManifestError):
    """A semantic rule references a callable absent from its library."""


class DatasetError(KchlintError):
    """An evaluation dataset entry is missing or inconsistent."""

    def __init__(self, sample_id: str, reason: str) -> None:
        super().__init__(f"sample {sample_id!r}: {reason}")
        self.sample_id = sample_id
        self.reason = reason


class NoMutationPointError(KchlintError):
    """The snippet offers no site where the requested mutation applies."""

    def __init__(self, kind: str) -> None:
        super().__init__(f"no mutation point for kind {kind!r}")
        self.kind = kind
