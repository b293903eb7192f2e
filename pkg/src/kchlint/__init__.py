"""Static detection and repair of knowledge-conflicting API usage.

The pipeline parses a Python snippet (a supported subset, no execution),
checks every call and identifier against a versioned knowledge base of
library APIs, and repairs what it can with localized AST edits rendered
back as canonical source.
"""

from kchlint.correction import FixResult, fix
from kchlint.errors import (
    DanglingRuleError,
    DatasetError,
    KchlintError,
    LexError,
    ManifestError,
    NoMutationPointError,
    ParseError,
)
from kchlint.kb import KnowledgeBase, bundled_kb, default_kb, load_kb
from kchlint.syntax import parse, unparse
from kchlint.validation import Category, Diagnostic, SuggestedFix, validate

__version__ = "0.1.0"


def check(source: str, kb: KnowledgeBase | None = None) -> list[Diagnostic]:
    """Diagnostics for *source* against *kb* (default knowledge base if None).

    Raises LexError/ParseError when the snippet is outside the supported
    subset; an unknown API name is a diagnostic, never a parse error.
    """
    if kb is None:
        kb = default_kb()
    return validate(parse(source), kb)


def fix_source(source: str, kb: KnowledgeBase | None = None,
               fix_intent: bool = False) -> FixResult:
    """Repair *source* and return the canonical fixed text with the
    applied/unfixed diagnostic split."""
    if kb is None:
        kb = default_kb()
    return fix(source, kb, fix_intent=fix_intent)


__all__ = [
    "Category", "DanglingRuleError", "DatasetError", "Diagnostic",
    "FixResult", "KchlintError", "KnowledgeBase", "LexError",
    "ManifestError", "NoMutationPointError", "ParseError", "SuggestedFix",
    "bundled_kb", "check", "default_kb", "fix", "fix_source", "load_kb",
    "parse", "unparse", "validate", "__version__",
]
