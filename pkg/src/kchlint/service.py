"""HTTP service over the core pipeline.

The app is a thin wrapper: one shared immutable knowledge base, request
and response bodies as pydantic models, and no state between requests.
POST /check reports diagnostics, POST /fix repairs, GET /kb summarizes
the loaded knowledge base, GET /health answers liveness probes.
"""

from __future__ import annotations

from fastapi import FastAPI
from pydantic import BaseModel, Field

from kchlint import __version__
from kchlint.correction import fix
from kchlint.errors import LexError, ParseError
from kchlint.kb import KnowledgeBase, default_kb
from kchlint.syntax.parser import parse
from kchlint.validation import Diagnostic, validate


class SuggestionModel(BaseModel):
    kind: str
    replacement: str
    required_import: tuple[str, str] | None = None


class DiagnosticModel(BaseModel):
    line: int
    col: int
    category: str
    name: str
    evidence: str
    confidence: str
    suggestion: SuggestionModel | None = None


class CheckRequest(BaseModel):
    code: str


class CheckResponse(BaseModel):
    clean: bool
    diagnostics: list[DiagnosticModel]
    parse_error: str | None = None


class FixRequest(BaseModel):
    code: str
    fix_intent: bool = False


class FixResponse(BaseModel):
    fixed_code: str
    applied: list[DiagnosticModel]
    unfixed: list[DiagnosticModel]
    note: str | None = None


class LibrarySummary(BaseModel):
    version: str
    canonical_alias: str
    callables: int
    object_types: dict[str, int] = Field(default_factory=dict)


class KbResponse(BaseModel):
    libraries: dict[str, LibrarySummary]


class HealthResponse(BaseModel):
    status: str
    version: str


def _to_model(diagnostic: Diagnostic) -> DiagnosticModel:
    suggestion = None
    if diagnostic.suggestion is not None:
        suggestion = SuggestionModel(
            kind=diagnostic.suggestion.kind.value,
            replacement=diagnostic.suggestion.replacement,
            required_import=diagnostic.suggestion.required_import)
    return DiagnosticModel(
        line=diagnostic.span.line, col=diagnostic.span.col,
        category=diagnostic.category.value, name=diagnostic.name,
        evidence=diagnostic.evidence, confidence=diagnostic.confidence,
        suggestion=suggestion)


def create_app(kb: KnowledgeBase | None = None) -> FastAPI:
    """Application bound to one knowledge base (default when None)."""
    if kb is None:
        kb = default_kb()
    app = FastAPI(title="kchlint", version=__version__)

    @app.post("/check", response_model=CheckResponse)
    def check_endpoint(request: CheckRequest) -> CheckResponse:
        try:
            diagnostics = validate(parse(request.code), kb)
        except (LexError, ParseError) as exc:
            return CheckResponse(clean=False, diagnostics=[],
                                 parse_error=str(exc))
        return CheckResponse(clean=not diagnostics,
                             diagnostics=[_to_model(d) for d in diagnostics])

    @app.post("/fix", response_model=FixResponse)
    def fix_endpoint(request: FixRequest) -> FixResponse:
        result = fix(request.code, kb, fix_intent=request.fix_intent)
        return FixResponse(
            fixed_code=result.fixed_source,
            applied=[_to_model(d) for d in result.applied],
            unfixed=[_to_model(d) for d in result.unfixed],
            note=result.note)

    @app.get("/kb", response_model=KbResponse)
    def kb_endpoint() -> KbResponse:
        libraries = {}
        for name in sorted(kb.libraries):
            entry = kb.libraries[name]
            libraries[name] = LibrarySummary(
                version=entry.version,
                canonical_alias=entry.canonical_alias,
                callables=len(entry.callables),
                object_types={t: len(ms) for t, ms
                              in sorted(entry.object_methods.items())})
        return KbResponse(libraries=libraries)

    @app.get("/health", response_model=HealthResponse)
    def health_endpoint() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    return app
