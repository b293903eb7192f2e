"""Labeled-corpus evaluation and mutation-based corpus synthesis.

Detection is scored as binary classification: a sample counts as detected
when validation emits at least one diagnostic.  Fix correctness compares
the repaired AST against the expected code structurally, never by
execution.  Because no labeled corpus ships with the package, clean
snippets can be mutated into hallucinated ones in four controlled ways,
each recording the original canonical code as the expected fix.
"""

from __future__ import annotations

import dataclasses
import json
import random
import time
from dataclasses import dataclass, field
from pathlib import Path

from kchlint.distance import nearest
from kchlint.errors import DatasetError, LexError, NoMutationPointError, ParseError
from kchlint.extraction import (
    BUILTIN_NAMES,
    QUALIFIED,
    CallSite,
    extract_call_sites,
    extract_imports,
    extract_scopes,
)
from kchlint.correction import fix
from kchlint.kb import KnowledgeBase
from kchlint.syntax.nodes import (
    Attribute,
    Expr,
    Import,
    ImportFrom,
    Module,
    Name,
    structurally_equal,
    walk,
)
from kchlint.syntax.parser import parse
from kchlint.syntax.unparser import unparse
from kchlint.validation import validate

CLEAN = "clean"
HALLUCINATED = "hallucinated"

MISTYPED_API = "mistyped-api"
MISSING_IMPORT = "missing-import"
CONTEXTUAL_MISMATCH = "contextual-mismatch"
IDENTIFIER_CONFLICT = "identifier-conflict"
HALLUC_TYPES = (MISTYPED_API, MISSING_IMPORT, CONTEXTUAL_MISMATCH,
                IDENTIFIER_CONFLICT)


@dataclass(frozen=True)
class Sample:
    id: str
    code: str
    label: str                        # CLEAN or HALLUCINATED
    halluc_type: str | None = None
    library: str | None = None
    expected_fixed_code: str | None = None


@dataclass
class EvalReport:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0
    precision: float = 1.0
    recall: float = 1.0
    f1: float = 1.0
    accuracy: float = 1.0
    degenerate_precision: bool = False  # tp + fp == 0: precision is vacuous
    fix_attempted: int = 0
    fix_correct: int = 0
    fix_accuracy: float = 1.0
    per_type: dict[str, dict[str, int]] = field(default_factory=dict)
    per_library: dict[str, dict[str, int]] = field(default_factory=dict)
    parse_failures: list[str] = field(default_factory=list)
    wall_time: float = 0.0

    def to_dict(self, include_timing: bool = False) -> dict:
        data = {
            "tp": self.tp, "fp": self.fp, "fn": self.fn, "tn": self.tn,
            "precision": round(self.precision, 6),
            "recall": round(self.recall, 6),
            "f1": round(self.f1, 6),
            "accuracy": round(self.accuracy, 6),
            "degenerate_precision": self.degenerate_precision,
            "fix_attempted": self.fix_attempted,
            "fix_correct": self.fix_correct,
            "fix_accuracy": round(self.fix_accuracy, 6),
            "per_type": {k: dict(v) for k, v in sorted(self.per_type.items())},
            "per_library": {k: dict(v)
                            for k, v in sorted(self.per_library.items())},
            "parse_failures": list(self.parse_failures),
        }
        if include_timing:
            data["wall_time"] = round(self.wall_time, 6)
        return data


def compute_metrics(tp: int, fp: int, fn: int,
                    tn: int) -> tuple[float, float, float, float, bool]:
    """(precision, recall, f1, accuracy, degenerate) from confusion counts.

    An empty positive-prediction set has no defined precision; it is
    reported as 1.0 with the degenerate flag raised.  Vacuous recall
    (no positives in the corpus) is likewise 1.0.
    """
    degenerate = (tp + fp) == 0
    precision = 1.0 if degenerate else tp / (tp + fp)
    recall = 1.0 if (tp + fn) == 0 else tp / (tp + fn)
    f1 = 0.0 if precision + recall == 0 else (
        2 * precision * recall / (precision + recall))
    total = tp + fp + fn + tn
    accuracy = 1.0 if total == 0 else (tp + tn) / total
    return precision, recall, f1, accuracy, degenerate


# -- dataset -----------------------------------------------------------------


def load_dataset(directory: str | Path) -> list[Sample]:
    """Samples from `<dir>/index.json`, in index order.

    Layout: the index lists records with id, label, optional halluc_type
    and library, a relative `code` path, and an optional `expected_fix`
    path.  Violated invariants raise DatasetError naming the sample.
    """
    directory = Path(directory)
    index_path = directory / "index.json"
    try:
        raw = json.loads(index_path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise DatasetError("<index>", f"cannot read {index_path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DatasetError("<index>", f"invalid JSON in index: {exc}") from exc
    if not isinstance(raw, dict) or not isinstance(raw.get("samples"), list):
        raise DatasetError("<index>", "index must be an object with a "
                                      "'samples' list")
    samples = []
    seen: set[str] = set()
    for i, record in enumerate(raw["samples"]):
        if not isinstance(record, dict):
            raise DatasetError(f"<index>[{i}]", "sample record must be an object")
        sample_id = record.get("id")
        if not isinstance(sample_id, str) or not sample_id:
            raise DatasetError(f"<index>[{i}]", "missing or empty id")
        if sample_id in seen:
            raise DatasetError(sample_id, "duplicate id")
        seen.add(sample_id)
        label = record.get("label")
        if label not in (CLEAN, HALLUCINATED):
            raise DatasetError(sample_id, f"label must be {CLEAN!r} or "
                                          f"{HALLUCINATED!r}, got {label!r}")
        halluc_type = record.get("halluc_type")
        if label == HALLUCINATED:
            if halluc_type not in HALLUC_TYPES:
                raise DatasetError(sample_id,
                                   "hallucinated sample needs halluc_type "
                                   f"from {', '.join(HALLUC_TYPES)}")
        elif halluc_type is not None:
            raise DatasetError(sample_id, "clean sample must not carry "
                                          "halluc_type")
        code_rel = record.get("code")
        if not isinstance(code_rel, str) or not code_rel:
            raise DatasetError(sample_id, "missing code path")
        try:
            code = (directory / code_rel).read_text(encoding="utf-8")
        except OSError as exc:
            raise DatasetError(sample_id, f"cannot read code: {exc}") from exc
        expected = None
        expected_rel = record.get("expected_fix")
        if expected_rel is not None:
            try:
                expected = (directory / expected_rel).read_text(encoding="utf-8")
            except OSError as exc:
                raise DatasetError(sample_id,
                                   f"cannot read expected fix: {exc}") from exc
            try:
                parse(expected)
            except (LexError, ParseError) as exc:
                raise DatasetError(sample_id,
                                   f"expected fix does not parse: {exc}") from exc
        library = record.get("library")
        if library is not None and not isinstance(library, str):
            raise DatasetError(sample_id, "library must be a string")
        samples.append(Sample(sample_id, code, label, halluc_type,
                              library, expected))
    return samples


def write_dataset(samples: list[Sample], directory: str | Path) -> None:
    """Write samples in the on-disk dataset layout."""
    directory = Path(directory)
    (directory / "samples").mkdir(parents=True, exist_ok=True)
    (directory / "expected").mkdir(parents=True, exist_ok=True)
    records = []
    for sample in samples:
        code_rel = f"samples/{sample.id}.py"
        (directory / code_rel).write_text(sample.code, encoding="utf-8")
        record: dict = {"id": sample.id, "label": sample.label,
                        "code": code_rel}
        if sample.halluc_type is not None:
            record["halluc_type"] = sample.halluc_type
        if sample.library is not None:
            record["library"] = sample.library
        if sample.expected_fixed_code is not None:
            expected_rel = f"expected/{sample.id}.py"
            (directory / expected_rel).write_text(sample.expected_fixed_code,
                                                  encoding="utf-8")
            record["expected_fix"] = expected_rel
        records.append(record)
    (directory / "index.json").write_text(
        json.dumps({"samples": records}, indent=2) + "\n", encoding="utf-8")


# -- evaluation --------------------------------------------------------------


def evaluate(samples: list[Sample], kb: KnowledgeBase,
             fix_intent: bool = False) -> EvalReport:
    """Score detection and repair over *samples*."""
    report = EvalReport()
    started = time.perf_counter()
    for sample in samples:
        type_row = None
        if sample.label == HALLUCINATED:
            type_row = report.per_type.setdefault(
                sample.halluc_type or "unspecified",
                {"total": 0, "detected": 0, "fixed": 0})
            type_row["total"] += 1
        lib_row = report.per_library.setdefault(
            sample.library or "-",
            {"total": 0, "hallucinated": 0, "detected": 0,
             "false_positives": 0, "fixed": 0})
        lib_row["total"] += 1

        try:
            module = parse(sample.code)
            detected = bool(validate(module, kb))
        except (LexError, ParseError):
            report.parse_failures.append(sample.id)
            detected = False

        if sample.label == HALLUCINATED:
            lib_row["hallucinated"] += 1
            if detected:
                report.tp += 1
                type_row["detected"] += 1  # type: ignore[index]
                lib_row["detected"] += 1
                if sample.expected_fixed_code is not None:
                    result = fix(sample.code, kb, fix_intent=fix_intent)
                    if result.applied:
                        report.fix_attempted += 1
                    if _fix_matches(result.fixed_source,
                                    sample.expected_fixed_code):
                        report.fix_correct += 1
                        type_row["fixed"] += 1  # type: ignore[index]
                        lib_row["fixed"] += 1
            else:
                report.fn += 1
        else:
            if detected:
                report.fp += 1
                lib_row["false_positives"] += 1
            else:
                report.tn += 1

    (report.precision, report.recall, report.f1, report.accuracy,
     report.degenerate_precision) = compute_metrics(
        report.tp, report.fp, report.fn, report.tn)
    report.fix_accuracy = (report.fix_correct / report.tp
                           if report.tp > 0 else 1.0)
    report.wall_time = time.perf_counter() - started
    return report


def _fix_matches(fixed_source: str, expected: str) -> bool:
    try:
        return structurally_equal(parse(fixed_source), parse(expected))
    except (LexError, ParseError):
        return False


def format_report(report: EvalReport, timing: bool = False) -> str:
    """Human-readable report table."""
    lines = [
        f"counts     tp={report.tp} fp={report.fp} fn={report.fn} tn={report.tn}",
        (f"metrics    precision={report.precision:.3f} recall={report.recall:.3f}"
         f" f1={report.f1:.3f} accuracy={report.accuracy:.3f}"
         + ("  [no positive predictions]" if report.degenerate_precision else "")),
        (f"repair     attempted={report.fix_attempted} correct={report.fix_correct}"
         f" fix_accuracy={report.fix_accuracy:.3f}"),
    ]
    if report.per_type:
        lines.append("per type")
        for name in sorted(report.per_type):
            row = report.per_type[name]
            lines.append(f"  {name:<22} total={row['total']:<4}"
                         f" detected={row['detected']:<4} fixed={row['fixed']}")
    if report.per_library:
        lines.append("per library")
        for name in sorted(report.per_library):
            row = report.per_library[name]
            lines.append(
                f"  {name:<22} total={row['total']:<4}"
                f" hallucinated={row['hallucinated']:<4}"
                f" detected={row['detected']:<4}"
                f" fp={row['false_positives']:<4} fixed={row['fixed']}")
    if report.parse_failures:
        lines.append("parse failures: " + ", ".join(report.parse_failures))
    if timing:
        lines.append(f"wall time  {report.wall_time:.3f}s")
    return "\n".join(lines)


# -- mutation ----------------------------------------------------------------


def _rng(sample: Sample, kind: str, seed: int) -> random.Random:
    return random.Random(f"{sample.id}:{kind}:{seed}")


def _char_edits(name: str) -> list[str]:
    """All single-character swap/drop/duplicate variants of *name*."""
    variants = []
    for i in range(len(name) - 1):
        if name[i] != name[i + 1]:
            variants.append(name[:i] + name[i + 1] + name[i] + name[i + 2:])
    for i in range(len(name)):
        variants.append(name[:i] + name[i + 1:])
    for i in range(len(name)):
        variants.append(name[:i] + name[i] + name[i:])
    unique = []
    for variant in variants:
        if (variant != name and variant.isidentifier()
                and variant not in unique):
            unique.append(variant)
    return unique


def _replace_expr(module: Module, target: Expr, replacement: Expr) -> Module:
    """New tree with the node *target* (by identity) swapped out."""

    def tx(node):
        if node is target:
            return replacement
        if not dataclasses.is_dataclass(node) or isinstance(node, type):
            return node
        changes = {}
        for f in dataclasses.fields(node):
            value = getattr(node, f.name)
            if isinstance(value, list):
                new_list = []
                mutated = False
                for item in value:
                    if isinstance(item, tuple):
                        new_item = tuple(tx(part) for part in item)
                        mutated = mutated or any(
                            a is not b for a, b in zip(item, new_item))
                        new_list.append(new_item)
                    else:
                        new_item = tx(item)
                        mutated = mutated or new_item is not item
                        new_list.append(new_item)
                if mutated:
                    changes[f.name] = new_list
            elif dataclasses.is_dataclass(value) and not isinstance(value, type):
                new_value = tx(value)
                if new_value is not value:
                    changes[f.name] = new_value
        if changes:
            return dataclasses.replace(node, **changes)
        return node

    return tx(module)


def mutate(sample: Sample, kind: str, seed: int,
           kb: KnowledgeBase) -> Sample:
    """Inject one *kind* defect into a clean sample, deterministically.

    The clean code's canonical form is recorded as the expected fix.
    Raises NoMutationPointError when the snippet offers no place to plant
    the requested defect.
    """
    if sample.label != CLEAN:
        raise ValueError(f"can only mutate clean samples, got {sample.label!r}")
    if kind not in HALLUC_TYPES:
        raise ValueError(f"unknown mutation kind {kind!r}")
    module = parse(sample.code)
    canonical = unparse(module)
    rng = _rng(sample, kind, seed)
    if kind == MISTYPED_API:
        mutated, library = _mutate_mistyped(module, rng, kb)
    elif kind == MISSING_IMPORT:
        mutated, library = _mutate_missing_import(module, rng, kb)
    elif kind == CONTEXTUAL_MISMATCH:
        mutated, library = _mutate_contextual(module, rng, kb)
    else:
        mutated, library = _mutate_identifier(module, rng, kb)
    return Sample(id=f"{sample.id}--{kind}-s{seed}", code=unparse(mutated),
                  label=HALLUCINATED, halluc_type=kind, library=library,
                  expected_fixed_code=canonical)


def _qualified_valid_sites(module: Module,
                           kb: KnowledgeBase) -> list[CallSite]:
    aliases = extract_imports(module)
    return [site for site in extract_call_sites(module, aliases)
            if site.callee_kind == QUALIFIED and kb.has_library(site.base_path)
            and kb.lookup_callable(site.base_path, site.func_name)]


def _mutate_mistyped(module: Module, rng: random.Random,
                     kb: KnowledgeBase) -> tuple[Module, str]:
    sites = _qualified_valid_sites(module, kb)
    rng.shuffle(sites)
    for site in sites:
        library = site.base_path
        entry_callables = kb.libraries[library].callables
        variants = [v for v in _char_edits(site.func_name)
                    if v not in entry_callables]
        if not variants:
            continue
        typo = rng.choice(variants)
        func = site.call_node.func
        assert isinstance(func, Attribute)
        replacement = dataclasses.replace(func, attr_name=typo)
        return _replace_expr(module, func, replacement), library
    raise NoMutationPointError(MISTYPED_API)


def _mutate_missing_import(module: Module, rng: random.Random,
                           kb: KnowledgeBase) -> tuple[Module, str]:
    scopes = extract_scopes(module)
    module_scope_names = scopes.scopes[0].defined
    leading_imports = []
    for stmt in module.body:
        if isinstance(stmt, (Import, ImportFrom)):
            leading_imports.append(stmt)
        else:
            break
    if not leading_imports:
        raise NoMutationPointError(MISSING_IMPORT)
    last_import = leading_imports[-1]
    if not isinstance(last_import, Import) or len(last_import.names) != 1:
        raise NoMutationPointError(MISSING_IMPORT)
    path, alias = last_import.names[0]
    bound = alias if alias is not None else path.split(".")[0]
    if not kb.has_library(path) or bound != (kb.canonical_alias(path) or path):
        raise NoMutationPointError(MISSING_IMPORT)

    candidates = []
    for site in _qualified_valid_sites(module, kb):
        if site.base_path != path:
            continue
        func = site.call_node.func
        if not isinstance(func, Attribute) or not isinstance(func.value, Name):
            continue
        if func.value.identifier != bound:
            continue
        name = site.func_name
        if (kb.providers_of(name) == (path,) and name not in BUILTIN_NAMES
                and name not in module_scope_names):
            candidates.append(site)
    if not candidates:
        raise NoMutationPointError(MISSING_IMPORT)
    site = rng.choice(sorted(candidates, key=lambda s: s.span.start))
    func = site.call_node.func
    assert isinstance(func, Attribute)
    stripped = _replace_expr(module, func, Name(site.func_name, func.attr_span))
    # The deleted import is the last leading one, so the repair's
    # insert-after-imports slot is exactly the hole left behind.
    body = [stmt for stmt in stripped.body if stmt is not last_import]
    assert len(body) == len(stripped.body) - 1
    return dataclasses.replace(stripped, body=body), path


def _mutate_contextual(module: Module, rng: random.Random,
                       kb: KnowledgeBase) -> tuple[Module, str]:
    candidates = []
    for site in _qualified_valid_sites(module, kb):
        library = site.base_path
        if not kb.is_reader(library, site.func_name):
            continue
        cue = None
        for arg in site.args:
            if arg.literal_kind == "string":
                cue = arg.file_extension
                break
        if cue is None:
            continue
        if kb.extension_callable(library, cue) != site.func_name:
            continue  # snippet is not currently consistent; skip
        family = sorted(name for lib, name in kb.semantic.reader_family
                        if lib == library and name != site.func_name)
        if family:
            candidates.append((site, family))
    if not candidates:
        raise NoMutationPointError(CONTEXTUAL_MISMATCH)
    site, family = rng.choice(
        sorted(candidates, key=lambda pair: pair[0].span.start))
    wrong = rng.choice(family)
    func = site.call_node.func
    assert isinstance(func, Attribute)
    replacement = dataclasses.replace(func, attr_name=wrong)
    return _replace_expr(module, func, replacement), site.base_path


def _mutate_identifier(module: Module, rng: random.Random,
                       kb: KnowledgeBase) -> tuple[Module, str | None]:
    scopes = extract_scopes(module)
    uses = [use for use in scopes.uses
            if scopes.is_defined(use.scope_id, use.name)
            and use.name not in BUILTIN_NAMES
            and len(use.name) >= 3]
    rng.shuffle(uses)
    for use in uses:
        defined = scopes.names_in_chain(use.scope_id)
        variants = []
        for variant in _char_edits(use.name):
            if variant in defined or variant in BUILTIN_NAMES:
                continue
            if (kb.library_for_alias(variant) is not None
                    or variant in kb.module_first_segments):
                continue
            if use.is_callee and kb.providers_of(variant):
                continue
            found = None
            candidates = defined - {variant}
            if candidates:
                found = nearest(variant, candidates)
            if found is None or found[0] != use.name:
                continue  # repair would not land back on the original
            variants.append(variant)
        if not variants:
            continue
        corrupted = rng.choice(variants)
        target = _find_name_node(module, use.span.start, use.span.end)
        if target is None:
            continue
        replacement = Name(corrupted, target.span)
        return _replace_expr(module, target, replacement), None
    raise NoMutationPointError(IDENTIFIER_CONFLICT)


def _find_name_node(module: Module, start: int, end: int) -> Name | None:
    for node in walk(module):
        if (isinstance(node, Name) and node.span.start == start
                and node.span.end == end):
            return node
    return None


def synthesize(samples: list[Sample], kind: str, count: int, seed: int,
               kb: KnowledgeBase) -> list[Sample]:
    """*count* mutants of *kind* drawn round-robin from clean samples.

    Samples without a mutation point for the kind are skipped; raises
    NoMutationPointError when no sample offers one.
    """
    eligible = [s for s in samples if s.label == CLEAN]
    mutants: list[Sample] = []
    round_number = 0
    while len(mutants) < count:
        produced = False
        for sample in eligible:
            if len(mutants) >= count:
                break
            try:
                mutants.append(mutate(sample, kind, seed + round_number, kb))
                produced = True
            except NoMutationPointError:
                continue
        if not produced:
            raise NoMutationPointError(kind)
        round_number += 1
    return mutants
