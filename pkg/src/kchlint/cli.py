"""Command-line entry point.

Subcommands: check (diagnostics), fix (repair to stdout, diff, or in
place), eval (score a labeled dataset), kb (validate/merge/show
manifests), and serve (run the HTTP service).  Exit codes: 0 clean or
nothing to do, 1 findings or fixes, 2 usage, IO, manifest, or parse
errors.  Diagnostics go to stdout; errors and summaries to stderr.
JSON output has a fixed field order and no timestamps unless --timing.
"""

from __future__ import annotations

import argparse
import difflib
import json
import os
import sys
import tempfile
import time
from pathlib import Path

import kchlint
from kchlint.errors import DatasetError, KchlintError, LexError, ParseError
from kchlint.evalharness import evaluate, format_report, load_dataset
from kchlint.kb import KnowledgeBase, default_kb, load_kb, load_manifest
from kchlint.validation import Diagnostic

EXIT_CLEAN = 0
EXIT_FINDINGS = 1
EXIT_ERROR = 2


def _fail(message: str) -> int:
    print(f"kchlint: error: {message}", file=sys.stderr)
    return EXIT_ERROR


def _resolve_kb(paths: list[str]) -> KnowledgeBase:
    """Default knowledge base with any --kb manifests layered on top."""
    kb = default_kb()
    for path in paths:
        kb = kb.merge(load_kb(path))
    return kb


def _diagnostic_record(path: str, diagnostic: Diagnostic) -> dict:
    suggestion = None
    if diagnostic.suggestion is not None:
        suggestion = {
            "kind": diagnostic.suggestion.kind.value,
            "replacement": diagnostic.suggestion.replacement,
            "required_import": (list(diagnostic.suggestion.required_import)
                                if diagnostic.suggestion.required_import
                                else None),
        }
    return {
        "file": path,
        "line": diagnostic.span.line,
        "col": diagnostic.span.col,
        "category": diagnostic.category.value,
        "name": diagnostic.name,
        "evidence": diagnostic.evidence,
        "confidence": diagnostic.confidence,
        "suggestion": suggestion,
    }


def _diagnostic_line(path: str, diagnostic: Diagnostic) -> str:
    line = (f"{path}:{diagnostic.span.line}:{diagnostic.span.col}: "
            f"{diagnostic.category.value} {diagnostic.evidence}")
    if diagnostic.suggestion is not None:
        line += f" [suggest {diagnostic.suggestion.replacement}]"
    return line


def cmd_check(args: argparse.Namespace) -> int:
    try:
        kb = _resolve_kb(args.kb)
    except KchlintError as exc:
        return _fail(str(exc))
    started = time.perf_counter()
    records: list[dict] = []
    lines: list[str] = []
    had_error = False
    found = False
    for path in args.inputs:
        try:
            source = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            _fail(f"cannot read {path}: {exc}")
            had_error = True
            continue
        try:
            diagnostics = kchlint.check(source, kb)
        except (LexError, ParseError) as exc:
            _fail(f"{path}: does not parse: {exc}")
            had_error = True
            continue
        found = found or bool(diagnostics)
        if args.format == "json":
            records.extend(_diagnostic_record(path, d) for d in diagnostics)
        else:
            lines.extend(_diagnostic_line(path, d) for d in diagnostics)
    if args.format == "json":
        print(json.dumps(records, indent=2))
    elif lines:
        print("\n".join(lines))
    if args.timing:
        print(f"wall time: {time.perf_counter() - started:.3f}s",
              file=sys.stderr)
    if had_error:
        return EXIT_ERROR
    return EXIT_FINDINGS if found else EXIT_CLEAN


def _write_atomic(path: Path, text: str) -> None:
    handle, temp_name = tempfile.mkstemp(dir=str(path.parent),
                                         prefix=f".{path.name}.")
    try:
        with os.fdopen(handle, "w", encoding="utf-8") as stream:
            stream.write(text)
        os.replace(temp_name, path)
    except BaseException:
        os.unlink(temp_name)
        raise


def cmd_fix(args: argparse.Namespace) -> int:
    try:
        kb = _resolve_kb(args.kb)
    except KchlintError as exc:
        return _fail(str(exc))
    stdout_mode = args.stdout or not (args.diff or args.in_place)
    if stdout_mode and len(args.inputs) != 1:
        return _fail("--stdout takes exactly one input file")
    had_error = False
    any_findings = False
    for path in args.inputs:
        target = Path(path)
        try:
            source = target.read_text(encoding="utf-8")
        except OSError as exc:
            _fail(f"cannot read {path}: {exc}")
            had_error = True
            continue
        result = kchlint.fix_source(source, kb, fix_intent=args.fix_intent)
        if result.note is not None:
            _fail(f"{path}: {result.note}")
            had_error = True
            continue
        if result.applied or result.unfixed:
            any_findings = True
        if args.diff:
            if result.applied:
                diff = difflib.unified_diff(
                    source.splitlines(keepends=True),
                    result.fixed_source.splitlines(keepends=True),
                    fromfile=f"a/{path}", tofile=f"b/{path}")
                sys.stdout.write("".join(diff))
        elif args.in_place:
            # Zero edits: leave the file bytes untouched.
            if result.applied:
                try:
                    _write_atomic(target, result.fixed_source)
                except OSError as exc:
                    _fail(f"cannot write {path}: {exc}")
                    had_error = True
                    continue
        else:
            sys.stdout.write(result.fixed_source)
        print(f"{path}: applied={len(result.applied)} "
              f"unfixed={len(result.unfixed)}", file=sys.stderr)
    if had_error:
        return EXIT_ERROR
    return EXIT_FINDINGS if any_findings else EXIT_CLEAN


def cmd_eval(args: argparse.Namespace) -> int:
    try:
        kb = _resolve_kb(args.kb)
        samples = load_dataset(args.dataset)
    except (KchlintError, DatasetError) as exc:
        return _fail(str(exc))
    report = evaluate(samples, kb, fix_intent=args.fix_intent)
    if args.format == "json":
        print(json.dumps(report.to_dict(include_timing=args.timing), indent=2))
    else:
        print(format_report(report, timing=args.timing))
    return EXIT_CLEAN


def cmd_kb(args: argparse.Namespace) -> int:
    if args.kb_command == "validate":
        for path in args.manifests:
            try:
                kb = load_kb(path)
            except KchlintError as exc:
                return _fail(str(exc))
            print(f"OK {path} ({len(kb.libraries)} "
                  f"{'library' if len(kb.libraries) == 1 else 'libraries'})")
        return EXIT_CLEAN
    if args.kb_command == "merge":
        try:
            kb = load_manifest(args.manifests[0])
            for path in args.manifests[1:]:
                kb = kb.merge(load_manifest(path))
        except KchlintError as exc:
            return _fail(str(exc))
        text = json.dumps(kb.to_manifest(), indent=2, sort_keys=True) + "\n"
        try:
            Path(args.output).write_text(text, encoding="utf-8")
        except OSError as exc:
            return _fail(f"cannot write {args.output}: {exc}")
        print(f"wrote {args.output} ({len(kb.libraries)} libraries)")
        return EXIT_CLEAN
    # show
    try:
        kb = _resolve_kb(args.kb)
    except KchlintError as exc:
        return _fail(str(exc))
    entry = kb.libraries.get(args.library)
    if entry is None:
        known = ", ".join(sorted(kb.libraries))
        return _fail(f"unknown library {args.library!r} (knowledge base has: "
                     f"{known})")
    print(f"{entry.name} {entry.version} (alias {entry.canonical_alias})")
    print(f"callables ({len(entry.callables)}):")
    for name in sorted(entry.callables):
        print(f"  {name}")
    for type_name in sorted(entry.object_methods):
        methods = entry.object_methods[type_name]
        print(f"{type_name} methods ({len(methods)}):")
        for name in sorted(methods):
            print(f"  {name}")
    return EXIT_CLEAN


def cmd_serve(args: argparse.Namespace) -> int:
    try:
        kb = _resolve_kb(args.kb)
    except KchlintError as exc:
        return _fail(str(exc))
    import uvicorn

    from kchlint.service import create_app
    uvicorn.run(create_app(kb), host=args.host, port=args.port)
    return EXIT_CLEAN


def _add_kb_option(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--kb", action="append", default=[], metavar="PATH",
        help="manifest file or directory merged on top of the default "
             "knowledge base (repeatable; later wins)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kchlint",
        description="Detect and repair knowledge-conflicting API usage in "
                    "Python snippets.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {kchlint.__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", help="report diagnostics")
    check.add_argument("inputs", nargs="+", metavar="FILE")
    check.add_argument("--format", choices=("text", "json"), default="text")
    check.add_argument("--timing", action="store_true",
                       help="report wall time on stderr")
    _add_kb_option(check)
    check.set_defaults(handler=cmd_check)

    fix = commands.add_parser("fix", help="repair what the rules can fix")
    fix.add_argument("inputs", nargs="+", metavar="FILE")
    mode = fix.add_mutually_exclusive_group()
    mode.add_argument("--stdout", action="store_true", default=False,
                      help="print fixed source (default; single file only)")
    mode.add_argument("--diff", action="store_true",
                      help="print a unified diff per file")
    mode.add_argument("--in-place", action="store_true",
                      help="rewrite files atomically")
    fix.add_argument("--fix-intent", action="store_true",
                     help="also apply intent-synonym rewrites (default "
                          "detect-only)")
    _add_kb_option(fix)
    fix.set_defaults(handler=cmd_fix)

    evaluate_cmd = commands.add_parser("eval", help="score a labeled dataset")
    evaluate_cmd.add_argument("dataset", metavar="DIR")
    evaluate_cmd.add_argument("--format", choices=("text", "json"),
                              default="text")
    evaluate_cmd.add_argument("--fix-intent", action="store_true")
    evaluate_cmd.add_argument("--timing", action="store_true",
                              help="include wall time in the report")
    _add_kb_option(evaluate_cmd)
    evaluate_cmd.set_defaults(handler=cmd_eval)

    kb = commands.add_parser("kb", help="inspect and manage manifests")
    kb_commands = kb.add_subparsers(dest="kb_command", required=True)
    kb_validate = kb_commands.add_parser("validate",
                                         help="check manifest documents")
    kb_validate.add_argument("manifests", nargs="+", metavar="PATH")
    kb_validate.set_defaults(handler=cmd_kb)
    kb_merge = kb_commands.add_parser("merge", help="merge manifests into one")
    kb_merge.add_argument("manifests", nargs="+", metavar="PATH")
    kb_merge.add_argument("-o", "--output", required=True, metavar="OUT")
    kb_merge.set_defaults(handler=cmd_kb)
    kb_show = kb_commands.add_parser("show", help="list a library's surface")
    kb_show.add_argument("library", metavar="LIBRARY")
    _add_kb_option(kb_show)
    kb_show.set_defaults(handler=cmd_kb)

    serve = commands.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8765)
    _add_kb_option(serve)
    serve.set_defaults(handler=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help/--version
        return int(exc.code or 0)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
