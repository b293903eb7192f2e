"""Command line front end: kb-build --libs a,b,c --out manifests/"""

import argparse
import sys

from kb_builder.introspect import IntrospectionSpec, build_all, write_manifests

EXIT_OK = 0
EXIT_ERROR = 2


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="kb-build",
        description="Introspect installed libraries and write manifest "
                    "documents for the checker.",
    )
    parser.add_argument(
        "--libs",
        required=True,
        metavar="A,B,C",
        help="comma-separated importable module paths",
    )
    parser.add_argument(
        "--out",
        required=True,
        metavar="DIR",
        help="directory for the per-library manifests and merged all.json",
    )
    parser.add_argument(
        "--types",
        action="append",
        default=[],
        metavar="LIB=T1,T2",
        help="override which object types to enumerate for LIB (repeatable)",
    )
    args = parser.parse_args(argv)

    libraries = tuple(part.strip() for part in args.libs.split(",") if part.strip())
    if not libraries:
        parser.error("--libs lists no libraries")
    overrides = {}
    for item in args.types:
        lib, sep, names = item.partition("=")
        if not sep:
            parser.error(f"--types wants LIB=T1,T2, got {item!r}")
        overrides[lib] = tuple(n.strip() for n in names.split(",") if n.strip())

    try:
        spec = IntrospectionSpec(libraries, object_types=overrides)
    except ValueError as exc:
        print(f"kb-build: error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    result = build_all(spec)
    for failure in result.failures:
        print(f"kb-build: error: {failure}", file=sys.stderr)
    for path in write_manifests(result, args.out):
        print(f"wrote {path}")
    return EXIT_ERROR if result.failures else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
