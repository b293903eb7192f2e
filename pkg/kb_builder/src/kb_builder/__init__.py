"""Manifest generator: introspects installed libraries and writes the JSON
manifest documents the checker consumes.

The builder imports each requested library, so it must run inside an
environment where those libraries are installed. The checker itself never
imports them; it only reads the manifests produced here.
"""

from kb_builder.introspect import (
    ImportFailure,
    IntrospectionSpec,
    build_all,
    build_manifest,
)

__all__ = [
    "ImportFailure",
    "IntrospectionSpec",
    "build_all",
    "build_manifest",
]
