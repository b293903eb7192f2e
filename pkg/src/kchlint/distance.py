"""Edit distance and suggestion thresholds.

Levenshtein distance over unit-cost insert/delete/substitute, computed with
the two-row dynamic program: O(len(a) * len(b)) time, O(min side) memory.
"""

from __future__ import annotations

import math
from collections.abc import Iterable

# API-name suggestions cap the budget at 2 edits; long identifiers scale
# with length instead so compounded typos like a doubled word still match.
_API_EDIT_CAP = 2


def levenshtein(a: str, b: str) -> int:
    """Minimum number of single-character edits turning *a* into *b*."""
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    current = [0] * (len(b) + 1)
    for i, ca in enumerate(a, start=1):
        current[0] = i
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            current[j] = min(previous[j] + 1,      # delete from a
                             current[j - 1] + 1,   # insert into a
                             previous[j - 1] + cost)
            # substitute
        previous, current = current, previous
    return previous[len(b)]


def api_threshold(name: str) -> int:
    """Edit budget for suggesting a known API symbol for *name*."""
    return min(_API_EDIT_CAP, math.ceil(len(name) / 3))


def identifier_threshold(name: str) -> int:
    """Edit budget for matching *name* against in-scope identifiers."""
    return math.ceil(len(name) / 3)


def nearest(name: str, candidates: Iterable[str]) -> tuple[str, int] | None:
    """Closest candidate to *name* and its distance; ties break
    lexicographically.  None when *candidates* is empty."""
    best: tuple[int, str] | None = None
    for candidate in candidates:
        key = (levenshtein(name, candidate), candidate)
        if best is None or key < best:
            best = key
    if best is None:
        return None
    return best[1], best[0]
