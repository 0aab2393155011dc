"""Message covers.

A cover of a message set is a node set meeting every message path. The
receiving node is never a candidate: it would trivially cover everything.
Finding a minimum cover is a minimum hitting set problem; we solve it with
iterative deepening over the cover size and branch on the candidates of
an uncovered path with the fewest candidates.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

log = logging.getLogger(__name__)

Path = tuple[int, ...]


@dataclass(frozen=True)
class CoverResult:
    cover: frozenset[int]
    cardinality: int
    # False when the search stopped at ``limit`` and the true minimum is larger.
    exact: bool = True


def _candidate_sets(paths: Iterable[Path], dest: int | None) -> list[frozenset[int]]:
    sets = set()
    for p in paths:
        if dest is None:
            dest = p[-1]
        sets.add(frozenset(v for v in p if v != dest))
    # A path whose only node is the receiver cannot be covered; callers keep
    # the receiver's own message out of cover computations.
    if frozenset() in sets:
        raise ValueError("zero-hop message has no cover candidates")
    # Drop supersets: covering the smaller set covers the larger one.
    minimal = [s for s in sets if not any(t < s for t in sets)]
    minimal.sort(key=lambda s: (len(s), sorted(s)))
    return minimal


def is_cover(cover: Iterable[int], paths: Iterable[Path]) -> bool:
    t = set(cover)
    return all(t.intersection(p) for p in paths)


def _search(sets: list[frozenset[int]], budget: int, chosen: list[int]) -> list[int] | None:
    uncovered = [s for s in sets if not s.intersection(chosen)]
    if not uncovered:
        return list(chosen)
    if budget == 0:
        return None
    # Lower bound: greedily pick pairwise disjoint uncovered sets.
    disjoint, used = 0, set()
    for s in uncovered:
        if used.isdisjoint(s):
            disjoint += 1
            used |= s
            if disjoint > budget:
                return None
    pivot = min(uncovered, key=len)
    for v in sorted(pivot):
        chosen.append(v)
        found = _search(uncovered, budget - 1, chosen)
        chosen.pop()
        if found is not None:
            return found
    return None


def minimum_message_cover(
    paths: Sequence[Path], dest: int | None = None, limit: int | None = None
) -> CoverResult:
    """Minimum cover of the given message paths, excluding ``dest``.

    With ``limit`` set, the search gives up past that size and returns a
    result with ``exact=False`` and ``cardinality=limit + 1``.
    """
    if not paths:
        return CoverResult(frozenset(), 0)
    sets = _candidate_sets(paths, dest)
    top = len(sets) if limit is None else min(limit, len(sets))
    for c in range(0, top + 1):
        found = _search(sets, c, [])
        if found is not None:
            log.debug("cover of %d paths found at size %d: %s", len(paths), c, found)
            return CoverResult(frozenset(found), len(found))
    return CoverResult(frozenset(), top + 1, exact=False)


def cover_at_most(paths: Sequence[Path], k: int, dest: int | None = None) -> bool:
    """True iff the paths have a cover of at most ``k`` nodes."""
    if not paths:
        return True
    if k < 0:
        return False
    return _search(_candidate_sets(paths, dest), k, []) is not None
