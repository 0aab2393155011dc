"""Brute-force reference implementations used only by the tests.

Deliberately naive: plain enumeration, no pruning, no shared code with
the library beyond the graph container.
"""

from __future__ import annotations

from itertools import combinations, product

from rqc.graph import DirectedGraph


def all_paths_into(g: DirectedGraph, dest: int, l: int) -> list[tuple[int, ...]]:
    """Every simple path with 1..l edges ending at ``dest``, by forward search."""
    out = []

    def extend(path):
        if path[-1] == dest and len(path) > 1:
            out.append(tuple(path))
            return
        if len(path) - 1 == l:
            return
        for v in g.out_neighbors(path[-1]):
            if v not in path:
                extend(path + [v])

    for s in range(g.n):
        if s != dest:
            extend([s])
    return out


def brute_mmc(paths, dest=None) -> int:
    if not paths:
        return 0
    if dest is None:
        dest = paths[0][-1]
    nodes = sorted({v for p in paths for v in p if v != dest})
    for k in range(len(nodes) + 1):
        for c in combinations(nodes, k):
            if all(set(c) & set(p) for p in paths):
                return k
    raise AssertionError("no cover found")


def brute_independent(g, i, va, fault_set, l) -> int:
    va, fault_set = set(va), set(fault_set)
    paths = [
        p for p in all_paths_into(g, i, l)
        if p[0] not in va and not set(p[1:-1]) & fault_set
    ]
    bodies = [frozenset(p[:-1]) for p in paths]
    best = 0

    # Exhaustive search over every pairwise-disjoint subfamily.
    def grow(start, used, count):
        nonlocal best
        best = max(best, count)
        for k in range(start, len(bodies)):
            if not bodies[k] & used:
                grow(k + 1, used | bodies[k], count + 1)

    grow(0, frozenset(), 0)
    return best


def brute_x_set(g, va, fault_set, r, l) -> frozenset:
    return frozenset(v for v in va if brute_independent(g, v, va, fault_set, l) >= r)


def brute_pair_ok(g, v1, v2, fault_set, r, s, l) -> bool:
    x1 = brute_x_set(g, v1, fault_set, r, l)
    x2 = brute_x_set(g, v2, fault_set, r, l)
    return x1 == set(v1) or x2 == set(v2) or len(x1) + len(x2) >= s


def all_pairs(n):
    for lab in product(range(3), repeat=n):
        v1 = frozenset(k for k in range(n) if lab[k] == 1)
        v2 = frozenset(k for k in range(n) if lab[k] == 2)
        if v1 and v2:
            yield v1, v2


def total_fault_sets(n, f):
    for k in range(f + 1):
        for c in combinations(range(n), k):
            yield frozenset(c)


def brute_robust(g, r, s, l, f) -> bool:
    """(r, s)-robustness with l hops under the f-total model."""
    for fs in total_fault_sets(g.n, f):
        for v1, v2 in all_pairs(g.n):
            if not brute_pair_ok(g, v1, v2, fs, r, s, l):
                return False
    return True


def brute_strict(g, r, l, f) -> bool:
    for fs in total_fault_sets(g.n, f):
        keep = [v for v in range(g.n) if v not in fs]
        sub, _ = g.induced(keep)
        if sub.n < 2:
            continue
        for v1, v2 in all_pairs(sub.n):
            if not brute_pair_ok(sub, v1, v2, (), r, 1, l):
                return False
    return True


def classic_wmsr_keep(values, own, f):
    """One-hop trimmed set: drop the f largest above and f smallest below."""
    above = sorted((v for v in values if v > own), reverse=True)
    below = sorted(v for v in values if v < own)
    equal = [v for v in values if v == own]
    return sorted(above[f:] + below[f:] + equal + [own])
