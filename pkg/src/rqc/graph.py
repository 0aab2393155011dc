"""Directed graphs, l-hop neighborhoods and bounded-length simple paths.

Undirected graphs are stored as symmetric directed edge sets. An edge
``(j, i)`` means node ``i`` receives from node ``j``. Nodes are the dense
range ``0..n-1``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator

Path = tuple[int, ...]


class GraphError(ValueError):
    """Invalid graph construction or graph file."""


@dataclass(frozen=True)
class DirectedGraph:
    n: int
    edges: frozenset[tuple[int, int]]
    _in: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)
    _out: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)

    def in_neighbors(self, i: int) -> tuple[int, ...]:
        return self._in[i]

    def out_neighbors(self, i: int) -> tuple[int, ...]:
        return self._out[i]

    def has_edge(self, j: int, i: int) -> bool:
        return (j, i) in self.edges

    @property
    def nodes(self) -> range:
        return range(self.n)

    @cached_property
    def is_symmetric(self) -> bool:
        return all((i, j) in self.edges for j, i in self.edges)

    def in_degree(self, i: int) -> int:
        return len(self._in[i])

    def min_in_degree(self) -> int:
        return min((len(x) for x in self._in), default=0)

    def induced(self, keep: Iterable[int]) -> tuple["DirectedGraph", tuple[int, ...]]:
        """Induced subgraph on ``keep``, relabeled densely.

        Returns the subgraph and the tuple mapping new labels to old ones.
        """
        old = tuple(sorted(set(keep)))
        new_of = {v: k for k, v in enumerate(old)}
        sub = [(new_of[j], new_of[i]) for j, i in self.edges if j in new_of and i in new_of]
        return build_graph(len(old), sub), old

    def __repr__(self) -> str:
        return f"DirectedGraph(n={self.n}, edges={len(self.edges)})"


def build_graph(n: int, edges: Iterable[tuple[int, int]]) -> DirectedGraph:
    """Build an immutable directed graph; duplicate edges are collapsed."""
    if n < 0:
        raise GraphError(f"node count must be nonnegative, got {n}")
    es = set()
    for e in edges:
        j, i = (int(v) for v in e)
        if not (0 <= j < n and 0 <= i < n):
            raise GraphError(f"edge ({j}, {i}) has an endpoint outside [0, {n})")
        if j == i:
            raise GraphError(f"self-loop at node {i}")
        es.add((j, i))
    ins: list[list[int]] = [[] for _ in range(n)]
    outs: list[list[int]] = [[] for _ in range(n)]
    for j, i in es:
        ins[i].append(j)
        outs[j].append(i)
    return DirectedGraph(
        n=n,
        edges=frozenset(es),
        _in=tuple(tuple(sorted(x)) for x in ins),
        _out=tuple(tuple(sorted(x)) for x in outs),
    )


def undirected(n: int, pairs: Iterable[tuple[int, int]]) -> DirectedGraph:
    """Build a symmetric directed graph from undirected pairs."""
    es = []
    for a, b in pairs:
        es.append((a, b))
        es.append((b, a))
    return build_graph(n, es)


def _bfs(adj, i: int, l: int) -> frozenset[int]:
    if l < 1:
        raise ValueError(f"hop count must be >= 1, got {l}")
    seen = {i}
    frontier = deque([(i, 0)])
    while frontier:
        v, d = frontier.popleft()
        if d == l:
            continue
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                frontier.append((w, d + 1))
    return frozenset(seen)


def in_neighbors_l(g: DirectedGraph, i: int, l: int) -> frozenset[int]:
    """Nodes that reach ``i`` within ``l`` hops, including ``i`` itself."""
    return _bfs(g._in, i, l)


def out_neighbors_l(g: DirectedGraph, i: int, l: int) -> frozenset[int]:
    """Nodes reachable from ``i`` within ``l`` hops, including ``i`` itself."""
    return _bfs(g._out, i, l)


def paths_into(
    g: DirectedGraph,
    dest: int,
    l: int,
    forbidden_intermediates: Iterable[int] = (),
    allowed: Iterable[int] | None = None,
) -> list[Path]:
    """All simple paths of 1..l hops ending at ``dest``, as source-first tuples.

    Interior nodes avoid ``forbidden_intermediates``. When ``allowed`` is
    given, every node of the path (source included) must belong to it.
    """
    forbidden = frozenset(forbidden_intermediates)
    ok = None if allowed is None else frozenset(allowed)
    out: list[Path] = []
    # Walk backwards from dest; rev holds dest..current.
    rev = [dest]
    on = {dest}

    def walk(v: int) -> None:
        for u in g._in[v]:
            if u in on or (ok is not None and u not in ok):
                continue
            out.append(tuple(reversed(rev + [u])))
            if len(rev) < l and u not in forbidden:
                rev.append(u)
                on.add(u)
                walk(u)
                on.discard(u)
                rev.pop()

    if ok is None or dest in ok:
        walk(dest)
    out.sort(key=lambda p: (len(p), p))
    return out


def enumerate_paths(
    g: DirectedGraph,
    source: int,
    dest: int,
    l: int,
    forbidden_intermediates: Iterable[int] = (),
) -> list[Path]:
    """Simple paths from ``source`` to ``dest`` of at most ``l`` hops.

    ``source`` and ``dest`` may themselves be forbidden; only interior
    nodes are checked against ``forbidden_intermediates``.
    """
    if source == dest:
        raise ValueError("source and dest must differ")
    if l < 1:
        raise ValueError(f"hop count must be >= 1, got {l}")
    return [p for p in paths_into(g, dest, l, forbidden_intermediates) if p[0] == source]


def is_valid_path(g: DirectedGraph, p: Path) -> bool:
    return len(p) >= 2 and len(set(p)) == len(p) and all(g.has_edge(a, b) for a, b in zip(p, p[1:]))


def longest_cycle_free_path_length(g: DirectedGraph) -> int:
    """Maximum hop length over all simple paths (exhaustive; small graphs only)."""
    best = 0
    cap = max(g.n - 1, 0)

    def dfs(v: int, depth: int, seen: int) -> bool:
        nonlocal best
        if depth > best:
            best = depth
            if best == cap:
                return True
        for w in g._out[v]:
            if not seen >> w & 1:
                if dfs(w, depth + 1, seen | 1 << w):
                    return True
        return False

    for s in range(g.n):
        if dfs(s, 0, 1 << s):
            break
    return best


def gen_cycle(n: int) -> DirectedGraph:
    """Undirected cycle 0-1-...-(n-1)-0."""
    if n <= 2:
        raise GraphError(f"cycle needs n > 2, got {n}")
    return undirected(n, [(k, (k + 1) % n) for k in range(n)])


def gen_wheel(n: int, rim_order: Iterable[int] | None = None) -> DirectedGraph:
    """Wheel on ``n`` nodes: center 0 joined to a rim cycle of the rest.

    The rim visits ``1..n-1`` in order unless ``rim_order`` gives another
    cyclic order of those nodes.
    """
    if n <= 3:
        raise GraphError(f"wheel needs n > 3, got {n}")
    rim = list(range(1, n)) if rim_order is None else list(rim_order)
    if sorted(rim) != list(range(1, n)):
        raise GraphError("rim_order must be a permutation of 1..n-1")
    pairs = [(0, v) for v in rim]
    pairs += [(rim[k], rim[(k + 1) % len(rim)]) for k in range(len(rim))]
    return undirected(n, pairs)


def gen_complete_bipartite(
    n1: int, n2: int, parts: tuple[Iterable[int], Iterable[int]] | None = None
) -> DirectedGraph:
    """K_{n1,n2}. Default parts are ``0..n1-1`` and ``n1..n1+n2-1``."""
    if n1 < 1 or n2 < 1:
        raise GraphError(f"both parts must be nonempty, got {n1}, {n2}")
    if parts is None:
        a, b = range(n1), range(n1, n1 + n2)
    else:
        a, b = (sorted(p) for p in parts)
        if len(a) != n1 or len(b) != n2 or sorted([*a, *b]) != list(range(n1 + n2)):
            raise GraphError("parts must partition 0..n1+n2-1 with the given sizes")
    return undirected(n1 + n2, [(u, v) for u in a for v in b])


def gen_complete(n: int) -> DirectedGraph:
    return undirected(n, combinations(range(n), 2))


# -- text format -------------------------------------------------------------


def parse_graph(text: str) -> DirectedGraph:
    """Parse the plain-text graph format.

    First non-comment line is ``n <count>``; then ``<src> <dst>`` for a
    directed edge or ``u <a> <b>`` for both directions. ``#`` starts a
    comment line.
    """
    n = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        try:
            if n is None:
                if tok[0] != "n" or len(tok) != 2:
                    raise GraphError(f"line {lineno}: expected 'n <count>'")
                n = int(tok[1])
            elif tok[0] == "u" and len(tok) == 3:
                a, b = int(tok[1]), int(tok[2])
                edges += [(a, b), (b, a)]
            elif len(tok) == 2:
                edges.append((int(tok[0]), int(tok[1])))
            else:
                raise GraphError(f"line {lineno}: expected '<src> <dst>' or 'u <a> <b>'")
        except ValueError as exc:
            if isinstance(exc, GraphError):
                raise
            raise GraphError(f"line {lineno}: {exc}") from None
        if n is not None and edges:
            j, i = edges[-1]
            if not (0 <= j < n and 0 <= i < n) or j == i:
                raise GraphError(f"line {lineno}: bad edge ({j}, {i}) for n={n}")
    if n is None:
        raise GraphError("missing 'n <count>' header")
    return build_graph(n, edges)


def format_graph(g: DirectedGraph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines += [f"# {c}" for c in comment.splitlines()]
    lines.append(f"n {g.n}")
    done = set()
    for j, i in sorted(g.edges):
        if (j, i) in done:
            continue
        if (i, j) in g.edges:
            lines.append(f"u {j} {i}")
            done.add((i, j))
        else:
            lines.append(f"{j} {i}")
        done.add((j, i))
    return "\n".join(lines) + "\n"


def iter_subsets(items: Iterable[int], max_size: int) -> Iterator[frozenset[int]]:
    items = list(items)
    for k in range(0, min(max_size, len(items)) + 1):
        for c in combinations(items, k):
            yield frozenset(c)
