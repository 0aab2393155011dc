"""Exact checkers for (r, s)-robustness and r-strict robustness with l hops.

For a node ``i`` in a set ``Va`` the relevant quantity is the largest family
of paths into ``i`` of at most ``l`` hops that start outside ``Va``, avoid the
fault set ``F`` as interior nodes, and share no node other than ``i``.

The set checkers avoid enumerating the 3**n subset pairs one by one. For a
fixed ``F`` they compute, per node, every source set that supports ``r``
independent paths, close that family upward over all 2**n masks, and read
off ``X(Va)`` for every ``Va`` at once. The pair condition is then decided
with a subset-minimum transform over the complement of ``V1``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Literal, Sequence

import numpy as np

from .graph import DirectedGraph, in_neighbors_l, paths_into

FaultKind = Literal["f_total", "f_local"]


@dataclass(frozen=True)
class FaultModel:
    kind: FaultKind
    f: int
    # Scope of the local bound; defaults to the hop count being checked.
    l: int | None = None

    def __post_init__(self):
        if self.kind not in ("f_total", "f_local"):
            raise ValueError(f"unknown fault model {self.kind!r}")
        if self.f < 0:
            raise ValueError("f must be nonnegative")

    def label(self) -> str:
        return f"{self.f}-{self.kind.split('_')[1]}"


def total(f: int) -> FaultModel:
    return FaultModel("f_total", f)


def local(f: int, l: int | None = None) -> FaultModel:
    return FaultModel("f_local", f, l)


@dataclass(frozen=True)
class Witness:
    v1: frozenset[int]
    v2: frozenset[int]
    fault_set: frozenset[int]
    x1: frozenset[int]
    x2: frozenset[int]

    def __str__(self) -> str:
        fmt = lambda s: "{" + ",".join(map(str, sorted(s))) + "}"  # noqa: E731
        return f"V1={fmt(self.v1)} V2={fmt(self.v2)} F={fmt(self.fault_set)}"


@dataclass
class RobustnessVerdict:
    holds: bool
    witness: Witness | None = None
    pairs_checked: int = 0
    fault_sets_checked: int = 0
    elapsed_ms: float = field(default=0.0, compare=False)

    def __bool__(self) -> bool:
        return self.holds


# -- independent paths ---------------------------------------------------------


def _bits(nodes: Iterable[int]) -> int:
    m = 0
    for v in nodes:
        m |= 1 << v
    return m


def _max_packing(items: Sequence[tuple[int, int]], limit: int | None = None) -> int:
    """Largest pairwise-disjoint subfamily of ``(source, mask)`` items, capped at ``limit``."""
    items = sorted(set(items), key=lambda t: (t[1].bit_count(), t[1]))
    # A one-node mask is the source alone: taking it never hurts.
    used = 0
    base = 0
    for src, m in items:
        if m.bit_count() == 1:
            used |= m
            base += 1
    rest = [(src, m) for src, m in items if m.bit_count() > 1 and not m & used]
    cap = limit if limit is not None else len(items)
    if base >= cap:
        return cap
    best = base

    def go(idx: int, used: int, count: int) -> bool:
        nonlocal best
        if count > best:
            best = count
            if best >= cap:
                return True
        # Bound: each further path needs its own unused source.
        srcs = {src for src, m in rest[idx:] if not m & used}
        if count + len(srcs) <= best:
            return False
        for k in range(idx, len(rest)):
            m = rest[k][1]
            if not m & used and go(k + 1, used | m, count + 1):
                return True
        return False

    go(0, used, base)
    return min(best, cap)


def _path_items(paths: Iterable[tuple[int, ...]]) -> list[tuple[int, int]]:
    # The mask covers every node but the destination.
    return [(p[0], _bits(p[:-1])) for p in paths]


def independent_path_count(
    g: DirectedGraph,
    i: int,
    va: Iterable[int],
    fault_set: Iterable[int],
    l: int,
    limit: int | None = None,
) -> int:
    """Size of the largest independent path family into ``i`` from outside ``va``."""
    va = frozenset(va)
    if i not in va:
        raise ValueError(f"node {i} must belong to Va")
    paths = [p for p in paths_into(g, i, l, fault_set) if p[0] not in va]
    return _max_packing(_path_items(paths), limit)


def x_set(
    g: DirectedGraph, va: Iterable[int], fault_set: Iterable[int], r: int, l: int
) -> frozenset[int]:
    """Members of ``va`` with at least ``r`` independent paths from outside it."""
    va = frozenset(va)
    if not va:
        raise ValueError("Va must be nonempty")
    if r <= 0:
        return va
    fault_set = frozenset(fault_set)
    return frozenset(
        i for i in va if independent_path_count(g, i, va, fault_set, l, limit=r) >= r
    )


def conditions_hold(
    g: DirectedGraph,
    v1: Iterable[int],
    v2: Iterable[int],
    fault_set: Iterable[int],
    r: int,
    s: int,
    l: int,
) -> bool:
    """Direct evaluation of the three-way condition for one subset pair."""
    v1, v2 = frozenset(v1), frozenset(v2)
    x1 = x_set(g, v1, fault_set, r, l)
    if x1 == v1:
        return True
    x2 = x_set(g, v2, fault_set, r, l)
    return x2 == v2 or len(x1) + len(x2) >= s


# -- whole-graph checks --------------------------------------------------------


def _source_options(paths: Sequence[tuple[int, ...]]) -> dict[int, list[int]]:
    opts: dict[int, list[int]] = {}
    for p in paths:
        opts.setdefault(p[0], []).append(_bits(p[:-1]))
    for s, ms in opts.items():
        if (1 << s) in ms:
            opts[s] = [1 << s]
        else:
            ms.sort(key=lambda m: (m.bit_count(), m))
    return opts


def _assignable(sources: Sequence[int], opts: dict[int, list[int]]) -> bool:
    order = sorted(sources, key=lambda s: len(opts[s]))

    def go(k: int, used: int) -> bool:
        if k == len(order):
            return True
        for m in opts[order[k]]:
            if not m & used and go(k + 1, used | m):
                return True
        return False

    return go(0, 0)


def _upward_closure(ind: np.ndarray, n: int) -> np.ndarray:
    a = ind.copy()
    for b in range(n):
        v = a.reshape(-1, 2, 1 << b)
        v[:, 1, :] |= v[:, 0, :]
    return a


class _XTable:
    """X(Va) for every Va, for one graph, hop count and threshold r."""

    def __init__(self, g: DirectedGraph, r: int, l: int):
        self.g, self.r, self.l = g, r, l
        self.full = (1 << g.n) - 1
        self.idx = np.arange(1 << g.n, dtype=np.int64)
        # Nodes that can ever sit inside a path into i; F matters only there.
        self.interior = []
        for i in range(g.n):
            inner = set()
            for p in paths_into(g, i, l):
                inner.update(p[1:-1])
            self.interior.append(frozenset(inner))
        self._closure = lru_cache(maxsize=None)(self._closure_uncached)

    def _closure_uncached(self, i: int, fkey: frozenset[int]) -> np.ndarray:
        n, r = self.g.n, self.r
        ind = np.zeros(1 << n, dtype=bool)
        if r <= 0:
            ind[0] = True
        else:
            opts = _source_options(paths_into(self.g, i, self.l, fkey))
            for combo in combinations(sorted(opts), r):
                if _assignable(combo, opts):
                    ind[_bits(combo)] = True
        return _upward_closure(ind, n)

    def x_masks(self, fault_set: frozenset[int]) -> np.ndarray:
        idx, full = self.idx, self.full
        comp = full ^ idx
        x = np.zeros_like(idx)
        for i in range(self.g.n):
            cl = self._closure(i, fault_set & self.interior[i])
            member = ((idx >> i) & 1).astype(bool) & cl[comp]
            x |= member.astype(np.int64) << i
        return x


def _popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a.astype(np.uint64)).astype(np.int64)


def _find_violation(x: np.ndarray, n: int, s: int) -> tuple[int, int] | None:
    """A disjoint nonempty pair (V1, V2) failing all three conditions, if any."""
    size = 1 << n
    idx = np.arange(size, dtype=np.int64)
    full = size - 1
    bad = (idx != 0) & (x != idx)
    cnt = _popcount(x)
    big = np.int64(1 << 40)
    best = np.where(bad, cnt, big)
    arg = np.where(bad, idx, -1)
    # Subset-minimum transform: best[M] = min over bad submasks of M.
    for b in range(n):
        bv = best.reshape(-1, 2, 1 << b)
        av = arg.reshape(-1, 2, 1 << b)
        take = bv[:, 0, :] < bv[:, 1, :]
        bv[:, 1, :] = np.where(take, bv[:, 0, :], bv[:, 1, :])
        av[:, 1, :] = np.where(take, av[:, 0, :], av[:, 1, :])
    ok = bad & (best[full ^ idx] + cnt < s)
    hits = np.flatnonzero(ok)
    if hits.size == 0:
        return None
    v1 = int(hits[0])
    return v1, int(arg[full ^ v1])


def _members(mask: int, labels: Sequence[int] | None = None) -> frozenset[int]:
    out = []
    k = 0
    while mask:
        if mask & 1:
            out.append(k if labels is None else labels[k])
        mask >>= 1
        k += 1
    return frozenset(out)


def _pair_count(n: int) -> int:
    return 3**n - 2 ** (n + 1) + 1


def _check_table(
    table: _XTable, s: int, fault_set: frozenset[int], labels=None, reported_f=None
) -> Witness | None:
    x = table.x_masks(fault_set)
    hit = _find_violation(x, table.g.n, s)
    if hit is None:
        return None
    v1, v2 = hit
    return Witness(
        v1=_members(v1, labels),
        v2=_members(v2, labels),
        fault_set=fault_set if reported_f is None else reported_f,
        x1=_members(int(x[v1]), labels),
        x2=_members(int(x[v2]), labels),
    )


def is_rs_robust_wrt(
    g: DirectedGraph, r: int, s: int, l: int, fault_set: Iterable[int] = ()
) -> RobustnessVerdict:
    """(r, s)-robustness with l hops with respect to one fault set."""
    if r < 1 or s < 1:
        raise ValueError("r and s must be >= 1")
    t0 = time.perf_counter()
    w = _check_table(_XTable(g, r, l), s, frozenset(fault_set))
    return RobustnessVerdict(
        holds=w is None,
        witness=w,
        pairs_checked=_pair_count(g.n),
        fault_sets_checked=1,
        elapsed_ms=(time.perf_counter() - t0) * 1e3,
    )


def enumerate_fault_sets(
    g: DirectedGraph, model: FaultModel, l: int | None = None
) -> Iterator[frozenset[int]]:
    """Fault sets admissible under ``model``, smallest first, starting with the empty set."""
    if model.kind == "f_total":
        for k in range(min(model.f, g.n) + 1):
            for c in combinations(range(g.n), k):
                yield frozenset(c)
        return
    scope = model.l if model.l is not None else l
    if scope is None:
        raise ValueError("f_local needs a hop count")
    reach = [in_neighbors_l(g, i, scope) for i in range(g.n)]
    for k in range(g.n + 1):
        for c in combinations(range(g.n), k):
            fs = frozenset(c)
            if all(len(reach[i] & fs) <= model.f for i in range(g.n) if i not in fs):
                yield fs


def is_rs_robust(
    g: DirectedGraph, r: int, s: int, l: int, model: FaultModel
) -> RobustnessVerdict:
    """(r, s)-robustness with l hops under every admissible fault set."""
    if r < 1 or s < 1:
        raise ValueError("r and s must be >= 1")
    t0 = time.perf_counter()
    table = _XTable(g, r, l)
    checked = 0
    for fs in enumerate_fault_sets(g, model, l):
        checked += 1
        w = _check_table(table, s, fs)
        if w is not None:
            return RobustnessVerdict(
                False, w, checked * _pair_count(g.n), checked,
                (time.perf_counter() - t0) * 1e3,
            )
    return RobustnessVerdict(
        True, None, checked * _pair_count(g.n), checked, (time.perf_counter() - t0) * 1e3
    )


def is_strictly_robust(
    g: DirectedGraph, r: int, l: int, model: FaultModel
) -> RobustnessVerdict:
    """r-strict robustness with l hops.

    For each admissible ``F`` the subgraph induced by the remaining nodes
    must be r-robust with l hops. Paths live entirely in that subgraph, so
    removed nodes serve neither as sources nor as relays.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    t0 = time.perf_counter()
    checked = pairs = 0
    for fs in enumerate_fault_sets(g, model, l):
        checked += 1
        keep = [v for v in range(g.n) if v not in fs]
        if not keep:
            continue
        sub, labels = g.induced(keep)
        pairs += _pair_count(sub.n)
        w = _check_table(_XTable(sub, r, l), 1, frozenset(), labels, reported_f=fs)
        if w is not None:
            return RobustnessVerdict(False, w, pairs, checked, (time.perf_counter() - t0) * 1e3)
    return RobustnessVerdict(True, None, pairs, checked, (time.perf_counter() - t0) * 1e3)


def check_pairs(
    g: DirectedGraph,
    r: int,
    s: int,
    l: int,
    fault_sets: Iterable[Iterable[int]],
    pairs: Iterable[tuple[Iterable[int], Iterable[int]]],
) -> RobustnessVerdict:
    """Check only the listed subset pairs, for each listed fault set."""
    t0 = time.perf_counter()
    pairs = [(frozenset(a), frozenset(b)) for a, b in pairs]
    checked = nf = 0
    for fs in fault_sets:
        fs = frozenset(fs)
        nf += 1
        for v1, v2 in pairs:
            if not v1 or not v2 or v1 & v2:
                raise ValueError("pairs must be nonempty and disjoint")
            checked += 1
            if not conditions_hold(g, v1, v2, fs, r, s, l):
                w = Witness(v1, v2, fs, x_set(g, v1, fs, r, l), x_set(g, v2, fs, r, l))
                return RobustnessVerdict(False, w, checked, nf, (time.perf_counter() - t0) * 1e3)
    return RobustnessVerdict(True, None, checked, nf, (time.perf_counter() - t0) * 1e3)


def sample_pairs(n: int, count: int, rng: np.random.Generator) -> list[tuple[frozenset, frozenset]]:
    """Random disjoint nonempty subset pairs from a ternary labelling of nodes."""
    out = []
    while len(out) < count:
        lab = rng.integers(0, 3, size=n)
        v1 = frozenset(np.flatnonzero(lab == 1).tolist())
        v2 = frozenset(np.flatnonzero(lab == 2).tolist())
        if v1 and v2:
            out.append((v1, v2))
    return out


def sampled_check(
    g: DirectedGraph,
    r: int,
    s: int,
    l: int,
    model: FaultModel,
    count: int,
    rng: np.random.Generator,
    strict: bool = False,
) -> RobustnessVerdict:
    """Check ``count`` random pairs per admissible fault set.

    A failing verdict carries a genuine witness; a passing one only means
    no violation was found among the sampled pairs.
    """
    t0 = time.perf_counter()
    checked = nf = 0
    for fs in enumerate_fault_sets(g, model, l):
        nf += 1
        if strict:
            keep = [v for v in range(g.n) if v not in fs]
            sub, labels = g.induced(keep)
            if sub.n < 2:
                continue
            v = check_pairs(sub, r, 1, l, [()], sample_pairs(sub.n, count, rng))
            checked += v.pairs_checked
            if not v.holds:
                back = lambda a: frozenset(labels[k] for k in a)  # noqa: E731
                w = v.witness
                w = Witness(back(w.v1), back(w.v2), fs, back(w.x1), back(w.x2))
                return RobustnessVerdict(False, w, checked, nf, (time.perf_counter() - t0) * 1e3)
        else:
            v = check_pairs(g, r, s, l, [fs], sample_pairs(g.n, count, rng))
            checked += v.pairs_checked
            if not v.holds:
                return RobustnessVerdict(False, v.witness, checked, nf, (time.perf_counter() - t0) * 1e3)
    return RobustnessVerdict(True, None, checked, nf, (time.perf_counter() - t0) * 1e3)


def witness_is_valid(g: DirectedGraph, w: Witness, r: int, s: int, l: int, strict: bool = False) -> bool:
    """Re-check a witness with the direct path-packing route."""
    if strict:
        keep = [v for v in range(g.n) if v not in w.fault_set]
        sub, labels = g.induced(keep)
        new = {old: k for k, old in enumerate(labels)}
        v1 = [new[v] for v in w.v1]
        v2 = [new[v] for v in w.v2]
        return not conditions_hold(sub, v1, v2, (), r, 1, l)
    return not conditions_hold(g, w.v1, w.v2, w.fault_set, r, s, l)


@dataclass
class ImplicationReport:
    a: bool
    b: bool
    c: bool

    @property
    def violations(self) -> list[str]:
        out = []
        if self.a and not self.b:
            out.append("A holds but B fails")
        if self.b and not self.c:
            out.append("B holds but C fails")
        return out


def check_property_implications(g: DirectedGraph, f: int, l: int, model: FaultModel | None = None) -> ImplicationReport:
    """Evaluate (2f+1)-robust, (f+1)-strictly robust and (f+1, f+1)-robust with l hops."""
    model = model or total(f)
    return ImplicationReport(
        a=is_rs_robust(g, 2 * f + 1, 1, l, model).holds,
        b=is_strictly_robust(g, f + 1, l, model).holds,
        c=is_rs_robust(g, f + 1, f + 1, l, model).holds,
    )
