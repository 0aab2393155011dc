"""Seeded simulation of QMW-MSR under adversaries, schedules and delays.

Relays are not simulated hop by hop. Every step, each path of at most ``l``
hops into a normal node carries the source's current value, rewritten at
each adversarial hop in path order. A per-(path, step) lag then decides
when that value arrives. Receivers always use the freshest arrived value
per path and see an empty slot on paths where nothing has arrived yet.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Literal, Mapping, Sequence, TextIO

import numpy as np

from .adversary import AdversaryBehavior, drop_message, emit_own, tamper_relay
from .graph import DirectedGraph, in_neighbors_l, paths_into
from .protocol import Message, Quantizer, msr_update, trim
from .robustness import FaultModel, total


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class Schedule:
    kind: Literal["synchronous", "deterministic", "randomized"] = "synchronous"
    # Largest gap between two updates of a normal node (deterministic).
    kbar: int = 1
    # Update probability, scalar or per node (randomized).
    p: float | Mapping[int, float] = 1.0
    # Optional cyclic list of update sets (deterministic).
    script: tuple[frozenset[int], ...] | None = None

    def prob(self, i: int) -> float:
        return float(self.p[i]) if isinstance(self.p, Mapping) else float(self.p)


SYNCHRONOUS = Schedule()


@dataclass(frozen=True)
class DelayModel:
    kind: Literal["none", "bounded"] = "none"
    tau: int = 0
    sampler: Literal["uniform", "fixed"] = "uniform"
    # Fixed lag by path hop count; hop counts not listed get ``tau``.
    lags: Mapping[int, int] | None = None

    @property
    def bound(self) -> int:
        return self.tau if self.kind == "bounded" else 0

    def lag(self, hops: int, rng: np.random.Generator) -> int:
        if self.kind == "none" or self.tau == 0:
            return 0
        if self.sampler == "fixed":
            return int((self.lags or {}).get(hops, self.tau))
        return int(rng.integers(0, self.tau + 1))


NO_DELAY = DelayModel()


@dataclass
class Scenario:
    graph: DirectedGraph
    l: int
    f: int
    x0: Sequence[int]
    adversaries: Mapping[int, AdversaryBehavior] = field(default_factory=dict)
    schedule: Schedule = SYNCHRONOUS
    delays: DelayModel = NO_DELAY
    seed: int = 0
    horizon: int | None = None
    fault_model: FaultModel | None = None
    # Steps simulated after consensus is confirmed, to watch it hold.
    tail: int = 0
    name: str = ""

    @property
    def normal(self) -> list[int]:
        return [i for i in range(self.graph.n) if i not in self.adversaries]

    @property
    def model(self) -> FaultModel:
        return self.fault_model or total(self.f)

    def effective_horizon(self) -> int:
        if self.horizon is not None:
            return self.horizon
        kbar = self.schedule.kbar if self.schedule.kind == "deterministic" else 1
        return 10 * self.graph.n * kbar * (self.delays.bound + 1)


def validate(sc: Scenario, check_fault_model: bool = True) -> None:
    g = sc.graph
    if sc.l < 1:
        raise ScenarioError(f"l must be >= 1, got {sc.l}")
    if sc.f < 0:
        raise ScenarioError(f"f must be >= 0, got {sc.f}")
    if len(sc.x0) != g.n:
        raise ScenarioError(f"x0 has {len(sc.x0)} entries for {g.n} nodes")
    for k, v in enumerate(sc.x0):
        if int(v) != v:
            raise ScenarioError(f"x0[{k}] = {v} is not an integer")
    for a in sc.adversaries:
        if not 0 <= a < g.n:
            raise ScenarioError(f"adversary {a} is not a node")
    if not sc.normal:
        raise ScenarioError("no normal nodes")
    if check_fault_model:
        A = frozenset(sc.adversaries)
        m = sc.model
        if m.kind == "f_total" and len(A) > m.f:
            raise ScenarioError(f"{len(A)} adversaries exceed the {m.f}-total bound")
        if m.kind == "f_local":
            scope = m.l or sc.l
            for i in sc.normal:
                if len(in_neighbors_l(g, i, scope) & A) > m.f:
                    raise ScenarioError(f"node {i} sees more than {m.f} adversaries within {scope} hops")
    s, d = sc.schedule, sc.delays
    if s.kind not in ("synchronous", "deterministic", "randomized"):
        raise ScenarioError(f"unknown schedule {s.kind!r}")
    if s.kind == "deterministic":
        if s.kbar < 1:
            raise ScenarioError("kbar must be >= 1")
        if d.kind == "bounded" and s.kbar > max(d.tau, 1):
            raise ScenarioError(f"kbar={s.kbar} exceeds the delay bound tau={d.tau}")
        if s.script is not None:
            covered = set().union(*s.script) if s.script else set()
            if not set(sc.normal) <= covered:
                raise ScenarioError("scripted schedule never updates some normal node")
    if s.kind == "randomized":
        for i in sc.normal:
            if not 0.0 < s.prob(i) <= 1.0:
                raise ScenarioError(f"update probability of node {i} outside (0, 1]")
    if d.kind not in ("none", "bounded"):
        raise ScenarioError(f"unknown delay model {d.kind!r}")
    if d.kind == "bounded":
        if d.tau < 0:
            raise ScenarioError("tau must be >= 0")
        if d.sampler not in ("uniform", "fixed"):
            raise ScenarioError(f"unknown delay sampler {d.sampler!r}")
        for h, lag in (d.lags or {}).items():
            if not 0 <= lag <= d.tau:
                raise ScenarioError(f"lag {lag} for {h}-hop paths outside [0, {d.tau}]")


@dataclass
class Trace:
    values: np.ndarray  # (steps + 1, n)
    updated: np.ndarray  # (steps + 1, n), node updated during step k
    messages: np.ndarray  # (steps + 1,), non-empty messages delivered at k
    normal: np.ndarray  # bool mask
    roles: list[str]
    tau: int
    seed: int
    safety_interval: tuple[int, int]
    consensus_time: int | None = None
    horizon: int = 0

    @property
    def steps(self) -> int:
        return len(self.values) - 1

    @property
    def normal_values(self) -> np.ndarray:
        return self.values[:, self.normal]

    @property
    def safety_ok(self) -> bool:
        return verdict_safety(self)

    @property
    def preservation_ok(self) -> bool:
        return verdict_preservation(self)

    @property
    def final_values(self) -> list[int]:
        return self.values[-1, self.normal].tolist()


def _equal_rows(tr: Trace) -> np.ndarray:
    nv = tr.normal_values
    return (nv == nv[:, :1]).all(axis=1)


def verdict_safety(tr: Trace) -> bool:
    lo, hi = tr.safety_interval
    nv = tr.normal_values
    return bool(((nv >= lo) & (nv <= hi)).all())


def verdict_agreement(tr: Trace) -> int | None:
    """First step from which normal values agree for ``tau + 1`` recorded steps."""
    eq = _equal_rows(tr)
    w = tr.tau + 1
    run = 0
    for k, e in enumerate(eq):
        run = run + 1 if e else 0
        if run >= w:
            return k - w + 1
    return None


def verdict_preservation(tr: Trace) -> bool:
    k0 = verdict_agreement(tr)
    if k0 is None:
        return True
    nv = tr.normal_values[k0:]
    return bool((nv == nv[0, 0]).all())


def envelopes_monotone(tr: Trace) -> bool:
    nv = tr.normal_values
    hi, lo = nv.max(axis=1), nv.min(axis=1)
    return bool((np.diff(hi) <= 0).all() and (np.diff(lo) >= 0).all())


@dataclass
class _PathInfo:
    path: tuple[int, ...]
    hops: int
    adversarial: bool


class Simulator:
    """One run of a scenario, advanced a step at a time."""

    def __init__(self, sc: Scenario, check_fault_model: bool = True):
        validate(sc, check_fault_model)
        self.sc = sc
        g = sc.graph
        self.n = g.n
        self.adv = dict(sc.adversaries)
        self.normal = sc.normal
        self.x = [int(v) for v in sc.x0]
        self.k = 0
        self.tau = sc.delays.bound
        self.quantizers = {
            i: Quantizer(np.random.default_rng([sc.seed, 1, i])) for i in self.normal
        }
        self.sched_rng = np.random.default_rng([sc.seed, 2])
        self.delay_rng = np.random.default_rng([sc.seed, 3])
        self.paths = {
            i: [
                _PathInfo(p, len(p) - 1, any(v in self.adv for v in p[:-1]))
                for p in paths_into(g, i, sc.l)
            ]
            for i in self.normal
        }
        self.latest: dict[int, list[tuple[int, int | None] | None]] = {
            i: [None] * len(ps) for i, ps in self.paths.items()
        }
        self.pending: dict[int, list[tuple[int, int, int, int | None]]] = {}
        self._cohort = {i: c for c, i in enumerate(self.normal)}

    # -- adversary hooks --------------------------------------------------------

    def _adv_rng(self, a: int, prefix: tuple[int, ...], recipient: int | None):
        b = self.adv[a]
        if not b.needs_rng:
            return None
        r = recipient if b.model == "byzantine" and recipient is not None else -1
        key = hash(prefix) & 0xFFFFFFFF
        return np.random.default_rng([self.sc.seed, 4, a, self.k, r + 1, key])

    def adversary_value(self, a: int, recipient: int | None = None) -> int:
        return emit_own(self.adv[a], self.k, recipient, self._adv_rng(a, (a,), recipient))

    def originate(self, p: tuple[int, ...]) -> int | None:
        """Value a message started now along ``p`` carries on arrival, or None if dropped."""
        k = self.k
        src = p[0]
        if src in self.adv:
            b = self.adv[src]
            if drop_message(b, p, k):
                return None
            v = self.adversary_value(src, p[1])
        else:
            v = self.x[src]
        for pos in range(1, len(p) - 1):
            a = p[pos]
            if a in self.adv:
                b = self.adv[a]
                if drop_message(b, p, k):
                    return None
                v = tamper_relay(b, v, p, p[pos + 1], k, self._adv_rng(a, p[: pos + 1], p[pos + 1]))
        return v

    # -- one step ----------------------------------------------------------------

    def update_set(self) -> list[int]:
        s = self.sc.schedule
        if s.kind == "synchronous":
            return list(self.normal)
        if s.kind == "deterministic":
            if s.script:
                active = s.script[self.k % len(s.script)]
                return [i for i in self.normal if i in active]
            return [i for i in self.normal if self._cohort[i] % s.kbar == self.k % s.kbar]
        draws = self.sched_rng.random(len(self.normal))
        return [i for i, u in zip(self.normal, draws) if u < s.prob(i)]

    def _exchange(self) -> int:
        k, d = self.k, self.sc.delays
        delayed = d.kind == "bounded" and d.tau > 0
        for i in self.normal:
            slots = self.latest[i]
            for pidx, info in enumerate(self.paths[i]):
                v = self.originate(info.path) if info.adversarial else self.x[info.path[0]]
                if not delayed:
                    slots[pidx] = None if v is None else (k, v)
                    continue
                if v is None:
                    continue
                lag = d.lag(info.hops, self.delay_rng)
                self.pending.setdefault(k + lag, []).append((i, pidx, k, v))
        delivered = 0
        for i, pidx, stamp, v in self.pending.pop(k, ()):
            cur = self.latest[i][pidx]
            if cur is None or cur[0] < stamp:
                self.latest[i][pidx] = (stamp, v)
        for i in self.normal:
            delivered += sum(1 for s in self.latest[i] if s is not None)
        return delivered

    def inbox(self, i: int) -> list[Message]:
        """Node ``i``'s current view: its own value plus one entry per path."""
        out = [Message(self.x[i], (i,), self.k)]
        for info, slot in zip(self.paths[i], self.latest[i]):
            if slot is None:
                out.append(Message(None, info.path, -1))
            else:
                out.append(Message(slot[1], info.path, slot[0]))
        return out

    def step(self) -> tuple[list[int], list[int], int]:
        """Advance from ``k`` to ``k + 1``; returns (values at k, updaters, delivered)."""
        for a in self.adv:
            self.x[a] = self.adversary_value(a)
        row = list(self.x)
        delivered = self._exchange()
        upd = self.update_set()
        nxt = list(self.x)
        for i in upd:
            outcome = trim(self.inbox(i), self.x[i], self.sc.f, i)
            nxt[i] = msr_update(self.quantizers[i], outcome)
        self.x = nxt
        self.k += 1
        return row, upd, delivered


def run(sc: Scenario, check_fault_model: bool = True, retry_on_timeout: bool = False) -> Trace:
    """Simulate until consensus is confirmed (plus ``tail`` steps) or the horizon."""
    tr = _run_once(sc, check_fault_model)
    if retry_on_timeout and tr.consensus_time is None:
        tr = _run_once(replace(sc, horizon=2 * sc.effective_horizon()), check_fault_model)
    return tr


def _run_once(sc: Scenario, check_fault_model: bool) -> Trace:
    sim = Simulator(sc, check_fault_model)
    horizon = sc.effective_horizon()
    normal = sim.normal
    x0n = [int(sc.x0[i]) for i in normal]
    rows, upd_rows, msgs = [], [], []
    tau = sim.tau
    need = tau + 2 + sc.tail  # equal states for the window plus confirmation
    run_len = 0
    while True:
        row, upd, delivered = sim.step()
        rows.append(row)
        u = np.zeros(sc.graph.n, dtype=bool)
        u[upd] = True
        upd_rows.append(u)
        msgs.append(delivered)
        vals = [row[i] for i in normal]
        run_len = run_len + 1 if min(vals) == max(vals) else 0
        if run_len >= need or sim.k > horizon:
            break
    # Record the state reached by the last step as the final row.
    for a in sim.adv:
        sim.x[a] = sim.adversary_value(a)
    rows.append(list(sim.x))
    upd_rows.append(np.zeros(sc.graph.n, dtype=bool))
    msgs.append(0)
    mask = np.zeros(sc.graph.n, dtype=bool)
    mask[normal] = True
    roles = [sc.adversaries[i].model if i in sc.adversaries else "normal" for i in range(sc.graph.n)]
    tr = Trace(
        values=np.array(rows, dtype=np.int64),
        updated=np.array(upd_rows),
        messages=np.array(msgs, dtype=np.int64),
        normal=mask,
        roles=roles,
        tau=tau,
        seed=sc.seed,
        safety_interval=(min(x0n), max(x0n)),
        horizon=horizon,
    )
    tr.consensus_time = verdict_agreement(tr)
    return tr


# -- output --------------------------------------------------------------------


def write_trace_csv(tr: Trace, out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["k", "node", "value", "updated", "role"])
    for k in range(len(tr.values)):
        for i in range(tr.values.shape[1]):
            w.writerow([k, i, int(tr.values[k, i]), int(tr.updated[k, i]), tr.roles[i]])


def trace_csv(tr: Trace) -> str:
    buf = io.StringIO()
    write_trace_csv(tr, buf)
    return buf.getvalue()


def summary(tr: Trace) -> dict:
    return {
        "consensus_time": tr.consensus_time,
        "safety_ok": tr.safety_ok,
        "preservation_ok": tr.preservation_ok,
        "final_values": tr.final_values,
        "seed": tr.seed,
    }


def format_summary(d: Mapping) -> str:
    return "\n".join(f"{k}: {v}" for k, v in d.items()) + "\n"
