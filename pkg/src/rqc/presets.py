"""Self-contained reproduction scenarios and the robustness lemma table.

Node ids are 0-based throughout. Each preset carries the qualitative
outcome it is expected to show across seeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

from .adversary import AdversaryBehavior, Constant, Oscillate, PerRecipient, QuantizedSine
from .engine import DelayModel, Scenario, Schedule
from .graph import (
    DirectedGraph,
    gen_complete_bipartite,
    gen_cycle,
    gen_wheel,
    longest_cycle_free_path_length,
)
from .robustness import (
    Witness,
    conditions_hold,
    is_rs_robust,
    is_strictly_robust,
    total,
)

CYCLE8_X0 = (4, 5, 6, 7, 8, 9, 3, 1)
WHEEL6_X0 = (3, 5, 1, 7, 3, 9)
# Drawn once with numpy.random.default_rng(0): the first six nodes from
# [1, 7], the rest from [8, 14]. Kept literal so the preset never drifts.
BIPARTITE12_X0 = (6, 5, 4, 2, 3, 1, 8, 8, 9, 13, 12, 14)


def fig1b_graph() -> DirectedGraph:
    """Six-node wheel, hub 0, rim visited as 1-3-2-4-5.

    The rim order puts nodes 2 and 4 next to each other, which the
    unrobust partition {2, 4} / {1, 3, 5} (with the hub faulty) needs.
    """
    return gen_wheel(6, rim_order=[1, 3, 2, 4, 5])


FIG1B_WITNESS = Witness(
    v1=frozenset({2, 4}), v2=frozenset({1, 3, 5}), fault_set=frozenset({0}),
    x1=frozenset(), x2=frozenset(),
)


def bipartite12_graph() -> DirectedGraph:
    """K_{6,6} with even nodes on one side and odd nodes on the other."""
    return gen_complete_bipartite(6, 6, parts=(range(0, 12, 2), range(1, 12, 2)))


BIPARTITE12_PAIR = (frozenset(range(6)), frozenset(range(6, 12)))


def _sine() -> AdversaryBehavior:
    # Swings over [1, 9] with period 12; relays carry the same value.
    return AdversaryBehavior(model="malicious", own=QuantizedSine(4.0, 12.0, 5.0), relay="own")


def fig3(l: int, seed: int = 0) -> Scenario:
    return Scenario(
        graph=gen_cycle(8), l=l, f=1, x0=CYCLE8_X0,
        adversaries={7: _sine()}, seed=seed, name=f"fig3_{l}hop",
    )


def fig4(seed: int = 0) -> Scenario:
    return replace(fig3(4, seed), schedule=Schedule("randomized", p=0.5), name="fig4_async")


def fig5(seed: int = 0) -> Scenario:
    hub = AdversaryBehavior(model="byzantine", own=PerRecipient([0, 10, 2, 8]), relay="own")
    return Scenario(
        graph=fig1b_graph(), l=2, f=1, x0=WHEEL6_X0, adversaries={0: hub},
        schedule=Schedule("deterministic", kbar=2),
        delays=DelayModel("bounded", tau=2, sampler="fixed", lags={1: 0, 2: 1}),
        seed=seed, name="fig5_delays",
    )


def fig6(l: int, seed: int = 0) -> Scenario:
    # Each adversary flips between the ends of the low block's range.
    adv = {a: AdversaryBehavior(own=Oscillate(1, 7), relay="own") for a in (0, 2, 4)}
    return Scenario(
        graph=bipartite12_graph(), l=l, f=3, x0=BIPARTITE12_X0, adversaries=adv,
        seed=seed, name=f"fig6_{l}hop",
    )


def necessity_scenario(g: DirectedGraph, w: Witness, f: int, l: int, a: int, b: int, seed: int = 0) -> Scenario:
    """Constant adversaries on ``X1 | X2`` that hold both sides apart.

    Nodes of ``V1`` start at ``a``, ``V2`` at ``b`` and everybody else in
    between. Adversaries in ``V1`` keep emitting ``a`` and those in ``V2``
    emit ``b``; the non-robust cut then leaves the normal nodes of each
    side unable to see enough outside values to move.
    """
    mid = (a + b) // 2
    x0 = [a if i in w.v1 else b if i in w.v2 else mid for i in range(g.n)]
    adv = {}
    for i in w.x1 | w.x2:
        adv[i] = AdversaryBehavior(own=Constant(a if i in w.v1 else b), relay="own")
    return Scenario(graph=g, l=l, f=f, x0=x0, adversaries=adv, seed=seed, name="necessity")


@dataclass(frozen=True)
class Preset:
    name: str
    build: Callable[[int], Scenario]
    expect_consensus: bool
    description: str


PRESETS: dict[str, Preset] = {
    p.name: p
    for p in (
        Preset("fig3_1hop", lambda s: fig3(1, s), False, "8-cycle, one sine adversary, one-hop relays"),
        Preset("fig3_4hop", lambda s: fig3(4, s), True, "8-cycle, one sine adversary, four-hop relays"),
        Preset("fig4_async", fig4, True, "8-cycle, four hops, nodes update with probability 0.5"),
        Preset("fig5_delays", fig5, True, "6-node wheel, Byzantine hub, two hops, fixed lags 0/1"),
        Preset("fig6_1hop", lambda s: fig6(1, s), False, "K_{6,6}, three oscillating adversaries, one hop"),
        Preset("fig6_2hop", lambda s: fig6(2, s), True, "K_{6,6}, three oscillating adversaries, two hops"),
    )
}


# -- lemma table ----------------------------------------------------------------


@dataclass(frozen=True)
class LemmaRow:
    family: str
    n: int
    claim: str
    hops: int
    holds: bool
    below: bool | None  # verdict one hop lower, None when hops == 1
    # Whether the claimed hop count is also the smallest that works.
    tight: bool = True

    @property
    def ok(self) -> bool:
        return self.holds and not (self.tight and self.below)


def _cycle_row(n: int) -> LemmaRow:
    g = gen_cycle(n)
    h = math.ceil(longest_cycle_free_path_length(g) / 2)
    m = total(1)
    below = None if h == 1 else is_rs_robust(g, 2, 2, h - 1, m).holds
    return LemmaRow(f"C{n}", n, "(2,2)-robust, 1-total", h, is_rs_robust(g, 2, 2, h, m).holds, below)


def _bipartite_row(d: int) -> LemmaRow:
    g = gen_complete_bipartite(d, d)
    r = d // 2 + 1
    m = total(r - 1)
    return LemmaRow(
        f"K{d},{d}", 2 * d, f"({r},{r})-robust, {r - 1}-total", 2,
        is_rs_robust(g, r, r, 2, m).holds, is_rs_robust(g, r, r, 1, m).holds, tight=False,
    )


def _wheel_row(n: int) -> LemmaRow:
    g = gen_wheel(n)
    h = longest_cycle_free_path_length(g) // 4 + 1
    m = total(1)
    below = None if h == 1 else is_strictly_robust(g, 2, h - 1, m).holds
    return LemmaRow(f"W{n}", n, "2-strict, 1-total", h, is_strictly_robust(g, 2, h, m).holds, below)


def lemma_table() -> list[LemmaRow]:
    rows = [_cycle_row(n) for n in range(4, 9)]
    rows += [_bipartite_row(d) for d in (2, 3)]
    rows += [_wheel_row(n) for n in range(4, 9)]
    return rows


def format_lemma_table(rows: list[LemmaRow]) -> str:
    out = [f"{'graph':<8}{'claim':<26}{'hops':>5}{'holds':>7}{'hops-1':>8}  ok"]
    for r in rows:
        below = "-" if r.below is None else ("yes" if r.below else "no")
        out.append(
            f"{r.family:<8}{r.claim:<26}{r.hops:>5}{('yes' if r.holds else 'no'):>7}{below:>8}  "
            f"{'ok' if r.ok else 'FAIL'}"
        )
    return "\n".join(out) + "\n"


def byzantine_cycle_report(n: int = 8) -> list[tuple[int, bool]]:
    """Strict robustness of the n-cycle at every hop count up to its longest path.

    Expected to be False everywhere: removing one node leaves a path.
    """
    g = gen_cycle(n)
    lstar = longest_cycle_free_path_length(g)
    return [(l, is_strictly_robust(g, 2, l, total(1)).holds) for l in range(1, lstar + 1)]


def witness_check(g: DirectedGraph, w: Witness, r: int, s: int, l: int) -> bool:
    """True iff the robustness conditions hold on the pair (so the witness fails)."""
    return conditions_hold(g, w.v1, w.v2, w.fault_set, r, s, l)
