"""TOML scenario files.

Every validation error names the offending key path, e.g.
``adversaries[0].strategy.kind``. See ``demos/scenario_template.toml``
for a commented example.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .adversary import StrategyError, behavior_from_dict
from .engine import DelayModel, Scenario, ScenarioError, Schedule, validate
from .graph import (
    DirectedGraph,
    GraphError,
    build_graph,
    gen_complete,
    gen_complete_bipartite,
    gen_cycle,
    gen_wheel,
    parse_graph,
    undirected,
)
from .robustness import FaultModel


class ScenarioFileError(ValueError):
    def __init__(self, key: str, msg: str):
        super().__init__(f"{key}: {msg}")
        self.key = key


@dataclass
class RunControls:
    seeds: list[int] = field(default_factory=lambda: [0])
    csv_dir: str | None = None
    plotdata_dir: str | None = None


_TOP_KEYS = {"name", "l", "f", "seed", "horizon", "tail", "x0", "graph", "fault_model",
             "schedule", "delays", "adversaries", "run"}


def _int(d: Mapping, key: str, path: str, default: Any = ...) -> int:
    if key not in d:
        if default is ...:
            raise ScenarioFileError(f"{path}{key}", "missing")
        return default
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ScenarioFileError(f"{path}{key}", f"expected an integer, got {v!r}")
    return v


def _check_keys(d: Mapping, allowed: set[str], path: str) -> None:
    extra = set(d) - allowed
    if extra:
        raise ScenarioFileError(path.rstrip(".") or "<top>", f"unknown keys {sorted(extra)}")


def graph_from_table(t: Mapping[str, Any], base: Path | None = None) -> DirectedGraph:
    key = "graph."
    try:
        if "family" in t:
            fam = t["family"]
            if fam == "cycle":
                return gen_cycle(_int(t, "n", key))
            if fam == "wheel":
                return gen_wheel(_int(t, "n", key), t.get("rim_order"))
            if fam == "complete":
                return gen_complete(_int(t, "n", key))
            if fam == "complete_bipartite":
                parts = t.get("parts")
                return gen_complete_bipartite(_int(t, "n1", key), _int(t, "n2", key),
                                              tuple(parts) if parts else None)
            raise ScenarioFileError("graph.family", f"unknown family {fam!r}")
        if "file" in t:
            p = Path(t["file"])
            if base is not None and not p.is_absolute():
                p = base / p
            return parse_graph(p.read_text())
        if "edges" in t:
            n = _int(t, "n", key)
            pairs = [tuple(e) for e in t["edges"]]
            return undirected(n, pairs) if t.get("undirected", True) else build_graph(n, pairs)
    except GraphError as exc:
        raise ScenarioFileError("graph", str(exc)) from None
    except OSError as exc:
        raise ScenarioFileError("graph.file", str(exc)) from None
    raise ScenarioFileError("graph", "needs one of 'family', 'file' or 'edges'")


def _schedule(t: Mapping[str, Any]) -> Schedule:
    _check_keys(t, {"kind", "kbar", "p", "script"}, "schedule.")
    kind = t.get("kind", "synchronous")
    if kind not in ("synchronous", "deterministic", "randomized"):
        raise ScenarioFileError("schedule.kind", f"unknown schedule {kind!r}")
    p = t.get("p", 1.0)
    if isinstance(p, Mapping):
        p = {int(k): float(v) for k, v in p.items()}
    elif not isinstance(p, (int, float)):
        raise ScenarioFileError("schedule.p", f"expected a number or table, got {p!r}")
    script = t.get("script")
    if script is not None:
        script = tuple(frozenset(s) for s in script)
    return Schedule(kind, kbar=_int(t, "kbar", "schedule.", 1), p=p, script=script)


def _delays(t: Mapping[str, Any]) -> DelayModel:
    _check_keys(t, {"kind", "tau", "sampler", "lags"}, "delays.")
    kind = t.get("kind", "none")
    if kind not in ("none", "bounded"):
        raise ScenarioFileError("delays.kind", f"unknown delay model {kind!r}")
    lags = t.get("lags")
    if lags is not None:
        try:
            lags = {int(h): int(v) for h, v in lags.items()}
        except (ValueError, AttributeError):
            raise ScenarioFileError("delays.lags", "expected a table of hops = lag") from None
    return DelayModel(kind, tau=_int(t, "tau", "delays.", 0), sampler=t.get("sampler", "uniform"), lags=lags)


def _fault_model(t: Mapping[str, Any], f: int) -> FaultModel:
    _check_keys(t, {"kind", "f", "l"}, "fault_model.")
    kind = {"total": "f_total", "local": "f_local"}.get(t.get("kind", "total"), t.get("kind"))
    try:
        return FaultModel(kind, _int(t, "f", "fault_model.", f), t.get("l"))
    except ValueError as exc:
        raise ScenarioFileError("fault_model.kind", str(exc)) from None


def _seeds(spec: Any, key: str) -> list[int]:
    if isinstance(spec, int) and not isinstance(spec, bool):
        return [spec]
    if isinstance(spec, list):
        return [int(s) for s in spec]
    if isinstance(spec, str):
        return parse_seed_range(spec, key)
    raise ScenarioFileError(key, f"expected int, list or 'a..b', got {spec!r}")


def parse_seed_range(text: str, key: str = "seeds") -> list[int]:
    """``"3"`` or ``"0..19"`` (inclusive)."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(text)]
    except ValueError:
        raise ScenarioFileError(key, f"bad seed range {text!r}") from None


def scenario_from_dict(d: Mapping[str, Any], base: Path | None = None) -> tuple[Scenario, RunControls]:
    _check_keys(d, _TOP_KEYS, "")
    if "graph" not in d:
        raise ScenarioFileError("graph", "missing")
    g = graph_from_table(d["graph"], base)
    l = _int(d, "l", "")
    f = _int(d, "f", "", 0)
    if "x0" not in d or not isinstance(d["x0"], list):
        raise ScenarioFileError("x0", "missing or not a list")
    for idx, v in enumerate(d["x0"]):
        if isinstance(v, bool) or not isinstance(v, int):
            raise ScenarioFileError(f"x0[{idx}]", f"expected an integer, got {v!r}")
    adversaries = {}
    for idx, a in enumerate(d.get("adversaries", [])):
        key = f"adversaries[{idx}]"
        a = dict(a)
        node = _int(a, "node", f"{key}.")
        a.pop("node")
        if node in adversaries:
            raise ScenarioFileError(f"{key}.node", f"node {node} listed twice")
        try:
            adversaries[node] = behavior_from_dict(a)
        except StrategyError as exc:
            raise ScenarioFileError(key, str(exc)) from None
    run_t = d.get("run", {})
    _check_keys(run_t, {"seeds", "num_seeds", "csv_dir", "plotdata_dir"}, "run.")
    seed = _int(d, "seed", "", 0)
    if "seeds" in run_t:
        seeds = _seeds(run_t["seeds"], "run.seeds")
    else:
        seeds = list(range(seed, seed + _int(run_t, "num_seeds", "run.", 1)))
    sc = Scenario(
        graph=g, l=l, f=f, x0=list(d["x0"]), adversaries=adversaries,
        schedule=_schedule(d.get("schedule", {})),
        delays=_delays(d.get("delays", {})),
        seed=seed,
        horizon=_int(d, "horizon", "", None),
        fault_model=_fault_model(d["fault_model"], f) if "fault_model" in d else None,
        tail=_int(d, "tail", "", 0),
        name=str(d.get("name", "")),
    )
    try:
        validate(sc)
    except ScenarioError as exc:
        raise ScenarioFileError("scenario", str(exc)) from None
    return sc, RunControls(seeds, run_t.get("csv_dir"), run_t.get("plotdata_dir"))


def load_scenario(path: str | Path) -> tuple[Scenario, RunControls]:
    path = Path(path)
    try:
        d = tomllib.loads(path.read_text())
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioFileError("<file>", f"{path}: {exc}") from None
    return scenario_from_dict(d, path.parent)
