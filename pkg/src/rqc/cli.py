"""Command-line front end.

Exit codes: 0 success (or "robust" for ``check``), 1 negative outcome,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path
from statistics import mean

import numpy as np

from . import presets
from .engine import ScenarioError, Scenario, run, summary, trace_csv
from .graph import (
    GraphError,
    format_graph,
    gen_complete,
    gen_complete_bipartite,
    gen_cycle,
    gen_wheel,
    parse_graph,
)
from .robustness import (
    FaultModel,
    is_rs_robust,
    is_strictly_robust,
    sampled_check,
)
from .scenario_file import ScenarioFileError, load_scenario, parse_seed_range

log = logging.getLogger("rqc")

USAGE_ERROR = 2


class UsageError(Exception):
    pass


def _base_seed(args) -> int:
    if not getattr(args, "seed_env", False):
        return 0
    raw = os.environ.get("RQC_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"RQC_SEED must be an integer, got {raw!r}") from None


# -- check ------------------------------------------------------------------------


def cmd_check(args) -> int:
    try:
        g = parse_graph(Path(args.graph).read_text())
    except OSError as exc:
        raise UsageError(str(exc)) from None
    except GraphError as exc:
        raise UsageError(f"{args.graph}: {exc}") from None
    model = FaultModel("f_total" if args.model == "total" else "f_local", args.f)
    if args.sample:
        rng = np.random.default_rng(args.seed + _base_seed(args))
        v = sampled_check(g, args.r, args.s, args.l, model, args.sample, rng, strict=args.strict)
    elif args.strict:
        v = is_strictly_robust(g, args.r, args.l, model)
    else:
        v = is_rs_robust(g, args.r, args.s, args.l, model)
    fmt = lambda s: "{" + ",".join(map(str, sorted(s))) + "}"  # noqa: E731
    w = v.witness
    fields = {
        "graph": args.graph,
        "property": "strict" if args.strict else "rs",
        "r": args.r,
        "s": "-" if args.strict else args.s,
        "l": args.l,
        "model": model.label(),
        "verdict": "holds" if v.holds else "fails",
        "witness": "none" if w is None else
        f"V1={fmt(w.v1)} V2={fmt(w.v2)} F={fmt(w.fault_set)} X1={fmt(w.x1)} X2={fmt(w.x2)}",
        "mode": f"sampled ({args.sample} pairs per fault set; a pass is not a proof)" if args.sample else "exact",
        "fault_sets_checked": v.fault_sets_checked,
        "pairs_checked": v.pairs_checked,
        "elapsed_ms": f"{v.elapsed_ms:.1f}",
    }
    for k, val in fields.items():
        print(f"{k}: {val}")
    return 0 if v.holds else 1


# -- run / repro --------------------------------------------------------------------


def _run_seed(sc: Scenario):
    tr = run(sc, retry_on_timeout=True)
    return sc.seed, tr


def _plot_matrix(tr) -> str:
    n = tr.values.shape[1]
    lines = ["k," + ",".join(f"x{i}" for i in range(n))]
    for k, row in enumerate(tr.values):
        lines.append(f"{k}," + ",".join(str(int(v)) for v in row))
    return "\n".join(lines) + "\n"


def sweep(sc: Scenario, seeds, csv_dir=None, plot_dir=None, workers: int = 1) -> dict:
    scs = [replace(sc, seed=s) for s in seeds]
    if workers > 1 and len(scs) > 1:
        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(_run_seed, scs))
    else:
        results = [_run_seed(s) for s in scs]
    # Output files are written here, one writer per file.
    for d in (csv_dir, plot_dir):
        if d:
            Path(d).mkdir(parents=True, exist_ok=True)
    per_seed = []
    for seed, tr in results:
        tag = sc.name or "scenario"
        if csv_dir:
            Path(csv_dir, f"{tag}_seed{seed}.csv").write_text(trace_csv(tr))
        if plot_dir:
            Path(plot_dir, f"{tag}_seed{seed}_values.csv").write_text(_plot_matrix(tr))
        per_seed.append(summary(tr))
    times = [s["consensus_time"] for s in per_seed if s["consensus_time"] is not None]
    return {
        "scenario": sc.name,
        "runs": len(per_seed),
        "consensus_rate": len(times) / len(per_seed) if per_seed else 0.0,
        "mean_consensus_time": mean(times) if times else None,
        "safety_violations": sum(not s["safety_ok"] for s in per_seed),
        "preservation_violations": sum(not s["preservation_ok"] for s in per_seed),
        "per_seed": per_seed,
    }


def _print_aggregate(agg: dict, verbose: bool) -> None:
    if verbose:
        for s in agg["per_seed"]:
            print(f"seed {s['seed']}: consensus_time={s['consensus_time']} safety_ok={s['safety_ok']} "
                  f"preservation_ok={s['preservation_ok']} final_values={s['final_values']}")
    mct = agg["mean_consensus_time"]
    print(f"scenario: {agg['scenario']}")
    print(f"runs: {agg['runs']}")
    print(f"consensus_rate: {agg['consensus_rate']:.2f}")
    print(f"mean_consensus_time: {'-' if mct is None else f'{mct:.1f}'}")
    print(f"safety_violations: {agg['safety_violations']}")
    print(f"preservation_violations: {agg['preservation_violations']}")


def _seed_list(args, default: list[int]) -> list[int]:
    seeds = parse_seed_range(args.seeds, "--seeds") if args.seeds else default
    base = _base_seed(args)
    return [s + base for s in seeds]


def cmd_run(args) -> int:
    try:
        sc, ctl = load_scenario(args.scenario)
    except ScenarioFileError as exc:
        raise UsageError(f"{args.scenario}: {exc}") from None
    seeds = _seed_list(args, ctl.seeds)
    agg = sweep(sc, seeds, args.csv or ctl.csv_dir, args.plotdata or ctl.plotdata_dir, args.workers)
    _print_aggregate(agg, args.verbose)
    return 0 if agg["safety_violations"] == 0 and agg["preservation_violations"] == 0 else 1


def _repro_lemma_table() -> bool:
    rows = presets.lemma_table()
    print(presets.format_lemma_table(rows), end="")
    return all(r.ok for r in rows)


def cmd_repro(args) -> int:
    names = list(presets.PRESETS) + ["lemma_table"] if args.preset == "all" else [args.preset]
    seeds = _seed_list(args, list(range(20)))
    all_ok = True
    for name in names:
        if name == "lemma_table":
            ok = _repro_lemma_table()
        else:
            p = presets.PRESETS[name]
            agg = sweep(p.build(0), seeds, args.csv, args.plotdata, args.workers)
            _print_aggregate(agg, args.verbose)
            want = 1.0 if p.expect_consensus else 0.0
            ok = (agg["consensus_rate"] == want and agg["safety_violations"] == 0
                  and agg["preservation_violations"] == 0)
            print(f"expected: {'consensus' if p.expect_consensus else 'no consensus'} on every seed")
        print(f"{name}: {'PASS' if ok else 'FAIL'}\n")
        all_ok &= ok
    return 0 if all_ok else 1


def cmd_lemma_table(args) -> int:
    return 0 if _repro_lemma_table() else 1


# -- gen-graph ---------------------------------------------------------------------


def cmd_gen_graph(args) -> int:
    try:
        if args.family == "cycle":
            g, tag = gen_cycle(args.n), f"cycle, n={args.n}"
        elif args.family == "wheel":
            g, tag = gen_wheel(args.n), f"wheel, n={args.n}, hub 0"
        elif args.family == "complete":
            g, tag = gen_complete(args.n), f"complete, n={args.n}"
        elif args.family == "bipartite":
            n2 = args.n2 if args.n2 is not None else args.n
            g, tag = gen_complete_bipartite(args.n, n2), f"complete bipartite {args.n},{n2}"
        elif args.family == "fig1b":
            g, tag = presets.fig1b_graph(), "six-node wheel, hub 0, rim 1-3-2-4-5"
        else:
            g, tag = presets.bipartite12_graph(), "K6,6, evens vs odds"
    except GraphError as exc:
        raise UsageError(str(exc)) from None
    text = format_graph(g, tag)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rqc",
        description="Resilient quantized consensus: robustness checks and simulations.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    ap.add_argument("--log-level", default="WARNING", help="logging level")
    sub = ap.add_subparsers(dest="cmd", required=True)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    c = sub.add_parser("check", help="check graph robustness with l hops", formatter_class=fmt)
    c.add_argument("graph", help="graph file ('n <count>' header, then '<src> <dst>' or 'u <a> <b>' lines)")
    c.add_argument("--r", type=int, required=True)
    c.add_argument("--s", type=int, default=1, help="ignored with --strict")
    c.add_argument("--l", type=int, required=True, help="hop count")
    c.add_argument("--f", type=int, required=True, help="fault budget")
    c.add_argument("--model", choices=["total", "local"], default="total")
    c.add_argument("--strict", action="store_true", help="check r-strict robustness")
    c.add_argument("--sample", type=int, default=0, metavar="N",
                   help="check N random pairs per fault set instead of all pairs")
    c.add_argument("--seed", type=int, default=0, help="rng seed for --sample")
    c.add_argument("--seed-env", action="store_true", help="add $RQC_SEED to the seed")
    c.set_defaults(func=cmd_check)

    def sweep_flags(p):
        p.add_argument("--seeds", help="seed or inclusive range, e.g. 0..19")
        p.add_argument("--seed-env", action="store_true", help="offset seeds by $RQC_SEED")
        p.add_argument("--csv", metavar="DIR", help="write per-seed trace CSVs here")
        p.add_argument("--plotdata", metavar="DIR", help="write per-seed value matrices here")
        p.add_argument("--workers", type=int, default=1, help="parallel worker processes")
        p.add_argument("--verbose", action="store_true", help="print one line per seed")

    r = sub.add_parser("run", help="run a TOML scenario over seeds", formatter_class=fmt)
    r.add_argument("scenario", help="scenario file (see demos/scenario_template.toml)")
    sweep_flags(r)
    r.set_defaults(func=cmd_run)

    p = sub.add_parser("repro", help="run a reproduction preset", formatter_class=fmt)
    p.add_argument("preset", choices=[*presets.PRESETS, "lemma_table", "all"])
    sweep_flags(p)
    p.set_defaults(func=cmd_repro)

    t = sub.add_parser("lemma-table", help="verify hop counts for cycles, bipartite graphs and wheels")
    t.set_defaults(func=cmd_lemma_table)

    gg = sub.add_parser("gen-graph", help="write a graph file", formatter_class=fmt)
    gg.add_argument("family", choices=["cycle", "wheel", "complete", "bipartite", "fig1b", "bipartite12"])
    gg.add_argument("n", type=int, nargs="?", default=8, help="node count (first part size for bipartite)")
    gg.add_argument("--n2", type=int, help="second part size for bipartite")
    gg.add_argument("-o", "--output", help="output path (default stdout)")
    gg.set_defaults(func=cmd_gen_graph)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, ScenarioError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
