"""Command line entry point: ``plancore {urn,core,census,sample,scaling}``."""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from .census import census_report
from .corelab import load_kernel, multicore_counts
from .decompose import KernelTooLarge, circumference_via_kernel, core_block_sizes, from_kernel, girth_via_kernel, max_loop_cycle
from .experiments import load_config, run_config, tool_version
from .polya import urn_minmax
from .sampler import SamplerExhausted, cubic_config_sample, gnm_sample, planar_rejection_sample


def _split(text: str | None) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()] if text else []


def cmd_urn(args: argparse.Namespace) -> int:
    s = urn_minmax(args.colors, args.draws, args.first, args.trials, args.seed)
    if args.format == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["trial", "min", "max"])
        for t, (lo, hi) in enumerate(zip(s.mins, s.maxs)):
            w.writerow([t, int(lo), int(hi)])
        return 0
    N, k, f = args.colors, args.draws, args.first
    out = {
        "tool_version": tool_version(),
        "params": {"colors": N, "draws": k, "first": f, "trials": args.trials, "seed": args.seed},
        "median_min": s.median_min,
        "median_max": s.median_max,
        "quantiles": s.quantiles(),
        "scales": {"k/(N f)": k / (N * f), "(k/N)(1+ln f)": k / N * (1 + math.log(f))},
    }
    print(json.dumps(out, indent=2, sort_keys=True))
    return 0


def cmd_core(args: argparse.Namespace) -> int:
    K = load_kernel(args.kernel)
    stats = _split(args.stats) or ["girth"]
    counts = multicore_counts(K, args.subdiv, args.trials, args.seed)
    rows = []
    values: dict[str, list[float]] = {s: [] for s in stats}
    for t in range(args.trials):
        d = from_kernel(K, counts[t])
        for s in stats:
            if s == "girth":
                vals = {"girth": girth_via_kernel(d)}
            elif s == "maxloop":
                vals = {"maxloop": max_loop_cycle(d)}
            elif s == "circ":
                try:
                    vals = {"circ": circumference_via_kernel(d, args.cap)}
                except KernelTooLarge:
                    vals = {"circ": None}
            elif s == "blocks":
                sizes = core_block_sizes(K, counts[t])
                vals = {"block_1": sizes[0] if sizes else 0, "block_2": sizes[1] if len(sizes) > 1 else 0}
            else:
                raise SystemExit(f"unknown statistic {s!r}")
            for name, v in vals.items():
                rows.append((t, name, v))
                if v is not None:
                    values.setdefault(name, []).append(float(v))
    if args.format == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["trial", "stat", "value"])
        for t, name, v in rows:
            w.writerow([t, name, "" if v is None else v])
    else:
        out = {
            "tool_version": tool_version(),
            "kernel": args.kernel, "N": K.m, "v_kernel": K.n, "loops": K.loop_count(),
            "subdiv": args.subdiv, "trials": args.trials, "seed": args.seed,
            "medians": {name: float(np.median(v)) for name, v in values.items() if v},
        }
        print(json.dumps(out, indent=2, sort_keys=True))
    return 0


def cmd_census(args: argparse.Namespace) -> int:
    report = census_report(args.vertices, _split(args.filter), identities="identities" in _split(args.report))
    report["tool_version"] = tool_version()
    print(json.dumps(report, indent=2, sort_keys=True))
    ids = report.get("identities", {})
    ok = all(v.get("holds", v.get("all_hold", True)) for v in ids.values())
    return 0 if ok else 1


def cmd_sample(args: argparse.Namespace) -> int:
    filters = _split(args.filter)
    try:
        if args.model == "gnm":
            g, tries = gnm_sample(args.n, args.m, args.seed), 1
        elif args.model == "planar":
            res = planar_rejection_sample(args.n, args.m, args.seed, args.max_tries)
            g, tries = res.graph, res.tries
        else:
            g = cubic_config_sample(args.n, filters, args.seed, args.max_tries)
            tries = None
    except SamplerExhausted as exc:
        print(f"sampler exhausted after {exc.tries} tries", file=sys.stderr)
        return 2
    text = g.to_text()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if tries is not None:
        print(f"tries: {tries}", file=sys.stderr)
    return 0


def cmd_scaling(args: argparse.Namespace) -> int:
    cfg = load_config(Path(args.config))
    report = run_config(cfg)
    out_dir = Path(args.out)
    p_csv, p_json = report.write(out_dir, args.stem)
    if not args.no_figures:
        from .plotting import plot_report

        plot_report(report.summary, out_dir)
    for w in report.summary.get("windows", []):
        status = "PASS" if w["passed"] else "FAIL"
        print(f"{status} {w['kind']} {w.get('stat', '')} observed={w.get('observed')}", file=sys.stderr)
    print(f"wrote {p_csv} and {p_json}", file=sys.stderr)
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="plancore", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    u = sub.add_parser("urn", help="order statistics of the N-colour urn")
    u.add_argument("--colors", type=int, required=True)
    u.add_argument("--draws", type=int, required=True)
    u.add_argument("--first", type=int, required=True)
    u.add_argument("--trials", type=int, default=1000)
    u.add_argument("--seed", type=int, default=0)
    u.add_argument("--format", choices=("json", "csv"), default="json")
    u.set_defaults(func=cmd_urn)

    c = sub.add_parser("core", help="statistics of random cores grown from a kernel")
    c.add_argument("--kernel", required=True, help="necklace:L | chain:b | theta | figure-eight | k4 | file:PATH")
    c.add_argument("--subdiv", type=int, required=True)
    c.add_argument("--trials", type=int, default=100)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--stats", default="girth", help="comma list of girth,circ,maxloop,blocks")
    c.add_argument("--cap", type=int, default=40, help="kernel size cap for exact circumference")
    c.add_argument("--format", choices=("json", "csv"), default="csv")
    c.set_defaults(func=cmd_core)

    e = sub.add_parser("census", help="exact weighted census of cubic multigraphs")
    e.add_argument("--vertices", type=int, required=True)
    e.add_argument("--filter", default="", help="comma list of connected,planar")
    e.add_argument("--report", default="", help="'identities' to verify the counting identities")
    e.set_defaults(func=cmd_census)

    s = sub.add_parser("sample", help="draw one random graph")
    s.add_argument("--model", choices=("gnm", "planar", "cubic"), required=True)
    s.add_argument("--n", type=int, required=True, help="vertex count (two_n for cubic)")
    s.add_argument("--m", type=int, default=0)
    s.add_argument("--filter", default="", help="cubic only: comma list of connected,planar")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-tries", type=int, default=10_000)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_sample)

    g = sub.add_parser("scaling", help="run a scaling experiment from a TOML or JSON config")
    g.add_argument("--config", required=True)
    g.add_argument("--out", default="scaling-out")
    g.add_argument("--stem", default="report")
    g.add_argument("--no-figures", action="store_true")
    g.set_defaults(func=cmd_scaling)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
