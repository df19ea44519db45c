"""Command-line front end: simulate, compare, sweep and selftest."""

from __future__ import annotations

import argparse
import csv
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .analysis import (
    analyze_trace,
    clamp_and_transition_stats,
    format_resource_table,
    resource_report,
)
from .config import SCHEMA, config_to_text, parse_config
from .exceptions import TPTSError, WindowError
from .modulator import Scheme, counted_cycle, plan_period
from .selftest import DEFAULT_SEED, run_selftest
from .simulator import run_simulation

TRACE_COLUMNS = (
    "t",
    "v_grid_a", "v_grid_b", "v_grid_c",
    "i_ref_a", "i_ref_b", "i_ref_c",
    "gate_a", "gate_b", "gate_c",
    "i_rect_a", "i_rect_b", "i_rect_c",
    "i_src_a", "i_src_b", "i_src_c",
    "i_dc", "v_out",
)


def write_trace_csv(trace, path):
    """Write ``trace`` with 17 significant digits in the fixed column order."""
    n = len(trace)
    floats = np.column_stack(
        [trace.t, trace.v_grid, trace.i_ref, trace.gates, trace.i_rect, trace.i_src, trace.i_dc, trace.v_out]
    )
    fmt = ["%.17g"] * floats.shape[1]
    for k in range(7, 10):
        fmt[k] = "%d"
    with open(path, "w", newline="") as fh:
        fh.write(",".join(TRACE_COLUMNS) + "\n")
        if n:
            np.savetxt(fh, floats, fmt=fmt, delimiter=",")


def _skip_periods(cfg):
    periods = cfg.duration * cfg.grid.f_grid
    if periods < 1.0 - 1e-9:
        raise WindowError(
            f"duration {cfg.duration:g} s is shorter than one fundamental period "
            f"({1.0 / cfg.grid.f_grid:g} s)"
        )
    return 1 if periods >= 2.0 - 1e-9 else 0


def simulate_to(cfg, out_dir):
    """Run one simulation and write ``trace.csv`` and ``metrics.txt``."""
    skip = _skip_periods(cfg)
    trace = run_simulation(cfg)
    report = analyze_trace(trace, skip_periods=skip)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_trace_csv(trace, out_dir / "trace.csv")
    header = f"# scheme = {Scheme.coerce(cfg.scheme).value}, m = {cfg.m:g}, f_sw = {cfg.f_sw:g} Hz\n"
    (out_dir / "metrics.txt").write_text(header + report.to_text())
    return trace, report


def _load_config(args):
    text = Path(args.config).read_text() if args.config else ""
    return parse_config(text, args.set or ())


def cmd_simulate(args):
    cfg = _load_config(args)
    _, report = simulate_to(cfg, args.out)
    sp = report.fundamental["i_src_a"]
    print(
        f"wrote {Path(args.out) / 'trace.csv'}; i_src_a fundamental {sp.amplitude:.4f} A "
        f"@ {math.degrees(sp.phase):+.3f} deg"
    )
    return 0


def compare_table(cfg):
    """Side-by-side comparison of the three schemes at one operating point."""
    skip = _skip_periods(cfg)
    rows = {}
    counters = {}
    ts = cfg.ts
    n_per_fund = int(round(cfg.f_sw / cfg.grid.f_grid))
    for scheme in (Scheme.PATTERN_I, Scheme.PATTERN_II, Scheme.SVM):
        run_cfg = cfg.with_overrides(scheme=scheme.value)
        trace = run_simulation(run_cfg)
        report = analyze_trace(trace, skip_periods=skip)
        counters[scheme.value] = counted_cycle(scheme, cfg.grid.phase_offset, cfg.m, cfg.load_current, ts)[1]
        # ideal per-period averages over one fundamental, against the references
        worst = 0.0
        timelines = []
        for k in range(n_per_fund):
            theta = cfg.grid.angle(k * ts) - cfg.displacement
            refs, loc, tl = plan_period(scheme, theta, cfg.m, cfg.load_current, ts)
            timelines.append(tl)
            avg = tl.average_currents(loc, cfg.load_current)
            worst = max(worst, max(abs(a - b) for a, b in zip(avg, refs)))
        stats = clamp_and_transition_stats(timelines)
        rows[scheme.value] = {
            "clamp_fraction": stats.clamp_fraction,
            "transitions": stats.transitions_per_period,
            "thd_i_src_a": report.thd["i_src_a"],
            "thd_i_rect_a": report.thd["i_rect_a"],
            "tracking_error_rms": report.tracking_error_rms,
            "balance_error_max": worst,
            "fund_i_src_a": report.fundamental["i_src_a"].amplitude,
        }
    lines = ["[schemes]"]
    names = list(rows)
    width = 22
    lines.append("metric".ljust(width) + "".join(n.rjust(24) for n in names))
    for key in ("clamp_fraction", "transitions"):
        lines.append(
            key.ljust(width)
            + "".join(
                ("/".join(f"{v:.4g}" for v in rows[n][key])).rjust(24) for n in names
            )
        )
    for key in ("fund_i_src_a", "thd_i_src_a", "thd_i_rect_a", "tracking_error_rms", "balance_error_max"):
        lines.append(key.ljust(width) + "".join(f"{rows[n][key]:.6g}".rjust(24) for n in names))
    lines.append("[resources]")
    lines.append(format_resource_table(resource_report(counters)))
    return "\n".join(lines) + "\n", rows, counters


def cmd_compare(args):
    cfg = _load_config(args)
    text, _, _ = compare_table(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "compare.txt").write_text(text)
    print(text, end="")
    return 0


def _sweep_point(job):
    index, key, value, cfg_text, overrides, out_root = job
    sub = Path(out_root) / f"point_{index:03d}_{key}_{value}"
    try:
        cfg = parse_config(cfg_text, [*overrides, f"{key}={value}"])
        _, report = simulate_to(cfg, sub)
    except TPTSError as exc:
        return {"index": index, key: value, "status": f"error: {exc}"}
    sp = report.fundamental["i_src_a"]
    return {
        "index": index,
        key: value,
        "status": "ok",
        "fund_i_src_a": sp.amplitude,
        "phase_i_src_a_deg": math.degrees(sp.phase),
        "thd_i_src_a": report.thd["i_src_a"],
        "mean_i_dc": report.mean_i_dc,
        "mean_v_out": report.mean_v_out,
        "tracking_error_rms": report.tracking_error_rms,
        "directory": sub.name,
    }


def cmd_sweep(args):
    key = args.param
    if key not in SCHEMA:
        raise TPTSError(f"unknown sweep parameter {key!r}")
    values = [v.strip() for v in args.values.split(",") if v.strip()]
    cfg_text = Path(args.config).read_text() if args.config else ""
    # fail fast on a bad base config before dispatching workers
    parse_config(cfg_text, args.set or ())
    jobs = [(k, key, v, cfg_text, tuple(args.set or ()), args.out) for k, v in enumerate(values)]
    Path(args.out).mkdir(parents=True, exist_ok=True)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_point, jobs))
    else:
        results = [_sweep_point(j) for j in jobs]
    fields = ["index", key, "status", "fund_i_src_a", "phase_i_src_a_deg", "thd_i_src_a",
              "mean_i_dc", "mean_v_out", "tracking_error_rms", "directory"]
    with open(Path(args.out) / "summary.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for row in sorted(results, key=lambda r: r["index"]):
            writer.writerow({k: (f"{v:.17g}" if isinstance(v, float) else v) for k, v in row.items()})
    failed = [r for r in results if r["status"] != "ok"]
    print(f"swept {key} over {len(values)} points, {len(failed)} failed")
    return 1 if failed else 0


def cmd_selftest(args):
    seed = DEFAULT_SEED if args.seed is None else args.seed
    print(f"seed = {seed}")
    results, elapsed = run_selftest(n=args.samples, seed=seed)
    for r in results:
        print(r.line())
    failed = [r for r in results if r.fatal and not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} properties hold in {elapsed:.2f} s")
    return 1 if failed else 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tptspwm", description="Carrier-based modulation and simulation of the TPTS rectifier."
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value configuration file")
    common.add_argument("--out", default="out", help="output directory (default: out)")
    common.add_argument(
        "--set", action="append", metavar="KEY=VALUE", help="override a configuration key"
    )
    common.add_argument("--seed", type=int, default=None, help="self-test RNG seed")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("simulate", parents=[common], help="run one simulation, write trace.csv and metrics.txt")
    sub.add_parser("compare", parents=[common], help="compare the three schemes at one operating point")
    p = sub.add_parser("sweep", parents=[common], help="simulate over a list of parameter values")
    p.add_argument("--param", default="m", help="configuration key to sweep (default: m)")
    p.add_argument("--values", default="0.1,0.3,0.5,0.7,0.9", help="comma-separated values")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p = sub.add_parser("selftest", parents=[common], help="run the randomized invariant suite")
    p.add_argument("--samples", type=int, default=10000, help="random operating points")
    sub.add_parser("defaults", help="print the default configuration")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "defaults":
        print(config_to_text(parse_config("")), end="")
        return 0
    handler = {
        "simulate": cmd_simulate,
        "compare": cmd_compare,
        "sweep": cmd_sweep,
        "selftest": cmd_selftest,
    }[args.command]
    try:
        return handler(args)
    except TPTSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
