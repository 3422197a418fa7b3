"""Command-line front end.

Subcommands reproduce the closed-form reference tables, run the verification
suite, emit CLT diagnostics (with rendered figures), evaluate bounds, and
cross-check the oracle against Monte Carlo on small graphs.  Every emitted
number is traceable to a module operation plus a seed; re-running a command
with the same flags reproduces its output byte for byte.

Exit codes: 0 success, 1 check failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import exact, montecarlo as mc, oracle, verify
from .dynamics import draw_schedule, simulate
from .graphs import (complete, cycle, hex_torus, line, make_tree, parse_edge_list,
                     star, torus, TreeSpec)
from .processes import ProcessKind, parse_kind

_FULL = "{:.17g}"


def _parse_graph(spec: str):
    """Named generator shorthand (e.g. line:100, torus:20x20, tree:3,2) or a
    path to an edge-list file (`n m` header then `u v` lines)."""
    kind, sep, rest = spec.partition(":")
    if sep and kind in ("line", "path", "cycle", "star", "complete", "torus",
                        "hex", "tree"):
        if kind in ("line", "path"):
            return line(int(rest))
        if kind == "cycle":
            return cycle(int(rest))
        if kind == "star":
            return star(int(rest))
        if kind == "complete":
            return complete(int(rest))
        if kind == "torus":
            dims = [int(x) for x in rest.split("x")]
            return torus(len(dims), dims)
        if kind == "hex":
            rows, cols = (int(x) for x in rest.split("x"))
            return hex_torus(rows, cols)
        parts = [int(x) for x in rest.split(",")]
        k, depth = parts[0], parts[1]
        root = parts[2] if len(parts) > 2 else k + 1
        return make_tree(TreeSpec(k, depth, (root,)))[0]
    with open(spec, "r", encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline="\n"), True


def _emit(path, fmt, header, rows, json_records):
    """rows: list of string tuples for csv; json_records: list of dicts."""
    fh, close = _open_out(path)
    try:
        if fmt == "json":
            json.dump(json_records, fh, indent=2)
            fh.write("\n")
        else:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(row) + "\n")
    finally:
        if close:
            fh.close()


# ---------------------------------------------------------------------------
# tables / correlations
# ---------------------------------------------------------------------------

def cmd_tables(args):
    rows, records = [], []
    for k in verify.TABLE_KS:
        for kind in verify.TABLE_KINDS:
            v = exact.occupation_probability(kind, k, 1.0)
            rows.append((str(k), kind.value, "1", _FULL.format(v), f"{v:.3f}"))
            records.append({"process": kind.value, "k": k, "m": None, "t": 1.0,
                            "value": v})
    _emit(args.out, args.format, ("k", "process", "t", "value", "display"),
          rows, records)
    return 0


def cmd_correlations(args):
    if args.m < 1:
        raise ValueError("--m must be >= 1")
    rows, records = [], []
    for kind in verify.TABLE_KINDS:
        for k in (3, 5):
            for m in range(1, args.m + 1):
                v = exact.correlation(kind, k, m, 1.0)
                rows.append((kind.value, str(k), str(m), "1",
                             _FULL.format(v), f"{v:.4f}"))
                records.append({"process": kind.value, "k": k, "m": m, "t": 1.0,
                                "value": v})
    _emit(args.out, args.format, ("process", "k", "m", "t", "value", "display"),
          rows, records)
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def cmd_verify(args):
    only = args.only.split(",") if args.only else None
    records, ok = verify.run_checks(only)
    fh, close = _open_out(args.out)
    try:
        for r in records:
            fh.write(json.dumps(r.as_dict()) + "\n")
    finally:
        if close:
            fh.close()
    by_check: dict = {}
    for r in records:
        group = r.check_id.split("/")[0]
        done, total = by_check.get(group, (0, 0))
        by_check[group] = (done + r.passed, total + 1)
    for group, (done, total) in by_check.items():
        status = "PASS" if done == total else "FAIL"
        print(f"{status} {group}: {done}/{total}", file=sys.stderr)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# clt
# ---------------------------------------------------------------------------

def cmd_clt(args):
    if args.replicates < 100:
        raise ValueError("--replicates must be >= 100")
    kind = parse_kind(args.process)
    g = _parse_graph(args.graph)
    n = g.n_vertices
    counts = mc.count_samples(g, range(n), kind, args.t, args.replicates,
                              args.seed)
    sd = counts.std(ddof=1)
    if sd == 0:
        raise ValueError("degenerate variance: the count is constant on this graph")
    z = (counts - counts.mean()) / sd
    ks = mc.ks_normal(counts)
    c = counts.astype(np.float64)
    idx = np.arange(1, len(c) + 1, dtype=np.float64)
    csum = np.cumsum(c)
    csq = np.cumsum(c * c)
    running = np.zeros(len(c))
    running[1:] = (csq[1:] - csum[1:] ** 2 / idx[1:]) / (idx[1:] - 1.0) / n
    try:
        limit = exact.asymptotic_variance(kind, args.t)
    except ValueError:
        limit = float("nan")
    rows = [(str(i + 1), str(int(counts[i])), _FULL.format(z[i]),
             _FULL.format(running[i]), _FULL.format(limit), _FULL.format(ks))
            for i in range(len(c))]
    records = {"process": kind.value, "t": args.t, "replicates": args.replicates,
               "seed": args.seed, "ks_statistic": ks, "limit_var_per_site": limit,
               "var_per_site": float(running[-1])}
    _emit(args.out, args.format,
          ("replicate", "count", "standardized", "running_var_per_site",
           "limit_var_per_site", "ks_statistic"),
          rows, [records])
    print(f"ks_statistic={ks:.6f} var_per_site={running[-1]:.6g} "
          f"limit={limit:.6g}", file=sys.stderr)
    if args.figures and args.out not in (None, "-"):
        from .figures import render_clt_figures
        stem = args.out.rsplit(".", 1)[0]
        title = f"{kind.value} on {args.graph}, t={args.t}"
        for path in render_clt_figures(z, running, limit, ks, stem, title):
            print(f"wrote {path}", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------

def cmd_bounds(args):
    rows, records = [], []

    def add(name, value):
        rows.append((name, _FULL.format(value)))
        records.append({"bound_id": name, "value": value})

    if args.k >= 2:
        vac = exact.blocking_vacancy_upper_bound(args.k, args.t)
        add(f"blocking-vacancy-upper/k{args.k}-t{args.t}", vac)
        add(f"blocking-occupation-lower/k{args.k}-t{args.t}", 1.0 - vac)
    d = args.max_degree
    if args.t < 1.0:
        for kind in verify.TABLE_KINDS:
            add(f"variance-per-site/{kind.value}-D{d}-t{args.t}",
                exact.variance_lower_bound(kind, d, args.t, 1))
    add(f"variance-per-entropy-site/blocking-D{d}-t1",
        exact.variance_lower_bound(ProcessKind.BLOCKING, d, 1.0, 1, card_w_plus=1))
    for kind in verify.TABLE_KINDS:
        add(f"line-asymptotic-variance/{kind.value}-t{args.t}",
            exact.asymptotic_variance(kind, args.t))
    _emit(args.out, args.format, ("bound_id", "value"), rows, records)
    return 0


# ---------------------------------------------------------------------------
# oracle-check
# ---------------------------------------------------------------------------

def cmd_oracle_check(args):
    kind = parse_kind(args.process)
    g = _parse_graph(args.graph)
    t = Fraction(args.t).limit_denominator(10 ** 6)
    targets = sorted({0, g.n_vertices // 2, g.n_vertices - 1})
    vals = oracle.joint_values(g, kind, [{v: 1} for v in targets])
    rows, records, ok = [], [], True
    for v, val in zip(targets, vals):
        ex = float(val.probability(t))
        est = mc.estimate_state_probability(g, kind, v, 1, float(t),
                                            args.samples, args.seed)
        if est.std_error > 0:
            zscore = mc.compare(est, ex)
            passed = abs(zscore) <= 4.0
        else:
            zscore = 0.0 if est.mean == ex else math.inf
            passed = est.mean == ex
        ok = ok and passed
        rows.append((str(v), _FULL.format(ex), _FULL.format(est.mean),
                     _FULL.format(est.std_error), _FULL.format(zscore),
                     "pass" if passed else "fail"))
        records.append({"vertex": v, "exact": ex, "mc_mean": est.mean,
                        "mc_std_error": est.std_error, "z": zscore,
                        "status": "pass" if passed else "fail",
                        "seed": args.seed})
    _emit(args.out, args.format,
          ("vertex", "exact", "mc_mean", "mc_std_error", "z", "status"),
          rows, records)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def cmd_simulate(args):
    kind = parse_kind(args.process)
    g = _parse_graph(args.graph)
    traj = simulate(g, kind, draw_schedule(g, kind, args.seed))
    state_t = traj.state_at(args.t)
    rows, records = [], []
    for v in range(g.n_vertices):
        ft = traj.flip_time[v]
        ft_str = "" if math.isnan(ft) else _FULL.format(ft)
        rows.append((str(v), ft_str, str(int(state_t[v])),
                     str(int(traj.final_state[v]))))
        records.append({"vertex": v, "flip_time": None if math.isnan(ft) else ft,
                        "state_at_t": int(state_t[v]),
                        "final_state": int(traj.final_state[v])})
    _emit(args.out, args.format,
          ("vertex", "flip_time", f"state_at_t{args.t}", "final_state"),
          rows, records)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common(p, *, graph=None, process=False, t=None, seed=False):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default="-", help="output path ('-' = stdout)")
    if graph is not None:
        p.add_argument("--graph", default=graph,
                       help="generator shorthand (line:N, cycle:N, star:N, "
                            "complete:N, torus:AxB, hex:AxB, tree:K,DEPTH) "
                            "or an edge-list file path")
    if process:
        p.add_argument("--process", required=True,
                       help="blocking | dimer | annihilation | map")
    if t is not None:
        p.add_argument("--t", type=float, default=t, help="time in [0,1]")
    if seed:
        p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="jamkit",
        description="Deposition and annihilation processes on graphs: exact "
                    "values, Monte Carlo verification, and reference tables.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tables", help="occupation probabilities at jamming")
    _add_common(p)
    p.set_defaults(fn=cmd_tables)

    p = sub.add_parser("correlations", help="pair correlations at jamming")
    _add_common(p)
    p.add_argument("--m", type=int, default=5, help="largest pair distance")
    p.set_defaults(fn=cmd_correlations)

    p = sub.add_parser("verify", help="run the acceptance verification suite")
    _add_common(p)
    p.add_argument("--only", default=None,
                   help="comma-separated check names "
                        f"({', '.join(verify.CHECKS)})")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("clt", help="normal-approximation diagnostic for the "
                                   "occupied count")
    _add_common(p, graph="line:2000", process=True, t=1.0, seed=True)
    p.add_argument("--replicates", type=int, default=2000)
    p.add_argument("--no-figures", dest="figures", action="store_false",
                   help="skip the PNG figures")
    p.set_defaults(fn=cmd_clt)

    p = sub.add_parser("bounds", help="closed-form bounds and asymptotics")
    _add_common(p, t=1.0)
    p.add_argument("--k", type=int, default=3, help="tree branching number")
    p.add_argument("--max-degree", type=int, default=4)
    p.set_defaults(fn=cmd_bounds)

    p = sub.add_parser("oracle-check", help="exact enumeration vs Monte Carlo "
                                            "on a small graph")
    _add_common(p, graph="line:3", process=True, t=1.0, seed=True)
    p.add_argument("--samples", type=int, default=100000)
    p.set_defaults(fn=cmd_oracle_check)

    p = sub.add_parser("simulate", help="one seeded trajectory")
    _add_common(p, graph="line:3", process=True, t=1.0, seed=True)
    p.set_defaults(fn=cmd_simulate)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "t", None) is not None and not 0.0 <= args.t <= 1.0:
        ap.error("--t must lie in [0, 1]")
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
