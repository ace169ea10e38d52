"""Command-line entry point: ``c5min <subcommand> [options]``.

Every subcommand writes a JSON report (top-level ``schema: 1``) or CSV to
``--out`` or stdout.  Exit status is 0 on success, 1 when a verification
fails and 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

from . import extremal, flagalg, generalp, identity, symcert
from .smallgraph import count_c5, enumerate_classes, read_graph6_file, write_graph6

SCHEMA = 1
DEFAULT_SEED = 0


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "item"):  # numpy scalar
        return v.item()
    return v


def _fmt_cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render(report: dict, rows: tuple[list, list] | None, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_jsonable({"schema": SCHEMA, **report}), indent=2, sort_keys=True) + "\n"
    if rows is None:
        rows = (["key", "value"], [[k, json.dumps(_jsonable(v))] for k, v in sorted(report.items())])
    header, body = rows
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in body:
        w.writerow([_fmt_cell(c) for c in r])
    return buf.getvalue()


def emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


@contextmanager
def worker_map(jobs: int):
    if jobs <= 1:
        yield map
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield lambda fn, items: pool.map(fn, items, chunksize=4)


def _k_range(text: str) -> tuple[int, int]:
    try:
        a, b = text.split("..")
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from None


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


# -- subcommands --------------------------------------------------------------


def _verify_k(k: int) -> dict:
    psd = symcert.psd_check_A("per-k", k=k)
    values = identity.cf_at(k)
    target = 120 * generalp.lam(k)
    low = min(values)
    return {"k": k, "psd_ok": psd["ok"], "min_cf": low, "target_120lambda": target,
            "tight": sum(v == target for v in values),
            "min_cf_equals_120lambda": low == target,
            "ok": psd["ok"] and low == target}


def cmd_verify(args):
    if args.k is not None or args.k_range is not None:
        lo, hi = (args.k, args.k) if args.k is not None else args.k_range
        results = [_verify_k(k) for k in range(lo, hi + 1)]
        ok = all(r["ok"] for r in results)
        report = results[0] if len(results) == 1 else {"results": results, "ok": ok}
        header = ["k", "psd_ok", "min_cf", "target_120lambda", "tight", "ok"]
        rows = (header, [[r[h] for h in header] for r in results])
        return {"command": "verify", **report}, rows, ok
    try:
        rep = symcert.verify_certificate(kmax=args.kmax, psd=True)
    except symcert.CertificateError as exc:
        return {"command": "verify", "ok": False, "error": str(exc)}, None, False
    classes = enumerate_classes(5)
    excess = dict(rep.nontight)
    report = {
        "command": "verify",
        "ok": rep.ok,
        "tight": len(rep.tight),
        "nontight": len(rep.nontight),
        "m_family_sizes": {str(m): c for m, c in sorted(Counter(rep.m_values).items())},
        "min_m": min(rep.m_values),
        "min_cf_equals_120lambda": rep.min_cf_equals_120lambda,
        "kernel_matches": rep.kernel_ok,
        "psd": rep.psd,
    }
    rows = (["class", "graph6", "m", "excess_over_120lambda"],
            [[c, write_graph6(g), rep.m_values[c], excess.get(c, Fraction(0))] for c, g in enumerate(classes)])
    return report, rows, rep.ok


def cmd_table(args):
    table = flagalg.product_table().scaled()
    classes = [write_graph6(g) for g in enumerate_classes(5)]
    copt = flagalg.cf_opt_vector()
    pk2 = [int(10 * v) for v in flagalg.pk2_vector()]
    labels = ["c_opt", "10*p(K2,F)"] + [f"X{i}xX{j}" for i, j in flagalg.ROW_PAIRS]
    data = [copt, pk2] + table
    if args.order == "reference":
        al = flagalg.reference_alignment()
        classes = al.to_reference(classes)
        data = [al.to_reference(r) for r in data]
    report = {"command": "table", "order": args.order, "scale": flagalg.SCALE, "columns": classes,
              "rows": {lab: r for lab, r in zip(labels, data)}}
    rows = (["row"] + classes, [[lab] + r for lab, r in zip(labels, data)])
    return report, rows, True


def _resolve_data_path(text: str) -> Path:
    p = Path(text)
    for cand in (p, flagalg.data_dir() / p.name, flagalg.data_dir().parent / p):
        if cand.exists():
            return cand
    raise FileNotFoundError(f"reference table not found: {text}")


def cmd_align(args):
    path = _resolve_data_path(args.ref_table) if args.ref_table else flagalg.data_dir() / "appendix_a.csv"
    copt, pk2, table = flagalg.load_reference_table(path)
    try:
        al = flagalg.align_to_reference(table, copt, pk2)
    except (flagalg.CertificateDataMismatch, flagalg.AlignmentAmbiguity) as exc:
        return {"command": "align", "ok": False, "error": str(exc)}, None, False
    classes = enumerate_classes(5)
    report = {"command": "align", "ok": True, "reference_column": [p + 1 for p in al.perm],
              "graph6": [write_graph6(g) for g in classes]}
    rows = (["class", "graph6", "reference_column"],
            [[c, write_graph6(g), al.perm[c] + 1] for c, g in enumerate(classes)])
    return report, rows, True


def cmd_turan(args):
    rep = extremal.turan_density_report(args.k, args.n)
    if args.graph:
        Path(args.graph).write_text(write_graph6(extremal.turan_graph(args.k, args.n)) + "\n")
    report = {"command": "turan", **rep, "density_float": float(rep["density"]),
              "relative_gap_float": float(rep["relative_gap"])}
    header = ["k", "n", "count", "density", "lambda", "gap", "relative_gap"]
    return report, (header, [[rep[h] for h in header]]), True


def cmd_fmin(args):
    sol = generalp.fmin(args.k, args.p, tol=args.tol, grid=args.grid)
    report = {"command": "fmin", "k": args.k, "p": args.p, "status": sol.status}
    if sol.point is not None:
        pt = sol.point
        report.update(x=float(pt.x), y=float(pt.y), rho=float(pt.rho), value=float(sol.value),
                      g=float(generalp.g_value(args.k, pt.x, pt.y, pt.rho)))
        if isinstance(sol.value, Fraction):
            report["value_exact"] = sol.value
    header = ["k", "p", "x", "y", "rho", "value", "status"]
    return report, (header, [[report.get(h, "") for h in header]]), True


def cmd_fmin_curve(args):
    with worker_map(args.jobs) as pmap:
        rows = generalp.fmin_curve(args.start, args.stop, args.step, include_knots=not args.no_knots,
                                   map_fn=pmap)
    body = [[float(p), float(v), float(L), float(gap)] for p, v, L, gap in rows]
    report = {"command": "fmin-curve", "rows": len(body), "monotone_within_regimes": generalp.curve_monotone(rows),
              "curve": [{"p": p, "p_exact": r[0], "fmin": v, "L": L, "gap": gap}
                        for (p, v, L, gap), r in zip(body, rows)]}
    return report, (["p", "fmin", "L", "gap"], body), True


def cmd_construct(args):
    G = generalp.build_construction(args.k, args.n, args.x, args.rho, seed=args.seed, model=args.model)
    g6 = write_graph6(G)
    if args.format == "graph6":
        return None, g6 + "\n", True
    y = 1 - (args.k - 1) * args.x
    report = {"command": "construct", "k": args.k, "n": args.n, "x": args.x, "rho": args.rho,
              "seed": args.seed, "model": args.model, "edges": G.edge_count,
              "g": float(generalp.g_value(args.k, args.x, y, args.rho)),
              "f": float(generalp.f_value(args.k, args.x, y, args.rho)), "graph6": g6}
    header = ["k", "n", "x", "rho", "seed", "model", "edges", "g", "f"]
    return report, (header, [[report[h] for h in header]]), True


def cmd_count_c5(args):
    graphs = read_graph6_file(args.input)
    counts = [count_c5(G) for G in graphs]
    items = [{"n": G.n, "count": c} for G, c in zip(graphs, counts)]
    report = {"command": "count-c5", "graphs": items}
    if len(items) == 1:
        report["count"] = counts[0]
    return report, (["index", "n", "count"], [[i, it["n"], it["count"]] for i, it in enumerate(items)]), True


def cmd_identity(args):
    with worker_map(args.jobs) as pmap:
        rep = identity.run_batch(args.n, trials=args.trials, seed=args.seed, k=args.k,
                                 exhaustive=args.exhaustive, map_fn=pmap)
    header = ["n", "k", "checked", "failures", "max_residual_ratio"]
    return {"command": "identity", **rep}, (header, [[rep[h] for h in header]]), rep["failures"] == 0


def cmd_nontight(args):
    items = symcert.nontight_export()
    report = {"command": "nontight", "count": len(items),
              "graphs": [{"graph6": g, "excess_over_120lambda": e} for g, e in items]}
    return report, (["graph6", "excess_over_120lambda"], [[g, e] for g, e in items]), True


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv"], default=None)
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")

    parser = argparse.ArgumentParser(prog="c5min", description="C5 density certificate and constructions")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check the lower-bound certificate")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--k", type=int)
    g.add_argument("--k-range", type=_k_range, metavar="A..B")
    g.add_argument("--symbolic", action="store_true", help="symbolic check (the default)")
    p.add_argument("--kmax", type=int, default=1000, help="upper end of the exact positivity sweep")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table", parents=[common], help="30 x the flag product table")
    p.add_argument("--order", choices=["internal", "reference"], default="internal")
    p.set_defaults(func=cmd_table, default_format="csv")

    p = sub.add_parser("align", parents=[common], help="match computed columns to a reference table")
    p.add_argument("--paper-table", dest="ref_table", help="reference table CSV (23 rows of 34 integers)")
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("turan", parents=[common], help="C5 density of a Turan graph")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--graph", help="also write the graph in graph6 format")
    p.set_defaults(func=cmd_turan)

    p = sub.add_parser("fmin", parents=[common], help="minimise the construction density at one p")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p", type=_fraction, required=True)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--grid", type=int, default=10_000)
    p.set_defaults(func=cmd_fmin)

    p = sub.add_parser("fmin-curve", parents=[common], help="fmin and the secant over a p grid")
    p.add_argument("--from", dest="start", type=_fraction, default=Fraction(1, 2))
    p.add_argument("--to", dest="stop", type=_fraction, default=Fraction(7, 8))
    p.add_argument("--step", type=_fraction, default=Fraction(1, 200))
    p.add_argument("--no-knots", action="store_true", help="omit the extra rows at p = 1 - 1/k")
    p.set_defaults(func=cmd_fmin_curve, default_format="csv")

    p = sub.add_parser("construct", parents=[common], help="random finite construction")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", type=_fraction, required=True)
    p.add_argument("--rho", type=_fraction, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--model", choices=["bernoulli", "regular"], default="bernoulli")
    p.set_defaults(func=cmd_construct, default_format="graph6")

    p = sub.add_parser("count-c5", parents=[common], help="count 5-cycles in graph6 input")
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=cmd_count_c5)

    p = sub.add_parser("identity", parents=[common], help="check the quadratic-form identity")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--exhaustive", action="store_true")
    p.set_defaults(func=cmd_identity)

    p = sub.add_parser("nontight", parents=[common], help="graphs whose coefficient exceeds the bound")
    p.set_defaults(func=cmd_nontight)

    # construct additionally accepts --format graph6
    for action in sub.choices["construct"]._actions:
        if action.dest == "format":
            action.choices = ["json", "csv", "graph6"]
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.format = args.format or getattr(args, "default_format", "json")
    try:
        report, rows, ok = args.func(args)
    except (ValueError, OSError) as exc:
        print(f"c5min {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if report is None:
        emit(rows, args.out)
    else:
        emit(render(report, rows, args.format), args.out)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
