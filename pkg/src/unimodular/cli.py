"""Command-line front end: ``unimodular {compute,table,roots,mahler,trace,registry}``.

Exit codes: 0 success, 2 unparseable input, 3 numerical failure.  Every
tolerance flag falls back to an environment variable ``UNIMODAL_<FLAG>``
(e.g. ``UNIMODAL_GRID_N``) and then to the library default.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT, MethodConfig
from .errors import BadSpec, UnimodularError
from .exact_lc import SECTOR_EDGES, lc_exact, sector_split
from .families import make, parse_family, registry, registry_json, registry_row, row_sort_key
from .limit_methods import lc_bm, lc_cap, lc_mbm
from .measures import boyd_lawton_trace, mahler_bi, mahler_uni
from .polycore import IntBiPoly, from_json, invert, parse_poly, substitute_y_xn
from .rootfinder import find_roots

METHODS = ("bm", "mbm", "cap", "exact")
CSV_FIELDS = ("row_id", "kind", "params", "method", "lc", "lc_expected", "delta",
              "lc_inv", "lc_inv_expected", "delta_inv", "seconds")

# flag -> (config field, type)
_TOL_FLAGS = {
    "tau": ("tau", float),
    "grid_n": ("grid_n", int),
    "bisect_tol": ("bisect_tol", float),
    "quad_points": ("quad_points", int),
    "cap_r": ("cap_r", float),
    "cap_n": ("cap_n", int),
}


def parse_spec(text: str) -> IntBiPoly:
    """Polynomial from text, JSON, a family label, ``row:<id>`` or a bracket,
    optionally prefixed with ``inv:`` for the inverted polynomial."""
    s = text.strip()
    inverted = False
    if s.lower().startswith("inv:"):
        inverted, s = True, s[4:].strip()
    if s.startswith("{"):
        P = from_json(s)
    elif s.lower().startswith("row:"):
        P = registry_row(s[4:].strip()).poly()
    elif s.startswith("[") or (s[:1] in "PQRST" and "(" in s):
        P = make(parse_family(s))
    else:
        P = parse_poly(s)
    if P.is_zero():
        raise BadSpec("zero polynomial")
    return invert(P) if inverted else P


def build_config(args) -> MethodConfig:
    changes = {}
    for flag, (name, typ) in _TOL_FLAGS.items():
        val = getattr(args, flag, None)
        if val is None:
            env = os.environ.get("UNIMODAL_" + flag.upper())
            if env is None:
                continue
            try:
                val = typ(env)
            except ValueError as exc:
                raise BadSpec(f"UNIMODAL_{flag.upper()}={env!r}: {exc}") from exc
        changes[name] = val
    try:
        return DEFAULT.with_(**changes)
    except ValueError as exc:
        raise BadSpec(str(exc)) from exc


@dataclass
class RunReport:
    command: str
    spec: str
    method: str
    config: dict
    values: dict
    diagnostics: dict = field(default_factory=dict)
    seconds: float = 0.0

    def as_dict(self) -> dict:
        return {"command": self.command, "spec": self.spec, "method": self.method,
                "values": self.values, "diagnostics": self.diagnostics,
                "config": self.config, "seconds": round(self.seconds, 6)}

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.as_dict(), indent=2, default=_jsonable)
        lines = [f"{self.command}: {self.spec}  [method={self.method}]"]
        lines += [f"  {k} = {_fmt(v)}" for k, v in self.values.items()]
        if self.diagnostics:
            lines.append("  diagnostics:")
            lines += [f"    {k} = {_fmt(v)}" for k, v in self.diagnostics.items()]
        cfg = ", ".join(f"{k}={v}" for k, v in self.config.items())
        lines.append(f"  config: {cfg}")
        lines.append(f"  wall time: {self.seconds:.3f} s")
        return "\n".join(lines)


def _jsonable(v):
    if isinstance(v, np.generic):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, complex):
        return [v.real, v.imag]
    return str(v)


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple, np.ndarray)) and len(v) > 12:
        return f"[{len(v)} entries]"
    return str(v)


def compute_lc(P: IntBiPoly, method: str, cfg: MethodConfig, refine: int = 0):
    """(value, diagnostics) of LC(P) by ``method``."""
    if method == "bm":
        est = lc_bm(P, cfg)
    elif method == "mbm":
        est = lc_mbm(P, cfg, max_doublings=refine)
    elif method == "cap":
        est = lc_cap(P, cfg)
    elif method == "exact":
        res = lc_exact(P, cfg)
        diag = {"jump_angles": res.jump_angles.tolist(),
                "discriminant": str(res.discriminant),
                "unimodular_disc_roots": len(res.unimodular_disc_roots)}
        if res.no_unimodular_roots:
            diag["no_unimodular_disc_roots"] = True
        return res.lc, diag
    else:
        raise BadSpec(f"unknown method {method!r}")
    diag = dict(est.diagnostics)
    if est.nonreciprocal:
        diag["nonreciprocal"] = True
    return est.value, diag


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_compute(args) -> RunReport:
    cfg = build_config(args)
    P = parse_spec(args.poly)
    t0 = time.perf_counter()
    value, diag = compute_lc(P, args.method, cfg, args.refine)
    return RunReport("compute", args.poly, args.method, cfg.as_dict(),
                     {"polynomial": str(P), "lc": value}, diag, time.perf_counter() - t0)


def _table_row(job):
    row_id, method, cfg, refine = job
    row = registry_row(row_id)
    t0 = time.perf_counter()
    out = {"row_id": row.row_id, "kind": row.spec.kind,
           "params": row.spec.label[len(row.spec.kind):] if row.spec.kind != "bracket"
           else row.spec.label,
           "method": method}
    notes = []
    for key, inv, expected in (("lc", False, row.expected_LC), ("lc_inv", True, row.expected_LC_inv)):
        try:
            value, _ = compute_lc(row.poly(inv), method, cfg, refine)
            out[key] = value
            out["delta" if key == "lc" else "delta_inv"] = abs(value - expected)
        except UnimodularError as exc:
            out[key] = None
            out["delta" if key == "lc" else "delta_inv"] = None
            notes.append(f"row {row.row_id} {key}: {type(exc).__name__}: {exc}")
        out[key + "_expected"] = expected
    out["seconds"] = round(time.perf_counter() - t0, 4)
    return out, notes


def cmd_table(args) -> RunReport:
    cfg = build_config(args)
    wanted = None
    if args.rows:
        wanted = [r.strip() for r in args.rows.split(",") if r.strip()]
        for r in wanted:
            registry_row(r)
    rows = []
    for row in registry():
        if wanted is not None and row.row_id not in wanted:
            continue
        if row.spec_unavailable:
            print(f"skipping row {row.row_id}: polynomial not available", file=sys.stderr)
            continue
        rows.append(row.row_id)
    rows.sort(key=row_sort_key)
    jobs = [(r, args.method, cfg, args.refine) for r in rows]
    env = os.environ.get("UNIMODAL_THREADS", "1") or "1"
    try:
        threads = int(env)
    except ValueError as exc:
        raise BadSpec(f"UNIMODAL_THREADS={env!r}: {exc}") from exc
    t0 = time.perf_counter()
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_table_row, jobs))
    else:
        results = [_table_row(j) for j in jobs]
    records = [r for r, _ in results]
    for _, notes in results:
        for n in notes:
            print(n, file=sys.stderr)

    text = _table_text(records, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    deltas = [d for r in records for d in (r["delta"], r["delta_inv"]) if d is not None]
    return RunReport("table", args.rows or "all", args.method, cfg.as_dict(),
                     {"rows": len(records), "max_delta": max(deltas) if deltas else None},
                     {"out": args.out} if args.out else {}, time.perf_counter() - t0)


def _table_text(records, fmt) -> str:
    if fmt == "json":
        return json.dumps(records, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow({k: ("" if r[k] is None else r[k]) for k in CSV_FIELDS})
    return buf.getvalue()


def cmd_roots(args) -> RunReport:
    cfg = build_config(args)
    P = parse_spec(args.poly)
    if args.n < 1:
        raise BadSpec("--n must be >= 1")
    t0 = time.perf_counter()
    p = substitute_y_xn(P, args.n)
    if p.deg < 1:
        raise BadSpec(f"P(x, x^{args.n}) is constant")
    rs = find_roots(p.to_cpoly(), cfg)
    parts = sector_split(rs.roots, cfg.tau)
    total = parts["low"] + parts["middle"] + parts["high"]
    values = {"d": total.d, "I": total.I, "U": total.U, "O": total.O, "C": total.C}
    diag = {"iterations": rs.iterations, "max_residual": float(rs.residuals.max())}
    if args.sectors:
        for k, c in parts.items():
            diag[f"sector_{k}"] = f"I={c.I} U={c.U} O={c.O}"
    if args.plot:
        plot_roots(rs.roots, args.plot, cfg.tau, args.sectors, f"{args.poly}, n = {args.n}")
        diag["plot"] = args.plot
    return RunReport("roots", f"{args.poly} at y = x^{args.n}", "aberth", cfg.as_dict(),
                     values, diag, time.perf_counter() - t0)


def plot_roots(roots, path: str, tau: float, sectors: bool, title: str):
    """Static SVG (or any matplotlib vector format) scatter of the roots."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    m = np.abs(roots)
    fig, ax = plt.subplots(figsize=(6, 6))
    th = np.linspace(0, 2 * np.pi, 721)
    ax.plot(np.cos(th), np.sin(th), lw=0.8, color="0.5")
    for mask, colour, label in ((m < 1 - tau, "tab:blue", "inside"),
                                (np.abs(m - 1) <= tau, "tab:green", "on circle"),
                                (m > 1 + tau, "tab:red", "outside")):
        ax.scatter(roots[mask].real, roots[mask].imag, s=6, color=colour, label=label)
    if sectors:
        lim = max(1.2, float(m.max()) * 1.05)
        for a in SECTOR_EDGES:
            for s in (1, -1):
                ax.plot([0, lim * math.cos(a)], [0, s * lim * math.sin(a)], ls="--", lw=0.7, color="k")
    ax.set_aspect("equal")
    ax.set_title(title)
    ax.legend(loc="upper right", fontsize="small")
    fig.savefig(path)
    plt.close(fig)


def cmd_mahler(args) -> RunReport:
    cfg = build_config(args)
    if args.points is not None:
        key = "mahler_points" if args.mahler_method == "jensen" else "mahler_grid"
        try:
            cfg = cfg.with_(**{key: args.points})
        except ValueError as exc:
            raise BadSpec(str(exc)) from exc
    P = parse_spec(args.poly)
    t0 = time.perf_counter()
    if P.deg_y == 0:
        p = P.y_coeff(0)
        value = abs(p.coeffs[0]) if p.deg == 0 else mahler_uni(p, cfg)
        how = "roots"
    else:
        value = mahler_bi(P, cfg, args.mahler_method)
        how = args.mahler_method
    return RunReport("mahler", args.poly, how, cfg.as_dict(), {"M": float(value)}, {},
                     time.perf_counter() - t0)


def cmd_trace(args) -> RunReport:
    cfg = build_config(args)
    P = parse_spec(args.poly)
    try:
        ns = [int(v) for v in args.n.split(",") if v.strip()]
    except ValueError as exc:
        raise BadSpec(f"--n must be a comma-separated list of integers: {exc}") from exc
    t0 = time.perf_counter()
    trace = boyd_lawton_trace(P, ns, cfg)
    values = {f"M(n={n})": m for n, m in trace}
    diag = {}
    if P.deg_y > 0:
        M = mahler_bi(P, cfg)
        values["M(P)"] = M
        diag["gaps"] = [abs(m - M) for _, m in trace]
    return RunReport("trace", args.poly, "roots", cfg.as_dict(), values, diag,
                     time.perf_counter() - t0)


def cmd_registry(args) -> RunReport:
    sys.stdout.write(registry_json() + "\n")
    return None


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

def _add_tolerances(p):
    g = p.add_argument_group("tolerances (env default UNIMODAL_<FLAG>)")
    g.add_argument("--tau", type=float, help="unimodular band half-width")
    g.add_argument("--grid-n", type=int, help="MBM jump scan grid size")
    g.add_argument("--bisect-tol", type=float, help="MBM bisection tolerance")
    g.add_argument("--quad-points", type=int, help="BM sample count")
    g.add_argument("--cap-r", type=float, help="CAP contour radius")
    g.add_argument("--cap-n", type=int, help="CAP exponent n")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="unimodular", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="LC(P) by one method")
    p.add_argument("--poly", required=True)
    p.add_argument("--method", choices=METHODS, default="mbm")
    p.add_argument("--refine", type=int, default=0,
                   help="MBM: grid doublings allowed when the scan grid is too coarse")
    p.add_argument("--format", choices=("text", "json"), default="text")
    _add_tolerances(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("table", help="reproduce the reference table")
    p.add_argument("--rows", help="comma-separated row ids (default: all)")
    p.add_argument("--method", choices=METHODS, default="mbm")
    p.add_argument("--refine", type=int, default=3)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_tolerances(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("roots", help="unit-circle census of P(x, x^n)")
    p.add_argument("--poly", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--plot", help="write a scatter plot (SVG) to this path")
    p.add_argument("--sectors", action="store_true",
                   help="split by the sector edges 2arccos(+-3/4)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    _add_tolerances(p)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("mahler", help="Mahler measure")
    p.add_argument("--poly", required=True)
    p.add_argument("--mahler-method", choices=("jensen", "grid"), default="jensen")
    p.add_argument("--points", type=int,
                   help="outer sample count (jensen) or grid side (grid)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    _add_tolerances(p)
    p.set_defaults(func=cmd_mahler)

    p = sub.add_parser("trace", help="M(P(x, x^n)) for a list of n")
    p.add_argument("--poly", required=True)
    p.add_argument("--n", required=True, help="comma-separated list, e.g. 20,40,80")
    p.add_argument("--format", choices=("text", "json"), default="text")
    _add_tolerances(p)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("registry", help="dump the reference table as JSON")
    p.set_defaults(func=cmd_registry, format="json")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = args.func(args)
    except BadSpec as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except UnimodularError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    if report is not None:
        out = sys.stderr if args.command == "table" and not args.out else sys.stdout
        print(report.render("json" if args.format == "json" else "text"), file=out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
