"""Command-line surface: pmf tables, summaries, critical points, scans, figures.

Output contract: CSV (comma, mandatory header) or streaming JSON (one object
per line, first line is the metadata record).  Numbers are serialized with 15
significant digits; identical inputs yield byte-identical output.

Exit status: 0 success, 1 usage error, 2 proved-statement violation,
3 resource limit exceeded.
"""

import argparse
import json
import math
import os
import sys
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import bounds as bnd
from .critical import (
    DoubleModeEvent,
    consecutive_double_mode,
    first_double_mode,
    jump_boundaries,
    left_right_peak_tie,
    peak_vs_point_k_tie,
    solve_r_k,
)
from .distribution import (
    OrderKParams,
    cdf_and_median,
    derived_params,
    mode_set,
    scaled_pmf_table,
    snap_floor,
)
from .errors import (
    EnumerationBudgetError,
    InvalidParameterError,
    PoissonKError,
    RefinementBudgetError,
)
from .shape import analyze_shape, classify_regime

SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PROVED_VIOLATION = 2
EXIT_RESOURCE = 3


def _fmt(value) -> str:
    """15 significant digits for floats, plain text otherwise."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".15g")
    if isinstance(value, (list, tuple)):
        return ";".join(_fmt(v) for v in value)
    return str(value)


def _json_default(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    raise TypeError(f"not serializable: {value!r}")


class OutputRecord:
    """schema_version + command + echoed params + a row table."""

    def __init__(self, command: str, params: Dict, columns: Sequence[str], rows: List[Dict]):
        self.command = command
        self.params = params
        self.columns = list(columns)
        self.rows = rows

    def write(self, stream, fmt: str) -> None:
        if fmt == "json":
            meta = {
                "schema_version": SCHEMA_VERSION,
                "command": self.command,
                "params": self.params,
            }
            stream.write(json.dumps(meta, sort_keys=True, default=_json_default) + "\n")
            for row in self.rows:
                out = {
                    c: (float(format(v, ".15g")) if isinstance(v, float) else v)
                    for c, v in row.items()
                }
                stream.write(json.dumps(out, sort_keys=False, default=_json_default) + "\n")
        else:
            stream.write(",".join(self.columns) + "\n")
            for row in self.rows:
                stream.write(",".join(_fmt(row[c]) for c in self.columns) + "\n")


def _emit(record: OutputRecord, out: Optional[str], fmt: str) -> None:
    if out:
        with open(out, "w") as fh:
            record.write(fh, fmt)
    else:
        record.write(sys.stdout, fmt)


# ---------------------------------------------------------------------------
# subcommands


def cmd_pmf(args) -> int:
    params = OrderKParams(args.k, args.lam)
    table = scaled_pmf_table(params, args.n_max, log_space=args.log_space or None)
    values = table.values
    rows = []
    klam = args.k * args.lam
    for n in range(args.n_max + 1):
        v = float(values[n])
        if args.scaled:
            value = v if not table.log_space else math.exp(v)
        else:
            value = math.exp(v - klam) if table.log_space else v * math.exp(-klam)
        rows.append({"k": args.k, "lambda": args.lam, "n": n, "value": value})
    record = OutputRecord(
        command="pmf",
        params={
            "k": args.k,
            "lambda": args.lam,
            "n_max": args.n_max,
            "scaled": args.scaled,
            "log_space": table.log_space,
        },
        columns=["k", "lambda", "n", "value"],
        rows=rows,
    )
    _emit(record, args.out, args.format)
    return EXIT_OK


def cmd_summary(args) -> int:
    params = OrderKParams(args.k, args.lam)
    d = derived_params(params)
    median = cdf_and_median(params)
    modes = mode_set(params)
    n_max = snap_floor(d.mean) + params.k
    shape = analyze_shape(scaled_pmf_table(params, max(n_max, params.k + 2)))
    regime = classify_regime(args.k).name if args.k >= 2 else "K1_POISSON"
    row = {
        "k": args.k,
        "lambda": args.lam,
        "kappa": d.kappa,
        "mean": d.mean,
        "variance": d.variance,
        "median": median,
        "modes": list(modes.modes),
        "peak_height_scaled": modes.peak_height,
        "regime": regime,
        "local_max_at_k": shape.local_max_at_k,
        "mountain_peaks": [p.location for p in shape.mountain.peaks],
    }
    record = OutputRecord(
        command="summary",
        params={"k": args.k, "lambda": args.lam},
        columns=list(row.keys()),
        rows=[row],
    )
    _emit(record, args.out, args.format)
    return EXIT_OK


def cmd_critical(args) -> int:
    r = solve_r_k(args.k)
    fdm = first_double_mode(args.k)
    events = jump_boundaries(args.k)
    rows = [
        {
            "k": args.k,
            "quantity": "r_k",
            "lambda": r.r_k,
            "m1": "",
            "m2": "",
            "modal": True,
        },
        {
            "k": args.k,
            "quantity": "first_double_mode",
            "lambda": fdm.lambda_hat,
            "m1": 0,
            "m2": fdm.m_hat,
            "modal": True,
        },
    ]
    for i, ev in enumerate(events, start=1):
        rows.append(
            {
                "k": args.k,
                "quantity": f"jump_{i}",
                "lambda": ev.lambda_star,
                "m1": ev.m1,
                "m2": ev.m2,
                "modal": ev.modal,
            }
        )
    record = OutputRecord(
        command="critical",
        params={"k": args.k},
        columns=["k", "quantity", "lambda", "m1", "m2", "modal"],
        rows=rows,
    )
    _emit(record, args.out, args.format)
    return EXIT_OK


def cmd_scan(args) -> int:
    k_values = range(args.k_min, args.k_max + 1)
    claims = args.claims.split(",") if args.claims else None
    lambda_grid = None
    if args.lambda_min is not None and args.lambda_max is not None:
        lambda_grid = np.linspace(args.lambda_min, args.lambda_max, args.grid)
    workers = int(os.environ.get("POISSONK_WORKERS", "1"))
    reports = bnd.conjecture_scan(
        k_values,
        lambda_grid=lambda_grid,
        n_lambda=args.grid,
        claims=claims,
        seed=args.seed,
        workers=workers,
    )
    rows = [
        {
            "claim": r.claim_id,
            "point": list(r.point),
            "holds": r.holds,
            "slack": r.slack,
        }
        for r in reports
        if not r.holds or args.verbose
    ]
    summary = bnd.summarize_reports(reports)
    for claim in sorted(summary):
        entry = summary[claim]
        rows.append(
            {
                "claim": claim,
                "point": ["summary", entry["checked"], entry["violations"]],
                "holds": entry["violations"] == 0,
                "slack": float(-entry["violations"]),
            }
        )
    record = OutputRecord(
        command="scan",
        params={
            "k_min": args.k_min,
            "k_max": args.k_max,
            "grid": args.grid,
            "claims": sorted(claims) if claims else sorted(bnd.CLAIMS),
            "seed": args.seed,
        },
        columns=["claim", "point", "holds", "slack"],
        rows=rows,
    )
    _emit(record, args.out, args.format)
    if bnd.proved_violations(reports):
        return EXIT_PROVED_VIOLATION
    return EXIT_OK


# ---------------------------------------------------------------------------
# figure data emission (CSV per series + manifest; no rendering)


def _pmf_series(k: int, lam: float, n_max: int) -> List[Dict]:
    h = scaled_pmf_table(OrderKParams(k, lam), n_max).values
    return [
        {"k": k, "lambda": lam, "n": n, "h": float(h[n])} for n in range(n_max + 1)
    ]


def _panel_lambdas(k: int) -> List[DoubleModeEvent | float]:
    """Five-panel lambda series for the regime figures, solver-resolved."""
    events = jump_boundaries(k)
    last = events[-1]
    tie = consecutive_double_mode(k, last.m2 + 2)
    if k <= 3:
        return [0.4, events[0], events[1], 1.02, tie]
    if k <= 14:
        return [0.2, events[0], events[1], events[2], tie]
    if k <= 41:
        return [0.1, peak_vs_point_k_tie(k), events[0], events[1], tie]
    return [0.04, peak_vs_point_k_tie(k), left_right_peak_tie(k), events[0], tie]


def _figure_series(figure_id: int) -> List[Dict]:
    """Each entry: name, params dict, columns, rows."""
    series = []
    if figure_id == 1:
        for lam in [0.8, 1.0, 2.0, 4.0, 4.2]:
            series.append(
                {
                    "name": f"k1_lambda_{_fmt(lam)}",
                    "params": {"k": 1, "lambda": lam},
                    "columns": ["k", "lambda", "n", "h"],
                    "rows": _pmf_series(1, lam, 12),
                }
            )
    elif figure_id == 2:
        fdm = first_double_mode(50)
        series.append(
            {
                "name": "k50_first_double_mode",
                "params": {"k": 50, "lambda": fdm.lambda_hat, "m_hat": fdm.m_hat},
                "columns": ["k", "lambda", "n", "h"],
                "rows": _pmf_series(50, fdm.lambda_hat, 140),
            }
        )
    elif figure_id in (3, 4, 5, 6):
        k = {3: 3, 4: 10, 5: 20, 6: 50}[figure_id]
        for i, item in enumerate(_panel_lambdas(k), start=1):
            if isinstance(item, DoubleModeEvent):
                lam = item.lambda_star
                extra = {"m1": item.m1, "m2": item.m2, "modal": item.modal}
            else:
                lam, extra = float(item), {}
            n_max = snap_floor(k * (k + 1) // 2 * lam) + 2 * k
            series.append(
                {
                    "name": f"k{k}_panel{i}",
                    "params": {"k": k, "lambda": lam, **extra},
                    "columns": ["k", "lambda", "n", "h"],
                    "rows": _pmf_series(k, lam, n_max),
                }
            )
    elif figure_id in (7, 8, 9):
        k = 2 if figure_id == 9 else 10
        kappa = k * (k + 1) // 2
        kl_max = 8.0 if figure_id == 9 else 40.0
        step = 0.01 if figure_id == 9 else 0.05
        rows = []
        kl = step
        while kl <= kl_max + 1e-12:
            lam = kl / kappa
            if figure_id == 7:
                b = bnd.median_bounds(k, lam)
                rows.append(
                    {
                        "k": k,
                        "lambda": lam,
                        "kappa_lambda": kl,
                        "median": cdf_and_median(OrderKParams(k, lam)),
                        "lower": b.lower,
                        "upper": b.upper,
                    }
                )
            else:
                b = bnd.mode_bounds(k, lam)
                rows.append(
                    {
                        "k": k,
                        "lambda": lam,
                        "kappa_lambda": kl,
                        "mode": mode_set(OrderKParams(k, lam)).principal,
                        "lower": max(0, b.lower_conjectured),
                        "upper": b.upper,
                    }
                )
            kl = round(kl + step, 10)
        name = {7: "median_k10", 8: "mode_k10", 9: "mode_k2"}[figure_id]
        value_col = "median" if figure_id == 7 else "mode"
        series.append(
            {
                "name": name,
                "params": {"k": k, "kappa_lambda_max": kl_max, "step": step},
                "columns": ["k", "lambda", "kappa_lambda", value_col, "lower", "upper"],
                "rows": rows,
            }
        )
    elif figure_id == 10:
        lam = 2.0
        for k in [3, 10, 20, 50]:
            kappa = k * (k + 1) // 2
            n_max = 6 * kappa
            h = scaled_pmf_table(OrderKParams(k, lam), n_max).values
            peak = float(np.max(h))
            rows = [
                {
                    "k": k,
                    "lambda": lam,
                    "n": n,
                    "n_over_kappa": n / kappa,
                    "h_unit_peak": float(h[n]) / peak,
                }
                for n in range(n_max + 1)
            ]
            series.append(
                {
                    "name": f"lam2_k{k}",
                    "params": {"k": k, "lambda": lam},
                    "columns": ["k", "lambda", "n", "n_over_kappa", "h_unit_peak"],
                    "rows": rows,
                }
            )
    else:
        raise InvalidParameterError(f"unknown figure id {figure_id} (valid: 1..10)")
    return series


def cmd_figure(args) -> int:
    series = _figure_series(args.id)
    out_dir = args.out or f"figure_{args.id}_data"
    os.makedirs(out_dir, exist_ok=True)
    manifest = {"schema_version": SCHEMA_VERSION, "figure": args.id, "series": []}
    for entry in series:
        fname = f"{entry['name']}.csv"
        record = OutputRecord(
            command=f"figure_{args.id}",
            params=entry["params"],
            columns=entry["columns"],
            rows=entry["rows"],
        )
        with open(os.path.join(out_dir, fname), "w") as fh:
            record.write(fh, "csv")
        manifest["series"].append(
            {"name": entry["name"], "file": fname, "params": entry["params"]}
        )
    with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=2, default=_json_default)
        fh.write("\n")
    sys.stdout.write(f"{out_dir}\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="poissonk", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_io(p):
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("pmf", help="emit (scaled) pmf table")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--scaled", action="store_true", help="emit h instead of f")
    p.add_argument("--log-space", action="store_true")
    add_io(p)
    p.set_defaults(func=cmd_pmf)

    p = sub.add_parser("summary", help="mean/variance/median/modes/shape at one point")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    add_io(p)
    p.set_defaults(func=cmd_summary)

    p = sub.add_parser("critical", help="r_k, first double mode, jump boundaries")
    p.add_argument("--k", type=int, required=True)
    add_io(p)
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("scan", help="run bound/conjecture checkers over a grid")
    p.add_argument("--k-min", type=int, default=2)
    p.add_argument("--k-max", type=int, default=20)
    p.add_argument("--lambda-min", type=float, default=None)
    p.add_argument("--lambda-max", type=float, default=None)
    p.add_argument("--grid", type=int, default=50, help="lambda points per k")
    p.add_argument("--claims", default=None, help="comma-separated claim ids")
    p.add_argument("--seed", type=int, default=None, help="seeded random sampling")
    p.add_argument("--verbose", action="store_true", help="emit every report row")
    add_io(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("figure", help="emit plotted-series data (CSV + manifest)")
    p.add_argument("--id", type=int, required=True, help="figure id, 1..10")
    p.add_argument("--out", default=None, help="output directory")
    p.set_defaults(func=cmd_figure)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (EnumerationBudgetError, RefinementBudgetError) as exc:
        sys.stderr.write(f"resource limit: {exc}\n")
        return EXIT_RESOURCE
    except InvalidParameterError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except PoissonKError as exc:
        sys.stderr.write(f"structural violation: {exc}\n")
        return EXIT_PROVED_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
