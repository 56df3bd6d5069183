"""``iota`` command-line front end.

Exit codes: 0 success, 1 input or validation error, 2 numerical failure,
64 usage error. Tolerances come from ``--tol``, else ``IOTA_TOLERANCE``,
else the built-in default of the analysis.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
import warnings
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .errors import NumericalError, ReducibleSystemWarning, ValidationError
from .iot import (
    DEFAULT_BALANCE_TOL,
    AggregationMap,
    MonetaryTable,
    aggregate,
    closed_table,
    distribution_matrix,
    parse_iot,
    surplus_ratio,
    technical_coefficients,
    write_iot,
)
from .leontief import leontief_inverse, price_model, productiveness_from_A, quantity_model
from .linalg import frobenius_eigen
from .report import AnalysisReport, emit_frontier_csv, render_report, write_atomic
from .similarity import build_gdp_table, gdp_table_from_monetary, verify_gdp_table
from .sraffa import (
    NumeraireSpec,
    PhysicalSystem,
    classify_basics,
    joint_surplus_solve,
    max_profit_rate,
    parse_physical,
    pasinetti_matrix,
    standard_system,
    subsistence_prices,
    surplus_solve,
    wage_profit_frontier,
)
from .sraffa.prices import SELF_REPLACING_TOL

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- input helpers --------------------------------------------------------------

def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None


def _provenance(path: str) -> dict:
    digest = hashlib.sha256(Path(path).read_bytes()).hexdigest()
    return {"path": path, "sha256": digest}


def _tolerance(args, default: float) -> float:
    if args.tol is not None:
        return args.tol
    env = os.environ.get("IOTA_TOLERANCE")
    if env:
        try:
            value = float(env)
        except ValueError:
            raise UsageError(f"IOTA_TOLERANCE is not a number: {env!r}") from None
        if not value > 0:
            raise UsageError("IOTA_TOLERANCE must be positive")
        return value
    return default


def _load_table(args) -> MonetaryTable:
    return parse_iot(_read(args.table), tol=_tolerance(args, DEFAULT_BALANCE_TOL))


def _load_system(args) -> PhysicalSystem:
    return parse_physical(_read(args.system))


def _read_pairs(path: str) -> list[tuple[str, str]]:
    pairs = []
    for lineno, raw in enumerate(_read(path).splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cells = [c.strip() for c in line.split(",")]
        if len(cells) != 2:
            raise ValidationError(f"{path}, line {lineno}: expected 'name,value'")
        pairs.append((cells[0], cells[1]))
    return pairs


def _read_named_vector(path: str, names: Sequence[str]) -> np.ndarray:
    """Vector file: one ``name,value`` line per sector or commodity."""
    values = {}
    for name, text in _read_pairs(path):
        if name not in names:
            raise ValidationError(f"{path}: unknown name {name!r}")
        if name in values:
            raise ValidationError(f"{path}: {name!r} given twice")
        try:
            values[name] = float(text)
        except ValueError:
            raise ValidationError(f"{path}: not a number for {name!r}: {text!r}") from None
    missing = [n for n in names if n not in values]
    if missing:
        raise ValidationError(f"{path}: missing values for {', '.join(missing)}")
    return np.array([values[n] for n in names])


def _named(names: Sequence[str], values) -> dict:
    return {n: float(v) for n, v in zip(names, values)}


def _numeraire(args, ps: PhysicalSystem) -> NumeraireSpec:
    if args.numeraire is None:
        return NumeraireSpec()
    return NumeraireSpec.parse(args.numeraire, ps.commodities)


# -- monetary commands ------------------------------------------------------------

def cmd_validate(args) -> AnalysisReport:
    t = _load_table(args)
    return AnalysisReport(
        "validate",
        {"table": _provenance(args.table)},
        {
            "n": t.n,
            "sectors": list(t.sectors),
            "total_output": t.x.sum(),
            "total_intermediate": t.Z.sum(),
            "total_final_demand": t.f.sum(),
            "total_value_added": t.v.sum(),
        },
        list(t.notes),
    )


def cmd_coefficients(args) -> AnalysisReport:
    t = _load_table(args)
    A = technical_coefficients(t)
    return AnalysisReport(
        "coefficients",
        {"table": _provenance(args.table)},
        {"sectors": list(t.sectors), "A": A, "column_sums": A.sum(axis=0), "lambda": frobenius_eigen(A).lam},
        list(t.notes),
    )


def cmd_distribution(args) -> AnalysisReport:
    t = _load_table(args)
    D = distribution_matrix(t)
    return AnalysisReport(
        "distribution",
        {"table": _provenance(args.table)},
        {"sectors": list(t.sectors), "D": D, "row_sums": D.sum(axis=1)},
        list(t.notes),
    )


def cmd_leontief_inverse(args) -> AnalysisReport:
    t = _load_table(args)
    inv = leontief_inverse(technical_coefficients(t))
    return AnalysisReport(
        "leontief-inverse",
        {"table": _provenance(args.table)},
        {
            "sectors": list(t.sectors),
            "lambda_A": inv.lambda_A,
            "L": inv.L,
            "output_multipliers": _named(t.sectors, inv.L.sum(axis=0)),
        },
        list(t.notes),
    )


def cmd_leontief_quantity(args) -> AnalysisReport:
    t = _load_table(args)
    inputs = {"table": _provenance(args.table)}
    if args.demand:
        f = _read_named_vector(args.demand, t.sectors)
        inputs["demand"] = _provenance(args.demand)
    else:
        f = t.f
    x = quantity_model(technical_coefficients(t), f)
    return AnalysisReport(
        "leontief-quantity", inputs, {"final_demand": _named(t.sectors, f), "output": _named(t.sectors, x)}, list(t.notes)
    )


def cmd_leontief_price(args) -> AnalysisReport:
    t = _load_table(args)
    inputs = {"table": _provenance(args.table)}
    if args.value_added:
        v_c = _read_named_vector(args.value_added, t.sectors)
        inputs["value_added"] = _provenance(args.value_added)
    else:
        v_c = t.v / t.x
    p = price_model(technical_coefficients(t), v_c)
    return AnalysisReport(
        "leontief-price",
        inputs,
        {"value_added_per_unit": _named(t.sectors, v_c), "prices": _named(t.sectors, p)},
        list(t.notes),
    )


def cmd_productiveness(args) -> AnalysisReport:
    t = _load_table(args)
    if args.closure == "closed":
        t = closed_table(t)
    rep = productiveness_from_A(technical_coefficients(t), construction=args.closure)
    return AnalysisReport(
        "productiveness",
        {"table": _provenance(args.table), "closure": args.closure},
        {"construction": rep.construction, "n": rep.n, "lambda": rep.lam, "R": rep.R},
        list(t.notes),
    )


def cmd_surplus_ratio(args) -> AnalysisReport:
    t = _load_table(args)
    rep = surplus_ratio(t)
    return AnalysisReport(
        "surplus-ratio", {"table": _provenance(args.table)}, {"Y": rep.Y, "K": rep.K, "ratio": rep.ratio}, list(t.notes)
    )


def cmd_aggregate(args) -> AnalysisReport:
    t = _load_table(args)
    m = AggregationMap.from_pairs(t.sectors, _read_pairs(args.map))
    g = aggregate(t, m)
    A = technical_coefficients(g)
    results = {
        "groups": list(g.sectors),
        "Z": g.Z,
        "f": g.f,
        "v": g.v,
        "x": g.x,
        "lambda": frobenius_eigen(A).lam,
        "totals": {"Z": g.Z.sum(), "f": g.f.sum(), "v": g.v.sum(), "x": g.x.sum()},
    }
    if args.out:
        write_atomic(args.out, write_iot(g))
    return AnalysisReport("aggregate", {"table": _provenance(args.table), "map": _provenance(args.map)}, results, list(t.notes))


# -- physical commands --------------------------------------------------------------

def cmd_sraffa_subsistence(args) -> AnalysisReport:
    ps = _load_system(args)
    num = _numeraire(args, ps)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ReducibleSystemWarning)
        sol = subsistence_prices(ps, num, tol=_tolerance(args, SELF_REPLACING_TOL))
    return AnalysisReport(
        "sraffa-subsistence",
        {"system": _provenance(args.system), "numeraire": num.describe(ps.commodities)},
        {"prices": _named(ps.commodities, sol.p), "residual": sol.residual},
        list(sol.warnings),
    )


def _solution_results(ps: PhysicalSystem, sol) -> dict:
    return {"r": sol.r, "w": sol.w, "prices": _named(ps.commodities, sol.p), "residual": sol.residual}


def _rate_or_wage(args) -> dict:
    if (args.r is None) == (args.w is None):
        raise UsageError("give exactly one of --r or --w")
    return {"r": args.r} if args.r is not None else {"w": args.w}


def cmd_sraffa_solve(args) -> AnalysisReport:
    ps = _load_system(args)
    given = _rate_or_wage(args)
    num = _numeraire(args, ps)
    sol = surplus_solve(ps, numeraire=num, **given)
    results = {"R": max_profit_rate(ps).R, **_solution_results(ps, sol)}
    return AnalysisReport(
        "sraffa-solve", {"system": _provenance(args.system), "numeraire": num.describe(ps.commodities), "given": given}, results
    )


def cmd_sraffa_frontier(args) -> AnalysisReport:
    ps = _load_system(args)
    num = _numeraire(args, ps)
    if args.samples < 2:
        raise UsageError("--samples must be at least 2")
    points = wage_profit_frontier(ps, args.samples, num)
    R = max_profit_rate(ps).R
    results = {
        "R": R,
        "samples": [{"r": pt.r, "w": pt.w, "prices": _named(ps.commodities, pt.p)} for pt in points],
    }
    if num.kind == "standard":
        results["max_linearity_deviation"] = max(abs(pt.r - R * (1 - pt.w)) for pt in points)
    if args.csv:
        emit_frontier_csv(points, args.csv)
    return AnalysisReport(
        "sraffa-frontier",
        {"system": _provenance(args.system), "numeraire": num.describe(ps.commodities), "samples": args.samples},
        results,
    )


def cmd_sraffa_standard(args) -> AnalysisReport:
    ps = _load_system(args)
    std = standard_system(ps)
    return AnalysisReport(
        "sraffa-standard",
        {"system": _provenance(args.system)},
        {
            "R": std.R,
            "normalization": std.normalization,
            "multipliers": _named(ps.commodities, std.multipliers),
            "standard_net_product": _named(ps.commodities, std.standard_net_product),
            "means_of_production": _named(ps.commodities, std.means_of_production),
        },
    )


def cmd_sraffa_basics(args) -> AnalysisReport:
    ps = _load_system(args)
    part = classify_basics(ps)
    return AnalysisReport(
        "sraffa-basics",
        {"system": _provenance(args.system)},
        {
            "basics": [ps.commodities[i] for i in sorted(part.basics)],
            "non_basics": [ps.commodities[i] for i in sorted(part.non_basics)],
        },
    )


def cmd_joint_solve(args) -> AnalysisReport:
    ps = _load_system(args)
    given = _rate_or_wage(args)
    num = _numeraire(args, ps)
    sol = joint_surplus_solve(ps, numeraire=num, **given)
    return AnalysisReport(
        "joint-solve",
        {"system": _provenance(args.system), "numeraire": num.describe(ps.commodities), "given": given},
        _solution_results(ps, sol),
    )


def cmd_joint_pasinetti(args) -> AnalysisReport:
    ps = _load_system(args)
    if not ps.is_joint:
        ps = ps.as_joint()
    H = pasinetti_matrix(ps)
    results = {"H": H}
    notes = []
    if np.all(H >= 0):
        lam = frobenius_eigen(H).lam
        results["dominant_eigenvalue"] = lam
        results["R"] = 1.0 / lam if lam > 0 else float("inf")
    else:
        notes.append("H has negative entries; no Frobenius eigenvalue reported")
    return AnalysisReport("joint-pasinetti", {"system": _provenance(args.system)}, results, notes)


def cmd_gdp_table(args) -> AnalysisReport:
    notes = []
    inputs = {"source": _provenance(args.source)}
    tol = _tolerance(args, 1e-6)
    if args.monetary:
        t = parse_iot(_read(args.source), tol=tol)
        g = gdp_table_from_monetary(t, tol)
        names = t.sectors
        notes.append("unit-price convention applied: p = e, S = Z, q = x")
    else:
        ps = parse_physical(_read(args.source))
        names = ps.commodities
        if args.prices:
            p = _read_named_vector(args.prices, names)
            inputs["prices"] = _provenance(args.prices)
        else:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", ReducibleSystemWarning)
                p = subsistence_prices(ps).p
        g = build_gdp_table(ps.S, ps.q, p, tol)
    rep = verify_gdp_table(g, args.verify_tol)
    results = {
        "names": list(names),
        "x": g.x, "p": g.p, "q": g.q,
        "Z": g.Z, "T": g.T, "S": g.S, "D": g.D_state,
        "A": g.A, "B": g.B, "C": g.C,
        "verification": rep.to_dict(),
    }
    return AnalysisReport("gdp-table", inputs, results, notes)


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write the JSON report to PATH ('-' for stdout)")
    common.add_argument("--tol", type=float, default=None, help="validation tolerance")

    parser = _Parser(prog="iota", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"iota {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def table_cmd(p, name, func, help):
        cp = p.add_parser(name, parents=[common], help=help)
        cp.add_argument("table", help="IOT-CSV file")
        cp.set_defaults(func=func)
        return cp

    def system_cmd(p, name, func, help):
        cp = p.add_parser(name, parents=[common], help=help)
        cp.add_argument("system", help="physical-system CSV file")
        cp.set_defaults(func=func)
        return cp

    table_cmd(sub, "validate", cmd_validate, "parse and balance-check a table")
    table_cmd(sub, "coefficients", cmd_coefficients, "technical coefficients A")
    table_cmd(sub, "distribution", cmd_distribution, "distribution matrix D")
    table_cmd(sub, "surplus-ratio", cmd_surplus_ratio, "GDP over circulating capital")
    prod = table_cmd(sub, "productiveness", cmd_productiveness, "Frobenius eigenvalue of A and R = 1/lambda - 1")
    prod.add_argument("--closure", choices=["open", "closed"], default="open")
    agg = table_cmd(sub, "aggregate", cmd_aggregate, "aggregate sectors into groups")
    agg.add_argument("--map", required=True, help="CSV of source_sector,group_name lines")
    agg.add_argument("--out", help="write the aggregated table (IOT-CSV) here")

    leo = sub.add_parser("leontief", help="Leontief quantity and price models").add_subparsers(
        dest="model", required=True, parser_class=_Parser
    )
    table_cmd(leo, "inverse", cmd_leontief_inverse, "Leontief inverse")
    q = table_cmd(leo, "quantity", cmd_leontief_quantity, "output for a final demand vector")
    q.add_argument("--demand", help="CSV of sector,value lines (default: the table's final demand)")
    pr = table_cmd(leo, "price", cmd_leontief_price, "cost-push prices")
    pr.add_argument("--value-added", help="CSV of sector,value-added-per-unit lines (default: v / x)")

    sra = sub.add_parser("sraffa", help="single-product price systems").add_subparsers(
        dest="analysis", required=True, parser_class=_Parser
    )
    num_help = "commodity:<name>, net or standard (default: first commodity)"
    s = system_cmd(sra, "subsistence", cmd_sraffa_subsistence, "prices of a self-replacing system")
    s.add_argument("--numeraire", help=num_help)
    s = system_cmd(sra, "solve", cmd_sraffa_solve, "prices for a given profit rate or wage")
    s.add_argument("--r", type=float)
    s.add_argument("--w", type=float)
    s.add_argument("--numeraire", help=num_help)
    s = system_cmd(sra, "frontier", cmd_sraffa_frontier, "sample the wage-profit frontier")
    s.add_argument("--samples", type=int, default=11)
    s.add_argument("--numeraire", help=num_help)
    s.add_argument("--csv", help="write r,w,p_1..p_n plot data here")
    system_cmd(sra, "standard", cmd_sraffa_standard, "standard system and standard ratio")
    system_cmd(sra, "basics", cmd_sraffa_basics, "basic / non-basic commodities")

    jnt = sub.add_parser("joint", help="joint production").add_subparsers(
        dest="analysis", required=True, parser_class=_Parser
    )
    s = system_cmd(jnt, "solve", cmd_joint_solve, "prices for a given profit rate or wage")
    s.add_argument("--r", type=float)
    s.add_argument("--w", type=float)
    s.add_argument("--numeraire", help=num_help)
    system_cmd(jnt, "pasinetti", cmd_joint_pasinetti, "Pasinetti matrix H = (F' - S')^-1 S'")

    g = sub.add_parser("gdp-table", parents=[common], help="build and verify the stochastic similarity table")
    g.add_argument("source", help="physical-system CSV, or IOT-CSV with --monetary")
    g.add_argument("--monetary", action="store_true", help="source is a monetary IOT (unit prices assumed)")
    g.add_argument("--prices", help="CSV of commodity,price lines (default: subsistence prices)")
    g.add_argument("--verify-tol", type=float, default=1e-9)
    g.set_defaults(func=cmd_gdp_table)
    return parser


def run_cli(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(sys.argv[1:] if argv is None else argv))
        func: Callable = args.func
        report = func(args)
        if args.json == "-":
            stdout.write(render_report(report, "json"))
        else:
            if args.json:
                write_atomic(args.json, render_report(report, "json"))
            stdout.write(render_report(report, "text"))
        return EXIT_OK
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"iota: usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"iota: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"iota: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"iota: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
