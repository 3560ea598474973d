"""Command-line interface: ``stgenus {genus,crosscheck,search,table,selftest}``.

Exit codes: 0 success, 1 internal invariant failure, 2 invalid input,
3 search budget exhausted, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time

from .arith import is_squarefree
from .errors import BudgetExhausted, GenusError, InputError, InvalidRange, VerificationFailed
from .genus import GenusReport, ProblemInstance, build_matrix_caserule, genus_number
from .governing import PlaceSets
from .oracle import build_matrix_hilbert, genus_via_formula
from .search import DEFAULT_BUDGET, SearchSpec, search

SCHEMA_VERSION = "1"
TABLE_HEADER = ["d", "sigma", "ncols", "rank", "log2_g", "g", "g_star"]
TABLE_MAX_ENTRIES = 10**6

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_BUDGET, EXIT_IO = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors already; keep the diagnostic on one line
    def error(self, message):
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _prime_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _flatten(groups) -> tuple[int, ...]:
    return tuple(x for g in groups or () for x in g)


def envelope(command: str, inputs: dict, result: dict, started: float) -> str:
    doc = {
        "schemaVersion": SCHEMA_VERSION,
        "command": command,
        "input": inputs,
        "result": result,
        "timingMs": int((time.perf_counter() - started) * 1000),
    }
    return json.dumps(doc, indent=2) + "\n"


def _place_args(p: argparse.ArgumentParser, with_t: bool = True):
    p.add_argument("--s0", type=_prime_list, action="append", metavar="P[,P...]", help="finite primes of S")
    p.add_argument("--sinf", action="store_true", help="put the real place in S")
    if with_t:
        p.add_argument("--t", type=_prime_list, action="append", metavar="Q[,Q...]", help="odd primes of T")


def _output_args(p: argparse.ArgumentParser):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", action="store_true", help="emit a JSON envelope")
    g.add_argument("--pretty", action="store_true", help="human-readable output (default)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stgenus", description="S-T genus numbers of quadratic fields Q(sqrt d).")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, text in (("genus", "compute the genus matrix and genus number"),
                       ("crosscheck", "compare the case-rule pipeline with the local-norm oracle")):
        p = sub.add_parser(name, help=text)
        p.add_argument("d", type=int, help="squarefree integer, d != 0, 1")
        _place_args(p)
        _output_args(p)

    p = sub.add_parser("search", help="find d with prescribed ramification count and genus number")
    p.add_argument("-m", type=int, required=True, help="number of ramified primes")
    p.add_argument("-k", type=int, required=True, help="target log2 of the genus number")
    p.add_argument("--s0", type=_prime_list, action="append", metavar="P[,P...]")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="largest prime to scan")
    _output_args(p)

    p = sub.add_parser("table", help="genus data for every squarefree d in a range, as CSV")
    p.add_argument("--dmin", type=int, required=True)
    p.add_argument("--dmax", type=int, required=True)
    _place_args(p)
    p.add_argument("--csv", metavar="PATH", help="write to PATH instead of stdout")

    p = sub.add_parser("selftest", help="run the invariant suites")
    p.add_argument("--json", action="store_true")
    p.add_argument("--inject-fault", choices=["hilbert"], help=argparse.SUPPRESS)
    return parser


def _places(args) -> PlaceSets:
    return PlaceSets(_flatten(args.s0), args.sinf, _flatten(getattr(args, "t", None)))


def _instance_input(args) -> dict:
    return {
        "d": args.d,
        "s0": sorted(set(_flatten(args.s0))),
        "sinf": args.sinf,
        "t": sorted(set(_flatten(args.t))),
    }


def format_matrix(row_labels, col_labels, rows) -> list[str]:
    width = max([len(s) for s in row_labels] + [1])
    cw = max([len(s) for s in col_labels] + [1])
    lines = [" " * (width + 4) + " ".join(c.rjust(cw) for c in col_labels)]
    for label, row in zip(row_labels, rows):
        lines.append(f"  {label.rjust(width)}  " + " ".join(str(x).rjust(cw) for x in row))
    if not rows:
        lines.append("  (no rows: W_T is trivial)")
    return lines


def render_report(r: GenusReport) -> str:
    inst = r.instance
    pl = inst.places

    def braces(xs):
        return "{" + ", ".join(map(str, xs)) + "}"

    s_places = [str(q) for q in pl.s0] + (["inf"] if pl.s_inf else [])
    lines = [
        f"d = {inst.d}   Sigma = {braces(inst.sigma)}   S = {braces(s_places)}   T = {braces(pl.t)}",
        f"governing basis: {braces(inst.basis.gens)}   dim W_T = {r.wt_dim}",
        "",
        *format_matrix(r.matrix.row_labels, r.matrix.col_labels, r.matrix.rows),
        "",
        f"rank = {r.rank}   columns = {r.matrix.ncols}   log2 g = {r.log2_g}",
        f"g = {r.g}   g* = {r.g_star}   ray class order = {r.ray_class_order}",
        "splitting: " + ", ".join(f"{k}: {v}" for k, v in r.splitting.items()),
    ]
    if r.kernel_basis:
        lines.append("kernel basis: " + "  ".join(braces(k) for k in r.kernel_basis))
    return "\n".join(lines) + "\n"


def cmd_genus(args, out) -> int:
    started = time.perf_counter()
    report = genus_number(ProblemInstance(args.d, _places(args)))
    if args.json:
        out.write(envelope("genus", _instance_input(args), report.to_dict(), started))
    else:
        out.write(render_report(report))
    return EXIT_OK


def first_difference(a, b):
    """(row, col) of the first entry where two equally shaped matrices differ."""
    for i, (ra, rb) in enumerate(zip(a.rows, b.rows)):
        for j, (x, y) in enumerate(zip(ra, rb)):
            if x != y:
                return i, j
    return None


def cmd_crosscheck(args, out) -> int:
    started = time.perf_counter()
    inst = ProblemInstance(args.d, _places(args))
    report = genus_number(inst)
    case = build_matrix_caserule(inst)
    oracle = build_matrix_hilbert(inst)
    g_oracle = genus_via_formula(inst)

    problem = None
    if (case.nrows, case.ncols) != (oracle.nrows, oracle.ncols):
        problem = f"shape {case.nrows}x{case.ncols} vs {oracle.nrows}x{oracle.ncols}"
    elif (pos := first_difference(case, oracle)) is not None:
        i, j = pos
        problem = (
            f"entry (row {case.row_labels[i]}, col {case.col_labels[j]}): "
            f"case rule {case.rows[i][j]}, local norm {oracle.rows[i][j]}"
        )
    elif report.g != g_oracle:
        problem = f"g = {report.g} from the matrix, {g_oracle} from the norm index"

    if args.json:
        result = {
            "match": problem is None,
            "g": report.g,
            "g_oracle": g_oracle,
            "matrix": [list(r) for r in case.rows],
            "matrix_oracle": [list(r) for r in oracle.rows],
            "first_difference": problem,
        }
        out.write(envelope("crosscheck", _instance_input(args), result, started))
    elif problem is None:
        out.write(f"match: g = {report.g}, {case.nrows}x{case.ncols} matrices agree entrywise\n")
    else:
        out.write(f"MISMATCH: {problem}\n")
    return EXIT_OK if problem is None else EXIT_INTERNAL


def cmd_search(args, out) -> int:
    started = time.perf_counter()
    spec = SearchSpec(PlaceSets(_flatten(args.s0), True), args.m, args.k, args.budget)
    res = search(spec)
    if args.json:
        inputs = {"m": args.m, "k": args.k, "s0": list(spec.places.s0), "budget": args.budget}
        out.write(envelope("search", inputs, res.to_dict(), started))
    else:
        sigma = "{" + ", ".join(map(str, res.sigma)) + "}"
        out.write(f"Sigma = {sigma}   d = {res.d}   g = {res.report.g}   max prime = {res.max_prime}\n")
    return EXIT_OK


def table_rows(dmin: int, dmax: int, places: PlaceSets):
    for d in range(dmin, dmax + 1):
        if d in (0, 1) or not is_squarefree(d):
            continue
        try:
            r = genus_number(ProblemInstance(d, places))
        except InputError:
            continue
        sigma = ";".join(map(str, r.instance.sigma))
        yield [d, sigma, r.matrix.ncols, r.rank, r.log2_g, r.g, r.g_star]


def cmd_table(args, out) -> int:
    if args.dmax - args.dmin + 1 > TABLE_MAX_ENTRIES:
        raise InvalidRange(f"InvalidRange: at most {TABLE_MAX_ENTRIES} values of d per table")
    places = _places(args)
    rows = table_rows(args.dmin, args.dmax, places)
    if args.csv is None:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(TABLE_HEADER)
        w.writerows(rows)
        return EXIT_OK
    with open(args.csv, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TABLE_HEADER)
        w.writerows(rows)
    return EXIT_OK


def cmd_selftest(args, out) -> int:
    from .selftest import run_all

    started = time.perf_counter()
    results = run_all(args.inject_fault)
    ok = all(r.passed for r in results)
    if args.json:
        payload = {
            "passed": ok,
            "suites": [{"name": r.name, "passed": r.passed, "checked": r.checked, "detail": r.detail} for r in results],
        }
        out.write(envelope("selftest", {"inject_fault": args.inject_fault}, payload, started))
    else:
        for r in results:
            out.write(r.line() + "\n")
        out.write(("all suites passed" if ok else "SELFTEST FAILED") + "\n")
    return EXIT_OK if ok else EXIT_INTERNAL


COMMANDS = {
    "genus": cmd_genus,
    "crosscheck": cmd_crosscheck,
    "search": cmd_search,
    "table": cmd_table,
    "selftest": cmd_selftest,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    # argparse accepts "-21" as a positional since no option looks like a number
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except BudgetExhausted as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except VerificationFailed as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return EXIT_IO
    except (GenusError, AssertionError) as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
