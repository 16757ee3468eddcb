"""Command line front end.

Subcommands:

  inspect    instance facts: variables, clauses, pair sets
  analyze    depth report for one formulation of one instance
  compare    dualized-linear vs substituted depth, table across instances
  histogram  interaction-degree histogram for a formulation
  export     write the pair-selection integer program in LP format
  fetch      download SATLIB benchmark instances used in the comparisons

Exit codes: 0 success, 2 solver budget exhausted (with or without an
incumbent), 64 usage errors, 65 unreadable or unparseable instance files,
1 fetch/network failures.

Outputs are deterministic byte-for-byte unless --timings is passed; paths
given to -o are written atomically (temp file plus rename).
"""

from __future__ import annotations

import argparse
import os
import sys
import tarfile
import tempfile
import time
import urllib.request
from collections import Counter
from dataclasses import replace
from pathlib import Path

from .cnf import (
    DegenerateClauseError,
    DimacsError,
    Instance,
    example1,
    load_dimacs,
    parse_dimacs,
)
from .gvs import gvs_degree_table, gvs_report
from .linear import linear_degree_table, linear_report
from .optimize import (
    DEFAULT_BUDGET_SECS,
    build_ip,
    compare_instance,
    export_lp,
    greedy_cover,
    solve_ip_exact,
)
from .product import candidate_pairs, quadratic_pairs
from .reports import (
    comparison_table_text,
    depth_report_text,
    reports_to_json,
    rows_to_csv,
    rows_to_json,
)
from .schedule import native3_report

EXIT_OK = 0
EXIT_BUDGET = 2
EXIT_USAGE = 64
EXIT_DATA = 65

METHODS = ("linear", "gvs-ip", "gvs-greedy", "native3")

SATLIB_BASE = "https://www.cs.ubc.ca/~hoos/SATLIB/Benchmarks/SAT/RND3SAT/"
SATLIB_SETS = {
    "uf20-91": "uf20-01.cnf",
    "uf50-218": "uf50-01.cnf",
    "uuf50-218": "uuf50-01.cnf",
}


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; that slot means budget-exhausted here."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qdepth", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, formats=("text", "json")):
        p.add_argument("-o", "--output", type=Path, default=None,
                       help="write here instead of stdout (atomic)")
        p.add_argument("--format", choices=formats, default="text")

    p = sub.add_parser("inspect", help="instance facts")
    p.add_argument("instance")
    add_common(p)
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("analyze", help="depth report for one formulation")
    p.add_argument("instance")
    p.add_argument("--method", choices=METHODS, required=True)
    p.add_argument("--budget", type=float, default=DEFAULT_BUDGET_SECS,
                   help="solver budget in seconds (gvs-ip)")
    p.add_argument("--seed", type=int, default=0,
                   help="heuristic seed (gvs-greedy)")
    p.add_argument("--timings", action="store_true",
                   help="include wall time (breaks byte-for-byte determinism)")
    add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("compare", help="linear vs substituted depth table")
    p.add_argument("instances", nargs="+")
    p.add_argument("--budget", type=float, default=DEFAULT_BUDGET_SECS)
    p.add_argument("--seeds", type=int, default=20,
                   help="number of heuristic seeds (0, 1, ...)")
    p.add_argument("--timings", action="store_true")
    add_common(p, formats=("text", "json", "csv"))
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("histogram", help="interaction-degree histogram")
    p.add_argument("instance")
    p.add_argument("--method", choices=METHODS, required=True)
    p.add_argument("--budget", type=float, default=DEFAULT_BUDGET_SECS)
    p.add_argument("--seed", type=int, default=0)
    add_common(p, formats=("text", "json", "csv"))
    p.set_defaults(func=cmd_histogram)

    p = sub.add_parser("export", help="pair-selection program in LP format")
    p.add_argument("instance")
    p.add_argument("-o", "--output", type=Path, default=None)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("fetch", help="download SATLIB benchmark instances")
    p.add_argument("sets", nargs="*", default=None,
                   help=f"which sets (default: all of {', '.join(SATLIB_SETS)})")
    p.add_argument("--dest", type=Path, default=None,
                   help="target directory (default: $QDEPTH_SATLIB_DIR or ./satlib)")
    p.set_defaults(func=cmd_fetch)

    return parser


def effective_budget(flag_value: float) -> float:
    raw = os.environ.get("QDEPTH_BUDGET_SECS")
    if raw is None:
        return flag_value
    try:
        return float(raw)
    except ValueError:
        raise SystemExit(EXIT_USAGE) from None


def load_instance(source: str) -> tuple[str, Instance]:
    path = Path(source)
    if source == "example1" and not path.exists():
        return "example1", example1()
    return path.stem, load_dimacs(path)


def write_out(text: str, output: Path | None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    fd, tmp = tempfile.mkstemp(dir=output.parent or Path("."),
                               prefix=output.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, output)
    except BaseException:
        os.unlink(tmp)
        raise


def _named_degrees(table) -> tuple[tuple[str, int], ...]:
    return tuple((v.name, d) for v, d in sorted(table.items()))


def cmd_inspect(args) -> int:
    name, inst = load_instance(args.instance)
    facts = {
        "command": "inspect",
        "instance": name,
        "num_vars": inst.num_vars,
        "num_used_vars": len(inst.used_variables()),
        "num_clauses": inst.num_clauses,
        "num_candidate_pairs": len(candidate_pairs(inst)),
        "num_quadratic_pairs": len(quadratic_pairs(inst)),
        "num_coverings": 3 * inst.num_clauses,
    }
    if args.format == "json":
        import json

        text = json.dumps(facts, indent=2) + "\n"
    else:
        width = max(len(k) for k in facts)
        text = "".join(
            f"{k.ljust(width)}  {v}\n" for k, v in facts.items()
            if k != "command"
        )
    write_out(text, args.output)
    return EXIT_OK


def cmd_analyze(args) -> int:
    name, inst = load_instance(args.instance)
    budget = effective_budget(args.budget)
    started = time.perf_counter()
    exit_code = EXIT_OK

    if args.method == "linear":
        report = replace(
            linear_report(inst),
            degrees=_named_degrees(linear_degree_table(inst)),
        )
    elif args.method == "native3":
        report = native3_report(inst)
        from .product import native3_hypergraph

        report = replace(
            report, degrees=_named_degrees(native3_hypergraph(inst).degrees())
        )
    elif args.method == "gvs-greedy":
        cover = greedy_cover(inst, args.seed)
        report = replace(
            gvs_report(inst, cover),
            formulation="gvs-greedy",
            degrees=_named_degrees(gvs_degree_table(inst, cover)),
        )
    else:
        sol = solve_ip_exact(inst, budget)
        if sol.cover is None:
            print(
                f"no substitution choice found within {budget:g}s; "
                "raise --budget or QDEPTH_BUDGET_SECS",
                file=sys.stderr,
            )
            return EXIT_BUDGET
        report = replace(
            gvs_report(inst, sol.cover),
            formulation="gvs-ip",
            solver_status=sol.status,
            degrees=_named_degrees(gvs_degree_table(inst, sol.cover)),
        )
        if sol.status != "optimal":
            exit_code = EXIT_BUDGET

    if args.timings:
        report = report.with_wall_time(time.perf_counter() - started)

    if args.format == "json":
        text = reports_to_json(
            [report], command="analyze", instance=name, method=args.method
        )
    else:
        text = depth_report_text(report)
    write_out(text, args.output)
    return exit_code


def cmd_compare(args) -> int:
    budget = effective_budget(args.budget)
    rows = []
    for source in args.instances:
        name, inst = load_instance(source)
        rows.append(
            compare_instance(
                name, inst, budget, range(args.seeds), timings=args.timings
            )
        )
    if args.format == "json":
        text = rows_to_json(
            rows, command="compare", budget_secs=budget, num_seeds=args.seeds
        )
    elif args.format == "csv":
        text = rows_to_csv(rows)
    else:
        text = comparison_table_text(rows)
    write_out(text, args.output)
    if any(r.ip_status != "optimal" for r in rows):
        return EXIT_BUDGET
    return EXIT_OK


def cmd_histogram(args) -> int:
    name, inst = load_instance(args.instance)
    exit_code = EXIT_OK
    if args.method == "linear":
        table = linear_degree_table(inst)
    elif args.method == "native3":
        from .product import native3_hypergraph

        table = native3_hypergraph(inst).degrees()
    elif args.method == "gvs-greedy":
        table = gvs_degree_table(inst, greedy_cover(inst, args.seed))
    else:
        sol = solve_ip_exact(inst, effective_budget(args.budget))
        if sol.cover is None:
            print("no substitution choice found within budget", file=sys.stderr)
            return EXIT_BUDGET
        table = gvs_degree_table(inst, sol.cover)
        if sol.status != "optimal":
            exit_code = EXIT_BUDGET

    counts = Counter(table.values())
    hist = {str(d): counts[d] for d in sorted(counts)}
    if args.format == "json":
        import json

        text = (
            json.dumps(
                {
                    "command": "histogram",
                    "instance": name,
                    "method": args.method,
                    "histogram": hist,
                },
                indent=2,
            )
            + "\n"
        )
    elif args.format == "csv":
        lines = ["degree,count"] + [f"{d},{c}" for d, c in hist.items()]
        text = "\n".join(lines) + "\n"
    else:
        width = max(len(d) for d in hist) if hist else 1
        lines = [f"{d.rjust(width)}  {'#' * c} {c}" for d, c in hist.items()]
        text = "\n".join(lines) + "\n"
    write_out(text, args.output)
    return exit_code


def cmd_export(args) -> int:
    _, inst = load_instance(args.instance)
    write_out(export_lp(build_ip(inst)), args.output)
    return EXIT_OK


def cmd_fetch(args) -> int:
    wanted = args.sets or sorted(SATLIB_SETS)
    unknown = [s for s in wanted if s not in SATLIB_SETS]
    if unknown:
        print(f"unknown set(s): {', '.join(unknown)}; "
              f"known: {', '.join(sorted(SATLIB_SETS))}", file=sys.stderr)
        return EXIT_USAGE
    dest = args.dest or Path(os.environ.get("QDEPTH_SATLIB_DIR", "satlib"))
    dest.mkdir(parents=True, exist_ok=True)

    failures = []
    for name in wanted:
        member = SATLIB_SETS[name]
        target = dest / member
        if target.exists():
            print(f"{target}: already present")
            continue
        url = f"{SATLIB_BASE}{name}.tar.gz"
        try:
            with urllib.request.urlopen(url, timeout=60) as resp:
                with tempfile.NamedTemporaryFile(suffix=".tar.gz") as tmp:
                    tmp.write(resp.read())
                    tmp.flush()
                    with tarfile.open(tmp.name, "r:gz") as tar:
                        found = None
                        for info in tar.getmembers():
                            if Path(info.name).name == member:
                                found = tar.extractfile(info).read()
                                break
                        if found is None:
                            raise OSError(f"{member} not in archive")
            inst = parse_dimacs(found.decode())
        except Exception as exc:  # noqa: BLE001 - report and move on
            failures.append((name, url, exc))
            continue
        write_out(found.decode(), target)
        print(f"{target}: fetched ({inst.num_vars} vars, "
              f"{inst.num_clauses} clauses)")

    if failures:
        print("\ncould not download:", file=sys.stderr)
        for name, url, exc in failures:
            print(f"  {name}: {url} ({exc})", file=sys.stderr)
        print(
            "\nfetch them manually (any mirror of the SATLIB RND3SAT sets)\n"
            f"and place the first instance of each set into {dest}/:\n"
            + "".join(f"  {m}\n" for m in SATLIB_SETS.values())
            + "then point QDEPTH_SATLIB_DIR at that directory.",
            file=sys.stderr,
        )
        return 1
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (DimacsError, DegenerateClauseError, FileNotFoundError,
            IsADirectoryError, PermissionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    raise SystemExit(main())
