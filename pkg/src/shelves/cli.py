"""Command-line interface.

Exit codes: 0 success, 1 verification mismatch or counterexample,
2 input or usage error, 3 search budget exceeded. Data goes to stdout (or
``--out``), diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Sequence

from . import formats
from .errors import BudgetExceeded, InputError, PreconditionError, ShelfError

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3

# orders verified by default; order 6 needs --long
DEFAULT_MAX_ORDER = 5
LONG_ORDER = 6
LONG_TIME_BUDGET = 30 * 60

log = logging.getLogger("shelves")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


def _diag(msg: str):
    print(msg, file=sys.stderr)


def _read_tables(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return formats.parse_bracket_lines(text)


def _write(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _read_ordering(source: str | None):
    if source is None or source == "lex":
        return None
    rows = []
    for k, line in enumerate(Path(source).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 3 or not all(p.isdigit() for p in parts):
            raise InputError(f"{source}: line {k}: expected three integers x y z")
        rows.append(tuple(int(p) for p in parts))
    return rows


# -- subcommands -------------------------------------------------------------------


def cmd_enumerate(args) -> int:
    from .enumeration import FILTERS, EnumerationOptions, enumerate_parallel

    filters = frozenset(f for f in FILTERS if getattr(args, f))
    opts = EnumerationOptions(
        condition_ordering=_read_ordering(args.condition_order),
        filters=filters,
        up_to_iso=args.up_to_iso,
        worker_count=args.workers,
        frontier_depth=args.frontier_depth,
        budget=args.budget,
        engine=args.engine,
    )
    t0 = time.perf_counter()
    tables = list(enumerate_parallel(args.order, opts))
    _diag(f"order {args.order}: {len(tables)} tables in {time.perf_counter() - t0:.2f}s")
    _write(formats.emit(tables, args.format), args.out)
    return EXIT_OK


def cmd_classify(args) -> int:
    tables = _read_tables(args.input)
    _write(formats.emit(tables, "records"), args.out)
    return EXIT_OK


def cmd_poly(args) -> int:
    from .core import shelf_polynomial

    lines = [f"{formats.to_bracket(t)}\t{shelf_polynomial(t).render()}\n" for t in _read_tables(args.input)]
    _write("".join(lines), args.out)
    return EXIT_OK


def cmd_group(args) -> int:
    from .groups import cycle_notation, group_closure, row_permutations

    lines = []
    for t in _read_tables(args.input):
        rows = row_permutations(t)
        g = group_closure(rows)
        cycles = ",".join(cycle_notation(p) for p in rows)
        lines.append(f"{formats.to_bracket(t)}\t{cycles}\t{g.identified_name}\t{g.order}\n")
    _write("".join(lines), args.out)
    return EXIT_OK


def cmd_conjecture(args) -> int:
    from .conjectures import sweep

    reports = sweep(args.max_order, args.which, workers=args.workers, budget=args.budget)
    out = []
    for r in reports:
        out.append(r.line() + f" time={r.wall_time:.2f}s\n")
        for t in r.counterexamples:
            out.append(f"  counterexample {formats.to_bracket(t)}\n")
    _write("".join(out), args.out)
    bad = sum(len(r.counterexamples) for r in reports)
    _diag(f"{len(reports)} sweeps, {bad} counterexamples")
    return EXIT_MISMATCH if bad else EXIT_OK


def _count_rows(args, collect=None):
    from .enumeration import count_summary

    if args.max_order > DEFAULT_MAX_ORDER and not args.long:
        raise InputError(f"orders above {DEFAULT_MAX_ORDER} take minutes; pass --long to run them")

    def progress(row, secs):
        _diag(f"order {row.order}: done in {secs:.1f}s")

    return count_summary(args.max_order, workers=args.workers, budget=args.budget, progress=progress,
                         collect=collect)


def _compare_counts(rows):
    from .reference import CONNECTED_QUANDLES, CONNECTED_RACKS, CONNECTED_SHELVES, UNITAL_SHELVES

    expected = {
        "connected": CONNECTED_SHELVES,
        "connected_racks": CONNECTED_RACKS,
        "connected_quandles": CONNECTED_QUANDLES,
        "unital": UNITAL_SHELVES,
    }
    table = []
    ok = True
    for row in rows:
        d = row._asdict()
        rec = {"order": row.order}
        for key, ref in expected.items():
            got, want = d[key], ref.get(row.order)
            rec[key] = "" if got is None else got
            rec[f"{key}_expected"] = "" if want is None else want
            if got is not None and want is not None and got != want:
                ok = False
        table.append(rec)
    fields = ["order"]
    for key in expected:
        fields += [key, f"{key}_expected"]
    return table, fields, ok


def cmd_verify_counts(args) -> int:
    t0 = time.perf_counter()
    rows = _count_rows(args)
    elapsed = time.perf_counter() - t0
    table, fields, ok = _compare_counts(rows)
    _write(formats.write_summary_csv(table, fields), args.out)
    _diag(f"counts {'match' if ok else 'DIFFER'}; {elapsed:.1f}s")
    if not ok:
        return EXIT_MISMATCH
    if args.time_budget is not None and elapsed > args.time_budget:
        _diag(f"run took {elapsed:.0f}s, over the {args.time_budget:.0f}s budget")
        return EXIT_BUDGET
    return EXIT_OK


def cmd_verify_appendix(args) -> int:
    from .data import CORPUS_ORDERS, appendix_tables
    from .enumeration import connected_classes
    from .iso import reduce_to_iso_classes

    ok = True
    for n in CORPUS_ORDERS:
        shipped = set(reduce_to_iso_classes(appendix_tables(n)))
        found = set(connected_classes(n, workers=args.workers))
        missing, extra = shipped - found, found - shipped
        status = "ok" if not missing and not extra else "MISMATCH"
        print(f"order {n}: corpus={len(shipped)} enumerated={len(found)} missing={len(missing)} "
              f"extra={len(extra)} {status}")
        for t in sorted(missing):
            _diag(f"  missing {formats.to_bracket(t)}")
        for t in sorted(extra):
            _diag(f"  extra {formats.to_bracket(t)}")
        ok = ok and status == "ok"
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_laver(args) -> int:
    from .core import laver_table

    t, is_shelf = laver_table(args.N)
    _write(f"{formats.to_bracket(t)}\nis_shelf={str(is_shelf).lower()}\n", args.out)
    return EXIT_OK


def cmd_construct(args) -> int:
    from .core import conjugation_shelf, linear_shelf
    from .groups import named_group

    if args.kind == "linear":
        if len(args.params) != 3:
            raise InputError("construct linear takes three integers: n a b")
        try:
            n, a, b = (int(p) for p in args.params)
        except ValueError:
            raise InputError("construct linear takes three integers: n a b") from None
        t = linear_shelf(n, a, b)
    else:
        if len(args.params) != 1:
            raise InputError("construct conj-group takes one group name")
        t = conjugation_shelf(named_group(args.params[0]))
    _write(formats.to_bracket(t) + "\n", args.out)
    return EXIT_OK


def cmd_report(args) -> int:
    from .plotting import plot_counts, plot_polynomial_spectrum

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    collected: dict = {}
    rows = _count_rows(args, collected)
    table, fields, ok = _compare_counts(rows)
    csv_path = out_dir / "counts.csv"
    csv_path.write_text(formats.write_summary_csv(table, fields))
    fig1 = plot_counts(rows, out_dir / "counts.png")
    fig2 = plot_polynomial_spectrum(collected, out_dir / "polynomials.png")
    for p in (csv_path, fig1, fig2):
        print(p)
    return EXIT_OK if ok else EXIT_MISMATCH


# -- parser ------------------------------------------------------------------------


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    from .enumeration import FILTERS, default_workers

    p = _Parser(prog="shelves", description="Enumerate and analyze finite shelves.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def workers(sp):
        sp.add_argument("--workers", type=_positive, default=None,
                        help="worker processes (default: $SHELVES_WORKERS or 1)")
        sp.add_argument("--budget", type=_positive, default=None, help="search node cap")

    e = sub.add_parser("enumerate", help="enumerate shelves of one order")
    e.add_argument("--order", type=_positive, required=True)
    for f in FILTERS:
        e.add_argument(f"--{f}", action="store_true", help=f"keep only {f} shelves")
    e.add_argument("--up-to-iso", action="store_true", help="one canonical table per class")
    e.add_argument("--format", choices=formats.FORMATS, default="bracket")
    e.add_argument("--frontier-depth", type=_nonneg, default=2)
    e.add_argument("--condition-order", default="lex", help="'lex' or a file with one 'x y z' per line")
    e.add_argument("--engine", choices=("native", "python"), default="native")
    e.add_argument("--out")
    workers(e)
    e.set_defaults(func=cmd_enumerate)

    c = sub.add_parser("classify", help="classification records for bracket lines")
    c.add_argument("--in", dest="input", required=True, help="file of bracket lines, or -")
    c.add_argument("--format", choices=("records",), default="records")
    c.add_argument("--out")
    c.set_defaults(func=cmd_classify)

    po = sub.add_parser("poly", help="shelf polynomials for bracket lines")
    po.add_argument("--in", dest="input", required=True)
    po.add_argument("--out")
    po.set_defaults(func=cmd_poly)

    g = sub.add_parser("group", help="row cycles and row group of Latin shelves")
    g.add_argument("--in", dest="input", required=True)
    g.add_argument("--out")
    g.set_defaults(func=cmd_group)

    cj = sub.add_parser("conjecture", help="sweep the covering-cycle and polynomial conjectures")
    cj.add_argument("which", choices=("c1", "c2", "both"))
    cj.add_argument("--max-order", type=_positive, required=True)
    cj.add_argument("--out")
    workers(cj)
    cj.set_defaults(func=cmd_conjecture)

    vc = sub.add_parser("verify-counts", help="compare class counts with the published tables")
    vc.add_argument("--max-order", type=_positive, default=DEFAULT_MAX_ORDER)
    vc.add_argument("--long", action="store_true", help=f"allow order {LONG_ORDER}")
    vc.add_argument("--time-budget", type=float, default=None,
                    help=f"seconds; exit 3 if exceeded (default {LONG_TIME_BUDGET} with --long)")
    vc.add_argument("--out")
    workers(vc)
    vc.set_defaults(func=cmd_verify_counts)

    va = sub.add_parser("verify-appendix", help="compare enumerated classes with the shipped corpus")
    va.add_argument("--workers", type=_positive, default=None)
    va.set_defaults(func=cmd_verify_appendix)

    lv = sub.add_parser("laver", help="Laver table of size N and its shelf check")
    lv.add_argument("N", type=_positive)
    lv.add_argument("--out")
    lv.set_defaults(func=cmd_laver)

    co = sub.add_parser("construct", help="build a linear or conjugation shelf")
    co.add_argument("kind", choices=("linear", "conj-group"))
    co.add_argument("params", nargs="+")
    co.add_argument("--out")
    co.set_defaults(func=cmd_construct)

    rp = sub.add_parser("report", help="counts CSV plus figures in a directory")
    rp.add_argument("--max-order", type=_positive, default=DEFAULT_MAX_ORDER)
    rp.add_argument("--long", action="store_true", help=f"allow order {LONG_ORDER}")
    rp.add_argument("--out-dir", required=True)
    workers(rp)
    rp.set_defaults(func=cmd_report)

    p.set_defaults(_default_workers=default_workers)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
        if getattr(args, "workers", 1) is None:
            args.workers = args._default_workers()
        if args.command == "verify-counts" and args.time_budget is None and args.long:
            args.time_budget = LONG_TIME_BUDGET
        return args.func(args)
    except _UsageError as exc:
        _diag(str(exc))
        return EXIT_INPUT
    except BudgetExceeded as exc:
        _diag(f"budget exceeded: {exc}")
        return EXIT_BUDGET
    except (InputError, PreconditionError) as exc:
        _diag(f"error: {exc}")
        return EXIT_INPUT
    except OSError as exc:
        _diag(f"error: {exc}")
        return EXIT_INPUT
    except ShelfError as exc:
        _diag(f"error: {exc}")
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
