"""Command-line entry point: ``precompute``, ``approximate``, ``reproduce``, ``run``.

Every error raised by the package, plus I/O and argument errors, is reported
on stderr and turned into a nonzero exit status.
"""

from __future__ import annotations

import argparse
import sys
import time

from .errors import MatrixlessError
from .harness import (
    FORMATS,
    METHODS,
    PRESETS,
    ExperimentConfig,
    compare_with_reference,
    emit,
    format_reports,
    load_spectrum,
    parse_levels,
    reports_for_table,
    run_experiment,
)
from .nas import CoefficientTable, approximate_levels, precompute
from .symbols import parse_symbol


def _methods(text: str) -> tuple:
    return tuple(m.strip().upper() for m in text.split(",") if m.strip())


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="matrixless", description="Matrix-less Toeplitz eigenvalue approximation")
    p.add_argument("--eig-method", default=None, choices=("householder-ql", "lapack"),
                   help="dense eigensolver for precompute and reference spectra (default householder-ql)")
    sub = p.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("precompute", help="run the small eigensolves and write a coefficient table")
    pc.add_argument("--symbol", required=True, help="kms:rho=R | rctp:l=L | fdep:a0=A,a1=B")
    pc.add_argument("--n1", type=int, default=100)
    pc.add_argument("--alpha", type=int, default=5)
    pc.add_argument("--out", required=True)

    ap = sub.add_parser("approximate", help="approximate the spectrum of T_n and optionally compare")
    ap.add_argument("--symbol", required=True)
    ap.add_argument("--n", type=int, required=True)
    ap.add_argument("--levels", type=parse_levels, default=(1, 2, 3, 4), help="e.g. 1..4 or 1,3")
    ap.add_argument("--coeffs", help="coefficient table from 'precompute' (computed on the fly if absent)")
    ap.add_argument("--n1", type=int, default=100)
    ap.add_argument("--alpha", type=int, default=5)
    ap.add_argument("--methods", type=_methods, default=("NAS",), help=f"comma list from {METHODS}")
    ap.add_argument("--ref", default="auto", help="auto (dense solve), none, or a file of eigenvalues")
    ap.add_argument("--ref-ceiling", type=int, default=2048)
    ap.add_argument("--window", type=float, default=1.0, help="fraction of lowest indices in the max error")
    ap.add_argument("--format", choices=FORMATS, default="csv")
    ap.add_argument("--out", default=None, help="output path (stdout if omitted)")

    rp = sub.add_parser("reproduce", help="rerun one of the four reference error tables")
    rp.add_argument("--paper-table", type=int, choices=sorted(PRESETS), required=True)
    rp.add_argument("--heavy", action="store_true", help="include n=4096 (slow dense reference)")
    rp.add_argument("--format", choices=FORMATS, default="table")
    rp.add_argument("--out", default=None)

    rn = sub.add_parser("run", help="run an experiment described by a key=value config file")
    rn.add_argument("--config", required=True)
    rn.add_argument("--symbol")
    rn.add_argument("--ns", help="comma list of matrix orders")
    rn.add_argument("--levels", type=parse_levels)
    rn.add_argument("--methods", type=_methods)
    rn.add_argument("--window", type=float)
    rn.add_argument("--format", choices=FORMATS, default="table")
    rn.add_argument("--out", default=None)
    return p


def _cmd_precompute(args) -> int:
    sym = parse_symbol(args.symbol)
    t0 = time.perf_counter()
    table = precompute(sym, args.n1, args.alpha, method=args.eig_method)
    table.save(args.out)
    print(f"wrote {args.out} ({args.n1} nodes, alpha={args.alpha}, {time.perf_counter() - t0:.1f}s)",
          file=sys.stderr)
    return 0


def _write(text: str, path) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _cmd_approximate(args) -> int:
    sym = parse_symbol(args.symbol)
    table = CoefficientTable.load(args.coeffs) if args.coeffs else None
    if table is not None and table.symbol.spec != sym.spec:
        raise MatrixlessError(f"{args.coeffs} holds coefficients for {table.symbol.spec}, not {sym.spec}")
    if args.ref == "none":
        if args.format != "csv" or args.methods != ("NAS",):
            raise MatrixlessError("--ref none only supports NAS with --format csv")
        if table is None:
            table = precompute(sym, args.n1, args.alpha, method=args.eig_method)
        results = approximate_levels(sym, args.n, table, args.levels)
        lines = ["method,n,n1,alpha,level,j,theta,lambda_approx"]
        for k, res in results.items():
            for j in range(args.n):
                lines.append(f"NAS,{args.n},{table.grid.n1},{table.grid.alpha},{k},{j + 1},"
                             f"{res.theta[j]:.17g},{res.lam_hat[j]:.17g}")
        _write("\n".join(lines) + "\n", args.out)
        return 0

    n1, alpha = (table.grid.n1, table.grid.alpha) if table is not None else (args.n1, args.alpha)
    config = ExperimentConfig(sym.spec, ns=(args.n,), n1=n1, alpha=alpha, levels=args.levels,
                              methods=args.methods, window=args.window, ref_ceiling=args.ref_ceiling,
                              eig_method=args.eig_method)
    refs = None if args.ref == "auto" else {args.n: load_spectrum(args.ref, args.n)}
    emit(run_experiment(config, references=refs, table=table), args.format, args.out)
    return 0


def _cmd_reproduce(args) -> int:
    t0 = time.perf_counter()
    reports = reports_for_table(args.paper_table, heavy=args.heavy, eig_method=args.eig_method)
    text = format_reports(reports, args.format)
    if args.format == "table":
        text += "\n# comparison with the reference values (NAS)\n" + compare_with_reference(reports, args.paper_table)
    _write(text, args.out)
    print(f"table {args.paper_table} done in {time.perf_counter() - t0:.1f}s", file=sys.stderr)
    return 0


def _cmd_run(args) -> int:
    overrides = dict(symbol=args.symbol, levels=args.levels, methods=args.methods, window=args.window,
                     ns=tuple(int(x) for x in args.ns.split(",")) if args.ns else None,
                     eig_method=args.eig_method)
    config = ExperimentConfig.from_file(args.config, **overrides)
    emit(run_experiment(config), args.format, args.out)
    return 0


_COMMANDS = {
    "precompute": _cmd_precompute,
    "approximate": _cmd_approximate,
    "reproduce": _cmd_reproduce,
    "run": _cmd_run,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    from_config = args.command == "run"
    if args.eig_method is None and not from_config:
        args.eig_method = "householder-ql"
    try:
        return _COMMANDS[args.command](args)
    except (MatrixlessError, OSError, ValueError) as exc:
        print(f"matrixless: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
