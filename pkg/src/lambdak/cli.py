"""Command-line entry point.

Exit codes: 0 all checks passed, 2 an invariant was violated (witness is
printed as JSON), 1 usage or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone

from . import __version__
from .equiangular import LineSystemError, builtin_tightness, check_tightness, extremal_status, load_lines
from .exact import format_exact, to_float
from .graphs import (Graph6Error, certify_bound, enumerate_graphs, graph_spectrum, iter_graph6,
                     read_graph6_file, scan_corpus, write_graph6)
from .linalg import derive_seed, random_projection
from .majorant import TIGHT_K, alpha, beta, majorant_coeffs, majorant_identity_residual, nikiforov_bound
from .projection import check_cs_inequality, check_l1_bound

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2
SUBSCRIPT = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class Report:
    command: str
    config: dict
    columns: list
    rows: list = field(default_factory=list)
    text: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)


def _k_range(text: str) -> range:
    lo, _, hi = text.partition("-")
    try:
        lo_i = int(lo)
        hi_i = int(hi) if hi else lo_i
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or N-M, got {text!r}") from None
    if hi_i < lo_i:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return range(lo_i, hi_i + 1)


# ---------------------------------------------------------------------------
# commands


def cmd_constants(args) -> Report:
    ks = args.k
    if ks.start < 2:
        raise UsageError("k must be >= 2")
    rep = Report("constants", {"k": f"{ks.start}-{ks.stop - 1}"},
                 ["k", "alpha_k", "alpha_k_float", "beta_r", "beta_r_float", "nikiforov", "tight"])
    rep.text.append(f"{'k':>4} {'alpha_k':>18} {'beta_(k-1)':>18} {'1/(2sqrt(k-1))':>18}  tight  exact alpha_k")
    for k in ks:
        a = alpha(k)
        b = beta(k - 1) if k >= 3 else None
        nik = nikiforov_bound(k)
        af = to_float(a)
        bf = to_float(b) if b is not None else 1.0
        row = {"k": k, "alpha_k": format_exact(a), "alpha_k_float": af,
               "beta_r": format_exact(b) if b is not None else "1/1 + 0/1*sqrt(3)", "beta_r_float": bf,
               "nikiforov": nik, "tight": k in TIGHT_K}
        rep.rows.append(row)
        rep.text.append(f"{k:>4} {af:>18.15f} {bf:>18.15f} {nik:>18.15f}  {'tight' if k in TIGHT_K else '     '}  "
                        f"{row['alpha_k']}")
        # k = 2 meets the universal bound with equality; the improvement is strict for k >= 3
        if (k >= 3 and not af < nik) or af > nik:
            rep.violations.append({"check": "alpha_below_nikiforov", "k": k, "alpha_k": af, "nikiforov": nik})
    return rep


def cmd_certify_majorant(args) -> Report:
    rs = args.r
    if rs.start < 2:
        raise UsageError("r must be >= 2")
    rep = Report("certify-majorant", {"r": f"{rs.start}-{rs.stop - 1}"},
                 ["r", "residual_zero", "ra_minus_b", "ra_minus_b_float", "a_r", "b_r", "gamma_r"])
    for r in rs:
        res = majorant_identity_residual(r)
        c = majorant_coeffs(r)
        row = {"r": r, "residual_zero": res.is_zero(), "ra_minus_b": format_exact(c.slack()),
               "ra_minus_b_float": to_float(c.slack()), "a_r": format_exact(c.a),
               "b_r": format_exact(c.b), "gamma_r": format_exact(c.gamma)}
        rep.rows.append(row)
        rep.text.append(f"r={r:>3}  residual {'zero' if res.is_zero() else 'NONZERO'}  "
                        f"r*a_r - b_r = {row['ra_minus_b_float']:.15g}")
        if not res.is_zero() or c.slack().sign() < 0:
            rep.violations.append({"check": "majorant_identity", "r": r, "residual": repr(res)})
    return rep


def _graph_source(args):
    if args.enumerate is not None:
        for n in range(1, args.enumerate + 1):
            for g in enumerate_graphs(n):
                yield 0, write_graph6(g), g
    elif args.input:
        if args.input == "-":
            yield from iter_graph6(sys.stdin, "<stdin>")
        else:
            yield from read_graph6_file(args.input)
    else:
        raise UsageError("give an input graph6 file or --enumerate N")


def cmd_check_graph(args) -> Report:
    tol = args.tol
    rep = Report("check-graph", {"input": args.input, "k": args.k, "tol": tol},
                 ["graph6", "k", "n", "lambda_k", "bound", "weyl_slack", "tight"])
    for lineno, code, g in _graph_source(args):
        if g.n < 2:
            continue
        ks = [args.k] if args.k is not None else range(2, g.n + 1)
        w = graph_spectrum(g).eigenvalues
        wc = graph_spectrum(g.complement()).eigenvalues
        for k in ks:
            if k > g.n:
                continue
            cert = certify_bound(g, k, spectra=(w, wc))
            row = {"graph6": code} | cert.to_json()
            rep.rows.append(row)
            mark = "TIGHT" if cert.tight else "ok"
            rep.text.append(f"{code}  k={k} n={g.n}  lambda_k={cert.lambda_k:.9f}  bound={cert.bound:.9f}  "
                            f"weyl_slack={cert.weyl_slack:.3e}  {mark}")
            bad = cert.violations(tol * max(1, g.n) if tol is not None else None)
            if bad:
                rep.violations.append({"graph6": code, "line": lineno, "failed": bad} | cert.as_dict())
    return rep


def cmd_scan(args) -> Report:
    k = args.k
    rep = Report("scan", {"input": args.input, "enumerate": args.enumerate, "k": k},
                 ["graph6", "n", "k", "lambda_k", "ratio", "margin"])
    res = scan_corpus((code for _, code, _ in _graph_source(args)), k,
                      on_record=rep.rows.append if args.records else None)
    rep.summary = {"k": k, "max_ratio": res.max_ratio, "argmax_graph6": res.argmax_graph6,
                   "count": res.count, "skipped": res.skipped, "alpha_k": to_float(alpha(k))}
    rep.text.append(f"scanned {res.count} graphs (skipped {res.skipped} with n < {k})")
    rep.text.append(f"max lambda_{k}/n = {res.max_ratio:.12f} at {res.argmax_graph6}; "
                    f"alpha_{k} = {to_float(alpha(k)):.12f}")
    rep.violations.extend(res.violations)
    return rep


def cmd_tightness(args) -> Report:
    if args.lines:
        L = load_lines(args.lines)
        tr = check_tightness(L)
    else:
        if args.r is None:
            raise UsageError("give r or --lines FILE")
        try:
            tr = builtin_tightness(args.r)
        except LineSystemError as exc:
            raise UsageError(f"{exc} ({extremal_status(args.r)})") from None
    rep = Report("tightness", {"r": tr.r, "lines": args.lines},
                 ["r", "N", "n", "k", "lambda_k", "predicted", "bound", "slack_predicted", "slack_bound", "tight"])
    rep.rows.append(tr.to_json())
    k_sub = str(tr.k).translate(SUBSCRIPT)
    verdict = "TIGHT" if tr.ok else "NOT TIGHT"
    rep.text.append(f"λ{k_sub} = {tr.lambda_k:.6f} = bound, {verdict}" if tr.ok else
                    f"λ{k_sub} = {tr.lambda_k:.6f}, bound = {tr.bound:.6f}, {verdict}")
    rep.text.append(f"r={tr.r}: N={tr.N} lines, doubled graph on n={tr.n} vertices, "
                    f"(N-r)/(alpha r) = {tr.predicted:.9f}, alpha_k n - 1 = {tr.bound:.9f}")
    rep.text.append(f"note: extremal systems in R^{tr.r}: {extremal_status(tr.r)}")
    if not tr.ok:
        rep.violations.append({"check": "tightness"} | tr.to_json())
    return rep


def cmd_project(args) -> Report:
    n, r, trials, seed = args.n, args.r, args.trials, args.seed
    if not 2 <= r <= n:
        raise UsageError("need 2 <= r <= n")
    tol = args.tol if args.tol is not None else 1e-8
    rep = Report("project", {"n": n, "r": r, "trials": trials, "seed": seed, "tol": tol},
                 ["check", "n", "r", "seed", "margin"])
    mins = {"l1_bound": float("inf"), "cs_inequality": float("inf")}
    for t in range(trials):
        s = derive_seed(seed, t)
        P = random_projection(n, r, s)
        for check, margin, scale in (("l1_bound", check_l1_bound(P), n),
                                     ("cs_inequality", check_cs_inequality(P), r * n)):
            rec = {"check": check, "n": n, "r": r, "seed": s, "margin": margin}
            rep.rows.append(rec)
            mins[check] = min(mins[check], margin)
            if margin < -tol * scale:
                rep.violations.append(rec)
    rep.summary = {"min_margin": min(mins.values()), "min_l1_margin": mins["l1_bound"],
                   "min_cs_margin": mins["cs_inequality"], "beta_r": to_float(beta(r))}
    rep.text.append(f"{trials} random rank-{r} projections in R^{n} (seed {seed}): "
                    f"min l1 margin {mins['l1_bound']:.6f}, min CS margin {mins['cs_inequality']:.6f}")
    return rep


# ---------------------------------------------------------------------------
# output


def _emit(rep: Report, args, out) -> None:
    meta = {"tool": "lambdak", "version": __version__, "command": rep.command,
            "config": rep.config | {"seed": getattr(args, "seed", None), "tol": args.tol}}
    if not args.no_timestamp:
        meta["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    status = "violation" if rep.violations else "ok"
    if args.format == "json":
        doc = meta | {"summary": rep.summary, "results": rep.rows, "violations": rep.violations,
                      "status": status}
        out.write(json.dumps(doc, indent=2) + "\n")
        return
    if args.format == "csv":
        for key, val in meta.items():
            out.write(f"# {key}: {json.dumps(val, sort_keys=True)}\n")
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=rep.columns, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        w.writerows(rep.rows)
        out.write(buf.getvalue())
    else:
        out.write(f"# lambdak {__version__} {rep.command} {json.dumps(meta['config'], sort_keys=True)}\n")
        if "timestamp" in meta:
            out.write(f"# {meta['timestamp']}\n")
        for line in rep.text:
            out.write(line + "\n")
        if rep.summary and rep.command != "scan":
            out.write(f"summary: {json.dumps(rep.summary)}\n")
    for v in rep.violations:
        out.write("VIOLATION " + json.dumps(v, sort_keys=True) + "\n")
    out.write(f"status: {status}\n" if args.format == "text" else "")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=100)
    common.add_argument("--tol", type=float, default=None,
                        help="relative tolerance override (scaled by n where applicable)")
    common.add_argument("--no-timestamp", action="store_true")
    common.add_argument("--output", "-o", default=None)

    p = _Parser(prog="lambdak", description="Certify k-th eigenvalue bounds and their tight cases.")
    p.add_argument("--version", action="version", version=f"lambdak {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("constants", parents=[common], help="alpha_k, beta_(k-1) table")
    c.add_argument("k", type=_k_range, nargs="?", default=range(2, 25), help="k or k1-k2")
    c.set_defaults(func=cmd_constants)

    c = sub.add_parser("certify-majorant", parents=[common], help="exact majorant identity per r")
    c.add_argument("r", type=_k_range, nargs="?", default=range(2, 101), help="r or r1-r2")
    c.set_defaults(func=cmd_certify_majorant)

    for name, func, help_ in (("check-graph", cmd_check_graph, "certificates for graph6 input"),
                              ("scan", cmd_scan, "max lambda_k/n over a graph6 corpus")):
        c = sub.add_parser(name, parents=[common], help=help_)
        c.add_argument("input", nargs="?", help="graph6 file, or - for stdin")
        c.add_argument("--enumerate", type=int, metavar="N", help="all labeled graphs with n <= N")
        c.add_argument("-k", type=int, required=(name == "scan"))
        if name == "scan":
            c.add_argument("--records", action="store_true", help="emit one row per graph")
        c.set_defaults(func=func)

    c = sub.add_parser("tightness", parents=[common], help="doubled equiangular system for r")
    c.add_argument("r", type=int, nargs="?")
    c.add_argument("--lines", help="line-system file instead of a built-in")
    c.set_defaults(func=cmd_tightness)

    c = sub.add_parser("project", parents=[common], help="l1 and Cauchy-Schwarz bounds on random projections")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--r", type=int, required=True)
    c.set_defaults(func=cmd_project)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.tol is not None and args.tol <= 0:
            parser.error("--tol must be positive")
        if isinstance(getattr(args, "k", None), int) and args.k < 2:
            parser.error("k must be >= 2")
    except SystemExit as exc:  # argparse exits on usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        rep = args.func(args)
        if args.output:
            with open(args.output, "w") as fh:
                _emit(rep, args, fh)
        else:
            _emit(rep, args, sys.stdout)
    except UsageError as exc:
        print(f"lambdak: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, Graph6Error, LineSystemError, ValueError) as exc:
        print(f"lambdak: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_VIOLATION if rep.violations else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
