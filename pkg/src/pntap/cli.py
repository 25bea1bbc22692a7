"""Command-line front end.

Subcommands
-----------
constants  render the constants tables (soz, short-interval, twisted, ap, all)
verify     run a verification suite; exit 0 only with zero violations
count      exact pi/theta/psi at (x; q, a)
bound      evaluate one bound's right-hand side
compare-gm pi-bound vs the cyclotomic baseline

Exit codes: 0 success, 1 verification violations, 2 usage or domain errors.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import constants as C
from .arith import ap_counts
from .errors import PntapError
from .verify import (compare_gm_baseline, verify_ap_bounds, verify_bpt,
                     verify_lehman, verify_psi1_explicit,
                     verify_short_interval, verify_zero_count)
from .zeros import CharacterLabel, load_zero_table

ZETA_FORMAT_HINT = (
    "zeta zeros file: plain text, one decimal ordinate per line, ascending; "
    "dirichlet zeros file: CSV with header q,index,gamma"
)


@dataclass
class RunConfig:
    """Run-wide knobs shared by the subcommands."""

    precision: int = 30
    quad_tol: float = 1e-12
    zeros_path: Optional[str] = None
    output_format: str = "md"
    x0_list: list[float] = field(default_factory=lambda: list(C.LOG_X0_GRID))
    sieve_segment: int = 1 << 22

    def __post_init__(self):
        if self.precision < 15:
            raise PntapError("precision must be at least 15 digits")
        if self.quad_tol <= 0:
            raise PntapError("quad_tol must be positive")
        if self.output_format not in ("md", "csv", "json"):
            raise PntapError(f"unknown output format {self.output_format!r}")


def fmt_cell(v) -> str:
    """5-decimal cell, scientific for |v| >= 1e4; empty for missing."""
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if abs(v) >= 1e4:
        return f"{v:.5e}"
    return f"{v:.5f}"


def render_table(header: list[str], rows: list[list], fmt: str) -> str:
    cells = [[fmt_cell(v) for v in row] for row in rows]
    if fmt == "csv":
        lines = [",".join(header)]
        lines += [",".join(row) for row in cells]
        return "\n".join(lines)
    if fmt == "json":
        return json.dumps([dict(zip(header, [None if c == "" else (c if not _is_num(c) else float(c)) for c in row]))
                           for row in cells], indent=2)
    widths = [max(len(h), *(len(r[i]) for r in cells)) if cells else len(h)
              for i, h in enumerate(header)]
    out = ["| " + " | ".join(h.ljust(w) for h, w in zip(header, widths)) + " |",
           "|" + "|".join("-" * (w + 2) for w in widths) + "|"]
    for row in cells:
        out.append("| " + " | ".join(c.ljust(w) for c, w in zip(row, widths)) + " |")
    return "\n".join(out)


def _is_num(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False


def _chain(log_x0: float, small: bool, self_consistent: bool = False):
    """Build the full constants chain at one log x0."""
    kappa = C.kappa_for(log_x0)
    si = C.short_interval_constants(log_x0, kappa)
    if small:
        soz = C.soz_constants_small(log_x0)
        anchor = None if self_consistent else C.soz_constants_small(C.LOG_X0_GRID[-1])
        tp = C.twisted_psi_constants_small(log_x0, soz, si, sigma6_soz=anchor)
        ap = C.ap_constants_small(log_x0, tp)
    else:
        soz = C.soz_constants(log_x0)
        tp = C.twisted_psi_constants(log_x0, soz, si)
        ap = C.ap_constants(log_x0, tp)
    return soz, kappa, si, tp, ap


def cmd_constants(args) -> int:
    which = args.which
    fmt = args.format
    x0s = args.log_x0 if args.log_x0 else list(C.LOG_X0_GRID)
    sections = []
    had_error = False

    def emit(title, header, rows):
        body = render_table(header, rows, fmt)
        if fmt == "md":
            sections.append(f"### {title}\n\n{body}")
        else:
            sections.append(body if fmt == "csv" else body)

    if which in ("soz", "all"):
        rows = []
        for lx in x0s:
            try:
                if lx >= C.SMALL_LOG_X0_MIN:
                    s = C.soz_constants_small(lx)
                    rows.append([lx, s.k1, s.k1_t, s.k2, s.k2_t])
                else:
                    s = C.soz_constants(lx)
                    rows.append([lx, s.k1, None, s.k2, None])
            except PntapError as exc:
                rows.append([lx, f"error: {exc}", None, None, None])
                had_error = True
        emit("zero-sum constants", ["log_x0", "k1", "k1_small", "k2", "k2_small"], rows)

    if which in ("short-interval", "all"):
        rows = []
        for lx in x0s:
            if lx not in C.REFERENCE_KAPPA and lx == C.SMALL_LOG_X0_MIN and not args.log_x0:
                continue  # default grid: kappa rows only exist on the round grid
            try:
                kappa = C.kappa_for(lx)
                si = C.short_interval_constants(lx, kappa)
                rows.append([lx, kappa.kappa0, kappa.kappa1, kappa.kappa2, si.k3, si.k4])
            except PntapError as exc:
                rows.append([lx, f"error: {exc}", None, None, None, None])
                had_error = True
        emit("short-interval constants",
             ["log_x0", "kappa0", "kappa1", "kappa2", "k3", "k4"], rows)

    if which in ("twisted", "all"):
        rows = []
        for lx in x0s:
            if not args.log_x0 and (lx == C.SMALL_LOG_X0_MIN
                                    or (args.small and lx < 20.0)):
                continue
            try:
                _, _, _, tp, _ = _chain(lx, args.small, args.self_consistent)
                rows.append([lx, tp.k5, tp.k6, tp.Omega0, tp.Omega1, tp.Omega2])
            except PntapError as exc:
                rows.append([lx, f"error: {exc}", None, None, None, None])
                had_error = True
        title = "twisted-psi constants" + (" (small moduli)" if args.small else "")
        emit(title, ["log_x0", "k5", "k6", "Omega0", "Omega1", "Omega2"], rows)

    if which in ("ap", "all"):
        rows = []
        for lx in x0s:
            if not args.log_x0 and (lx == C.SMALL_LOG_X0_MIN
                                    or (args.small and lx < 20.0)):
                continue
            try:
                _, _, _, _, ap = _chain(lx, args.small, args.self_consistent)
                rows.append([lx, *ap.a])
            except PntapError as exc:
                rows.append([lx, f"error: {exc}", None, None, None, None, None])
                had_error = True
        title = "progression constants" + (" (small moduli)" if args.small else "")
        emit(title, ["log_x0", "a1", "a2", "a3", "a4", "a5", "a6"], rows)

    text = "\n\n".join(sections)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 2 if had_error else 0


def _load_zeros(args, kind="zeta"):
    path = args.zeros or os.environ.get("PNTAP_ZEROS_DIR") and os.path.join(
        os.environ["PNTAP_ZEROS_DIR"], "zeta_zeros.txt")
    if not path or not os.path.exists(path):
        raise PntapError(
            f"missing zeros file (looked for {path!r}); expected format: {ZETA_FORMAT_HINT}"
        )
    label = None
    if kind == "dirichlet" and args.q:
        label = CharacterLabel(q=args.q, index=args.index or 1)
    return load_zero_table(path, kind=kind, label=label)


def cmd_verify(args) -> int:
    suite = args.suite
    if suite == "bpt":
        report = verify_bpt(_load_zeros(args))
    elif suite == "count":
        report = verify_zero_count(_load_zeros(args))
    elif suite == "psi1":
        xs = args.x or [500.0, 1000.0, 5000.0]
        report = verify_psi1_explicit(_load_zeros(args), xs, t_trunc=args.t_trunc)
    elif suite == "short-interval":
        lx = args.log_x0 or 10.0
        si = C.short_interval_constants(lx, C.kappa_for(lx))
        xs = args.x or _log_grid(math.exp(lx), args.x_max or 1e9, 8)
        report = verify_short_interval(si, xs, segment=args.segment)
    elif suite == "ap":
        q, a = args.q or 3, args.a or 1
        lx = args.log_x0 or (C.SMALL_LOG_X0_MIN if args.small else 10.0)
        *_, ap = _chain(lx, args.small, False)
        xs = args.x or _log_grid(max(math.exp(lx), float(q)), args.x_max or 1e9, 8)
        report = verify_ap_bounds(ap, q, a, xs, segment=args.segment)
    elif suite == "lehman":
        report = verify_lehman(_load_zeros(args, kind="dirichlet"))
    elif suite == "gm":
        q = args.q or 3
        lx = args.log_x0 or 10.0
        *_, ap = _chain(lx, args.small, False)
        xs = args.x or _log_grid(max(math.exp(lx), float(q)), args.x_max or 1e9, 8)
        report = compare_gm_baseline(ap, q, xs)
    else:
        raise PntapError(f"unknown suite {suite!r}")

    text = report.to_json() if args.format == "json" else report.to_markdown()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if report.passed else 1


def _log_grid(lo: float, hi: float, n: int) -> list[float]:
    if hi <= lo:
        return [lo]
    return [lo * (hi / lo) ** (i / (n - 1)) for i in range(n)]


def cmd_count(args) -> int:
    c = ap_counts(args.x, args.q, args.a, segment=args.segment)
    print(json.dumps({"x": c.x, "q": c.q, "a": c.a, "pi": c.pi,
                      "theta": c.theta, "psi": c.psi}))
    return 0


def cmd_bound(args) -> int:
    lx = args.log_x0
    if args.kind == "principal":
        rhs = C.evaluate_bounds("principal", args.x, args.q)
        provenance = "principal-character bound"
    else:
        _, kappa, si, tp, ap = _chain(lx, args.small, False)
        consts = tp if args.kind in ("psi_chi", "theta_chi") else ap
        rhs = C.evaluate_bounds(args.kind, args.x, args.q, consts)
        src = "reference kappa row" if lx in C.REFERENCE_KAPPA else "optimized kappa"
        provenance = f"chain at log_x0={lx} ({src}, {'small' if args.small else 'general'} moduli)"
    print(json.dumps({"kind": args.kind, "x": args.x, "q": args.q,
                      "log_x0": lx, "rhs": rhs, "provenance": provenance}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pntap", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("constants", help="render constants tables")
    pc.add_argument("--which", choices=["soz", "short-interval", "twisted", "ap", "all"],
                    default="all")
    pc.add_argument("--log-x0", type=float, action="append")
    pc.add_argument("--small", action="store_true",
                    help="small-moduli chain (q <= 10^4, x0 >= 1.05e7)")
    pc.add_argument("--self-consistent", action="store_true",
                    help="per-row zero-sum record in the small-moduli sigma6 "
                         "instead of the frozen reference anchor")
    pc.add_argument("--format", choices=["md", "csv", "json"], default="md")
    pc.add_argument("--out")
    pc.set_defaults(func=cmd_constants)

    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("suite", choices=["bpt", "count", "psi1", "short-interval",
                                      "ap", "lehman", "gm"])
    pv.add_argument("--zeros", help="zero ordinates file")
    pv.add_argument("--q", type=int)
    pv.add_argument("--a", type=int)
    pv.add_argument("--index", type=int, help="character index for dirichlet tables")
    pv.add_argument("--x", type=float, action="append")
    pv.add_argument("--x-max", type=float)
    pv.add_argument("--t-trunc", type=float)
    pv.add_argument("--log-x0", type=float)
    pv.add_argument("--small", action="store_true")
    pv.add_argument("--segment", type=int, default=1 << 22)
    pv.add_argument("--format", choices=["md", "json"], default="md")
    pv.add_argument("--out")
    pv.set_defaults(func=cmd_verify)

    pn = sub.add_parser("count", help="exact counts at (x; q, a)")
    pn.add_argument("--x", type=float, required=True)
    pn.add_argument("--q", type=int, required=True)
    pn.add_argument("--a", type=int, required=True)
    pn.add_argument("--segment", type=int, default=1 << 22)
    pn.set_defaults(func=cmd_count)

    pb = sub.add_parser("bound", help="evaluate one bound right-hand side")
    pb.add_argument("--kind", choices=list(C.BOUND_KINDS), required=True)
    pb.add_argument("--x", type=float, required=True)
    pb.add_argument("--q", type=int, required=True)
    pb.add_argument("--log-x0", type=float, default=10.0)
    pb.add_argument("--small", action="store_true")
    pb.set_defaults(func=cmd_bound)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PntapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
