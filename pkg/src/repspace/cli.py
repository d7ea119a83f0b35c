"""Command-line front end.

Five commands, one job each:

* ``homology DESCRIPTOR``     homology of a catalog space (cacheable);
* ``counts --n N``            the closed-form counting values at rank N;
* ``verify SUITE``            run one named verification suite;
* ``catalog GROUP --n N``     the n-th stable factor for a rank-one group;
* ``su2 verify-psi``          randomized construction sweep, JSON report.

Exit codes: 0 success, 1 a verification reported a failure, 2 bad
usage or unsupported input, 3 a resource guard refused the size.
Output is deterministic for a fixed seed, in markdown (default), json
or csv.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import catalog, verifier
from .counting import (
    a_count,
    c_count,
    d_count,
    k_count,
    n_central_product,
    n_lower_bound_su2,
)
from .engine import cached_homology
from .errors import NotPrime, ResourceGuard, UnknownSpace, Unsupported

FORMATS = ("markdown", "json", "csv")


def _table(headers, rows, fmt, caption=None):
    """Render one table of pre-stringified rows to stdout."""
    if fmt == "csv":
        w = csv.writer(sys.stdout)
        w.writerow(headers)
        w.writerows(rows)
        return
    if caption:
        print(caption)
        print()
    print("| " + " | ".join(headers) + " |")
    print("|" + "|".join(" --- " for _ in headers) + "|")
    for r in rows:
        print("| " + " | ".join(str(c) for c in r) + " |")


def cmd_homology(args) -> int:
    canonical = catalog.canonical_descriptor(args.descriptor)
    g = cached_homology(args.descriptor, cache_dir=args.cache_dir)
    if args.fmt == "json":
        print(
            json.dumps(
                {"space": canonical, "homology": g.to_json()}, indent=2
            )
        )
        return 0
    rows = [(k, str(g[k])) for k in range(max(g.top, 0) + 1)]
    _table(("degree", "group"), rows, args.fmt, caption=f"space: {canonical}")
    return 0


def cmd_counts(args) -> int:
    n = args.n
    if n < 1:
        raise ValueError("counts need n >= 1")
    rows = [
        ("A", a_count(n)),
        ("C", c_count(n)),
        ("D", d_count(n)),
        ("K", k_count(n)),
        ("su2_lower_bound", n_lower_bound_su2(n)),
    ]
    if n >= 2:
        rows.append(("N(n,1,2)", n_central_product(n, 1, 2)))
        rows.append(("N(n,2,2)", n_central_product(n, 2, 2)))
    if args.fmt == "json":
        print(json.dumps({"n": n, "counts": dict(rows)}, indent=2))
        return 0
    _table(("count", "value"), rows, args.fmt, caption=f"n = {n}")
    return 0


def _verify_reports(args) -> list:
    """Suite reports, narrowed by --n / --m when those make sense."""
    if args.suite == "splitting" and args.n is not None:
        m = args.m if args.m is not None else 2
        reports = []
        for family, limit in verifier.FAMILY_LIMITS.items():
            if args.n <= limit:
                reports.append(
                    verifier.verify_splitting(
                        family, args.n, m if family == "sp_circle" else 2
                    )
                )
        if not reports:
            raise ResourceGuard(f"no family supports n={args.n}")
        return reports
    if args.suite == "homology-prop" and args.n is not None:
        return [verifier.check_homology_prop(args.n)]
    if args.suite == "rep-u" and args.m is not None:
        return [verifier.check_rep_u_cohomology(args.m)]
    if args.suite == "rep-sp" and args.m is not None:
        return [verifier.check_rep_sp(2, args.m)]
    return verifier.run_suite(args.suite, jobs=args.jobs, seed=args.seed)


def cmd_verify(args) -> int:
    reports = _verify_reports(args)
    if args.fmt == "json":
        print(json.dumps([r.to_json() for r in reports], indent=2))
    elif args.fmt == "csv":
        w = csv.writer(sys.stdout)
        w.writerow(("report", "item", "expected", "got", "ok"))
        for r in reports:
            for row in r.rows:
                w.writerow(
                    (r.name, row["item"], row["expected"], row["got"], row["ok"])
                )
    else:
        for r in reports:
            print(r.render())
            print()
    return 0 if all(r.ok for r in reports) else 1


def cmd_catalog(args) -> int:
    desc, h = verifier.rank_one_catalog(args.group, args.n)
    if args.fmt == "json":
        print(
            json.dumps(
                {
                    "group": args.group,
                    "n": args.n,
                    "factor": desc,
                    "reduced_homology": h.to_json(),
                },
                indent=2,
            )
        )
        return 0
    rows = [(k, str(h[k])) for k in range(max(h.top, 0) + 1)]
    _table(
        ("degree", "reduced group"),
        rows,
        args.fmt,
        caption=f"{args.group}, n={args.n}: {desc}",
    )
    return 0


def cmd_su2(args) -> int:
    # Always JSON: this subcommand is a machine-readable probe.
    out = verifier.psi_sweep(args.n, args.runs, args.seed)
    print(json.dumps(out, indent=2))
    return 0 if out["failures"] == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument(
        "--format",
        dest="format_late",
        choices=FORMATS,
        default=None,
        help="output format (default: markdown)",
    )
    p = argparse.ArgumentParser(
        prog="repspace",
        description="Exact homology engine for commuting-variety splittings.",
    )
    p.add_argument("--format", choices=FORMATS, default=None)
    sub = p.add_subparsers(dest="command", required=True)

    h = sub.add_parser(
        "homology", parents=[fmt], help="homology of a catalog space"
    )
    h.add_argument("descriptor", help='e.g. "torus_conj_quotient(n=3)"')
    h.add_argument("--cache-dir", default=None, help="cache root (else $REPSPACE_CACHE)")
    h.set_defaults(func=cmd_homology)

    c = sub.add_parser("counts", parents=[fmt], help="closed-form counts at rank n")
    c.add_argument("--n", type=int, required=True)
    c.set_defaults(func=cmd_counts)

    v = sub.add_parser("verify", parents=[fmt], help="run a verification suite")
    v.add_argument("suite", choices=verifier.SUITES)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--n", type=int, default=None, help="narrow to one rank")
    v.add_argument("--m", type=int, default=None, help="narrow to one power")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser(
        "catalog", parents=[fmt], help="stable factor of a rank-one group"
    )
    g.add_argument("group", choices=verifier.RANK_ONE_GROUPS)
    g.add_argument("--n", type=int, required=True)
    g.set_defaults(func=cmd_catalog)

    s = sub.add_parser("su2", parents=[fmt], help="numerical SU(2) probes")
    s.add_argument("action", choices=("verify-psi",))
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--runs", type=int, default=1000)
    s.add_argument("--seed", type=int, default=42)
    s.set_defaults(func=cmd_su2)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return 0 if err.code in (0, None) else 2
    args.fmt = args.format_late or args.format or "markdown"
    try:
        return args.func(args)
    except (UnknownSpace, Unsupported, NotPrime, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except ResourceGuard as err:
        print(f"resource guard: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
