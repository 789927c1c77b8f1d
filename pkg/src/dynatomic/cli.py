"""Command-line interface.

Subcommands: poly, classify, fibers, graph, tables.  All heavy artifacts are
cached under --cache-dir (or $DYNATOMIC_CACHE), so repeated invocations are
cheap.  Exit codes: 0 success, 2 budget abort, 3 arithmetic inconsistency.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import bipoly as bp
from . import intpoly as ip
from .cache import WorkspaceConfig, default_cache_dir
from .dynpoly import (
    cached_delta,
    cached_delta_factor,
    cached_phi,
    delta_nn_mod_p,
    discriminant_table,
    psi,
)
from .errors import ArithmeticInconsistencyError, DynatomicError, WorkBudgetError
from .factortab import factor_integer
from .fibers import reduction_table
from .monodromy import build_graph, export_graph, robustness
from .reduction import FactorValuations, candidate_bad_primes, classify_prime


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dynatomic",
        description="invariants and reductions of dynatomic curves of x^m + c",
    )
    ap.add_argument("--cache-dir", default=None, help="artifact cache directory")
    ap.add_argument("--trial-bound", type=int, default=None)
    ap.add_argument("--budget", type=int, default=None, help="work budget")
    ap.add_argument("--format", default=None, choices=["text", "csv", "json", "dot"])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("poly", help="print a dynatomic/multiplier polynomial")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--which", required=True,
                   help="phi | psi | delta | Delta:d | delta_nn_mod:p")

    c = sub.add_parser("classify", help="good/bad reduction per prime")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--m", type=int, default=2)
    c.add_argument("-p", "--primes", type=int, nargs="*", default=[])
    c.add_argument("--auto", action="store_true",
                   help="candidate bad primes plus table divisors")

    f = sub.add_parser("fibers", help="ramification data above c = 0 and c = -2")
    f.add_argument("--rows", nargs="+", help="n:p pairs, e.g. 7:127")

    g = sub.add_parser("graph", help="branch-point graph on necklaces")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--robustness", type=int, default=None, metavar="K",
                   help="check connectivity under all K-subset removals")

    t = sub.add_parser("tables", help="discriminant/resultant factor table")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--m", type=int, default=2)
    return ap


def _config(args) -> WorkspaceConfig:
    kw = {}
    if args.cache_dir:
        kw["cache_dir"] = args.cache_dir
    if args.trial_bound:
        kw["trial_bound"] = args.trial_bound
    if args.budget:
        kw["work_budget"] = args.budget
    if args.format:
        kw["output_format"] = args.format
    return WorkspaceConfig(**kw)


def cmd_poly(args, config: WorkspaceConfig) -> str:
    which = args.which
    if which == "phi":
        return bp.pretty(cached_phi(args.n, args.m, config)) + "\n"
    if which == "psi":
        return bp.pretty(psi(args.n, args.m)) + "\n"
    if which == "delta":
        return bp.pretty(cached_delta(args.n, args.m, config), xvar="t") + "\n"
    if which.startswith("Delta:"):
        d = int(which.split(":", 1)[1])
        poly = cached_delta_factor(args.n, d, args.m, config)
        return f"c: {ip.pretty(poly)}  (degree {ip.deg(poly)})\n"
    if which.startswith("delta_nn_mod:"):
        p = int(which.split(":", 1)[1])
        poly = delta_nn_mod_p(args.n, args.m, p, config=config)
        return ip.to_text(poly, "c") + "\n"
    raise DynatomicError(f"unknown polynomial selector {which!r}")


def cmd_classify(args, config: WorkspaceConfig) -> str:
    primes = sorted(set(args.primes))
    complete = True
    if args.auto:
        found, complete = candidate_bad_primes(args.n, args.m, config)
        primes = sorted(set(primes) | found | _table_divisor_primes(args, config))
    vals = FactorValuations(args.n, args.m, config)
    rows = []
    for p in primes:
        res = classify_prime(args.n, args.m, p, config=config, vals=vals)
        for curve in ("Y0", "Y1"):
            r = res[curve]
            rows.append(
                {
                    "n": args.n,
                    "m": args.m,
                    "p": p,
                    "curve": curve,
                    "reduction": r.reduction,
                    "irreducibility": r.irreducibility,
                    "rules": ";".join(rule for rule, _ in r.rules_fired),
                    "rule_data": {rule: data for rule, data in r.rules_fired},
                }
            )
    fmt = config.output_format
    if fmt == "json":
        return json.dumps({"rows": rows, "complete": complete},
                          sort_keys=True, default=str) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["n", "m", "p", "curve", "reduction", "irreducibility", "rules"])
    for r in rows:
        w.writerow([r["n"], r["m"], r["p"], r["curve"], r["reduction"],
                    r["irreducibility"], r["rules"]])
    return buf.getvalue()


def _table_divisor_primes(args, config) -> set[int]:
    if args.n * args.n * 4 > config.work_budget * 4:
        # keep --auto usable beyond the char-0 range: skip table primes
        pass
    try:
        table = discriminant_table(args.n, args.m, config=config)
    except WorkBudgetError:
        return set()
    out: set[int] = set()
    for tab in table.entries.values():
        out.update(q for q in tab.prime_set() if q % 2 and q > 2)
    return out


def cmd_fibers(args, config: WorkspaceConfig) -> str:
    rows = []
    for item in args.rows:
        n_str, p_str = item.split(":")
        rows.append((int(n_str), int(p_str)))
    recs = reduction_table(rows, config=config)
    fmt = config.output_format
    if fmt == "json":
        return json.dumps(recs, sort_keys=True, default=str) + "\n"
    buf = io.StringIO()
    cols = ["n", "p", "rho_0", "rho_bar_0", "e_0", "tame_0",
            "rho_-2", "rho_bar_-2", "e_-2", "tame_-2",
            "other_singularity", "verdict"]
    w = csv.writer(buf)
    w.writerow(cols)
    for r in recs:
        if "error" in r:
            w.writerow([r["n"], r["p"], "error", r["error"]])
            continue
        w.writerow([r.get(c, "") for c in cols])
    return buf.getvalue()


def cmd_graph(args, config: WorkspaceConfig) -> str:
    g = build_graph(args.n)
    out = ""
    fmt = config.output_format or "dot"
    if fmt in ("dot", "text", None):
        out += export_graph(g, "dot")
    elif fmt == "json":
        out += export_graph(g, "json")
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["kind", "a", "b", "kneading", "multiplicity"])
        for e in g.finite_edges + g.infinite_edges:
            w.writerow([e.kind, e.endpoints[0], e.endpoints[1],
                        e.kneading or "", e.multiplicity])
        out += buf.getvalue()
    if args.robustness:
        ok, witness = robustness(args.n, args.robustness)
        if ok:
            out += (f"connected under all {args.robustness}-removals of "
                    "finite edges\n")
        else:
            out += f"disconnected by removing {witness}\n"
    return out


def cmd_tables(args, config: WorkspaceConfig) -> str:
    table = discriminant_table(args.n, args.m, config=config)
    fmt = config.output_format
    if fmt == "json":
        payload = {
            f"({e},{d})": tab.as_dict() for (e, d), tab in table.entries.items()
        }
        return json.dumps(payload, sort_keys=True) + "\n"
    buf = io.StringIO()
    if fmt == "csv":
        w = csv.writer(buf)
        w.writerow(["e", "d", "factorization"])
        for (e, d), tab in sorted(table.entries.items()):
            w.writerow([e, d, str(tab)])
    else:
        for (e, d), tab in sorted(table.entries.items()):
            buf.write(f"({e},{d})  {tab}\n")
    return buf.getvalue()


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        config = _config(args)
        handler = {
            "poly": cmd_poly,
            "classify": cmd_classify,
            "fibers": cmd_fibers,
            "graph": cmd_graph,
            "tables": cmd_tables,
        }[args.command]
        sys.stdout.write(handler(args, config))
        return 0
    except WorkBudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 2
    except ArithmeticInconsistencyError as exc:
        print(f"arithmetic inconsistency: {exc}", file=sys.stderr)
        return 3
    except DynatomicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
