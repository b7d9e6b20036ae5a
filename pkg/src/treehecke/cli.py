"""Command line front end.

Exit codes: 0 success, 1 a verified identity failed, 2 bad usage, 3 a
resource bound was exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Sequence

from . import __version__
from .combinatorics import IDENTITIES, identity_sweep
from .errors import TreeHeckeError, UsageError, VerificationFailure
from .generation import completion_check, equation_system, generation_verdict, rank_check, subbase
from .permgroup import DEFAULT_GROUP_BOUND, analyze, closure, label_consistency_check, parse_generators, suborbit_table
from .tree import DEFAULT_ENUMERATION_BOUND, build_structure_table, cache_path, convolve_oracle, load_or_build, orbit_count, table_diagnostics
from .words import format_word, parse_word


class CheckFailed(VerificationFailure):
    """Raised after the report is printed, so the exit code reflects it."""


def _emit(report, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        print(_render(report))


def _render(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for key in sorted(obj):
            val = obj[key]
            if isinstance(val, (dict, list)) and val and not _flat_list(val):
                lines.append(f"{pad}{key}:")
                lines.append(_render(val, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar(val)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        if obj and all(isinstance(x, dict) for x in obj):
            cols = sorted({c for row in obj for c in row})
            cells = [[_scalar(row.get(c, "")) for c in cols] for row in obj]
            widths = [max(len(c), *(len(r[i]) for r in cells)) for i, c in enumerate(cols)]
            out = [pad + "  ".join(c.ljust(w) for c, w in zip(cols, widths))]
            out += [pad + "  ".join(v.ljust(w) for v, w in zip(r, widths)) for r in cells]
            return "\n".join(out)
        return "\n".join(pad + _scalar(x) for x in obj)
    return pad + _scalar(obj)


def _flat_list(val) -> bool:
    return isinstance(val, list) and all(not isinstance(x, (dict, list)) for x in val)


def _scalar(val) -> str:
    if isinstance(val, bool):
        return "true" if val else "false"
    if isinstance(val, list):
        return "[" + ", ".join(_scalar(x) for x in val) + "]"
    if val is None:
        return "-"
    return str(val)


def _group(args):
    if args.d is None or args.g is None:
        raise UsageError("this command needs -d DEGREE and -g GENERATORS")
    gens = parse_generators(args.g, args.d)
    return closure(args.d, gens, bound=args.group_bound)


def _table(args):
    group = _group(args)
    info = analyze(group)
    if info.transitive and not info.primitive:
        print("warning: the group is transitive but not primitive", file=sys.stderr)
    return suborbit_table(group)


def cmd_group_analyze(args) -> dict:
    group = _group(args)
    info = analyze(group)
    report = {
        "order": info.order,
        "transitive": info.transitive,
        "primitive": info.primitive,
        "two_transitive": info.two_transitive,
        "k": None,
        "sizes": None,
    }
    if info.transitive:
        table = suborbit_table(group)
        report["k"] = table.k
        report["sizes"] = list(table.sizes)
        if args.verbose:
            report["suborbits"] = [list(o) for o in table.suborbits]
            report["labels_consistent"] = label_consistency_check(table)
        if not info.primitive:
            print("warning: the group is transitive but not primitive", file=sys.stderr)
    return report


def cmd_cosets_count(args) -> dict:
    table = _table(args)
    count = orbit_count(table, args.r, method=args.method, bound=args.bound)
    expected = table.k ** (2 * args.r - 1)
    report = {"r": args.r, "k": table.k, "method": args.method, "count": count, "expected": expected}
    if count != expected:
        raise CheckFailed(f"coset count {count} differs from k^(2r-1) = {expected}", report)
    return report


def cmd_orbits_verify(args) -> dict:
    table = _table(args)
    rows = []
    ok = True
    for r in range(1, args.r + 1):
        bfs = orbit_count(table, r, method="bfs", bound=args.bound)
        prof = orbit_count(table, r, method="profile", bound=args.bound)
        expected = table.k ** (2 * r - 1)
        agree = bfs == prof == expected
        ok = ok and agree
        rows.append({"r": r, "bfs": bfs, "profile": prof, "expected": expected, "agree": agree})
    report = {"k": table.k, "levels": rows, "all_agree": ok}
    if not ok:
        raise CheckFailed("orbit counts disagree", report)
    return report


def cmd_identities_check(args) -> dict:
    names = sorted(IDENTITIES) if args.lemma == "all" else [args.lemma]
    report = {}
    failed = []
    for name in names:
        results = identity_sweep(name, rmax=args.rmax, kmax=args.kmax)
        bad = [r.to_json() for r in results if not r.holds]
        report[name] = {"statement": IDENTITIES[name], "checked": len(results), "failed": len(bad), "failures": bad}
        if bad:
            failed.append(name)
    report = {"identities": report, "all_pass": not failed}
    if failed:
        raise CheckFailed(f"identity violated: {', '.join(IDENTITIES[n] for n in failed)}", report)
    return report


def cmd_convolve(args) -> dict:
    table = _table(args)
    u, v = parse_word(args.u), parse_word(args.v)
    terms = convolve_oracle(u, v, table, bound=args.bound, check_realization=args.check_realization)
    return {
        "u": format_word(u),
        "v": format_word(v),
        "terms": [{"word": format_word(w), "coefficient": c} for w, c in terms.items()],
    }


def cmd_table_build(args) -> dict:
    table = _table(args)
    if args.no_cache:
        sct = build_structure_table(table, args.cap, bound=args.bound, threads=args.threads)
        path = None
    else:
        sct = load_or_build(table, args.cap, cache_dir=args.cache, bound=args.bound, threads=args.threads)
        path = str(cache_path(table, args.cap, args.cache))
    failures = table_diagnostics(sct, table)
    report = {"header": sct.header(), "rows": len(sct.rows), "cache": path, "diagnostic_failures": failures}
    if failures:
        raise CheckFailed(f"{len(failures)} structure-table rows violate the product rules", report)
    return report


def cmd_subbase(args) -> dict:
    sub = subbase(args.k, args.r)
    report = {"k": args.k, "r": args.r, "size": len(sub)}
    if args.verbose:
        report["words"] = [format_word(w) for w in sub.words]
    return report


def cmd_rank(args) -> dict:
    if args.skeleton is not None:
        skel = parse_word(args.skeleton)
        system = equation_system(skel, subbase(args.k, max(len(skel) - 1, 1)))
        rep = rank_check(system).to_json()
        rep.update({"k": args.k, "skeleton": format_word(skel), "equations": [str(e) for e in system.equations]})
        if args.verbose:
            rep["matrix"] = system.matrix()
        if not rep["weakly_independent"]:
            raise CheckFailed("equation system is weakly dependent", rep)
        return rep
    report = completion_check(args.k, args.t).to_json(with_elements=args.verbose)
    if not report["weakly_independent"]:
        raise CheckFailed("some equation system is weakly dependent", report)
    return report


def cmd_verdict(args) -> dict:
    return generation_verdict(args.k, args.R).to_json()


def _add_group_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("-d", type=int, help="degree of the permutation group")
    p.add_argument("-g", help='generators, e.g. "(1 2 3 4 5),(2 5)(3 4)" or "2,3,4,5,1;1,5,4,3,2"')
    p.add_argument("--group-bound", type=int, default=DEFAULT_GROUP_BOUND, help="largest group order to enumerate")


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--bound", type=_positive, default=DEFAULT_ENUMERATION_BOUND, help="enumeration bound")
    common.add_argument("--threads", type=_positive, default=1)
    common.add_argument("--cache", help="cache directory (default: $TREEHECKE_CACHE_DIR or ~/.cache/treehecke)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="treehecke", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    group = sub.add_parser("group", help="permutation group data").add_subparsers(dest="action", required=True)
    p = group.add_parser("analyze", parents=[common], help="transitivity, primitivity and suborbits")
    _add_group_args(p)
    p.set_defaults(func=cmd_group_analyze)

    cosets = sub.add_parser("cosets", help="double coset counts").add_subparsers(dest="action", required=True)
    p = cosets.add_parser("count", parents=[common], help="count double cosets of degree 2r")
    _add_group_args(p)
    p.add_argument("-r", type=_positive, required=True)
    p.add_argument("--method", choices=("profile", "bfs"), default="profile")
    p.set_defaults(func=cmd_cosets_count)

    orbits = sub.add_parser("orbits", help="orbit counting cross-checks").add_subparsers(dest="action", required=True)
    p = orbits.add_parser("verify", parents=[common], help="compare BFS and profile orbit counts for r = 1..R")
    _add_group_args(p)
    p.add_argument("-r", type=_positive, required=True)
    p.set_defaults(func=cmd_orbits_verify)

    ident = sub.add_parser("identities", help="combinatorial identities").add_subparsers(dest="action", required=True)
    p = ident.add_parser("check", parents=[common], help="sweep identities exactly")
    p.add_argument("--lemma", choices=(*sorted(IDENTITIES), "all"), default="all")
    p.add_argument("--rmax", type=_positive, default=12)
    p.add_argument("--kmax", type=_positive, default=8)
    p.set_defaults(func=cmd_identities_check)

    p = sub.add_parser("convolve", parents=[common], help="oracle structure constants of one product")
    _add_group_args(p)
    p.add_argument("u", help='first word, e.g. "1,2,1"; "" or "e" for the unit')
    p.add_argument("v", help="second word")
    p.add_argument("--check-realization", action="store_true", help="recount with a second realization")
    p.set_defaults(func=cmd_convolve)

    table = sub.add_parser("table", help="structure constant tables").add_subparsers(dest="action", required=True)
    p = table.add_parser("build", parents=[common], help="build or load a cached structure table")
    _add_group_args(p)
    p.add_argument("--cap", type=int, required=True, help="even degree cap")
    p.add_argument("--no-cache", action="store_true")
    p.set_defaults(func=cmd_table_build)

    p = sub.add_parser("subbase", parents=[common], help="canonical sub-base of degree <= 2r")
    p.add_argument("-k", type=_positive, required=True)
    p.add_argument("-r", type=_positive, required=True)
    p.set_defaults(func=cmd_subbase)

    p = sub.add_parser("rank", parents=[common], help="rank and completion of degree-2t equation systems")
    p.add_argument("-k", type=_positive, required=True)
    p.add_argument("-t", type=int, default=2)
    p.add_argument("--skeleton", help="a single skeleton, e.g. 1,1,1")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("verdict", parents=[common], help="finite or strictly growing generation up to degree R")
    p.add_argument("-k", type=_positive, required=True)
    p.add_argument("-R", type=int, required=True)
    p.set_defaults(func=cmd_verdict)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        report = args.func(args)
    except CheckFailed as exc:
        message, report = exc.args
        _emit(report, args.format)
        print(f"error: {message}", file=sys.stderr)
        return exc.exit_code
    except TreeHeckeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    _emit(report, args.format)
    return 0


if __name__ == "__main__":
    sys.exit(main())
