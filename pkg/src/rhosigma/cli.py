"""Command-line front end.

Exit status: 0 on success, 1 when ``analyze`` finds a proved theorem violated
(a self-test failure), 2 on usage or parameter errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import lie_tori, pisearch
from .arith import zsigmondy
from .errors import ParameterError, TooLargeError
from .product import GroupSpec, analyze, spec_from_json, spec_from_qs
from .psl2 import make_psl2

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rhosigma",
        description="Character-degree prime sets of PSL(2,q) products and the rho-sigma bounds.")
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p: argparse.ArgumentParser, choices=("text", "json")) -> None:
        p.add_argument("--format", dest="output_format", choices=choices, default="text")

    p = sub.add_parser("cd", help="degree set of PSL(2,q) with prime profiles")
    p.add_argument("q", type=int)
    fmt(p)

    p = sub.add_parser("analyze", help="rho, sigma and bound verdicts for a product")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--pi", type=_int_list, help="comma-separated q values, one PSL(2,q) each")
    src.add_argument("--input", dest="input_path", help="JSON group spec file ('-' for stdin)")
    p.add_argument("--trivial-fitting", action="store_true",
                   help="declare trivial Fitting subgroup (raw-degree specs only)")
    p.add_argument("--solvable", action="store_true", help="declare solvable (raw-degree specs only)")
    fmt(p)

    for name, help_text in (("admissible", "list admissible q <= limit"),
                            ("search", "compatible family among admissible q <= limit"),
                            ("ratio", "|rho|/sigma along the greedy family")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--limit", type=int, required=True)
        p.add_argument("--include-powers", action="store_true")
        if name == "search":
            p.add_argument("--mode", choices=("greedy", "exact"), default="greedy")
        if name == "ratio":
            p.add_argument("--verify-cap", type=int, default=pisearch.DEFAULT_VERIFY_CAP)
            fmt(p, ("text", "csv", "json"))
        else:
            fmt(p)

    p = sub.add_parser("tori", help="evaluate or verify the two-tori table")
    p.add_argument("family", nargs="?")
    p.add_argument("--n", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--q-list", type=_int_list, default=[2, 3, 4, 5, 7, 8, 9])
    p.add_argument("--rank-cap", type=int, default=8)
    fmt(p)

    p = sub.add_parser("zsigmondy", help="smallest primitive prime divisor of q^n - 1")
    p.add_argument("q", type=int)
    p.add_argument("n", type=int)
    fmt(p)
    return parser


# ---------------------------
# Commands
# ---------------------------

def _cmd_cd(args) -> tuple[int, str]:
    factor = make_psl2(args.q)
    if args.output_format == "json":
        return EXIT_OK, json.dumps({
            "q": factor.q, "p": factor.p, "f": factor.f, "epsilon": factor.epsilon,
            "degrees": list(factor.degrees),
            "profiles": {str(d): list(factor.profiles[d]) for d in factor.degrees}})
    lines = [" ".join(map(str, factor.degrees))]
    for d in factor.degrees:
        lines.append(f"{d}: {{{', '.join(map(str, factor.profiles[d]))}}}")
    return EXIT_OK, "\n".join(lines)


def _load_spec(args) -> GroupSpec:
    if args.pi is not None:
        return spec_from_qs(args.pi)
    if args.input_path == "-":
        obj = json.load(sys.stdin)
    else:
        with open(args.input_path) as fh:
            obj = json.load(fh)
    spec = spec_from_json(obj)
    if args.trivial_fitting or args.solvable:
        spec = GroupSpec(spec.factors,
                         spec.trivial_fitting or args.trivial_fitting or None,
                         spec.solvable or args.solvable or None)
    return spec


def _cmd_analyze(args) -> tuple[int, str]:
    report = analyze(_load_spec(args))
    text = json.dumps(report.to_json()) if args.output_format == "json" else report.to_text()
    status = EXIT_VIOLATION if report.theorem_violations else EXIT_OK
    return status, text


def _family_out(family, output_format: str) -> str:
    if output_format == "json":
        return json.dumps([a.to_json() for a in family])
    return "\n".join(f"{a.q} p={a.p} f={a.f} r={a.r} s={a.s}" for a in family)


def _cmd_admissible(args) -> tuple[int, str]:
    nodes = pisearch.enumerate_admissible(args.limit, args.include_powers)
    return EXIT_OK, _family_out(nodes, args.output_format)


def _cmd_search(args) -> tuple[int, str]:
    nodes = pisearch.enumerate_admissible(args.limit, args.include_powers)
    family = pisearch.max_compatible_family(nodes, args.mode)
    return EXIT_OK, _family_out(family, args.output_format)


def _cmd_ratio(args) -> tuple[int, str]:
    rows = pisearch.ratio_curve(args.limit, args.include_powers, args.verify_cap)
    if args.output_format == "json":
        return EXIT_OK, json.dumps([
            {"n": r.n, "q": r.q, "rho": r.rho, "sigma": r.sigma, "ratio": round(r.ratio, 6),
             "verified": r.verified} for r in rows])
    return EXIT_OK, pisearch.ratio_csv(rows).rstrip("\n")


def _cmd_tori(args) -> tuple[int, str]:
    if args.verify:
        report = lie_tori.verify_table(args.q_list, args.rank_cap)
        if args.output_format == "json":
            return EXIT_OK, json.dumps(report.to_json())
        lines = [f"rows={len(report.rows)} violations={len(report.violations)} "
                 f"zsigmondy_failures={len(report.zsigmondy_failures)}"]
        for row, which in report.violations:
            lines.append(f"VIOLATION {row.family} n={row.n} q={row.q} torus {which}")
        return EXIT_OK, "\n".join(lines)
    if args.family is None or args.q is None:
        raise ParameterError("tori needs FAMILY and --q, or --verify")
    rows = lie_tori.tori_row(args.family, args.n, args.q)
    if args.output_format == "json":
        return EXIT_OK, json.dumps([r.to_json() for r in rows])
    lines = []
    for r in rows:
        sign = "" if r.sign is None else (" (+)" if r.sign > 0 else " (-)")
        lines.append(f"{r.family}{sign} n={r.n} q={r.q} t1={r.t1} t2={r.t2} "
                     f"l{r.l1_index}={r.l1} l{r.l2_index}={r.l2}")
    return EXIT_OK, "\n".join(lines)


def _cmd_zsigmondy(args) -> tuple[int, str]:
    ell = zsigmondy(args.q, args.n)
    if args.output_format == "json":
        return EXIT_OK, json.dumps({"q": args.q, "n": args.n, "prime": ell})
    return EXIT_OK, "none" if ell is None else str(ell)


COMMANDS = {
    "cd": _cmd_cd,
    "analyze": _cmd_analyze,
    "admissible": _cmd_admissible,
    "search": _cmd_search,
    "ratio": _cmd_ratio,
    "tori": _cmd_tori,
    "zsigmondy": _cmd_zsigmondy,
}


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        status, text = COMMANDS[args.command](args)
    except (ParameterError, TooLargeError, OSError, json.JSONDecodeError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(text, file=out)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
