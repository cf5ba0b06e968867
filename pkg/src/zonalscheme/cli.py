"""Command-line entry point: ``zonalscheme <command> [options]``.

Exit codes: 0 on success (and a valid certificate), 2 for an invalid
certificate, 1 for domain or resource errors, 64 for usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Callable, Sequence

from . import cache as disk_cache
from .extremal import cross_product_check, max_independent_exact, verify_extremal
from .matchings import (
    PerfectMatching,
    ResourceError,
    cycle_type,
    enumerate_matchings,
    sphere_size,
)
from .partitions import (
    Partition,
    check_t_range,
    classify_fat,
    derangement_count,
    enumerate_partitions,
    hook_dim,
)
from .scheme import ORACLE_CAP, p_table, spherical_oracle
from .spectral import certify, threshold_scan
from .symfunc import (
    RationalMatrix,
    alpha_kostka_matrix,
    format_rational,
    gram_schmidt_jack,
    kostka_matrix,
    perm_char_matrix,
    sym_char_table,
    zonal_character_table,
)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_INVALID = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _dump_json(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _pretty_matrix(m: RationalMatrix) -> str:
    cells = [[""] + [c.pretty() for c in m.col_labels]]
    for label, row in zip(m.row_labels, m.entries):
        cells.append([label.pretty()] + [format_rational(x) for x in row])
    widths = [max(len(r[j]) for r in cells) for j in range(len(cells[0]))]
    return "\n".join("  ".join(x.rjust(w) for x, w in zip(r, widths)) for r in cells) + "\n"


def _emit_matrix(m: RationalMatrix, fmt: str) -> str:
    if fmt == "json":
        return _dump_json(m.to_nested())
    if fmt == "pretty":
        return _pretty_matrix(m)
    return m.to_csv()


def _emit_rows(header: list[str], rows: list[list], fmt: str) -> str:
    if fmt == "json":
        return _dump_json([dict(zip(header, r)) for r in rows])
    if fmt == "pretty":
        cells = [header] + [[str(x) for x in r] for r in rows]
        widths = [max(len(r[j]) for r in cells) for j in range(len(header))]
        return "\n".join("  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip() for r in cells) + "\n"
    quote = lambda x: f'"{x}"' if isinstance(x, str) else str(x).lower() if isinstance(x, bool) else str(x)
    return "\n".join([",".join(header)] + [",".join(quote(x) for x in r) for r in rows]) + "\n"


# --- commands ---------------------------------------------------------------


def cmd_partitions(args) -> tuple[int, str]:
    header = ["partition", "hook_dim_2lambda", "sphere_size"]
    if args.t is not None:
        check_t_range(args.n, args.t)
        header.append("class")
    rows = []
    for p in enumerate_partitions(args.n):
        row = [str(p), hook_dim(p.doubled()), sphere_size(p, args.n)]
        if args.t is not None:
            row.append(str(classify_fat(p, args.n, args.t)))
        rows.append(row)
    return EXIT_OK, _emit_rows(header, rows, args.format)


def cmd_matchings(args) -> tuple[int, str]:
    base = PerfectMatching.identity(args.n)
    rows = [[i, str(m), str(cycle_type(base, m))] for i, m in enumerate(enumerate_matchings(args.n))]
    return EXIT_OK, _emit_rows(["index", "matching", "cycle_type"], rows, args.format)


MATRIX_KINDS: dict[str, Callable] = {
    "perm": lambda n, a: perm_char_matrix(n),
    "kostka": lambda n, a: kostka_matrix(n),
    "alpha-kostka": lambda n, a: alpha_kostka_matrix(n, a),
    "gram-schmidt": lambda n, a: gram_schmidt_jack(n, a),
    "char": lambda n, a: sym_char_table(n),
    "zonal": lambda n, a: zonal_character_table(n),
    "p-table": lambda n, a: p_table(n),
}


def cmd_matrix(args) -> tuple[int, str]:
    if args.n < 1:
        raise ValueError("n must be positive")
    m = MATRIX_KINDS[args.kind](args.n, args.alpha)
    if args.inverse:
        m = m.inverse()
    return EXIT_OK, _emit_matrix(m, args.format)


def cmd_scheme(args) -> tuple[int, str]:
    if args.n < 2:
        raise ValueError("the scheme needs n >= 2")
    table = p_table(args.n)
    if args.emit == "json":
        return EXIT_OK, _dump_json(table.to_nested())
    return EXIT_OK, _emit_matrix(table, args.format)


def cmd_certify(args) -> tuple[int, str]:
    cert = certify(args.n, args.t)
    status = EXIT_OK if cert.valid else EXIT_INVALID
    if args.format == "json":
        return status, _dump_json(cert.to_json())
    if args.format == "csv":
        fat = {str(p) for p in enumerate_partitions(args.n) if classify_fat(p, args.n, args.t).is_fat}
        rows = [
            [str(lam), format_rational(v), format_rational(cert.weights.get(lam, 0)), str(lam) in fat, lam in cert.minimizers]
            for lam, v in cert.eigenvalues.items()
        ]
        return status, _emit_rows(["partition", "eigenvalue", "weight", "fat", "minimizer"], rows, "csv")
    return status, cert.pretty() + "\n"


def cmd_scan(args) -> tuple[int, str]:
    if args.n_min > args.n_max:
        raise ValueError("--n-min exceeds --n-max")
    result = threshold_scan(args.t, range(args.n_min, args.n_max + 1), workers=args.workers)
    if args.format == "json":
        doc = {
            "t": result.t,
            "onset": result.onset,
            "rows": [
                {
                    "n": r.n,
                    "valid": r.valid,
                    "minEig": f"{r.min_eig.numerator}/{r.min_eig.denominator}",
                    "minimizers": [str(p) for p in r.minimizers],
                    "fattestIsZeta": r.fattest_is_zeta,
                }
                for r in result.rows
            ],
        }
        return EXIT_OK, _dump_json(doc)
    return EXIT_OK, result.to_csv()


def cmd_brute(args) -> tuple[int, str]:
    cert = None
    if 2 * args.t < args.n:
        cert = certify(args.n, args.t)
    doc: dict
    if cert is not None and cert.valid and not args.force_brute:
        doc = {
            "n": args.n,
            "t": args.t,
            "optimum": int(cert.hoffman_value),
            "skipped": True,
            "reason": "bound proven by a valid certificate; pass --force-brute to search",
        }
    else:
        result = max_independent_exact(args.n, args.t, allow_large=args.allow_large)
        doc = result.to_json()
        doc["skipped"] = False
        if cert is not None:
            doc["certificateValid"] = cert.valid
            doc["agreesWithCertificate"] = (not cert.valid) or cert.hoffman_value == result.optimum
        if args.extremal:
            _, report = verify_extremal(args.n, args.t, allow_large=args.allow_large)
            doc["extremal"] = report.to_json()
    if args.cross:
        doc["cross"] = cross_product_check(args.n, args.t, seed=args.seed, samples=args.samples).to_json()
    return EXIT_OK, _dump_json(doc)


def cmd_derange(args) -> tuple[int, str]:
    value = derangement_count(args.n, args.t)
    if args.format == "json":
        return EXIT_OK, _dump_json({"n": args.n, "t": args.t, "count": value})
    return EXIT_OK, f"{value}\n"


def cmd_oracle(args) -> tuple[int, str]:
    if args.n > ORACLE_CAP:
        raise ResourceError(f"the spherical oracle is capped at n={ORACLE_CAP}")
    zonal = zonal_character_table(args.n)
    lams = [Partition.parse(args.lam)] if args.lam else list(enumerate_partitions(args.n))
    rhos = [Partition.parse(args.rho)] if args.rho else list(enumerate_partitions(args.n))
    rows, agree = [], True
    for lam in lams:
        for rho in rhos:
            value = spherical_oracle(lam, rho, args.n)
            same = value == zonal[lam, rho]
            agree &= same
            rows.append([str(lam), str(rho), format_rational(value), same])
    out = _emit_rows(["lambda", "rho", "omega", "matches_zonal"], rows, args.format)
    return (EXIT_OK if agree else EXIT_DOMAIN), out


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json", "pretty"], default=None)
    common.add_argument("--cache-dir", default=None, help="disk cache location (default: $ZS_CACHE_DIR)")
    common.add_argument("--no-cache", action="store_true", help="do not read or write the disk cache")
    common.add_argument("--seed", type=int, default=0)

    parser = _Parser(prog="zonalscheme", description="Exact computations in the perfect matching association scheme.")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    def add(name, func, default_format, help_, aliases=()):
        p = sub.add_parser(name, parents=[common], help=help_, aliases=list(aliases))
        p.set_defaults(func=func, default_format=default_format)
        return p

    p = add("partitions", cmd_partitions, "csv", "list partitions of n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int)

    p = add("matchings", cmd_matchings, "csv", "list perfect matchings of K_2n")
    p.add_argument("--n", type=int, required=True)

    p = add("matrix", cmd_matrix, "csv", "emit a transition matrix or table", aliases=("dump-matrix",))
    p.add_argument("--kind", choices=sorted(MATRIX_KINDS), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=_rational, default=Fraction(2))
    p.add_argument("--inverse", action="store_true")

    p = add("scheme", cmd_scheme, "csv", "character table of the matching scheme")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--emit", choices=["p-table", "json"], default="p-table")

    p = add("certify", cmd_certify, "pretty", "ratio-bound certificate at (n, t)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)

    p = add("scan", cmd_scan, "csv", "certificate verdicts over a range of n")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)

    p = add("brute", cmd_brute, "json", "exact maximum t-intersecting family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--force-brute", action="store_true")
    p.add_argument("--allow-large", action="store_true", help="permit the n=5, t=1 search")
    p.add_argument("--extremal", action="store_true", help="also enumerate all maximum families through m*")
    p.add_argument("--cross", action="store_true", help="also run the cross-intersecting product checks")
    p.add_argument("--samples", type=int, default=200)

    p = add("derange", cmd_derange, "pretty", "count t-derangements D_2(n, t)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, default=1)

    p = add("oracle", cmd_oracle, "csv", "spherical functions by group averaging")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--rho")
    return parser


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.format = args.format or args.default_format
    if not args.no_cache:
        disk_cache.install(disk_cache.DiskCache(args.cache_dir))
    try:
        status, text = args.func(args)
    except (ValueError, ArithmeticError, ResourceError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_DOMAIN
    finally:
        disk_cache.install(None)
    out.write(text)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
