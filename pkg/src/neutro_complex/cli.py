import argparse
import csv
import io
import json
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any, NoReturn

from . import strategies
from .carriers import (
    CarrierDesc,
    ElementParseError,
    Family,
    NCAlgebraError,
    NCElement,
    make_carrier,
    parse,
    render,
    verify_multiplication_table,
)
from .config import (
    DEFAULT_ROOT_BOUND,
    MAX_IDEAL_PRODUCTS,
    MAX_SCAN_ORDER,
    MAX_SCAN_PRODUCTS,
    MAX_TABLE_ORDER,
    Budgets,
)
from .linalg import Closure, closure_check, eigen_search, eigen_to_json
from .matrices import (
    Matrix,
    check_matrix_ideal,
    mat_add,
    mat_det,
    mat_inverse,
    mat_mul,
    mat_sub,
    matrix_from_json,
    matrix_to_csv,
    matrix_to_json,
    parse_grid,
    transpose,
)
from .polynomials import (
    Poly,
    parse_poly,
    poly_add,
    poly_divmod,
    poly_eval,
    poly_from_json,
    poly_gcd,
    poly_is_irreducible,
    poly_mul,
    poly_roots,
    poly_sub,
    poly_to_json,
)
from .scan import Side, cayley_grid, is_field, scan

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2

type Payload = dict[str, Any]


class UsageError(Exception):
    """Raised for invalid command-line input detected after argument parsing."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common_flags(default_format: str = "json") -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", choices=[f.value for f in Family], default=Family.MOD_COMPLEX.value)
    common.add_argument("--modulus", type=int, help="Modulus n; omitted for the exact family.")
    common.add_argument("--format", choices=["json", "csv", "text"], default=default_format)
    common.add_argument("--out", type=Path, help="Write the result here instead of stdout.")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1, help="Worker processes for pair scans.")
    common.add_argument("--max-order", type=int, default=MAX_SCAN_ORDER)
    common.add_argument("--max-products", type=int, help="Product budget; the default depends on the command.")
    common.add_argument("-v", "--verbose", action="count", default=0)
    return common


def _random_flags() -> argparse.ArgumentParser:
    sampling = argparse.ArgumentParser(add_help=False)
    sampling.add_argument("--count", type=int, default=1, help="How many random values to draw.")
    sampling.add_argument("--distinct", action="store_true", help="Reject draws equal to an earlier one.")
    return sampling


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="neutro-complex", description="Neutrosophic complex number algebra")
    commands = parser.add_subparsers(dest="command", required=True)

    table = commands.add_parser("table", parents=[_common_flags("csv")], help="Cayley table of a finite carrier.")
    table.add_argument("--op", choices=["add", "mul"], default="mul")
    table.set_defaults(handler=cmd_table)

    scan_parser = commands.add_parser("scan", parents=[_common_flags()], help="Structural scan of a finite carrier.")
    scan_parser.set_defaults(handler=cmd_scan)

    classify = commands.add_parser("classify", parents=[_common_flags("text")], help="Field or zero-divisor verdict.")
    classify.set_defaults(handler=cmd_classify)

    mat = commands.add_parser("mat", parents=[_common_flags(), _random_flags()], help="Matrix operations.")
    mat.add_argument("action", choices=["add", "sub", "mul", "det", "inverse", "transpose", "ideal", "random"])
    mat.add_argument("--a", help='Inline grid "a,b;c,d" or @file.json.')
    mat.add_argument("--b", help='Inline grid "a,b;c,d" or @file.json.')
    mat.add_argument("--rows", type=int, default=2)
    mat.add_argument("--cols", type=int, default=2)
    mat.add_argument("--mask", help='Ideal support pattern, e.g. "1,0;1,0".')
    mat.add_argument("--side", choices=[s.value for s in Side], default=Side.TWO_SIDED.value)
    mat.set_defaults(handler=cmd_mat)

    poly = commands.add_parser("poly", parents=[_common_flags(), _random_flags()], help="Polynomial operations.")
    poly.add_argument(
        "action", choices=["add", "sub", "mul", "divmod", "eval", "roots", "irreducible", "gcd", "random"]
    )
    poly.add_argument("--p", help='Polynomial such as "(2+iF) + x^2" or @file.json.')
    poly.add_argument("--q", help="Second polynomial.")
    poly.add_argument("--x", help="Element to evaluate at.")
    poly.add_argument("--bound", type=int, default=DEFAULT_ROOT_BOUND, help="Exact root search bound.")
    poly.add_argument("--gaussian", action="store_true", help="Search a+bi candidates over the exact carrier.")
    poly.add_argument("--max-degree", type=int, default=4)
    poly.set_defaults(handler=cmd_poly)

    eigen = commands.add_parser("eigen", parents=[_common_flags()], help="Eigenvalue search.")
    eigen.add_argument("--a", required=True, help='Square grid "a,b;c,d" or @file.json.')
    eigen.add_argument(
        "--search-family",
        choices=[f.value for f in Family if f != Family.EXACT],
        help="Carrier to search for values; defaults to the matrix carrier.",
    )
    eigen.set_defaults(handler=cmd_eigen)

    closure = commands.add_parser("closure", parents=[_common_flags()], help="Set vector space closure check.")
    closure.add_argument("--members", required=True, help='Comma-separated elements, e.g. "0,I", or @file.json.')
    closure.add_argument("--scalars", required=True, help="Comma-separated elements or @file.json.")
    closure.add_argument("--scalar-family", choices=[f.value for f in Family], help="Carrier of the scalars.")
    closure.add_argument("--flags", default="scalar,add,mul")
    closure.set_defaults(handler=cmd_closure)
    return parser


def _carrier(args: argparse.Namespace, family: str | None = None) -> CarrierDesc:
    family = family or args.family
    if family == Family.EXACT:
        if args.modulus is not None:
            raise UsageError("--modulus is not accepted for the exact family")
        return make_carrier(family)
    if args.modulus is None:
        raise UsageError(f"--modulus is required for family {family}")
    return make_carrier(family, args.modulus)


def _require(value: str | None, flag: str) -> str:
    if value is None:
        raise UsageError(f"{flag} is required for this action")
    return value


def _read_json(ref: str) -> Any:
    try:
        return json.loads(Path(ref[1:]).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"Cannot read {ref[1:]}: {e}") from e


def _from_file[T](ref: str, loader: Callable[[Any], T]) -> T:
    try:
        return loader(_read_json(ref))
    except (KeyError, TypeError, AttributeError) as e:
        raise UsageError(f"Malformed {ref[1:]}: missing or mistyped field {e}") from e


def _matrix_arg(ref: str, carrier: CarrierDesc) -> Matrix:
    return _from_file(ref, matrix_from_json) if ref.startswith("@") else parse_grid(ref, carrier)


def _poly_arg(ref: str, carrier: CarrierDesc) -> Poly:
    return _from_file(ref, poly_from_json) if ref.startswith("@") else parse_poly(ref, carrier)


def _elements_arg(ref: str, carrier: CarrierDesc) -> list[NCElement]:
    if ref.startswith("@"):
        return _from_file(ref, lambda texts: [parse(t.strip(), carrier) for t in texts])
    return [parse(t.strip(), carrier) for t in ref.split(",")]


def _mask_arg(ref: str) -> list[list[bool]]:
    return [[cell.strip() not in ("", "0") for cell in row.split(",")] for row in ref.split(";")]


def _csv(rows: Sequence[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerows(rows)
    return buffer.getvalue()


def _json(payload: Any) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def _text_grid(rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(row[j]) for row in rows) for j in range(len(rows[0]))]
    return "".join(" ".join(cell.rjust(w) for cell, w in zip(row, widths, strict=True)).rstrip() + "\n" for row in rows)


def _render_payload(payload: Payload, fmt: str) -> str:
    """Generic rendering of a flat result: json as is, csv/text as key/value lines."""
    if fmt == "json":
        return _json(payload)
    rows = [[key, value if isinstance(value, str) else json.dumps(value)] for key, value in payload.items()]
    if fmt == "csv":
        return _csv(rows)
    return "".join(f"{key}: {value}\n" for key, value in rows)


def _render_matrix(a: Matrix, fmt: str) -> str:
    match fmt:
        case "json":
            return _json(matrix_to_json(a))
        case "csv":
            return matrix_to_csv(a)
        case _:
            return _text_grid([[render(x) for x in a.row(i)] for i in range(a.rows)])


def _render_poly(p: Poly, fmt: str) -> str:
    if fmt == "json":
        return _json(poly_to_json(p))
    return str(p) + "\n"


def _random_batch[T](strategy: strategies.Strategy[T, ...], args: argparse.Namespace) -> list[T]:
    if args.count < 1:
        raise UsageError(f"--count must be at least 1, got {args.count}")
    unique_bys = [lambda item: item] if args.distinct else []
    batch = strategies.list_strategy(strategy, min_length=args.count, max_length=args.count, unique_bys=unique_bys)
    return batch.gen()


def cmd_table(args: argparse.Namespace) -> str:
    carrier = _carrier(args)
    grid = cayley_grid(carrier, args.op, max_order=min(args.max_order, MAX_TABLE_ORDER))
    match args.format:
        case "json":
            return _json({"carrier": str(carrier), "op": args.op, "grid": grid})
        case "csv":
            return _csv(grid)
        case _:
            return _text_grid(grid)


def cmd_scan(args: argparse.Namespace) -> str:
    max_products = MAX_SCAN_PRODUCTS if args.max_products is None else args.max_products
    budgets = Budgets(max_order=args.max_order, max_products=max_products)
    report = scan(_carrier(args), jobs=args.jobs, **budgets)
    payload = report.to_json()
    if args.format == "json":
        return _json(payload)
    rows: list[list[Any]] = [["carrier", str(report.carrier)], ["order", report.order]]
    rows += [["is_field", str(report.is_field).lower()], ["is_integral_domain", str(report.is_integral_domain).lower()]]
    rows += [["zero_divisor", f"{x}*{y}"] for x, y in payload["zero_divisors"]]
    rows += [["unit", x] for x in payload["units"]]
    rows += [["idempotent", x] for x in payload["idempotents"]]
    rows += [["nilpotent", f"{n['element']}^{n['index']}"] for n in payload["nilpotents"]]
    if args.format == "csv":
        return _csv(rows)
    return "".join(f"{key}: {value}\n" for key, value in rows)


def cmd_classify(args: argparse.Namespace) -> str:
    carrier = _carrier(args)
    verdict = is_field(carrier, max_order=args.max_order)
    if verdict.is_field:
        kind = "field"
    elif verdict.witness is None:
        kind = "integral-domain"
    else:
        kind = "ring-with-zero-divisors"
    witness = [render(x) for x in verdict.witness] if verdict.witness is not None else None
    payload = {"carrier": str(carrier), "verdict": kind, "witness": witness, "method": verdict.method}
    if args.format == "text":
        suffix = f" ({witness[0]})*({witness[1]}) = 0" if witness else ""
        return f"{kind}{suffix}\n"
    return _render_payload(payload, args.format)


def cmd_mat(args: argparse.Namespace) -> str:
    carrier = _carrier(args)
    if args.action == "random":
        matrices = _random_batch(strategies.matrix_strategy(carrier, args.rows, args.cols), args)
        if args.format == "json" and args.count > 1:
            return _json([matrix_to_json(m) for m in matrices])
        return "\n".join(_render_matrix(m, args.format) for m in matrices)
    if args.action == "ideal":
        mask = _mask_arg(_require(args.mask, "--mask"))
        max_products = MAX_IDEAL_PRODUCTS if args.max_products is None else args.max_products
        check = check_matrix_ideal(mask, carrier, side=args.side, max_products=max_products)
        counterexample = [str(m) for m in check.counterexample] if check.counterexample else None
        payload = {"holds": check.holds, "reason": check.reason, "counterexample": counterexample}
        return _render_payload(payload, args.format)

    a = _matrix_arg(_require(args.a, "--a"), carrier)
    binary: dict[str, Callable[[Matrix, Matrix], Matrix]] = {"add": mat_add, "sub": mat_sub, "mul": mat_mul}
    if args.action in binary:
        return _render_matrix(binary[args.action](a, _matrix_arg(_require(args.b, "--b"), carrier)), args.format)
    if args.action == "transpose":
        return _render_matrix(transpose(a), args.format)
    if args.action == "det":
        return _render_payload({"det": render(mat_det(a))}, args.format)
    inverse = mat_inverse(a)
    if inverse is None:
        return _render_payload({"inverse": None, "reason": "singular"}, args.format)
    return _render_matrix(inverse, args.format)


def cmd_poly(args: argparse.Namespace) -> str:
    carrier = _carrier(args)
    if args.action == "random":
        polys = _random_batch(strategies.poly_strategy(carrier, max_degree=args.max_degree), args)
        if args.format == "json" and args.count > 1:
            return _json([poly_to_json(p) for p in polys])
        return "".join(_render_poly(p, args.format) for p in polys)

    p = _poly_arg(_require(args.p, "--p"), carrier)
    binary: dict[str, Callable[[Poly, Poly], Poly]] = {
        "add": poly_add,
        "sub": poly_sub,
        "mul": poly_mul,
        "gcd": poly_gcd,
    }
    if args.action in binary:
        return _render_poly(binary[args.action](p, _poly_arg(_require(args.q, "--q"), carrier)), args.format)
    match args.action:
        case "divmod":
            q, r = poly_divmod(p, _poly_arg(_require(args.q, "--q"), carrier))
            return _render_payload({"quotient": str(q), "remainder": str(r)}, args.format)
        case "eval":
            value = poly_eval(p, parse(_require(args.x, "--x"), p.carrier))
            return _render_payload({"value": render(value)}, args.format)
        case "roots":
            roots = poly_roots(p, bound=args.bound, gaussian=args.gaussian)
            return _render_payload({"roots": [render(x) for x in roots]}, args.format)
        case _:
            verdict = poly_is_irreducible(p)
            factors = [str(f) for f in verdict.factors] if verdict.factors else None
            return _render_payload({"irreducible": verdict.irreducible, "factors": factors}, args.format)


def cmd_eigen(args: argparse.Namespace) -> str:
    carrier = _carrier(args)
    a = _matrix_arg(args.a, carrier)
    search = _carrier(args, args.search_family) if args.search_family else a.carrier
    payload = eigen_to_json(eigen_search(a, search))
    if args.format == "json":
        return _json(payload)
    rows = [[v["value"], *("[" + ",".join(vec) + "]" for vec in v["eigenbasis"])] for v in payload["values"]]
    return _csv(rows) if args.format == "csv" else "".join(" ".join(row) + "\n" for row in rows)


def cmd_closure(args: argparse.Namespace) -> str:
    carrier = _carrier(args)
    scalar_carrier = _carrier(args, args.scalar_family) if args.scalar_family else carrier
    members = _elements_arg(args.members, carrier)
    scalars = _elements_arg(args.scalars, scalar_carrier)
    try:
        flags = [Closure(f.strip()) for f in args.flags.split(",")]
    except ValueError as e:
        raise UsageError(f"Unknown closure flag in {args.flags!r}") from e
    verdict = closure_check(members, scalars, flags)
    return _render_payload(verdict.to_json(), args.format)


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        out.write_text(text, encoding="utf-8", newline="\n")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    verify_multiplication_table()
    strategies.seed(args.seed)
    try:
        _emit(args.handler(args), args.out)
    except (UsageError, ElementParseError) as e:
        print(f"neutro-complex: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except NCAlgebraError as e:
        print(f"neutro-complex: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
