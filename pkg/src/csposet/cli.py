"""Command line front end.

Exit codes: 0 success, 2 usage error, 3 enumeration cap hit (partial output
written), 4 I/O failure, 5 catalog schema mismatch.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .algebra import UsageError
from .catalog_io import CatalogFile, SchemaError, dumps, load_catalog, write_atomic
from .cohomology import formal_dimension
from .enumeration import Caps, ModelCatalog, cp_family, enumerate_models, fiber_from_degrees, sp_chain
from .fixtures import fixture_degrees, fixture_names, load_fixture
from .lattice import FieldSpec
from .poset import build_poset, c_value, depth, to_dot

EXIT_OK, EXIT_USAGE, EXIT_CAP, EXIT_IO, EXIT_SCHEMA = 0, 2, 3, 4, 5


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _fraction_list(text):
    try:
        return [Fraction(x) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"expected comma-separated rationals, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="csposet", description="Posets of torus symmetries of c-symplectic total spaces.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    a = sub.add_parser("analyze", help="build the catalog, the poset and its depth")
    a.add_argument(
        "--degrees", help="generator degrees, e.g. 3,5,9,15,33; an even d is followed by 2d-1"
    )
    a.add_argument("--cp", type=int, help="CP^n x S^{2n+3} family with this even n")
    a.add_argument("--sp", type=int, help="Sp(n) chain with this odd n")
    a.add_argument("--fixture", help="built-in catalog name")
    a.add_argument("--load", help="previously written JSON catalog")
    a.add_argument("--field", default="q", help="q, cyc:<m> or qbar (default q)")
    a.add_argument("--coeffs", default="1,-1,2", help="coefficient set for enumeration")
    a.add_argument("--max-terms", type=int, default=Caps().max_terms)
    a.add_argument("--max-assignments", type=int, default=Caps().max_assignments)
    a.add_argument("--dot", help="write the Hasse diagram as DOT")
    a.add_argument("--json", help="write the catalog and poset as JSON")
    a.add_argument("--quiet", action="store_true", help="only print the summary line")
    sub.add_parser("fixtures", help="list built-in catalogs")
    return parser


def _select_catalog(args):
    """Return (catalog, note) for the requested fiber source."""
    sources = [s for s in ("cp", "sp", "fixture", "load") if getattr(args, s) is not None]
    if len(sources) > 1 or (not sources and args.degrees is None):
        raise UsageError("give exactly one of --degrees, --cp, --sp, --fixture, --load")
    if args.degrees is not None and sources and sources != ["fixture"]:
        raise UsageError("--degrees combines only with --fixture (as a consistency check)")
    if args.fixture is not None:
        expected = fixture_degrees(args.fixture)
        if args.degrees is not None and tuple(_int_list(args.degrees)) != tuple(expected or ()):
            raise UsageError(
                f"--degrees {args.degrees} does not match fixture {args.fixture} ({expected})"
            )
        return load_fixture(args.fixture), None
    if args.cp is not None:
        return cp_family(args.cp), ("cp", args.cp)
    if args.sp is not None:
        return sp_chain(args.sp), None
    if args.load is not None:
        return load_catalog(args.load).catalog, None
    degrees = _int_list(args.degrees)
    fiber = fiber_from_degrees(degrees)
    if formal_dimension(fiber) % 2 == 0:
        return ModelCatalog(fiber, [], "enumerated"), ("even",)
    caps = Caps(args.max_terms, args.max_assignments)
    return enumerate_models(fiber, _fraction_list(args.coeffs), caps), None


def analyze(args, out=sys.stdout) -> int:
    K = FieldSpec.parse(args.field)
    catalog, note = _select_catalog(args)
    poset = build_poset(catalog, K)
    report = depth(poset)
    cf = CatalogFile(catalog, poset, report)

    if not args.quiet:
        print(f"fiber: {' '.join(f'{g.name}({g.degree})' for g in catalog.fiber.generators)}", file=out)
        print(f"field: {K}", file=out)
        print(f"models: {len(catalog)}", file=out)
        for c in poset.elements:
            print(f"  class {c.id} [{c.name()}]: {c.structure} dimH={c.dim}", file=out)
        for a, b in poset.hasse:
            print(f"  {a} > {b}", file=out)
        for w in poset.warnings:
            print(f"warning: {w}", file=out)
        if catalog.incomplete:
            print("warning: enumeration cap reached; catalog is partial", file=out)
    if note == ("even",):
        print("fiber formal dimension even; depth 0", file=out)
    else:
        print(f"classes: {len(poset)}, depth: {report.depth}", file=out)
    if note and note[0] == "cp":
        c = c_value(note[1] + 1)
        relation = "=" if report.depth == c else "!="
        print(f"depth: {report.depth} {relation} c({note[1] + 1})", file=out)

    try:
        if args.json:
            write_atomic(args.json, dumps(cf))
        if args.dot:
            write_atomic(args.dot, to_dot(poset))
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_CAP if catalog.incomplete else EXIT_OK


def main(argv=None, out=sys.stdout) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "fixtures":
            for name in fixture_names():
                print(name, file=out)
            return EXIT_OK
        return analyze(args, out)
    except SchemaError as exc:
        print(f"error: schema mismatch at {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
