"""Command-line front end: ``chamanara <subcommand>``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from .cylinders import cylinder_table_csv, decompose
from .exactnum import DomainError, FieldMismatchError, parse_scalar
from .fuchsian import F, HPoint, Mat2, is_member, reduce_to_domain
from .surface import IncompleteTraceError, SurfaceSpec
from .svg import decomposition_svg, domain_svg
from .verify import verify_paper

DEFAULT_DEPTH = 8
DEPTH_ENV = "CHAMANARA_DEPTH"


def default_depth() -> int:
    raw = os.environ.get(DEPTH_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_DEPTH
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"{DEPTH_ENV} must be an integer, got {raw!r}") from None


def parse_matrix(text: str) -> Mat2:
    parts = text.split(",")
    if len(parts) != 4:
        raise ValueError(f"expected 'a,b,c,d' but got {len(parts)} entries")
    entries = []
    offset = 0
    for i, part in enumerate(parts):
        try:
            entries.append(parse_scalar(part))
        except ValueError as exc:
            raise ValueError(f"entry {i + 1} (offset {offset}): {exc}") from None
        offset += len(part) + 1
    return Mat2(*entries)


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise SystemExit(f"cannot write {out}: {exc.strerror}") from None


def _cmd_verify(args) -> int:
    depth = args.depth if args.depth is not None else default_depth()
    surface = SurfaceSpec(depth=depth, side_gluing="straight" if args.corrupt_gluing else "chamanara")
    report = verify_paper(depth, surface)
    if args.json:
        print(report.dumps())
    else:
        print(report.to_text())
        for c in report.failures:
            print(f"failed claim: {c.id}", file=sys.stderr)
    return 0 if report.ok else 1


def _cmd_decompose(args, parser) -> int:
    depth = args.depth if args.depth is not None else default_depth()
    if not 2 <= depth <= 12:
        parser.error(f"--depth must lie in [2, 12], got {depth}")
    try:
        dec = decompose(args.slope_exp, depth)
    except (DomainError, IncompleteTraceError) as exc:
        parser.error(str(exc))
    if args.format == "json":
        text = json.dumps(dec.to_json(), indent=2) + "\n"
    elif args.format == "csv":
        text = cylinder_table_csv(dec)
    else:
        text = decomposition_svg(dec)
    _emit(text, args.out)
    if args.format != "json":
        print(f"covered area: {dec.covered_area}", file=sys.stderr)
    return 0


def _cmd_reduce(args, parser) -> int:
    try:
        z = HPoint.parse(args.point)
        if z.is_boundary:
            raise DomainError("the point must lie in the open upper half plane")
        red = reduce_to_domain(z)
    except (ValueError, FieldMismatchError) as exc:
        parser.error(str(exc))
    if args.json:
        print(json.dumps({"word": str(red.word), "point": str(red.point), "reduction": red.to_json()}, indent=2))
    else:
        print(f"word: {red.word}")
        print(f"point: {red.point}")
    return 0


def _cmd_member(args, parser) -> int:
    try:
        A = parse_matrix(args.matrix)
        res = is_member(A)
    except (ValueError, FieldMismatchError) as exc:
        parser.error(str(exc))
    if args.json:
        obj = res.to_json()
        obj["word_text"] = str(res.word) if res.word is not None else None
        print(json.dumps(obj, indent=2))
    elif res.member:
        print("member: yes")
        print(f"word: {res.word}")
    else:
        print("member: no")
        print(f"residual: {res.residual.canonical()}")
    return 0


def _cmd_domain(args) -> int:
    _emit(domain_svg(F, strip_only=args.strip_only, annulus=args.annulus), args.svg)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chamanara", description="Exact computations on the Chamanara surface.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify-paper", help="check the published constants")
    v.add_argument("--depth", type=int, default=None, help=f"truncation depth (default ${DEPTH_ENV} or {DEFAULT_DEPTH})")
    v.add_argument("--corrupt-gluing", action="store_true", help="debug: glue left/right straight across")
    v.add_argument("--json", action="store_true")

    d = sub.add_parser("decompose", help="cylinder decomposition in the direction of slope 2**n")
    d.add_argument("--slope-exp", type=int, required=True, choices=range(-4, 5), metavar="N")
    d.add_argument("--depth", type=int, default=None)
    d.add_argument("--format", choices=("json", "csv", "svg"), default="json")
    d.add_argument("--out", default=None)

    r = sub.add_parser("reduce", help="reduce a point of the upper half plane into F")
    r.add_argument("--point", required=True, help='"re,im" with exact scalars')
    r.add_argument("--json", action="store_true")

    m = sub.add_parser("member", help="decide membership in the group generated by P1 and H")
    m.add_argument("--matrix", required=True, help='"a,b,c,d" with exact scalars')
    m.add_argument("--json", action="store_true")

    g = sub.add_parser("domain", help="draw the fundamental domain")
    g.add_argument("--svg", default=None, help="output path (stdout if omitted)")
    g.add_argument("--strip-only", action="store_true")
    g.add_argument("--annulus", action="store_true")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify-paper":
        return _cmd_verify(args)
    if args.command == "decompose":
        return _cmd_decompose(args, parser)
    if args.command == "reduce":
        return _cmd_reduce(args, parser)
    if args.command == "member":
        return _cmd_member(args, parser)
    return _cmd_domain(args)


if __name__ == "__main__":
    sys.exit(main())
