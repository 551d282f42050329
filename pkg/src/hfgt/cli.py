"""Command-line entry point ``hfgt``.

Exit codes: 0 success, 1 the model is invalid, 2 file or usage error.
"""

from __future__ import annotations

import argparse
import sys

from hfgt.adjacency import structure_stats
from hfgt.exceptions import HfgtError, InvalidModelError
from hfgt.io import build_artifacts, parse_system_file, write_build, write_dot
from hfgt.meta_model import ResourceKind, validate

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2


def _load(path: str):
    try:
        return parse_system_file(path)
    except HfgtError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return None


def _build(path: str):
    """Parse and build; returns ``(artifacts, exit_code)``."""
    model = _load(path)
    if model is None:
        return None, EXIT_USAGE
    try:
        return build_artifacts(model), EXIT_OK
    except InvalidModelError as exc:
        print(exc.report.format(), file=sys.stderr)
        return None, EXIT_INVALID


def cmd_validate(args) -> int:
    model = _load(args.file)
    if model is None:
        return EXIT_USAGE
    report = validate(model)
    print(report.format())
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_build(args) -> int:
    art, code = _build(args.file)
    if art is None:
        return code
    for path in write_build(art, args.out):
        print(path)
    return EXIT_OK


def cmd_export_dot(args) -> int:
    art, code = _build(args.file)
    if art is None:
        return code
    write_dot(art, args.which, args.out)
    return EXIT_OK


def cmd_stats(args) -> int:
    art, code = _build(args.file)
    if art is None:
        return code
    model = art.model
    hfg = structure_stats(art.hfg)
    formal = structure_stats(art.formal)
    rows = [
        ("operands", len(model.operands)),
        ("resources", len(model.resources)),
        ("transformation resources", len(model.resources_of_kind(ResourceKind.TRANSFORMATION))),
        ("independent buffers", len(model.resources_of_kind(ResourceKind.INDEPENDENT_BUFFER))),
        ("transportation resources", len(model.resources_of_kind(ResourceKind.TRANSPORTATION))),
        ("processes", len(model.processes)),
        ("capabilities", len(art.capabilities)),
        ("hfg edges", hfg.n_edges),
        ("formal graph edges", formal.n_edges),
        ("hfg weak components", hfg.n_weak_components),
        ("hfg strong components", hfg.n_strong_components),
        ("formal graph weak components", formal.n_weak_components),
        ("formal graph strong components", formal.n_strong_components),
    ]
    for label, value in rows:
        print(f"{label}: {value}")
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hfgt", description="Build hetero-functional graphs from system descriptions."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a description against rules R1-R5")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("build", help="write capabilities, incidence and adjacency exports")
    p.add_argument("file")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("export-dot", help="render a graph as DOT")
    p.add_argument("file")
    p.add_argument("--which", choices=("hfg", "formal"), default="hfg")
    p.add_argument("--out", required=True, help="output .dot file")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("stats", help="print structural statistics")
    p.add_argument("file")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
