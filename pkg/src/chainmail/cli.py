"""Command-line surface.

Subcommands: validate, classify, exterior, enumerate, fixtures, export-dot.
JSON on stdout by default, aligned text with --pretty; diagnostics go to
stderr.  Exit codes: 0 success, 1 bad input or failed validation, 2 a
resource guard refused the computation.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Iterable, Optional

from .connectivity import ConnectivityPair, classify, report_to_json_text
from .enumeration import enumerate_connected_chainmails, enumerate_posets
from .errors import FormatError, GuardExceeded, PreconditionError
from .exterior import exterior
from .generators import fixture_description, fixture_names, named_fixture
from .poset import FinitePoset, connectivity_from_json


def export_dot(p: FinitePoset, connected: Optional[Iterable[int]] = None) -> str:
    """DOT digraph of the cover relation, drawn bottom-to-top.  Members of
    the connectivity render hollow, everything else filled, matching the
    usual Hasse-diagram convention for distinguished elements."""
    cset = set(connected) if connected is not None else None
    lines = ["digraph poset {", "  rankdir=BT;", '  node [shape=circle, style=filled];']
    for v in range(p.n):
        if cset is None:
            style = 'fillcolor="lightgray"'
        elif v in cset:
            style = 'fillcolor="white"'
        else:
            style = 'fillcolor="gray25", fontcolor="white"'
        lines.append(f"  {v} [{style}];")
    for a, b in sorted(p.covers):
        lines.append(f"  {a} -> {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _read_json_input(path: str) -> dict:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed JSON: {exc}") from None


def _load_structure(args) -> object:
    """Fixture or JSON input, as a FinitePoset or ConnectivityPair."""
    if getattr(args, "fixture", None):
        return named_fixture(args.fixture)
    if getattr(args, "input", None):
        obj = _read_json_input(args.input)
        if "connectivity" in obj:
            poset, members = connectivity_from_json(obj)
            violation = poset.validate()
            if violation is not None:
                raise FormatError(f"input is not a poset: {violation.describe()}")
            return ConnectivityPair(poset, members)
        poset = FinitePoset.from_json(obj)
        violation = poset.validate()
        if violation is not None:
            raise FormatError(f"input is not a poset: {violation.describe()}")
        return poset
    raise FormatError("either --fixture or --input is required")


def _as_pair(structure) -> ConnectivityPair:
    if isinstance(structure, ConnectivityPair):
        return structure
    raise FormatError(
        "classification needs a connectivity pair; supply a fixture that is a "
        'pair or JSON with a "connectivity" field'
    )


def _as_poset(structure) -> FinitePoset:
    if isinstance(structure, ConnectivityPair):
        return structure.lattice
    return structure


def _cmd_validate(args) -> int:
    obj = _read_json_input(args.input)
    poset = FinitePoset.from_json(obj)
    violation = poset.validate()
    if violation is None:
        print(json.dumps({"ok": True, "n": poset.n}, separators=(",", ":")))
        return 0
    print(json.dumps({"ok": False, "axiom": violation.axiom, "witness": list(violation.witness)},
                     separators=(",", ":")))
    print(f"validation failed: {violation.describe()}", file=sys.stderr)
    return 1


def _cmd_classify(args) -> int:
    pair = _as_pair(_load_structure(args))
    report = classify(pair)
    print(report_to_json_text(report, pretty=args.pretty))
    return 0


def _cmd_exterior(args) -> int:
    structure = _load_structure(args)
    poset = _as_poset(structure)
    family = exterior(poset)
    obj = {
        "base_n": poset.n,
        "base_is_chainmail": poset.is_chainmail(),
        "set_count": len(family.sets),
        "sets": [sorted(s) for s in family.sets],
        "is_complete_lattice": family.order.is_complete_lattice(),
        "covers": [list(e) for e in sorted(family.order.covers)],
    }
    if args.pretty:
        width = len(str(len(family.sets)))
        lines = [f"exterior of a poset on {poset.n} elements: {len(family.sets)} TMD sets"]
        for i, s in enumerate(family.sets):
            lines.append(f"  [{i:>{width}}] {{{', '.join(map(str, sorted(s)))}}}")
        lines.append(f"complete lattice: {obj['is_complete_lattice']}")
        lines.append(f"base is a chainmail: {obj['base_is_chainmail']}")
        print("\n".join(lines))
    else:
        print(json.dumps(obj, separators=(",", ":")))
    return 0


def _cmd_enumerate(args) -> int:
    if args.kind == "posets":
        result = enumerate_posets(args.n, want_catalog=args.catalog is not None,
                                  threads=args.threads)
    else:
        result = enumerate_connected_chainmails(args.n, want_catalog=args.catalog is not None,
                                                threads=args.threads, deep=args.deep)
    obj = {"kind": args.kind, "n": result.n, "count": result.count}
    if args.catalog:
        with open(args.catalog, "w", encoding="utf-8") as fh:
            for p in result.catalog:
                fh.write(p.to_json_line() + "\n")
        obj["catalog"] = args.catalog
    print(f"elapsed: {result.elapsed:.3f}s", file=sys.stderr)
    if args.pretty:
        print(f"{args.kind} on {result.n} elements: {result.count} isomorphism classes")
        if args.catalog:
            print(f"catalog written to {args.catalog}")
    else:
        print(json.dumps(obj, separators=(",", ":")))
    return 0


def _cmd_fixtures(args) -> int:
    rows = []
    for name in fixture_names():
        value = named_fixture(name)
        kind = "pair" if isinstance(value, ConnectivityPair) else "poset"
        rows.append({"name": name, "kind": kind, "description": fixture_description(name)})
    if args.pretty:
        width = max(len(r["name"]) for r in rows)
        for r in rows:
            print(f"{r['name']:<{width}}  {r['kind']:<5}  {r['description']}")
    else:
        print(json.dumps(rows, separators=(",", ":")))
    return 0


def _cmd_export_dot(args) -> int:
    structure = _load_structure(args)
    if isinstance(structure, ConnectivityPair):
        text = export_dot(structure.lattice, structure.connected)
    else:
        text = export_dot(structure)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chainmail",
        description="finite posets, chainmails, exteriors, connectivity taxonomy, enumeration",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check the poset axioms of a JSON input")
    p_validate.add_argument("--input", default="-", help="JSON file, or - for stdin")

    def add_source(p):
        p.add_argument("--fixture", help="named fixture from the registry")
        p.add_argument("--input", help="JSON file, or - for stdin")
        p.add_argument("--pretty", action="store_true", help="human-readable output")

    p_classify = sub.add_parser("classify", help="taxonomy report for a connectivity pair")
    add_source(p_classify)

    p_exterior = sub.add_parser("exterior", help="totally mail-disconnected family of a poset")
    add_source(p_exterior)

    p_enum = sub.add_parser("enumerate", help="isomorph-free counting and catalogs")
    p_enum.add_argument("--kind", choices=["posets", "chainmails"], default="chainmails")
    p_enum.add_argument("--n", type=int, required=True)
    p_enum.add_argument("--catalog", help="write a JSON-lines catalog here")
    p_enum.add_argument("--deep", action="store_true", help="allow the slow sizes 9 and 10")
    p_enum.add_argument("--threads", type=int, default=1)
    p_enum.add_argument("--pretty", action="store_true")

    p_fixtures = sub.add_parser("fixtures", help="list the fixture registry")
    p_fixtures.add_argument("--pretty", action="store_true")

    p_dot = sub.add_parser("export-dot", help="DOT Hasse diagram, connectivity drawn hollow")
    add_source(p_dot)
    p_dot.add_argument("--output", help="write to a file instead of stdout")

    return parser


_HANDLERS = {
    "validate": _cmd_validate,
    "classify": _cmd_classify,
    "exterior": _cmd_exterior,
    "enumerate": _cmd_enumerate,
    "fixtures": _cmd_fixtures,
    "export-dot": _cmd_export_dot,
}


def run(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except GuardExceeded as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return 2
    except (FormatError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
