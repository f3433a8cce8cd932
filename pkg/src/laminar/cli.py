"""Command-line front end.

Exit codes: 0 ok, 1 not pre-laminar or invalid path, 2 parse or schema
error, 3 degenerate target, 4 link where a knot was expected.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .assembly import exterior_components, validate_path
from .classify import (
    LinkInput,
    TwoBridgeInput,
    classify_genuine,
    classify_persistent,
    classify_tangle,
    sfs_surgery_filter,
)
from .complex import PIECES, ComplexError, is_prelaminar, load_complex, load_piece
from .farey import DegenerateTarget, build_diagram
from .paths import (
    Context,
    EnumerationGuard,
    PathConstraints,
    PathError,
    build_fig64,
    build_lemma84,
    build_prop65,
    diagram_for,
    enumerate_paths,
    path_from_json,
)
from .rational import SlopeError, normalize_montesinos, parse_slope

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_DEGENERATE, EXIT_LINK = 0, 1, 2, 3, 4

# "-1/4" would otherwise be read as an option; U+2212 is accepted by parse_slope
_NEGATIVE = re.compile(r"^-\d+(/\d+)?$")


def _protect_negatives(argv: list[str]) -> list[str]:
    return ["−" + a[1:] if _NEGATIVE.match(a) else a for a in argv]


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)


def emit(obj, fmt: str = "json"):
    if fmt == "text" and isinstance(obj, dict):
        for key in sorted(obj):
            print(f"{key}: {obj[key] if not isinstance(obj[key], (dict, list)) else json.dumps(obj[key], sort_keys=True)}")
    else:
        print(dumps(obj))


class UsageError(Exception):
    pass


# subcommands ---------------------------------------------------------------------


def run_diagram(args) -> int:
    d = build_diagram(parse_slope(args.target))
    if args.format == "dot":
        sys.stdout.write(d.to_dot())
    else:
        out = d.to_json()
        out["counts"] = {"vertices": len(d.vertices), "triangles": len(d.triangles)}
        emit(out, args.format)
    return EXIT_OK


def _path_report(g) -> dict:
    verdict = validate_path(g)
    out = {"path": str(g), "verdict": verdict.to_json(), **g.to_json()}
    if verdict.ok:
        out["regions"] = [r.to_json() for r in exterior_components(g)]
    return out


def run_path(args) -> int:
    if args.file:
        text = sys.stdin.read() if args.file == "-" else Path(args.file).read_text()
        try:
            g = path_from_json(json.loads(text))
        except (json.JSONDecodeError, KeyError, ValueError) as e:
            raise UsageError(f"bad path JSON: {e}") from None
        report = _path_report(g)
        emit(report, args.format)
        return EXIT_OK if report["verdict"]["ok"] else EXIT_FAIL
    if not args.target:
        raise UsageError("give a path JSON file or --target")
    target = parse_slope(args.target)
    if args.build:
        kind, _, arg = args.build.partition(":")
        if kind == "prop65":
            g = build_prop65(target, int(arg or 1))
        elif kind == "lemma84":
            g = build_lemma84(target, arg or "B")
        elif kind == "fig64":
            g = build_fig64(target)
        else:
            raise UsageError(f"unknown builder {kind!r}")
        if g is None:
            emit({"target": str(target), "builder": args.build, "path": None}, args.format)
            return EXIT_FAIL
        emit(_path_report(g), args.format)
        return EXIT_OK
    c = PathConstraints(
        kind=args.kind,
        context=Context(args.context),
        require_genuine=args.genuine,
        starting_slope=parse_slope(args.start) if args.start else None,
        direction=args.direction,
        first_channel=args.first,
    )
    paths = enumerate_paths(diagram_for(target), c)
    paths.sort(key=str)
    emit({"target": str(target), "count": len(paths), "paths": [g.to_json() | {"path": str(g)} for g in paths]}, args.format)
    return EXIT_OK


def run_check(args) -> int:
    if args.piece:
        tc = load_piece(args.piece)
    elif not Path(args.file).exists() and Path(args.file).stem in PIECES:
        # the model pieces ship inside the package
        tc = load_piece(Path(args.file).stem)
    else:
        tc = load_complex(args.file)
    report = is_prelaminar(tc)
    emit({"name": tc.name, **report.to_json()}, args.format)
    return EXIT_OK if report.ok else EXIT_FAIL


def _split_knot(tokens: list[str]):
    tangles, n = [], 0
    for t in tokens:
        r = parse_slope(t)
        if "/" in t:
            tangles.append(r)
        else:
            n += r.p
    return tangles, n


def run_classify_knot(tokens: list[str], mode: str) -> tuple[int, dict]:
    tangles, n = _split_knot(tokens)
    k = normalize_montesinos(tangles, n)
    try:
        if mode == "persistent":
            v = classify_persistent(k)
        elif mode == "genuine":
            v = classify_genuine(k)
        else:
            v = sfs_surgery_filter(k)
    except LinkInput as e:
        return EXIT_LINK, {"error": str(e), "components": e.components}
    except TwoBridgeInput as e:
        note = "2-bridge: allowable paths in D(p/q) give laminar branched surfaces; use the path subcommand"
        return EXIT_OK, {"status": "TwoBridge", "note": note, "detail": str(e)}
    return EXIT_OK, v.to_json()


def _batch_item(item: tuple[list[str], str]) -> tuple[int, dict]:
    tokens, mode = item
    try:
        return run_classify_knot(tokens, mode)
    except (SlopeError, ValueError) as e:
        return EXIT_PARSE, {"error": str(e)}


def _classify(args, mode: str) -> int:
    if args.batch:
        lines = Path(args.batch).read_text().splitlines()
        items = [(_protect_negatives(line.split()), mode) for line in lines if line.strip() and not line.startswith("#")]
        if args.jobs > 1:
            with ProcessPoolExecutor(args.jobs) as pool:
                results = list(pool.map(_batch_item, items))
        else:
            results = [_batch_item(it) for it in items]
        emit([{"input": " ".join(t), "exit": code, **out} for (t, _), (code, out) in zip(items, results)])
        return max((code for code, _ in results), default=EXIT_OK)
    if not args.slopes:
        raise UsageError("give tangle slopes or --batch")
    code, out = run_classify_knot(args.slopes, mode)
    emit(out, args.format)
    return code


def run_classify_tangle(args) -> int:
    r1, r2 = parse_slope(args.r1), parse_slope(args.r2)
    if r2.fraction >= 0:
        raise UsageError("the tangle is T(r1, -r2): give the second slope as a negative number")
    v = classify_tangle(r1, parse_slope(f"{-r2.p}/{r2.q}"))
    emit(v.to_json(), args.format)
    return EXIT_OK


# parser --------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="laminar", description="Branched surfaces for Montesinos knots and tangles")
    sub = p.add_subparsers(dest="command", required=True)

    def fmt(sp, choices=("json", "text")):
        sp.add_argument("--format", choices=choices, default="json")

    d = sub.add_parser("diagram", help="Farey diagram D(p/q)")
    d.add_argument("target")
    fmt(d, ("json", "dot", "text"))

    pa = sub.add_parser("path", help="validate, build or enumerate paths")
    pa.add_argument("file", nargs="?", help="path JSON ('-' for stdin)")
    pa.add_argument("--target")
    pa.add_argument("--build", help="prop65:N, lemma84:A|B or fig64")
    pa.add_argument("--kind", choices=("allowable", "semi"), default="allowable")
    pa.add_argument("--context", choices=("knot", "tangle"), default="tangle")
    pa.add_argument("--genuine", action="store_true")
    pa.add_argument("--start", help="starting slope")
    pa.add_argument("--direction", choices=("up", "down"))
    pa.add_argument("--first", choices=("A", "B"), help="first channel type")
    fmt(pa)

    c = sub.add_parser("check", help="pre-laminar check of a tangle complex")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("file", nargs="?")
    src.add_argument("--piece", choices=PIECES)
    fmt(c)

    for name, modes in (("classify-knot", ("persistent", "genuine", "surgery")), ("surgery", None)):
        k = sub.add_parser(name, help="classify a Montesinos knot: slopes then an optional integer n")
        k.add_argument("slopes", nargs="*")
        if modes:
            k.add_argument("--mode", choices=modes, default="persistent")
        k.add_argument("--batch", help="file with one knot per line")
        k.add_argument("--jobs", type=int, default=1)
        fmt(k)

    t = sub.add_parser("classify-tangle", help="classify T(r1, -r2)")
    t.add_argument("r1")
    t.add_argument("r2")
    fmt(t)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = _protect_negatives(list(sys.argv[1:] if argv is None else argv))
    args = build_parser().parse_args(argv)
    try:
        if args.command == "diagram":
            return run_diagram(args)
        if args.command == "path":
            return run_path(args)
        if args.command == "check":
            return run_check(args)
        if args.command == "classify-knot":
            return _classify(args, args.mode)
        if args.command == "surgery":
            return _classify(args, "surgery")
        return run_classify_tangle(args)
    except DegenerateTarget as e:
        print(f"laminar: {e}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ComplexError as e:
        print(f"laminar: schema error at {e}", file=sys.stderr)
        return EXIT_PARSE
    except (UsageError, SlopeError, PathError, EnumerationGuard, OSError) as e:
        print(f"laminar: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
