"""Command-line front end: ``hexind <build|reduce|homology|predict|table|verify|certify>``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import List, Optional

from . import graphs
from .complex import DEFAULT_MAX_FACES, FaceBudgetExceeded, check_link_deletion_split, graph_homology
from .graphs import VertexLabel, named_family
from .homotopy import Evaluator, expected_homology
from .reduction import apply_scripted_folds, load_fold_script, reduce
from .verify import MISMATCH, SKIPPED, certify, load_manifest, verify

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(text: str, out: Optional[str] = None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _load_graph(args) -> graphs.Graph:
    if getattr(args, "graph", None):
        text = Path(args.graph).read_text()
        return graphs.from_dot(text) if args.graph.endswith(".dot") else graphs.from_json(text)
    if args.family is None or args.n is None:
        raise UsageError("give FAMILY N or --graph FILE")
    try:
        return named_family(args.family, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_build(args) -> int:
    g = _load_graph(args)
    if args.format == "dot":
        _emit(graphs.to_dot(g, f"{args.family}_{args.n}"), args.output)
    else:
        _emit(graphs.to_json(g), args.output)
    return EXIT_OK


def cmd_reduce(args) -> int:
    g = _load_graph(args)
    if args.script:
        if args.n is None and args.script_n is None:
            raise UsageError("--script needs an n (positional N or --script-n)")
        n = args.script_n if args.script_n is not None else args.n
        outcome = apply_scripted_folds(g, load_fold_script(args.script, n))
    else:
        outcome = reduce(g)
    if args.json:
        _emit(outcome.to_json(), args.output)
    else:
        lines = [s.describe() for s in outcome.trace]
        lines.append(f"suspensions {outcome.suspensions}")
        lines.append("contractible" if outcome.contractible else
                     f"residual {outcome.residual.n_vertices} vertices, {outcome.residual.n_edges} edges")
        _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_homology(args) -> int:
    g = _load_graph(args)
    if args.split:
        try:
            vertex = VertexLabel.parse(args.split)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        if vertex not in g:
            raise UsageError(f"vertex {vertex} is not in the graph")
        rep = check_link_deletion_split(g, vertex, args.mode, args.max_faces, engine=args.engine)
        _emit(_dump(rep.to_json_dict()))
        return EXIT_OK
    try:
        prof = graph_homology(g, args.mode, args.max_faces, reduce_first=not args.no_reduce, engine=args.engine)
    except FaceBudgetExceeded as exc:
        print(f"warning: {exc}", file=sys.stderr)
        return EXIT_OK
    _emit(prof.to_json())
    return EXIT_OK


def _predict(ev: Evaluator, family: str, n: int):
    try:
        return ev.predict(family, n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_predict(args) -> int:
    ev = Evaluator(args.amended)
    t = _predict(ev, args.family, args.n)
    if args.format == "json":
        _emit(_dump({"family": args.family, "n": args.n, "type": t.to_json_dict(),
                     "homology": expected_homology(t).to_json_dict()}))
    else:
        _emit(f"{t.render()}\n")
    return EXIT_OK


def cmd_table(args) -> int:
    if args.n_max < 1:
        raise UsageError("n_max must be at least 1")
    ev = Evaluator(args.amended)
    lo = {"P": 0, "C": 3}.get(args.family, 1)
    rows = [(n, _predict(ev, args.family, n)) for n in range(lo, args.n_max + 1)]
    if args.format == "json":
        _emit(_dump({"family": args.family,
                     "rows": [{"n": n, "type": t.to_json_dict(), "render": t.render()} for n, t in rows]}))
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["family", "n", "type"])
        for n, t in rows:
            w.writerow([args.family, n, t.render()])
        _emit(buf.getvalue())
    return EXIT_OK


def cmd_verify(args) -> int:
    ev = Evaluator(args.amended)
    _predict(ev, args.family, args.n)
    try:
        named_family(args.family, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rep = verify(args.family, args.n, args.mode, args.max_faces, use_reduce=not args.no_reduce,
                 engine=args.engine, evaluator=ev)
    if args.json:
        _emit(_dump(rep.to_json_dict(with_time=not args.no_time)))
    else:
        line = rep.summary()
        if not args.no_time:
            line += f"  ({rep.seconds:.2f} s)"
        _emit(line + "\n")
    if rep.verdict == SKIPPED:
        print(f"warning: {args.family}({args.n}) skipped: {rep.note}", file=sys.stderr)
    return EXIT_MISMATCH if rep.verdict == MISMATCH else EXIT_OK


def cmd_certify(args) -> int:
    manifest = load_manifest()
    if args.list:
        for fid, entry in manifest.items():
            _emit(f"{fid}\t{entry['start']['family']}\tn={entry['n']}\t{entry['script']}\n")
        return EXIT_OK
    if not args.figure:
        raise UsageError("give a figure id (see --list)")
    ids = list(manifest) if args.figure == "all" else [args.figure]
    if any(f not in manifest for f in ids):
        raise UsageError(f"unknown figure {args.figure!r}; see --list")
    status = EXIT_OK
    reports = []
    for fid in ids:
        rep = certify(fid, args.n, homology_check=not args.no_homology)
        reports.append(rep)
        if not rep.ok:
            status = EXIT_MISMATCH
    if args.json:
        payload = reports[0].to_json_dict() if len(reports) == 1 else [r.to_json_dict() for r in reports]
        _emit(_dump(payload))
    else:
        for rep in reports:
            lines = [f"{rep.figure} at n={rep.n}: start {rep.start}"]
            for st in rep.steps:
                lines.append(f"  [{st['step']}] fold {st['keep']} {st['removed']}: {'ok' if st['ok'] else 'FAILED'}")
            if rep.error:
                lines.append(f"  error: {rep.error}")
            else:
                lines.append(f"  suspensions {rep.suspensions}, residual components {rep.residual_components}"
                             + (", contractible" if rep.contractible else ""))
                for name, ok in rep.checks.items():
                    lines.append(f"  check {name}: {'ok' if ok else 'FAILED'}")
            lines.append(f"  {'CERTIFIED' if rep.ok else 'NOT CERTIFIED'}")
            _emit("\n".join(lines) + "\n")
    return status


def _graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("family", nargs="?", help="family name, e.g. H2 or Z3")
    p.add_argument("n", nargs="?", type=int)
    p.add_argument("--graph", help="read the graph from a JSON (or .dot) file instead")


def _homology_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=["exact", "rational"], default=None,
                   help="default: exact up to 1e5 faces, rational above")
    p.add_argument("--max-faces", type=int, default=DEFAULT_MAX_FACES)
    p.add_argument("--no-reduce", action="store_true", help="enumerate the raw graph, skip fold reduction")
    p.add_argument("--engine", choices=["enumerate", "morse", "auto"], default="enumerate")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hexind", description="Independence complexes of hexagonal grid graphs.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="emit a family member as JSON or DOT")
    _graph_args(p)
    p.add_argument("--format", choices=["json", "dot"], default="json")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("reduce", help="fold-reduce a graph and print the trace")
    _graph_args(p)
    p.add_argument("--script", help="replay this fold script instead of greedy folding")
    p.add_argument("--script-n", type=int, help="value of n inside the script labels")
    p.add_argument("--json", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("homology", help="reduced homology of the independence complex")
    _graph_args(p)
    _homology_args(p)
    p.add_argument("--split", metavar="VERTEX", help="check link/deletion additivity at this vertex")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("predict", help="predicted homotopy type")
    p.add_argument("family")
    p.add_argument("n", type=int)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--amended", action="store_true", help="use the homology-corrected base values")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("table", help="prediction table for n = 1..n_max")
    p.add_argument("family")
    p.add_argument("n_max", type=int)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--amended", action="store_true", help="use the homology-corrected base values")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", help="compare prediction with computed homology")
    p.add_argument("family")
    p.add_argument("n", type=int)
    _homology_args(p)
    p.add_argument("--json", action="store_true")
    p.add_argument("--no-time", action="store_true", help="omit timings for byte-stable output")
    p.add_argument("--amended", action="store_true", help="use the homology-corrected base values")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("certify", help="replay a shipped figure fold script")
    p.add_argument("figure", nargs="?", help="figure id, or 'all'")
    p.add_argument("--n", type=int, help="override the manifest n")
    p.add_argument("--list", action="store_true")
    p.add_argument("--json", action="store_true")
    p.add_argument("--no-homology", action="store_true", help="skip the homology cross-check")
    p.set_defaults(func=cmd_certify)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"hexind: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KeyError, ValueError) as exc:
        print(f"hexind: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
