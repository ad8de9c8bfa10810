"""Command-line driver: ``dvt analyze | search | gallery | cohomology``."""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

from .cohomology import GATE_CAP, OrderComplex, gate_boundary_connectedness
from .errors import DVTError, NonClosedC, TooLarge
from .gallery import CATALOGUE, DEFAULT_NAMES, build_example
from .instance import from_gallery, parse_instance, write_instance
from .report import Options, analyze, render_dot, render_json, render_text, render_tsv
from .search import MODES, run_search

SEARCH_CELL_LIMIT = 16


def _add_analysis_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--orbit", action="store_true", help="print a witness orbit")
    p.add_argument("--propositions", action="store_true",
                   help="evaluate the structural statements about the filtration")
    p.add_argument("--bounds", action="store_true", help="check the lower bounds on iter")
    p.add_argument("--betti", action="store_true", help="Betti numbers of the order complex")
    p.add_argument("--gate", action="store_true", help="enumerate the gate property")
    p.add_argument("--gate-cap", type=int, default=16, metavar="N",
                   help="largest space for gate enumeration (default 16)")
    p.add_argument("--all", action="store_true", help="all of the checks above")
    p.add_argument("--full", action="store_true", help="list every cell in the text report")
    p.add_argument("--dot", metavar="OUT", help="write a Graphviz graph coloured by layer")
    p.add_argument("--tsv", metavar="OUT", help="write the layer table as TSV")
    p.add_argument("--json", metavar="OUT", help="write the structured report")
    p.add_argument("--figure", metavar="PNG", help="write a matplotlib figure")
    p.add_argument("--out-dir", metavar="DIR",
                   help="write <name>.txt/.json/.tsv/.dot/.png into DIR")


def _options(args) -> Options:
    every = args.all
    return Options(orbit=args.orbit or every, propositions=args.propositions or every,
                   bounds=args.bounds or every, betti=args.betti or every,
                   gate=args.gate or every, gate_cap=args.gate_cap)


def _write(path, text: str) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(text, encoding="utf-8")


def _run_analysis(inst, args) -> int:
    doc = analyze(inst, _options(args))
    text = render_text(doc, full=args.full)
    sys.stdout.write(text)
    targets = {"json": args.json, "tsv": args.tsv, "dot": args.dot, "png": args.figure}
    if args.out_dir:
        stem = Path(args.out_dir) / _safe(doc["name"])
        _write(f"{stem}.txt", render_text(doc, full=True))
        for k in targets:
            targets[k] = targets[k] or f"{stem}.{k}"
    if targets["json"]:
        _write(targets["json"], render_json(doc))
    if targets["tsv"]:
        _write(targets["tsv"], render_tsv(doc))
    if targets["dot"]:
        _write(targets["dot"], render_dot(inst, doc))
    if targets["png"]:
        from .plotting import render_figure
        Path(targets["png"]).parent.mkdir(parents=True, exist_ok=True)
        render_figure(inst, doc, targets["png"])
    return doc["exit_code"]


def _safe(name: str) -> str:
    return "".join(c if c.isalnum() or c in "-_." else "_" for c in name).strip("_")


def cmd_analyze(args) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NonClosedC)
        inst = parse_instance(args.path)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return _run_analysis(inst, args)


def cmd_search(args) -> int:
    if args.max_cells > SEARCH_CELL_LIMIT and not args.allow_large:
        print(f"error: --max-cells above {SEARCH_CELL_LIMIT} needs --allow-large", file=sys.stderr)
        return 1
    summary = run_search(args.seed, args.instances, args.max_cells, args.mode, args.dump_dir)
    sys.stdout.write(summary.render())
    return 3 if summary.failed else 0


def cmd_gallery(args) -> int:
    if args.action == "list":
        for name in DEFAULT_NAMES:
            g = build_example(name)
            it = "inf" if g.expected_iter == float("inf") else int(g.expected_iter)
            print(f"{name:<22}{len(g.space):>5} cells  iter {it}")
        print("parametrised: " + ", ".join(f"{k}(...)" for k in ("ex_circle_d", "ex_ndim_torus",
                                                                   "ex_stripes")))
        return 0
    if not args.name:
        print("error: an example name is required", file=sys.stderr)
        return 1
    inst = from_gallery(build_example(args.name))
    if args.action == "export":
        if not args.path:
            print("error: export needs an output path", file=sys.stderr)
            return 1
        write_instance(inst, args.path)
        print(f"wrote {args.path}")
        return 0
    return _run_analysis(inst, args)


def cmd_cohomology(args) -> int:
    inst = parse_instance(args.path)
    cx = OrderComplex(inst.space)
    b0, b1 = cx.betti()
    print(f"cells {len(inst.space)}  chains: {len(cx.edges)} edges, {len(cx.triangles)} triangles")
    print(f"b0 {b0}")
    print(f"b1 {b1}")
    print(f"boundary composite vanishes: {cx.composite_vanishes()}")
    try:
        g = gate_boundary_connectedness(inst.space, cap=args.gate_cap)
    except TooLarge as e:
        print(f"gate undecided ({e})")
        return 0
    if g.holds:
        print("gate holds")
    else:
        print(f"gate fails: open set {' '.join(g.counterexample.ids())} "
              f"has boundary {' '.join(g.boundary.ids())}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dvt", description="Iteration counts of maps that may "
                                "leave their domain, on finite models of cell complexes.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="analyse an instance file")
    a.add_argument("path")
    _add_analysis_flags(a)
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("search", help="randomised search for counterexamples")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--instances", type=int, default=1000)
    s.add_argument("--max-cells", type=int, default=12)
    s.add_argument("--mode", choices=MODES, default="props")
    s.add_argument("--dump-dir", help="write offending instances here")
    s.add_argument("--allow-large", action="store_true")
    s.set_defaults(func=cmd_search)

    g = sub.add_parser("gallery", help="built-in examples")
    g.add_argument("action", choices=("list", "run", "export"))
    g.add_argument("name", nargs="?", help=f"one of {', '.join(CATALOGUE)}; "
                   "parameters as in ex_circle_d(7)")
    g.add_argument("path", nargs="?", help="output file for export")
    _add_analysis_flags(g)
    g.set_defaults(func=cmd_gallery)

    c = sub.add_parser("cohomology", help="Betti numbers and the gate property")
    c.add_argument("path")
    c.add_argument("--gate-cap", type=int, default=GATE_CAP)
    c.set_defaults(func=cmd_cohomology)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "instances", 1) < 1:
        print("error: --instances must be positive", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except DVTError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
