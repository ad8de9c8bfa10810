"""Run an analysis of an instance and render it as text, JSON, TSV and DOT."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .certificates import homotopy_bound_check, verify_certificate
from .cohomology import GATE_CAP, OrderComplex, gate_boundary_connectedness
from .errors import TooLarge
from .maps import FAILS, NA
from .viability import INF, check_theorem_bounds, verify_propositions, viability_sequence

EXIT_OK, EXIT_MISMATCH, EXIT_FALSIFIED = 0, 2, 3
BETTI_CAP = 400


@dataclass
class Options:
    orbit: bool = True
    propositions: bool = False
    bounds: bool = False
    betti: bool = False
    gate: bool = False
    gate_cap: int = 16


def _it(v):
    return "inf" if v == INF else int(v)


def analyze(inst, opts: Options | None = None) -> dict:
    """Structured report for ``inst``; ``report["exit_code"]`` follows the CLI contract."""
    opts = opts or Options()
    space, C, f = inst.space, inst.C, inst.f
    rep = viability_sequence(space, C, f)
    doc: dict = {"name": inst.name, "cells": len(space), "C_size": len(C),
                 "C_closed": rep.c_closed, "map_kind": f.kind}
    if inst.warnings:
        doc["warnings"] = list(inst.warnings)
    hyp = {}
    for k, chk in vars(rep.hypotheses).items():
        if chk.status != NA:
            hyp[k] = {"status": chk.status, "witness": list(chk.witness or [])}
    doc["hypotheses"] = hyp
    doc["filtration"] = [{"n": n, "size": len(L), "cells": L.ids()}
                         for n, L in enumerate(rep.filtration)]
    layers = [{"n": n, "size": len(A), "cells": A.ids()} for n, A in enumerate(rep.layers)]
    if rep.iter == INF:
        layers.append({"n": "core", "size": len(rep.core), "cells": rep.core.ids()})
    doc["layers"] = layers
    doc["iter"] = _it(rep.iter)
    doc["stabilized_at"] = rep.stabilized_at
    if opts.orbit:
        doc["orbit"] = {"prefix": list(rep.witness.prefix),
                        "cycle": list(rep.witness.cycle) if rep.witness.cycle else None,
                        "steps": _it(rep.witness.steps)}
    falsified: list[str] = []
    if opts.propositions:
        res = verify_propositions(space, C, f, rep)
        doc["propositions"] = [{"name": s.name, "status": s.status,
                                "witness": list(s.witness or []), "note": s.note} for s in res]
        falsified += [f"proposition {s.name}" for s in res if s.failed]
    gate_check = None
    if opts.gate:
        try:
            g = gate_boundary_connectedness(space, cap=max(opts.gate_cap, 1))
            gate_check = g.as_check()
            doc["gate"] = {"status": gate_check.status,
                           "counterexample": g.counterexample.ids() if g.counterexample else None,
                           "boundary": g.boundary.ids() if g.boundary else None}
        except TooLarge as e:
            doc["gate"] = {"status": "undecided", "reason": str(e)}
    if opts.bounds:
        b = check_theorem_bounds(space, C, f, rep, gate_cap=opts.gate_cap, gate=gate_check)
        doc["bounds"] = {"asserted": b.asserted, "gate": b.gate,
                         "checks": [{"name": c.name, "bound": c.bound, "applies": c.applies,
                                     "satisfied": c.satisfied} for c in b.checks]}
        falsified += [f"bound {c.name}" for c in b.violations]
    if opts.betti:
        if len(space) <= BETTI_CAP:
            b0, b1 = OrderComplex(space).betti()
            doc["betti"] = {"b0": b0, "b1": b1}
        else:
            doc["betti"] = {"status": "skipped", "reason": f"more than {BETTI_CAP} cells"}
    if inst.certificate is not None:
        verdict = verify_certificate(inst.certificate, C, f)
        cert = {"stages": len(inst.certificate.stages),
                "domain": "subdivision" if inst.certificate.subdivided else "cells",
                "verified": verdict.ok, "detail": str(verdict)}
        if verdict.ok and f.kind == "function":
            cert["finding"] = str(homotopy_bound_check(space, C, f, inst.certificate, rep))
        doc["certificate"] = cert
    mismatches = []
    if inst.expected_iter is not None and inst.expected_iter != rep.iter:
        mismatches.append(f"iter: expected {_it(inst.expected_iter)}, got {_it(rep.iter)}")
    if inst.expected_hypotheses is not None:
        got = rep.hypotheses.applicable()
        for k, v in inst.expected_hypotheses.items():
            if got.get(k) != v:
                mismatches.append(f"hypothesis {k}: expected {v}, got {got.get(k)}")
    doc["mismatches"] = mismatches
    doc["falsifications"] = falsified
    doc["exit_code"] = (EXIT_FALSIFIED if falsified else
                        EXIT_MISMATCH if mismatches else EXIT_OK)
    return doc


def _cells(ids: list[str], limit: int = 12) -> str:
    if not ids:
        return "(empty)"
    if len(ids) <= limit:
        return " ".join(ids)
    return " ".join(ids[:limit]) + f" ... (+{len(ids) - limit})"


def render_text(doc: dict, full: bool = False) -> str:
    limit = 10 ** 9 if full else 12
    out = [f"instance   {doc['name']}",
           f"space      {doc['cells']} cells; C has {doc['C_size']} cells"
           f" ({'closed' if doc['C_closed'] else 'NOT closed'}); map is {doc['map_kind']}"]
    for w in doc.get("warnings", []):
        out.append(f"warning    {w}")
    out.append("")
    out.append("hypotheses")
    for k, v in doc["hypotheses"].items():
        wit = f"  witness {' '.join(v['witness'])}" if v["witness"] else ""
        out.append(f"  {k:<14}{v['status']}{wit}")
    out.append("")
    out.append("filtration")
    for row in doc["filtration"]:
        out.append(f"  C{row['n']:<3} {row['size']:>5}  {_cells(row['cells'], limit)}")
    out.append("layers")
    for row in doc["layers"]:
        tag = "core" if row["n"] == "core" else f"A{row['n']}"
        out.append(f"  {tag:<4} {row['size']:>5}  {_cells(row['cells'], limit)}")
    out.append("")
    out.append(f"iter       {doc['iter']}")
    if doc["stabilized_at"] is not None:
        out.append(f"stable at  C{doc['stabilized_at']}")
    if "orbit" in doc:
        o = doc["orbit"]
        line = " -> ".join(o["prefix"])
        if o["cycle"]:
            line += f"  (cycle {' -> '.join(o['cycle'])})"
        out.append(f"orbit      {line}")
    if "propositions" in doc:
        out.append("")
        out.append("propositions")
        for p in doc["propositions"]:
            extra = f"  witness {' '.join(p['witness'])}" if p["witness"] else ""
            extra += f"  ({p['note']})" if p["note"] else ""
            out.append(f"  {p['name']:<36}{p['status']}{extra}")
    if "bounds" in doc:
        b = doc["bounds"]
        out.append("")
        out.append(f"bounds     asserted iter >= {b['asserted']} (gate {b['gate']})")
        for c in b["checks"]:
            state = ("n/a" if not c["applies"] else "ok" if c["satisfied"] else "VIOLATED")
            out.append(f"  >= {c['bound']}  {c['name']:<28}{state}")
    if "gate" in doc:
        g = doc["gate"]
        line = f"gate       {g['status']}"
        if g.get("counterexample"):
            line += f"; open set {' '.join(g['counterexample'])} has boundary {' '.join(g['boundary'])}"
        out.append(line)
    if "betti" in doc:
        b = doc["betti"]
        if "b0" in b:
            out.append(f"betti      b0 = {b['b0']}, b1 = {b['b1']}")
        else:
            out.append(f"betti      {b['status']} ({b['reason']})")
    if "certificate" in doc:
        c = doc["certificate"]
        out.append(f"certificate {c['stages']} stages on {c['domain']}: {c['detail']}")
        if "finding" in c:
            out.append(f"  {c['finding']}")
    out.append("")
    for m in doc["mismatches"]:
        out.append(f"MISMATCH   {m}")
    for m in doc["falsifications"]:
        out.append(f"FALSIFIED  {m}")
    out.append(f"exit       {doc['exit_code']}")
    return "\n".join(out) + "\n"


def render_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def render_tsv(doc: dict) -> str:
    rows = ["layer\tsize\tcells"]
    for row in doc["layers"]:
        rows.append(f"{row['n']}\t{row['size']}\t{','.join(row['cells'])}")
    return "\n".join(rows) + "\n"


_PALETTE = ("#d9d9d9", "#fdae61", "#fee08b", "#d9ef8b", "#a6d96a", "#66bd63", "#1a9850",
            "#3288bd", "#5e4fa2", "#9e0142")
CORE_COLOR = "#d53e4f"


def layer_color(n) -> str:
    if n == "core":
        return CORE_COLOR
    return _PALETTE[n % len(_PALETTE)]


def render_dot(inst, doc: dict) -> str:
    """Graphviz digraph with one cluster per layer and the Hasse edges."""
    space = inst.space
    q = json.dumps
    out = [f"digraph {q(doc['name'])} {{", "  rankdir=BT;",
           '  node [shape=box, style="rounded,filled", fontsize=10];']
    for row in doc["layers"]:
        tag = "core" if row["n"] == "core" else f"A{row['n']}"
        out.append(f"  subgraph {q('cluster_' + tag)} {{")
        out.append(f"    label={q(tag)};")
        for c in row["cells"]:
            out.append(f"    {q(c)} [fillcolor={q(layer_color(row['n']))}];")
        out.append("  }")
    for a, b in space.hasse:
        out.append(f"  {q(space.cells[a])} -> {q(space.cells[b])};")
    out.append("}")
    return "\n".join(out) + "\n"
