"""Instance files: one JSON document holding the space, C, the map and expectations.

The emitter is canonical, with one list element or table entry per line, so
identifiers can be reported with their line number and a parsed file
re-emits byte for byte.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from .certificates import HomotopyCertificate
from .errors import (DVTError, EmptyImage, NonClosedC, ParseError, PartialMap, UnknownCell)
from .maps import CellMap, SetValuedMap
from .topology import FiniteSpace, PointSet, build_space

KEYS = ("name", "points", "hasse", "C", "map_kind", "map", "certificate_domain",
        "certificate", "expected", "notes")
REQUIRED = ("points", "hasse", "C", "map_kind", "map")
KINDS = ("function", "setvalued")
DOMAINS = ("cells", "subdivision")


@dataclass
class Instance:
    name: str
    space: FiniteSpace
    C: PointSet
    f: CellMap | SetValuedMap
    certificate: HomotopyCertificate | None = None
    expected_iter: float | None = None
    expected_hypotheses: dict[str, bool] | None = None
    notes: str = ""
    warnings: list[str] = field(default_factory=list)

    @property
    def has_expected(self) -> bool:
        return self.expected_iter is not None or self.expected_hypotheses is not None


def _dump(x) -> str:
    return json.dumps(x, ensure_ascii=False)


def _iter_token(v: float):
    return "inf" if v == math.inf else int(v)


def to_document(inst: Instance) -> dict:
    space = inst.space
    doc: dict = {"name": inst.name, "points": list(space.cells),
                 "hasse": [[space.cells[a], space.cells[b]] for a, b in space.hasse],
                 "C": inst.C.ids(), "map_kind": inst.f.kind, "map": inst.f.table()}
    if inst.certificate is not None:
        doc["certificate_domain"] = "subdivision" if inst.certificate.subdivided else "cells"
        doc["certificate"] = inst.certificate.tables()
    if inst.has_expected:
        exp = {}
        if inst.expected_iter is not None:
            exp["iter"] = _iter_token(inst.expected_iter)
        if inst.expected_hypotheses is not None:
            exp["hypotheses"] = dict(inst.expected_hypotheses)
        doc["expected"] = exp
    if inst.notes:
        doc["notes"] = inst.notes
    return doc


def emit_document(doc: dict) -> str:
    lines = ["{"]
    keys = [k for k in KEYS if k in doc]
    for n, key in enumerate(keys):
        comma = "," if n < len(keys) - 1 else ""
        val = doc[key]
        if key in ("points", "hasse", "C", "certificate") and val:
            lines.append(f"  {_dump(key)}: [")
            for i, item in enumerate(val):
                lines.append(f"    {_dump(item)}{',' if i < len(val) - 1 else ''}")
            lines.append(f"  ]{comma}")
        elif key == "map" and val:
            lines.append(f"  {_dump(key)}: {{")
            items = list(val.items())
            for i, (a, b) in enumerate(items):
                lines.append(f"    {_dump(a)}: {_dump(b)}{',' if i < len(items) - 1 else ''}")
            lines.append(f"  }}{comma}")
        else:
            lines.append(f"  {_dump(key)}: {_dump(val)}{comma}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_instance(inst: Instance) -> str:
    return emit_document(to_document(inst))


class _Locator:
    """Maps a (section, identifier) pair back to a source line."""

    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.starts = {}
        for n, line in enumerate(self.lines, 1):
            s = line.strip()
            for k in KEYS:
                if s.startswith(_dump(k) + ":"):
                    self.starts.setdefault(k, n)

    def find(self, section: str, ident=None) -> int | None:
        start = self.starts.get(section)
        if start is None or ident is None:
            return start
        needle = _dump(ident)
        for n in range(start, len(self.lines) + 1):
            if needle in self.lines[n - 1]:
                return n
        return start


def parse_text(text: str, source: str = "<string>") -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{source}: {e.msg}", e.lineno) from None
    loc = _Locator(text)
    if not isinstance(doc, dict):
        raise ParseError(f"{source}: top level must be an object", 1)
    for k in doc:
        if k not in KEYS:
            raise ParseError(f"{source}: unknown key {k!r}", loc.find(k))
    for k in REQUIRED:
        if k not in doc:
            raise ParseError(f"{source}: missing key {k!r}")

    def need_list(key, of=str):
        v = doc[key]
        if not isinstance(v, list) or not all(isinstance(x, of) for x in v):
            raise ParseError(f"{source}: {key!r} must be a list", loc.find(key))
        return v

    points = need_list("points")
    hasse = need_list("hasse", list)
    for pair in hasse:
        if len(pair) != 2 or not all(isinstance(x, str) for x in pair):
            raise ParseError(f"{source}: hasse entries are [face, cell] pairs",
                             loc.find("hasse", pair[0] if pair else None))
    try:
        space = build_space(points, [tuple(p) for p in hasse])
    except UnknownCell as e:
        bad = str(e).split("'")[1] if "'" in str(e) else None
        raise UnknownCell(f"{e} (line {loc.find('hasse', bad)})") from None
    except DVTError as e:
        raise ParseError(f"{source}: {e}", loc.find("points")) from None

    def resolve(section, ids):
        out = []
        for c in ids:
            if c not in space.index:
                raise UnknownCell(f"unknown cell {c!r} in {section} (line {loc.find(section, c)})")
            out.append(c)
        return out

    C = space.point_set(resolve("C", need_list("C")))
    notes: list[str] = []
    if not space.is_closed(C):
        msg = f"C is not closed; missing faces {(space.closure(C) - C).ids()}"
        warnings.warn(msg, NonClosedC, stacklevel=2)
        notes.append(msg)

    kind = doc["map_kind"]
    if kind not in KINDS:
        raise ParseError(f"{source}: map_kind must be one of {KINDS}", loc.find("map_kind"))
    table = doc["map"]
    if not isinstance(table, dict):
        raise ParseError(f"{source}: 'map' must be an object", loc.find("map"))
    for a, bs in table.items():
        if not isinstance(bs, list):
            raise ParseError(f"{source}: image of {a!r} must be a list", loc.find("map", a))
        resolve("map", [a])
        resolve("map", bs)
        if a not in C:
            raise ParseError(f"{source}: {a!r} is mapped but not in C", loc.find("map", a))
        if not bs:
            raise EmptyImage(f"empty image at {a!r} (line {loc.find('map', a)})")
        if kind == "function" and len(bs) != 1:
            raise ParseError(f"{source}: function images must be singletons", loc.find("map", a))
    missing = [c for c in C.ids() if c not in table]
    if missing:
        raise PartialMap(f"map undefined on {missing} (line {loc.find('map')})")
    if kind == "function":
        f = CellMap.from_ids(space, C, {a: bs[0] for a, bs in table.items()})
    else:
        f = SetValuedMap.from_ids(space, C, table)

    cert = None
    if "certificate" in doc:
        dom = doc.get("certificate_domain", "cells")
        if dom not in DOMAINS:
            raise ParseError(f"{source}: certificate_domain must be one of {DOMAINS}",
                             loc.find("certificate_domain"))
        stages = doc["certificate"]
        if not isinstance(stages, list) or not all(isinstance(s, dict) for s in stages):
            raise ParseError(f"{source}: certificate must be a list of tables",
                             loc.find("certificate"))
        try:
            cert = HomotopyCertificate.from_tables(space, C, stages, dom == "subdivision")
        except UnknownCell as e:
            raise UnknownCell(f"{e} in certificate (line {loc.find('certificate')})") from None

    exp_iter = exp_hyp = None
    if "expected" in doc:
        exp = doc["expected"]
        if not isinstance(exp, dict) or set(exp) - {"iter", "hypotheses"}:
            raise ParseError(f"{source}: expected holds only iter and hypotheses",
                             loc.find("expected"))
        if "iter" in exp:
            v = exp["iter"]
            if v == "inf":
                exp_iter = math.inf
            elif isinstance(v, int) and not isinstance(v, bool) and v >= 0:
                exp_iter = v
            else:
                raise ParseError(f"{source}: expected iter must be a count or \"inf\"",
                                 loc.find("expected"))
        if "hypotheses" in exp:
            h = exp["hypotheses"]
            if not isinstance(h, dict) or not all(isinstance(v, bool) for v in h.values()):
                raise ParseError(f"{source}: expected hypotheses map names to booleans",
                                 loc.find("expected"))
            exp_hyp = dict(h)
    return Instance(doc.get("name", Path(source).stem), space, C, f, cert, exp_iter, exp_hyp,
                    doc.get("notes", ""), notes)


def parse_instance(path) -> Instance:
    p = Path(path)
    return parse_text(p.read_text(encoding="utf-8"), str(p))


def write_instance(inst: Instance, path) -> None:
    Path(path).write_text(emit_instance(inst), encoding="utf-8")


def from_gallery(g) -> Instance:
    return Instance(g.name, g.space, g.C, g.f, g.certificate, g.expected_iter,
                    dict(g.expected_hypotheses), g.notes)
