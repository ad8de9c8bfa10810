"""Cell-exact finite models of the worked examples, with their expected behaviour.

Euclidean examples are discretised on the coarsest grid whose vertices
include every breakpoint of the map, so that each open cell is carried into
a single open cell.  Product cells are named ``"(a,b)"``; real-line cells are
``"x3"`` for the point 3 and ``"x3..4"`` for the open interval between.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable

from .certificates import HomotopyCertificate, dedupe, subdivide
from .errors import BadParameter, UnknownExample
from .maps import CellMap, SetValuedMap
from .topology import (FiniteSpace, PointSet, build_space, circle_model, labeled_path,
                       product_space)



@dataclass
class GalleryInstance:
    name: str
    space: FiniteSpace
    C: PointSet
    f: CellMap | SetValuedMap
    expected_iter: float
    expected_hypotheses: dict[str, bool]
    certificate: HomotopyCertificate | None = None
    notes: str = ""
    expected_levels: dict[int, list[str]] = field(default_factory=dict)
    derived: bool = False
    stated_iter: float | None = None

    @property
    def catalogue_iter(self) -> float:
        """The value listed for this example, which may differ from the model's."""
        return self.expected_iter if self.stated_iter is None else self.stated_iter


def _line(lo: int, hi: int) -> FiniteSpace:
    return labeled_path([str(i) for i in range(lo, hi + 1)], vertex="x{}", edge="x{}..{}")


def _p(a: str, b: str) -> str:
    return f"({a},{b})"


# -------------------------------------------------------------- real line

def ex_4_1() -> GalleryInstance:
    X = build_space(["x0", "x2", "x3", "x4", "x2..3", "x3..4"],
                    [("x2", "x2..3"), ("x3", "x2..3"), ("x3", "x3..4"), ("x4", "x3..4")])
    C = X.point_set(["x0", "x4"])
    f = CellMap.from_ids(X, C, {"x0": "x3", "x4": "x0"})
    return GalleryInstance(
        "ex_4_1", X, C, f, 2, {"continuous": True, "bdr_function": True},
        notes="Isolated point plus a segment; the two-point C has boundary {4}. "
              "Shows the bound 2 for a nonempty boundary is sharp.")


def ex_4_2() -> GalleryInstance:
    X = _line(-1, 5)
    C = X.point_set(["x0", "x2", "x2..3", "x3", "x3..4", "x4"])
    table = {"x0": "x2..3", "x2": "x0", "x4": "x0",
             "x3": "x-1..0", "x2..3": "x-1..0", "x3..4": "x-1..0"}
    f = CellMap.from_ids(X, C, table)
    return GalleryInstance(
        "ex_4_2", X, C, f, 3, {"continuous": True, "bdr_function": True},
        notes="The quadratic (x-2)(x-4)/3 on {0} with [2,4]; X connected, C not. "
              "Sharpness of the bound 3.",
        expected_levels={2: ["x0", "x2", "x4"], 3: ["x2", "x4"], 4: []})


# -------------------------------------------------------------- circle

def _rot(cell: str, s: int, d: int) -> str:
    return f"{cell[0]}{(int(cell[1:]) + s) % d}"


def ex_circle_d(d: int = 5) -> GalleryInstance:
    if d < 5 or d % 2 == 0:
        raise BadParameter(f"the circle example needs an odd d >= 5, got {d}")
    X = circle_model(d)
    C = X.whole() - X.point_set([f"e{d - 1}", "v0", "e0"])
    f = CellMap.from_ids(X, C, {c: _rot(c, 2, d) for c in C.ids()})
    levels = {}
    if d == 5:
        levels = {2: ["v1", "v2", "v4", "e1"], 3: ["v2", "v4"], 4: ["v2"], 5: []}
    return GalleryInstance(
        f"ex_circle_d({d})", X, C, f, d - 1, {"continuous": True, "bdr_function": True},
        notes=f"Arc of {d - 2} of {d} sectors, rotated by two sectors; X and C connected "
              "but the gate property fails on the circle.",
        expected_levels=levels)


# -------------------------------------------------------------- stripes

def ex_stripes(periods: int = 3) -> GalleryInstance:
    """Axis plus vertical stripes ``[5k, 5k+2]``, on a window of ``periods`` periods."""
    if periods < 2:
        raise BadParameter("the stripes window needs at least two periods")
    xmax = 5 * periods + 2
    xs = labeled_path([str(i) for i in range(xmax + 1)])
    ys = labeled_path(["-1", "0", "1"])
    G = product_space(xs, ys)

    def in_stripe(xc: str) -> bool:
        nums = [int(t) for t in xc.split("..")]
        return all(n % 5 <= 2 for n in nums) and (len(nums) == 1 or nums[0] % 5 < 2)

    keep = []
    for cell in G.cells:
        xc, yc = cell[1:-1].split(",")
        if yc == "0" or in_stripe(xc):
            keep.append(cell)
    X = G.subspace(G.point_set(keep))
    end = 5 * periods - 1
    C = X.point_set([_p(str(n), "0") for n in range(end + 1)]
                    + [_p(f"{n}..{n + 1}", "0") for n in range(end)])
    table = {}
    for n in range(end + 1):
        table[_p(str(n), "0")] = _p(str(n + 2), "-1" if n % 5 == 4 else "0")
    for n in range(end):
        if n % 5 <= 2:
            table[_p(f"{n}..{n + 1}", "0")] = _p(f"{n + 2}..{n + 3}", "0")
        else:
            table[_p(f"{n}..{n + 1}", "0")] = _p(f"{n + 2}..{n + 3}", "-1..0")
    f = CellMap.from_ids(X, C, table)
    return GalleryInstance(
        "ex_stripes" if periods == 3 else f"ex_stripes({periods})", X, C, f, 5,
        {"continuous": True, "bdr_function": False},
        notes="Finite window of the periodic stripes example. The right end of the "
              "window is a boundary cell sent off C, an artefact of truncation; the "
              "periodic filtration is unaffected (see the widening cross-check).")


# -------------------------------------------------------------- polar grids

class _Polar:
    """Angle and radius positions for product cells of a circle and a radial path."""

    def __init__(self, X: FiniteSpace, d: int, radii: list[str]):
        self.X, self.d, self.radii = X, d, radii
        self.by_cell = {}
        for a in range(2 * d):
            for r in range(2 * len(radii) - 1):
                cid = _p(self.acell(a), self.rcell(r))
                self.by_cell[X.idx(cid)] = (a, r)

    def acell(self, a: int) -> str:
        a %= 2 * self.d
        return f"v{a // 2}" if a % 2 == 0 else f"e{a // 2}"

    def rcell(self, r: int) -> str:
        return self.radii[r // 2] if r % 2 == 0 else f"{self.radii[r // 2]}..{self.radii[r // 2 + 1]}"

    def idx(self, a: int, r: int) -> int:
        return self.X.idx(_p(self.acell(a), self.rcell(r)))

    def rpos(self, label: str) -> int:
        return 2 * self.radii.index(label)


def _polar_space(d: int, radii: list[str]) -> FiniteSpace:
    P = product_space(circle_model(d), labeled_path(radii))
    return P


def _annulus_C(pol: _Polar, inner_lo: int, mid: int, outer_hi: int, arc: range) -> PointSet:
    cells = []
    for a in range(2 * pol.d):
        for r in range(inner_lo, mid + 1):
            cells.append(pol.idx(a, r))
    for a in arc:
        for r in range(mid, outer_hi + 1):
            cells.append(pol.idx(a, r))
    return pol.X.from_mask(sum(1 << i for i in set(cells)))


# circle positions of each point of the subdivided circle, per block of four
_ROTATION_PATTERNS = ((0, 1, 1, 1), (0, 1, 2, 2), (1, 1, 2, 3), (2, 2, 2, 3))


def _circle_chain_slot(apos: list[int], d: int) -> tuple[int, int]:
    """Block and slot of a chain of the circle given by its angle positions."""
    n = 2 * d
    s = sorted(set(p % n for p in apos))
    if len(s) == 1:
        p = s[0]
        return (p // 2, 0) if p % 2 == 0 else (p // 2, 2)
    v = next(p for p in s if p % 2 == 0)
    e = next(p for p in s if p % 2 == 1)
    if v == e - 1:
        return e // 2, 1
    return e // 2, 3


def _rotation_fence_value(apos: list[int], d: int, j: int) -> int:
    k, slot = _circle_chain_slot(apos, d)
    q, r = divmod(j, 4)
    return 2 * k + 2 * q + _ROTATION_PATTERNS[r][slot]


def _clamp(p: int, lo: int, hi: int) -> int:
    return min(max(p, lo), hi)


def _polar_certificate(pol: _Polar, C: PointSet, sectors: int, radial: Callable[[int], int],
                       r_lo: int, r_hi: int, r_mid: int) -> HomotopyCertificate:
    """Fence: squash radii onto ``r_mid``, rotate there, then open out onto ``radial``."""
    sd = subdivide(pol.X, C)
    tops = [pol.by_cell[ch[-1]] for ch in sd.chains]
    angles = [[pol.by_cell[i][0] for i in ch] for ch in sd.chains]
    stages = []
    lo, hi = r_lo, r_hi
    bounds = [(lo, hi)]
    while lo < r_mid:
        lo += 1
        bounds.append((lo, hi))
    while hi > r_mid:
        hi -= 1
        bounds.append((lo, hi))
    for lo, hi in bounds:
        stages.append({k: pol.idx(a, _clamp(r, lo, hi)) for k, (a, r) in enumerate(tops)})
    for j in range(4 * sectors + 1):
        stages.append({k: pol.idx(_rotation_fence_value(angles[k], pol.d, j), r_mid)
                       for k in range(len(tops))})
    targets = [radial(r) for _, r in tops]
    top_h = max(targets)
    for h in range(r_mid, top_h + 1):
        stages.append({k: pol.idx(a + 2 * sectors, _clamp(targets[k], r_mid, h))
                       for k, (a, r) in enumerate(tops)})
    return HomotopyCertificate(pol.X, C, dedupe(stages), subdivided=True, sd=sd)


def ex_stargate_bis(with_certificate: bool = True) -> GalleryInstance:
    d = 5
    radii = ["1", "2", "2.25", "2.5", "3"]
    X = _polar_space(d, radii)
    pol = _Polar(X, d, radii)
    arc = range(2, 2 * d - 1)        # v1 .. v4
    C = _annulus_C(pol, 0, pol.rpos("2"), pol.rpos("3"), arc)
    target = pol.rpos("2.5")
    f = CellMap(X, C, {i: pol.idx(pol.by_cell[i][0] + 4, target) for i in C})
    cert = None
    if with_certificate:
        cert = _polar_certificate(pol, C, 2, lambda r: target, 0, pol.rpos("3"), pol.rpos("2"))
    return GalleryInstance(
        "ex_stargate_bis", X, C, f, 5, {"continuous": True, "bdr_function": True}, cert,
        notes="Annulus 1 <= rho <= 3; C is the inner ring with three fifths of the outer "
              "ring; f rotates by two sectors onto the circle rho = 5/2. The fence is "
              "stated on the subdivision of C.")


_STARGATE_RADII = ["1", "1.5", "2", "2.25", "2.5", "3", "4"]


def _folded_radius(r: int) -> int:
    """Radial position of ``(5 - |rho - 2|) / 2`` on the stargate grid."""
    table = {0: 4, 1: 5, 2: 6, 3: 7, 4: 8, 5: 7, 6: 7, 7: 7, 8: 6, 9: 5, 10: 4}
    return table[r]


def ex_stargate(with_certificate: bool = True) -> GalleryInstance:
    d = 5
    radii = _STARGATE_RADII
    P = _polar_space(d, radii)
    cells = list(P.cells) + ["o"] + [f"s{k}" for k in range(d)] + [f"t{k}" for k in range(d)]
    hasse = [(P.cells[a], P.cells[b]) for a, b in P.hasse]
    for k in range(d):
        hasse += [("o", f"s{k}"), (_p(f"v{k}", "1"), f"s{k}"),
                  (f"s{k}", f"t{k}"), (f"s{(k + 1) % d}", f"t{k}"), (_p(f"e{k}", "1"), f"t{k}")]
    X = build_space(cells, hasse)
    pol = _Polar(X, d, radii)
    arc = range(2, 2 * d - 1)
    r3 = pol.rpos("3")
    C = _annulus_C(pol, 0, pol.rpos("2"), r3, arc)
    f = CellMap(X, C, {i: pol.idx(pol.by_cell[i][0] + 4, _folded_radius(pol.by_cell[i][1]))
                       for i in C})
    cert = None
    if with_certificate:
        cert = _polar_certificate(pol, C, 2, _folded_radius, 0, r3, pol.rpos("2"))
    return GalleryInstance(
        "ex_stargate", X, C, f, 6, {"continuous": True, "bdr_function": True}, cert,
        notes="Same C inside a disk with a collar, so the circles rho = 1 and rho = 3 are "
              "boundary; f folds the radius by (5 - |rho - 2|) / 2 and rotates by two "
              "sectors. Radius 1.5 is a grid vertex because it maps to 2.25.")


# -------------------------------------------------------------- torus

def ex_ndim_torus(d1: int = 5, d2: int = 7) -> GalleryInstance:
    for d in (d1, d2):
        if d < 5 or d % 2 == 0:
            raise BadParameter(f"torus factors must be odd and >= 5, got {d}")
    if math.gcd(d1, d2) != 1:
        raise BadParameter("torus factors must be coprime")
    X = product_space(circle_model(d1), circle_model(d2))
    window = ["e0", "v1", "e1"]
    O = X.point_set([_p(a, b) for a in window for b in window])
    C = X.whole() - O
    table = {}
    for cid in C.ids():
        a, b = cid[1:-1].split(",")
        table[cid] = _p(_rot(a, 2, d1), _rot(b, 2, d2))
    f = CellMap.from_ids(X, C, table)
    return GalleryInstance(
        f"ex_ndim_torus({d1},{d2})", X, C, f, d1 * d2 - 1,
        {"continuous": True, "bdr_function": True},
        notes="Product rotation on a torus with an open box removed. The orbit oracle "
              "gives d1*d2 - 1 on this model: the rotation permutes the d1*d2 vertex "
              "pairs in one cycle and exactly one of them lies in the removed box.",
        derived=True, stated_iter=d1 * d2)


# -------------------------------------------------------------- set-valued

def ex_trivial_corr() -> GalleryInstance:
    X = _line(-1, 6)
    C = X.point_set([f"x{i}" for i in range(5)] + [f"x{i}..{i + 1}" for i in range(4)])
    two, five = ["x2"], ["x5"]
    table = {"x0": two, "x0..1": two, "x3..4": two, "x4": two,
             "x1": two + five, "x3": two + five,
             "x1..2": five, "x2": five, "x2..3": five}
    f = SetValuedMap.from_ids(X, C, table)
    return GalleryInstance(
        "ex_trivial_corr", X, C, f, 2,
        {"usc": True, "conn": False, "bdr_w": True, "bdr_s": True},
        notes="Images {2}, {2,5} or {5} on [0,4]; the disconnected images at 1 and 3 "
              "leave only the trivial iterations.")


def ex_corr_main() -> GalleryInstance:
    xs = labeled_path([str(i) for i in range(-1, 5)])
    ys = labeled_path([str(i) for i in range(-1, 4)])
    X = product_space(xs, ys)

    def within(c: str, lo: int, hi: int) -> bool:
        return all(lo <= int(t) <= hi for t in c.split(".."))

    Q = []
    for cell in X.cells:
        a, b = cell[1:-1].split(",")
        if within(a, 0, 2) and within(b, 0, 2):
            Q.append(cell)
    Qs = X.point_set(Q)
    S = X.point_set(["(2..3,0)", "(3,0)"])
    C = Qs | S
    bdQ = X.boundary(Qs)
    corner = "(2,0)"
    table = {corner: ["(1,1)", "(1..2,0..1)", "(2,0..1)", "(2..3,0..1)", "(3,0)"]}
    for c in S.ids():
        table[c] = ["(1,1)"]
    for c in bdQ.ids():
        if c != corner:
            table[c] = ["(3,0)"]
    for c in (Qs - bdQ).ids():
        table[c] = ["(3,1)"] if c == "(1,1)" else ["(3,0..1)"]
    f = SetValuedMap.from_ids(X, C, table)
    return GalleryInstance(
        "ex_corr_main", X, C, f, 4,
        {"usc": True, "conn": True, "bdr_w": True, "bdr_s": False},
        notes="Square plus a handle segment. The corner (2,0) has a segment as image; "
              "every other image is a single cell.",
        expected_levels={2: sorted(bdQ.ids() + S.ids()), 3: sorted(bdQ.ids()), 4: [corner],
                         5: []})


CATALOGUE: dict[str, Callable[..., GalleryInstance]] = {
    "ex_4_1": ex_4_1,
    "ex_4_2": ex_4_2,
    "ex_circle_d": ex_circle_d,
    "ex_stripes": ex_stripes,
    "ex_stargate_bis": ex_stargate_bis,
    "ex_stargate": ex_stargate,
    "ex_ndim_torus": ex_ndim_torus,
    "ex_trivial_corr": ex_trivial_corr,
    "ex_corr_main": ex_corr_main,
}

DEFAULT_NAMES = ("ex_4_1", "ex_4_2", "ex_circle_d(5)", "ex_circle_d(7)", "ex_stripes",
                 "ex_stargate_bis", "ex_stargate", "ex_ndim_torus(5,7)", "ex_trivial_corr",
                 "ex_corr_main")

_CALL = re.compile(r"^(\w+)(?:\(([\d,\s]*)\))?$")


def build_example(name: str) -> GalleryInstance:
    m = _CALL.match(name.strip())
    if not m or m.group(1) not in CATALOGUE:
        raise UnknownExample(f"no gallery example named {name!r}")
    args = [int(a) for a in (m.group(2) or "").split(",") if a.strip()]
    return CATALOGUE[m.group(1)](*args)
