"""Cell maps, set-valued maps, and decision procedures for their hypotheses.

Continuity of a cell map is monotonicity of the assignment.  Upper
semicontinuity of a set-valued map is decided through minimal open
neighbourhoods: ``f`` is usc iff ``x <= y`` implies that ``f(y)`` lies in
the up-closure of ``f(x)``.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Mapping, Sequence

from .errors import DomainMismatch, EmptyImage, NotInDomain, PartialMap, UnknownCell
from .topology import FiniteSpace, PointSet, iter_bits

HOLDS = "holds"
FAILS = "fails"
NA = "n/a"


@dataclass(frozen=True)
class Check:
    status: str = NA
    witness: tuple[str, ...] | None = None

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    @property
    def fails(self) -> bool:
        return self.status == FAILS

    def __str__(self):
        if self.witness:
            return f"{self.status} (witness {', '.join(self.witness)})"
        return self.status


_holds = Check(HOLDS)
_na = Check(NA)


def _fail(*cells: str) -> Check:
    return Check(FAILS, tuple(cells))


@dataclass(frozen=True)
class HypothesisReport:
    continuous: Check = _na
    usc: Check = _na
    conn: Check = _na
    bdr_w: Check = _na
    bdr_s: Check = _na
    bdr_function: Check = _na

    def statuses(self) -> dict[str, str]:
        return {f.name: getattr(self, f.name).status for f in fields(self)}

    def applicable(self) -> dict[str, bool]:
        """Name -> holds, for every check that is not ``n/a``."""
        return {k: v == HOLDS for k, v in self.statuses().items() if v != NA}


class CellMap:
    """A total single-valued map from the cells of ``domain`` to cells of ``space``."""

    kind = "function"

    def __init__(self, space: FiniteSpace, domain: PointSet, values: Mapping[int, int]):
        if domain.space is not space:
            raise DomainMismatch("domain is not a point set of the given space")
        missing = domain.mask
        for i, j in values.items():
            if not domain.mask >> i & 1:
                raise NotInDomain(f"value given for {space.cells[i]!r} outside the domain")
            space.idx(j)
            missing &= ~(1 << i)
        if missing:
            raise PartialMap(f"map undefined on {space.from_mask(missing).ids()}")
        self.space = space
        self.domain = domain
        self.values = dict(sorted(values.items()))

    @classmethod
    def from_ids(cls, space: FiniteSpace, domain: PointSet, table: Mapping[str, str]) -> CellMap:
        return cls(space, domain, {space.idx(a): space.idx(b) for a, b in table.items()})

    def target(self, i: int) -> int:
        return self.values[i]

    def image_mask(self, i: int) -> int:
        return 1 << self.values[i]

    def __call__(self, cell) -> str:
        i = self.space.idx(cell)
        if i not in self.values:
            raise NotInDomain(f"{self.space.cells[i]!r} is outside the domain")
        return self.space.cells[self.values[i]]

    def table(self) -> dict[str, list[str]]:
        cells = self.space.cells
        return {cells[i]: [cells[j]] for i, j in self.values.items()}

    def as_setvalued(self) -> SetValuedMap:
        return SetValuedMap(self.space, self.domain, {i: 1 << j for i, j in self.values.items()})

    def __eq__(self, other):
        return (isinstance(other, CellMap) and other.space is self.space
                and other.values == self.values)

    def __repr__(self):
        return f"CellMap({len(self.values)} cells)"


class SetValuedMap:
    """A total map from the cells of ``domain`` to nonempty sets of cells."""

    kind = "setvalued"

    def __init__(self, space: FiniteSpace, domain: PointSet, images: Mapping[int, int]):
        if domain.space is not space:
            raise DomainMismatch("domain is not a point set of the given space")
        missing = domain.mask
        for i, m in images.items():
            if not domain.mask >> i & 1:
                raise NotInDomain(f"image given for {space.cells[i]!r} outside the domain")
            if m == 0:
                raise EmptyImage(f"empty image at {space.cells[i]!r}")
            if m & ~space.full:
                raise UnknownCell(f"image at {space.cells[i]!r} names unknown cells")
            missing &= ~(1 << i)
        if missing:
            raise PartialMap(f"map undefined on {space.from_mask(missing).ids()}")
        self.space = space
        self.domain = domain
        self.images = dict(sorted(images.items()))

    @classmethod
    def from_ids(cls, space: FiniteSpace, domain: PointSet,
                 table: Mapping[str, Sequence[str]]) -> SetValuedMap:
        images = {}
        for a, bs in table.items():
            images[space.idx(a)] = space.point_set(bs).mask
        return cls(space, domain, images)

    def image_mask(self, i: int) -> int:
        return self.images[i]

    def __call__(self, cell) -> PointSet:
        i = self.space.idx(cell)
        if i not in self.images:
            raise NotInDomain(f"{self.space.cells[i]!r} is outside the domain")
        return self.space.from_mask(self.images[i])

    def table(self) -> dict[str, list[str]]:
        cells = self.space.cells
        return {cells[i]: [cells[j] for j in iter_bits(m)] for i, m in self.images.items()}

    def __repr__(self):
        return f"SetValuedMap({len(self.images)} cells)"


def image(f, A: PointSet) -> PointSet:
    """Union of the images of the cells of ``A``."""
    if not A <= f.domain:
        raise NotInDomain(f"{(A - f.domain)!r} is outside the domain")
    m = 0
    for i in A:
        m |= f.image_mask(i)
    return f.space.from_mask(m)


def check_continuous(f: CellMap) -> Check:
    space, dom = f.space, f.domain.mask
    up = space.up
    for x in f.domain:
        fx = f.values[x]
        for y in iter_bits(up[x] & dom & ~(1 << x)):
            fy = f.values[y]
            if not up[fx] >> fy & 1:
                return _fail(space.cells[x], space.cells[y])
    return _holds


def check_usc(f: SetValuedMap) -> Check:
    space, dom = f.space, f.domain.mask
    up = space.up
    for x in f.domain:
        reach = space.up_closure(f.image_mask(x))
        for y in iter_bits(up[x] & dom & ~(1 << x)):
            if f.image_mask(y) & ~reach:
                return _fail(space.cells[x], space.cells[y])
    return _holds


def check_conn(f: SetValuedMap) -> Check:
    for x in f.domain:
        if not f.space.is_connected_mask(f.image_mask(x)):
            return _fail(f.space.cells[x])
    return _holds


def check_boundary_conditions(f, C: PointSet) -> HypothesisReport:
    """Re-entry conditions on the boundary of ``C``."""
    if f.domain != C:
        raise DomainMismatch("the map's domain must equal C")
    space = f.space
    bd = space.boundary(C) & C  # for a non-closed C the boundary leaves the domain
    if f.kind == "function":
        for x in bd:
            if not C.mask >> f.values[x] & 1:
                return HypothesisReport(bdr_function=_fail(space.cells[x]))
        return HypothesisReport(bdr_function=_holds)
    weak, strong = _holds, _holds
    for x in bd:
        m = f.image_mask(x)
        if weak.holds and m & C.mask == 0:
            weak = _fail(space.cells[x])
        if strong.holds and m & ~C.mask:
            strong = _fail(space.cells[x])
    return HypothesisReport(bdr_w=weak, bdr_s=strong)


def check_hypotheses(f, C: PointSet) -> HypothesisReport:
    bd = check_boundary_conditions(f, C)
    if f.kind == "function":
        return HypothesisReport(continuous=check_continuous(f), bdr_function=bd.bdr_function)
    return HypothesisReport(usc=check_usc(f), conn=check_conn(f),
                            bdr_w=bd.bdr_w, bdr_s=bd.bdr_s)


def usc_by_open_sets(f: SetValuedMap, open_sets) -> bool:
    """Definitional usc test against an explicit family of open sets of the space.

    Used only as an oracle; ``open_sets`` is an iterable of masks.
    """
    space, dom = f.space, f.domain.mask
    for U in open_sets:
        pre = 0
        for x in f.domain:
            if f.image_mask(x) & ~U == 0:
                pre |= 1 << x
        # open in the subspace C: closed under going up inside C
        for x in iter_bits(pre):
            if space.up[x] & dom & ~pre:
                return False
    return True
