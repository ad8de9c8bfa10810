"""Betti numbers of the order complex and the boundary connectedness property.

The order complex has the cells as vertices and the chains of the strict
order as simplices.  Only the 2-skeleton is built, which is all ``b1``
depends on.  Ranks are exact over the rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import BadParameter, TooLarge
from .maps import FAILS, HOLDS, Check
from .topology import FiniteSpace, PointSet, iter_bits, iter_open_sets

GATE_CAP = 20


class OrderComplex:
    def __init__(self, space: FiniteSpace):
        if len(space) == 0:
            raise BadParameter("the space is empty")
        self.space = space
        n = len(space)
        self.vertices = list(range(n))
        above = [space.up[i] & ~(1 << i) for i in range(n)]
        self.edges = [(a, b) for a in range(n) for b in iter_bits(above[a])]
        self.triangles = [(a, b, c) for a, b in self.edges for c in iter_bits(above[b])]
        self._edge_index = {e: k for k, e in enumerate(self.edges)}

    def boundary1(self) -> list[dict[int, int]]:
        """Columns of the edge boundary matrix, as sparse ``{row: entry}`` dicts."""
        return [{b: 1, a: -1} for a, b in self.edges]

    def boundary2(self) -> list[dict[int, int]]:
        ix = self._edge_index
        return [{ix[(b, c)]: 1, ix[(a, c)]: -1, ix[(a, b)]: 1} for a, b, c in self.triangles]

    def composite_vanishes(self) -> bool:
        d1 = self.boundary1()
        for col in self.boundary2():
            acc: dict[int, int] = {}
            for e, coef in col.items():
                for v, c in d1[e].items():
                    acc[v] = acc.get(v, 0) + coef * c
            if any(acc.values()):
                return False
        return True

    def betti(self) -> tuple[int, int]:
        r1 = rank(self.boundary1())
        r2 = rank(self.boundary2())
        b0 = len(self.vertices) - r1
        b1 = len(self.edges) - r1 - r2
        return b0, b1


def rank(columns: list[dict[int, int]]) -> int:
    """Rank over the rationals of a sparse matrix given by columns."""
    pivots: dict[int, dict[int, Fraction]] = {}
    r = 0
    for col in columns:
        v = {k: Fraction(c) for k, c in col.items() if c}
        while v:
            p = max(v)
            if p not in pivots:
                pivots[p] = v
                r += 1
                break
            piv = pivots[p]
            factor = v[p] / piv[p]
            for k, c in piv.items():
                nv = v.get(k, 0) - factor * c
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
    return r


def betti0(space: FiniteSpace) -> int:
    return OrderComplex(space).betti()[0]


def betti1(space: FiniteSpace) -> int:
    return OrderComplex(space).betti()[1]


@dataclass(frozen=True)
class GateReport:
    holds: bool
    counterexample: PointSet | None = None
    boundary: PointSet | None = None

    def as_check(self) -> Check:
        if self.holds:
            return Check(HOLDS)
        return Check(FAILS, tuple(self.counterexample.ids()))


def gate_boundary_connectedness(space: FiniteSpace, cap: int = GATE_CAP) -> GateReport:
    """Check that every open ``A`` with ``A`` and its complement connected has connected boundary.

    The first counterexample in (size, cell indices) order is returned.
    """
    if len(space) > cap:
        raise TooLarge(f"{len(space)} cells exceeds the enumeration cap {cap}")
    full = space.full
    best = None
    for A in iter_open_sets(space):
        if A == 0 or A == full:
            continue
        if not space.is_connected_mask(A) or not space.is_connected_mask(full & ~A):
            continue
        bd = space.down_closure(A) & ~A
        if space.is_connected_mask(bd):
            continue
        key = (A.bit_count(), tuple(iter_bits(A)))
        if best is None or key < best[0]:
            best = (key, A, bd)
    if best is None:
        return GateReport(True)
    return GateReport(False, space.from_mask(best[1]), space.from_mask(best[2]))


def clopen_components(space: FiniteSpace, A: PointSet) -> int:
    """Number of components of ``A`` counted from its clopen subsets.

    Exponential; an oracle for small sets only.
    """
    cells = list(A)
    if len(cells) > 16:
        raise TooLarge("clopen enumeration is limited to 16 cells")
    rel_up = [space.up[i] & A.mask for i in range(len(space))]
    rel_down = [space.down[i] & A.mask for i in range(len(space))]
    clopens = 0
    for k in range(len(cells) + 1):
        for sub in combinations(cells, k):
            m = sum(1 << i for i in sub)
            if all(rel_up[i] & ~m == 0 and rel_down[i] & ~m == 0 for i in sub):
                clopens += 1
    # a space with c components has exactly 2**c clopen subsets
    return clopens.bit_length() - 1
