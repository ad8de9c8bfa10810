"""Fence homotopies between the identity and a cell map, and their verification.

A fence is a sequence of monotone maps in which consecutive maps are
pointwise comparable.  On a minimal finite space the only map fence-homotopic
to the identity is the identity itself, so non-trivial certificates are
stated on the barycentric subdivision: the poset of chains of ``C`` ordered
by inclusion.  There the fence starts at ``max`` (each chain goes to its top
cell) and ends at ``f`` composed with ``max``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import BadParameter, CertificateInvalid
from .maps import CellMap
from .topology import FiniteSpace, PointSet, build_space, iter_bits

CHAIN_SEP = "<"


@dataclass(frozen=True)
class Subdivision:
    """Chains of ``C`` as points of a new finite space.

    ``chains[k]`` lists the ambient indices of the ``k``-th point, bottom first.
    """

    ambient: FiniteSpace
    carrier: PointSet
    space: FiniteSpace
    chains: tuple[tuple[int, ...], ...]

    def top(self, k: int) -> int:
        return self.chains[k][-1]

    def inside(self, A: PointSet) -> int:
        """Mask of the chains all of whose cells lie in ``A``."""
        m = 0
        for k, ch in enumerate(self.chains):
            if all(A.mask >> i & 1 for i in ch):
                m |= 1 << k
        return m


def chain_id(space: FiniteSpace, chain: Sequence[int]) -> str:
    return CHAIN_SEP.join(space.cells[i] for i in chain)


def subdivide(space: FiniteSpace, C: PointSet) -> Subdivision:
    for c in space.cells:
        if CHAIN_SEP in c:
            raise BadParameter(f"cell id {c!r} contains the chain separator")
    order = sorted(C, key=lambda i: (space.height()[i], i))
    above = {i: space.up[i] & C.mask & ~(1 << i) for i in C}
    chains: list[tuple[int, ...]] = []

    def grow(chain):
        chains.append(chain)
        for j in iter_bits(above[chain[-1]]):
            grow(chain + (j,))

    for i in order:
        grow((i,))
    chains.sort(key=lambda ch: (len(ch), ch))
    ids = [chain_id(space, ch) for ch in chains]
    hasse = []
    for ch, cid in zip(chains, ids):
        if len(ch) > 1:
            for k in range(len(ch)):
                hasse.append((chain_id(space, ch[:k] + ch[k + 1:]), cid))
    sd = build_space(ids, hasse)
    return Subdivision(space, C, sd, tuple(chains))


@dataclass
class HomotopyCertificate:
    """Stages of a fence, each a dict from domain point index to ambient cell index.

    With ``subdivided`` false the domain is ``C`` itself; otherwise it is
    ``subdivide(space, C)``.
    """

    space: FiniteSpace
    C: PointSet
    stages: list[dict[int, int]]
    subdivided: bool = False
    sd: Subdivision | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.subdivided and self.sd is None:
            self.sd = subdivide(self.space, self.C)

    @property
    def domain_space(self) -> FiniteSpace:
        return self.sd.space if self.subdivided else self.space

    @property
    def domain_mask(self) -> int:
        return self.sd.space.full if self.subdivided else self.C.mask

    def tables(self) -> list[dict[str, str]]:
        dom, cells = self.domain_space, self.space.cells
        return [{dom.cells[k]: cells[v] for k, v in sorted(st.items())} for st in self.stages]

    @classmethod
    def from_tables(cls, space: FiniteSpace, C: PointSet, tables: Sequence[Mapping[str, str]],
                    subdivided: bool = False) -> HomotopyCertificate:
        cert = cls(space, C, [], subdivided)
        dom = cert.domain_space
        for t in tables:
            cert.stages.append({dom.idx(a): space.idx(b) for a, b in t.items()})
        return cert

    def start_map(self) -> dict[int, int]:
        if self.subdivided:
            return {k: self.sd.top(k) for k in range(len(self.sd.chains))}
        return {i: i for i in self.C}

    def end_map(self, f: CellMap) -> dict[int, int]:
        if self.subdivided:
            return {k: f.values[self.sd.top(k)] for k in range(len(self.sd.chains))}
        return dict(f.values)

    def boundary_points(self) -> int:
        bd = self.space.boundary(self.C) & self.C
        if self.subdivided:
            return self.sd.inside(bd)
        return bd.mask


@dataclass(frozen=True)
class CertificateVerdict:
    ok: bool
    stage: int | None = None
    cell: str | None = None
    clause: str | None = None

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "certificate verified"
        return f"stage {self.stage}: clause '{self.clause}' fails at {self.cell}"


def verify_fence(cert: HomotopyCertificate) -> CertificateVerdict:
    """Check totality, monotonicity, comparability and the boundary clause."""
    space = cert.space
    dom = cert.domain_space
    dmask = cert.domain_mask
    bd_pts = cert.boundary_points()
    covers = dom.covering_pairs()
    if not cert.stages:
        return CertificateVerdict(False, 0, None, "nonempty")
    for s, st in enumerate(cert.stages):
        keys = 0
        for k, v in st.items():
            if not dmask >> k & 1 or not 0 <= v < len(space):
                return CertificateVerdict(False, s, dom.cells[k] if 0 <= k < len(dom) else str(k),
                                          "total")
            keys |= 1 << k
        if keys != dmask:
            missing = dmask & ~keys
            return CertificateVerdict(False, s, dom.cells[(missing & -missing).bit_length() - 1],
                                      "total")
        for a, b in covers:
            if dmask >> a & 1 and dmask >> b & 1 and not space.leq(st[a], st[b]):
                return CertificateVerdict(False, s, dom.cells[b], "monotone")
        for k in iter_bits(bd_pts):
            if not cert.C.mask >> st[k] & 1:
                return CertificateVerdict(False, s, dom.cells[k], "boundary")
        if s:
            prev = cert.stages[s - 1]
            for k in iter_bits(dmask):
                if not (space.leq(prev[k], st[k]) or space.leq(st[k], prev[k])):
                    return CertificateVerdict(False, s, dom.cells[k], "comparable")
    return CertificateVerdict(True)


def verify_certificate(cert: HomotopyCertificate, C: PointSet, f: CellMap) -> CertificateVerdict:
    if C != cert.C or f.domain != C:
        return CertificateVerdict(False, None, None, "domain")
    dom = cert.domain_space
    for which, s, expect in (("start", 0, cert.start_map()),
                             ("end", len(cert.stages) - 1, cert.end_map(f))):
        if not cert.stages:
            break
        st = cert.stages[s]
        for k, v in expect.items():
            if st.get(k) != v:
                return CertificateVerdict(False, s, dom.cells[k], which)
    return verify_fence(cert)


def concatenate(first: HomotopyCertificate, second: HomotopyCertificate) -> HomotopyCertificate:
    """Join two fences whose end and start stages agree."""
    if first.subdivided != second.subdivided or first.C != second.C:
        raise BadParameter("fences live on different domains")
    if first.stages[-1] != second.stages[0]:
        raise BadParameter("end of the first fence differs from the start of the second")
    return HomotopyCertificate(first.space, first.C, first.stages + second.stages[1:],
                               first.subdivided, first.sd)


def dedupe(stages: list[dict[int, int]]) -> list[dict[int, int]]:
    out: list[dict[int, int]] = []
    for st in stages:
        if not out or out[-1] != st:
            out.append(st)
    return out


@dataclass(frozen=True)
class HomotopyFinding:
    iter: float
    meets_five: bool
    stages: int

    def __str__(self):
        verdict = "meets" if self.meets_five else "DOES NOT meet"
        return f"iter = {self.iter} {verdict} the bound 5 ({self.stages} fence stages)"


def homotopy_bound_check(space: FiniteSpace, C: PointSet, f: CellMap,
                         cert: HomotopyCertificate, report) -> HomotopyFinding:
    verdict = verify_certificate(cert, C, f)
    if not verdict:
        raise CertificateInvalid(str(verdict))
    return HomotopyFinding(report.iter, report.iter >= 5, len(cert.stages))


def trivial_certificate(space: FiniteSpace, C: PointSet, f: CellMap) -> HomotopyCertificate:
    """Two-stage fence ``[id, f]``; valid when ``f(x)`` is comparable to ``x`` everywhere."""
    ident = {i: i for i in C}
    stages = dedupe([ident, dict(f.values)])
    return HomotopyCertificate(space, C, stages)


__all__ = [
    "Subdivision", "subdivide", "HomotopyCertificate", "CertificateVerdict", "verify_fence",
    "verify_certificate", "concatenate", "dedupe", "HomotopyFinding", "homotopy_bound_check",
    "trivial_certificate",
]
