"""Finite topological spaces presented as face posets.

A cell ``p`` lies below ``q`` (``p <= q``) when ``p`` is in the closure of
``q``; open sets are exactly the up-sets.  Sets of cells are bitmasks over
cell indices, wrapped in :class:`PointSet`.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator, Sequence

from .errors import BadParameter, CyclicOrder, DuplicateCell, NotASubset, UnknownCell


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of set bits in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def lowest_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


class PointSet:
    """An immutable subset of the cells of one :class:`FiniteSpace`."""

    __slots__ = ("space", "mask")

    def __init__(self, space: FiniteSpace, mask: int):
        if mask & ~space.full:
            raise UnknownCell(f"mask {mask:#x} has bits outside the space")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "mask", mask)

    def __setattr__(self, name, value):
        raise AttributeError("PointSet is immutable")

    def _other(self, other: PointSet) -> int:
        if not isinstance(other, PointSet):
            return NotImplemented
        if other.space is not self.space:
            raise ValueError("point sets belong to different spaces")
        return other.mask

    def __or__(self, other):
        return PointSet(self.space, self.mask | self._other(other))

    def __and__(self, other):
        return PointSet(self.space, self.mask & self._other(other))

    def __sub__(self, other):
        return PointSet(self.space, self.mask & ~self._other(other))

    def __xor__(self, other):
        return PointSet(self.space, self.mask ^ self._other(other))

    def complement(self) -> PointSet:
        return PointSet(self.space, self.space.full & ~self.mask)

    __invert__ = complement

    def __le__(self, other):
        return self.mask & ~self._other(other) == 0

    def __lt__(self, other):
        return self <= other and self.mask != other.mask

    def __ge__(self, other):
        return other <= self

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.space is other.space and self.mask == other.mask

    def __hash__(self):
        return hash((id(self.space), self.mask))

    def __len__(self):
        return self.mask.bit_count()

    def __bool__(self):
        return self.mask != 0

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.mask)

    def __contains__(self, item) -> bool:
        i = item if isinstance(item, int) else self.space.idx(item)
        return bool(self.mask >> i & 1)

    def isdisjoint(self, other: PointSet) -> bool:
        return self.mask & self._other(other) == 0

    def ids(self) -> list[str]:
        return [self.space.cells[i] for i in iter_bits(self.mask)]

    def first(self) -> int:
        if not self.mask:
            raise ValueError("empty point set")
        return lowest_bit(self.mask)

    def __repr__(self):
        return "{" + ", ".join(self.ids()) + "}"


class FiniteSpace:
    """A finite T0 space: cells plus the face order.

    Use :func:`build_space` (or the builders below) rather than calling the
    constructor, which trusts its inputs.
    """

    def __init__(self, cells: Sequence[str], up: Sequence[int], hasse: Sequence[tuple[int, int]]):
        self.cells = tuple(cells)
        self.index = {c: i for i, c in enumerate(self.cells)}
        self.up = tuple(up)
        n = len(self.cells)
        down = [0] * n
        for i, m in enumerate(self.up):
            for j in iter_bits(m):
                down[j] |= 1 << i
        self.down = tuple(down)
        self.adj = tuple(u | d for u, d in zip(self.up, self.down))
        self.hasse = tuple(hasse)
        self.full = (1 << n) - 1
        self._height = None

    def __len__(self):
        return len(self.cells)

    def __repr__(self):
        return f"FiniteSpace({len(self)} cells)"

    # -- addressing -------------------------------------------------------

    def idx(self, cell) -> int:
        if isinstance(cell, int):
            if 0 <= cell < len(self.cells):
                return cell
            raise UnknownCell(f"cell index {cell} out of range")
        try:
            return self.index[cell]
        except KeyError:
            raise UnknownCell(f"unknown cell {cell!r}") from None

    def leq(self, a, b) -> bool:
        return bool(self.up[self.idx(a)] >> self.idx(b) & 1)

    def point_set(self, cells: Iterable = ()) -> PointSet:
        mask = 0
        for c in cells:
            mask |= 1 << self.idx(c)
        return PointSet(self, mask)

    def from_mask(self, mask: int) -> PointSet:
        return PointSet(self, mask)

    def empty(self) -> PointSet:
        return PointSet(self, 0)

    def whole(self) -> PointSet:
        return PointSet(self, self.full)

    # -- topology ---------------------------------------------------------

    def minimal_open(self, x) -> PointSet:
        return PointSet(self, self.up[self.idx(x)])

    def up_closure(self, mask: int) -> int:
        out = 0
        for i in iter_bits(mask):
            out |= self.up[i]
        return out

    def down_closure(self, mask: int) -> int:
        out = 0
        for i in iter_bits(mask):
            out |= self.down[i]
        return out

    def interior_mask(self, mask: int) -> int:
        out = 0
        for i in iter_bits(mask):
            if self.up[i] & ~mask == 0:
                out |= 1 << i
        return out

    def closure(self, A: PointSet) -> PointSet:
        return PointSet(self, self.down_closure(A.mask))

    def interior(self, A: PointSet) -> PointSet:
        return PointSet(self, self.interior_mask(A.mask))

    def boundary(self, A: PointSet) -> PointSet:
        return PointSet(self, self.down_closure(A.mask) & ~self.interior_mask(A.mask))

    def is_open(self, A: PointSet) -> bool:
        return self.up_closure(A.mask) == A.mask

    def is_closed(self, A: PointSet) -> bool:
        return self.down_closure(A.mask) == A.mask

    def relative_boundary(self, A: PointSet, Y: PointSet) -> PointSet:
        """Boundary of ``A`` inside the subspace ``Y``."""
        return SubspaceView(self, Y).boundary(A)

    def component_of(self, i: int, mask: int) -> int:
        comp = 1 << i
        frontier = comp
        while frontier:
            grow = 0
            for j in iter_bits(frontier):
                grow |= self.adj[j]
            grow &= mask & ~comp
            comp |= grow
            frontier = grow
        return comp

    def component_masks(self, mask: int) -> list[int]:
        out = []
        rest = mask
        while rest:
            comp = self.component_of(lowest_bit(rest), mask)
            out.append(comp)
            rest &= ~comp
        return out

    def connected_components(self, A: PointSet) -> list[PointSet]:
        """Components in ascending order of their smallest cell index."""
        return [PointSet(self, m) for m in self.component_masks(A.mask)]

    def is_connected_mask(self, mask: int) -> bool:
        # the empty set counts as connected
        return mask == 0 or self.component_of(lowest_bit(mask), mask) == mask

    def is_connected(self, A: PointSet) -> bool:
        return self.is_connected_mask(A.mask)

    # -- structure --------------------------------------------------------

    def height(self) -> tuple[int, ...]:
        """Length of the longest chain ending at each cell."""
        if self._height is None:
            h = [0] * len(self)
            for i in self.linear_extension():
                below = self.down[i] & ~(1 << i)
                h[i] = max((h[j] + 1 for j in iter_bits(below)), default=0)
            self._height = tuple(h)
        return self._height

    def linear_extension(self) -> list[int]:
        """Cell indices ordered so that faces precede the cells above them."""
        return sorted(range(len(self)), key=lambda i: (self.down[i].bit_count(), i))

    def covering_pairs(self) -> list[tuple[int, int]]:
        pairs = []
        for x in range(len(self)):
            strict = self.up[x] & ~(1 << x)
            covered = 0
            for y in iter_bits(strict):
                covered |= self.up[y] & ~(1 << y)
            for y in iter_bits(strict & ~covered):
                pairs.append((x, y))
        return pairs

    def subspace(self, carrier: PointSet) -> FiniteSpace:
        """The carrier as a space in its own right, keeping cell identifiers."""
        keep = list(iter_bits(carrier.mask))
        new = {old: k for k, old in enumerate(keep)}
        up = []
        for old in keep:
            m = 0
            for j in iter_bits(self.up[old] & carrier.mask):
                m |= 1 << new[j]
            up.append(m)
        space = FiniteSpace([self.cells[i] for i in keep], up, ())
        space.hasse = tuple(space.covering_pairs())
        return space

    def transfer(self, A: PointSet) -> PointSet:
        """Re-home a point set of another space onto this one by identifier."""
        return self.point_set(A.ids())


class SubspaceView:
    """Relative closure, interior and boundary inside a carrier set ``Y``."""

    def __init__(self, ambient: FiniteSpace, carrier: PointSet):
        self.ambient = ambient
        self.carrier = carrier

    def _check(self, A: PointSet):
        if not A <= self.carrier:
            raise NotASubset(f"{A!r} is not contained in {self.carrier!r}")

    def closure(self, A: PointSet) -> PointSet:
        self._check(A)
        return self.ambient.closure(A) & self.carrier

    def interior(self, A: PointSet) -> PointSet:
        self._check(A)
        up, y = self.ambient.up, self.carrier.mask
        mask = 0
        for i in A:
            if up[i] & y & ~A.mask == 0:
                mask |= 1 << i
        return PointSet(self.ambient, mask)

    def boundary(self, A: PointSet) -> PointSet:
        return self.closure(A) - self.interior(A)

    def is_open(self, A: PointSet) -> bool:
        return self.interior(A) == A

    def is_closed(self, A: PointSet) -> bool:
        return self.closure(A) == A


def build_space(cells: Sequence[str], hasse: Iterable[tuple[str, str]]) -> FiniteSpace:
    """Space whose order is the reflexive-transitive closure of ``hasse``.

    Each pair is ``(face, cell)``.  Raises on duplicate or unknown cells and
    on cycles (which would break antisymmetry).
    """
    cells = list(cells)
    index = {}
    for c in cells:
        if c in index:
            raise DuplicateCell(f"duplicate cell {c!r}")
        index[c] = len(index)
    n = len(cells)
    succ = [set() for _ in range(n)]
    pairs = []
    for a, b in hasse:
        for c in (a, b):
            if c not in index:
                raise UnknownCell(f"hasse pair ({a!r}, {b!r}) names unknown cell {c!r}")
        i, j = index[a], index[b]
        if i == j:
            continue
        if j not in succ[i]:
            succ[i].add(j)
            pairs.append((i, j))

    indeg = [0] * n
    for i in range(n):
        for j in succ[i]:
            indeg[j] += 1
    queue = deque(i for i in range(n) if indeg[i] == 0)
    order = []
    while queue:
        i = queue.popleft()
        order.append(i)
        for j in sorted(succ[i]):
            indeg[j] -= 1
            if indeg[j] == 0:
                queue.append(j)
    if len(order) != n:
        stuck = sorted(cells[i] for i in range(n) if indeg[i] > 0)
        raise CyclicOrder(f"hasse relation has a cycle through {stuck}")

    up = [0] * n
    for i in reversed(order):
        m = 1 << i
        for j in succ[i]:
            m |= up[j]
        up[i] = m
    return FiniteSpace(cells, up, pairs)


def product_space(P: FiniteSpace, Q: FiniteSpace) -> FiniteSpace:
    """Product order; cell ``(p,q)`` is identified by ``"(p,q)"``."""
    nq = len(Q)
    cells = [f"({p},{q})" for p in P.cells for q in Q.cells]
    up = []
    for i in range(len(P)):
        for j in range(nq):
            m = 0
            for i2 in iter_bits(P.up[i]):
                for j2 in iter_bits(Q.up[j]):
                    m |= 1 << (i2 * nq + j2)
            up.append(m)
    hasse = []
    pcov, qcov = P.covering_pairs(), Q.covering_pairs()
    for i, i2 in pcov:
        for j in range(nq):
            hasse.append((i * nq + j, i2 * nq + j))
    for j, j2 in qcov:
        for i in range(len(P)):
            hasse.append((i * nq + j, i * nq + j2))
    hasse.sort()
    return FiniteSpace(cells, up, hasse)


def circle_model(d: int) -> FiniteSpace:
    """``d`` vertices and ``d`` edges in a cycle; edge ``e_i`` joins ``v_i`` and ``v_{i+1}``."""
    if not isinstance(d, int) or d < 3:
        raise BadParameter(f"circle_model needs d >= 3, got {d!r}")
    cells = [f"v{i}" for i in range(d)] + [f"e{i}" for i in range(d)]
    hasse = []
    for i in range(d):
        hasse.append((f"v{i}", f"e{i}"))
        hasse.append((f"v{(i + 1) % d}", f"e{i}"))
    return build_space(cells, hasse)


def path_model(n: int) -> FiniteSpace:
    """``n`` edges and ``n + 1`` vertices in a line."""
    if not isinstance(n, int) or n < 1:
        raise BadParameter(f"path_model needs n >= 1, got {n!r}")
    return labeled_path([str(i) for i in range(n + 1)], vertex="v{}", edge_ids=[f"e{i}" for i in range(n)])


def labeled_path(labels: Sequence[str], vertex: str = "{}", edge: str = "{}..{}",
                 edge_ids: Sequence[str] | None = None) -> FiniteSpace:
    """A path whose vertices carry the given labels, in order.

    Vertices are listed first, then edges; edge ``i`` joins vertices ``i``
    and ``i + 1``.
    """
    if len(labels) < 1:
        raise BadParameter("a path needs at least one vertex")
    vids = [vertex.format(l) for l in labels]
    if edge_ids is None:
        edge_ids = [edge.format(labels[i], labels[i + 1]) for i in range(len(labels) - 1)]
    hasse = []
    for i, e in enumerate(edge_ids):
        hasse.append((vids[i], e))
        hasse.append((vids[i + 1], e))
    return build_space(vids + list(edge_ids), hasse)


def grid_model(nx: int, ny: int) -> FiniteSpace:
    if not (isinstance(nx, int) and isinstance(ny, int)) or nx < 1 or ny < 1:
        raise BadParameter(f"grid_model needs nx, ny >= 1, got {nx!r}, {ny!r}")
    return product_space(path_model(nx), path_model(ny))


def iter_open_sets(space: FiniteSpace) -> Iterator[int]:
    """Every up-set of ``space`` as a mask, the empty set included.

    The count can be exponential in the number of cells; callers cap size.
    """
    h = space.height()
    order = sorted(range(len(space)), key=lambda i: (-h[i], i))
    strict_up = [space.up[i] & ~(1 << i) for i in range(len(space))]

    def rec(k: int, cur: int):
        if k == len(order):
            yield cur
            return
        x = order[k]
        yield from rec(k + 1, cur)
        if strict_up[x] & ~cur == 0:
            yield from rec(k + 1, cur | 1 << x)

    yield from rec(0, 0)
