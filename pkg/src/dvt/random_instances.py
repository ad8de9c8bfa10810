"""Random finite spaces, closed subsets and maps for the property suites and search.

Every generator takes a ``random.Random`` so results depend only on its seed.
"""

from __future__ import annotations

import random

from .maps import CellMap, SetValuedMap
from .topology import FiniteSpace, PointSet, build_space, iter_bits

MAX_RETRIES = 50


def random_graded_space(rng: random.Random, n_cells: int, max_rank: int = 2,
                        max_faces: int = 3) -> FiniteSpace:
    """A graded poset: each cell of rank ``r > 0`` covers 1..max_faces cells of rank ``r - 1``."""
    n_cells = max(1, n_cells)
    ranks = [0]
    for _ in range(n_cells - 1):
        top = max(ranks)
        choices = [r for r in range(min(top + 1, max_rank) + 1)]
        ranks.append(rng.choice(choices))
    ranks.sort()
    cells = [f"c{i}" for i in range(n_cells)]
    by_rank: dict[int, list[int]] = {}
    for i, r in enumerate(ranks):
        by_rank.setdefault(r, []).append(i)
    hasse = []
    for i, r in enumerate(ranks):
        if r == 0 or not by_rank.get(r - 1):
            continue
        below = by_rank[r - 1]
        k = rng.randint(1, min(max_faces, len(below)))
        for j in rng.sample(below, k):
            hasse.append((cells[j], cells[i]))
    return build_space(cells, hasse)


def random_dag_space(rng: random.Random, n_cells: int, p: float = 0.3) -> FiniteSpace:
    """Order generated by random forward edges of a shuffled sequence."""
    cells = [f"c{i}" for i in range(max(1, n_cells))]
    hasse = []
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            if rng.random() < p:
                hasse.append((cells[i], cells[j]))
    return build_space(cells, hasse)


def random_space(rng: random.Random, max_cells: int, min_cells: int = 1) -> FiniteSpace:
    n = rng.randint(min_cells, max(min_cells, max_cells))
    if rng.random() < 0.7:
        return random_graded_space(rng, n, max_rank=rng.choice((1, 2, 2, 3)))
    return random_dag_space(rng, n, p=rng.choice((0.15, 0.3, 0.5)))


def random_subset(rng: random.Random, space: FiniteSpace, p: float | None = None) -> int:
    p = rng.uniform(0.1, 0.8) if p is None else p
    m = 0
    for i in range(len(space)):
        if rng.random() < p:
            m |= 1 << i
    if not m:
        m = 1 << rng.randrange(len(space))
    return m


def random_closed(rng: random.Random, space: FiniteSpace) -> PointSet:
    return space.from_mask(space.down_closure(random_subset(rng, space)))


def random_any_function(rng: random.Random, space: FiniteSpace, C: PointSet) -> CellMap:
    n = len(space)
    return CellMap(space, C, {x: rng.randrange(n) for x in C})


def random_any_setvalued(rng: random.Random, space: FiniteSpace, C: PointSet) -> SetValuedMap:
    return SetValuedMap(space, C, {x: random_subset(rng, space, rng.uniform(0.05, 0.4))
                                   for x in C})


def _descending(rng: random.Random, space: FiniteSpace, C: PointSet) -> list[int]:
    """For each cell, the mask of targets outside ``C`` or of lower random potential.

    Preferring these targets makes orbits end, so finite filtrations are common.
    """
    pot = list(range(len(space)))
    rng.shuffle(pot)
    outside = space.full & ~C.mask
    pref = []
    for x in range(len(space)):
        m = outside
        for y in iter_bits(C.mask):
            if pot[y] < pot[x]:
                m |= 1 << y
        pref.append(m)
    return pref


def _pick(rng: random.Random, allowed: int, preferred: int | None) -> int:
    if preferred is not None and allowed & preferred:
        allowed &= preferred
    return rng.choice(list(iter_bits(allowed)))


def random_monotone(rng: random.Random, space: FiniteSpace, C: PointSet,
                    boundary: bool = True, descend: bool = False) -> CellMap | None:
    """A monotone map on ``C``; with ``boundary`` the boundary cells land in ``C``.

    Cells are assigned faces-first; a dead end restarts, up to a bounded
    number of attempts.  Returns None if every attempt dead-ends.
    """
    order = [i for i in space.linear_extension() if C.mask >> i & 1]
    bd = space.boundary(C).mask if boundary else 0
    pref = _descending(rng, space, C) if descend else None
    for _ in range(MAX_RETRIES):
        vals: dict[int, int] = {}
        ok = True
        for x in order:
            allowed = space.full
            for w in iter_bits(space.down[x] & C.mask & ~(1 << x)):
                allowed &= space.up[vals[w]]
            if bd >> x & 1:
                allowed &= C.mask
            if not allowed:
                ok = False
                break
            vals[x] = _pick(rng, allowed, pref[x] if pref else None)
        if ok:
            return CellMap(space, C, vals)
    return None


def _random_connected(rng: random.Random, space: FiniteSpace, allowed: int, start: int) -> int:
    m = 1 << start
    target = rng.randint(1, allowed.bit_count())
    while m.bit_count() < target:
        frontier = 0
        for i in iter_bits(m):
            frontier |= space.adj[i]
        frontier &= allowed & ~m
        if not frontier:
            break
        m |= 1 << rng.choice(list(iter_bits(frontier)))
    return m


def random_usc(rng: random.Random, space: FiniteSpace, C: PointSet, conn: bool = True,
               bdr: str = "w", descend: bool = False) -> SetValuedMap | None:
    """An upper semicontinuous map; ``bdr`` is ``"w"``, ``"s"`` or ``""``.

    With ``conn`` each image is grown as a connected set.
    """
    order = [i for i in space.linear_extension() if C.mask >> i & 1]
    bd = space.boundary(C).mask
    pref = _descending(rng, space, C) if descend else None
    for _ in range(MAX_RETRIES):
        imgs: dict[int, int] = {}
        ok = True
        for x in order:
            allowed = space.full
            for w in iter_bits(space.down[x] & C.mask & ~(1 << x)):
                allowed &= space.up_closure(imgs[w])
            starts = allowed
            if bd >> x & 1:
                if bdr == "s":
                    allowed &= C.mask
                    starts = allowed
                elif bdr == "w":
                    starts = allowed & C.mask
            if not starts:
                ok = False
                break
            if pref and allowed & pref[x] & starts:
                allowed &= pref[x]
                starts &= pref[x]
            start = rng.choice(list(iter_bits(starts)))
            if conn:
                img = _random_connected(rng, space, allowed, start)
            else:
                img = (1 << start) | (random_subset(rng, space, 0.2) & allowed)
            imgs[x] = img
        if ok:
            return SetValuedMap(space, C, imgs)
    return None


def random_fence(rng: random.Random, space: FiniteSpace, C: PointSet,
                 steps: int) -> list[dict[int, int]]:
    """A fence from the identity on ``C``, one comparable single-cell move per stage.

    Every stage stays monotone and keeps the boundary of ``C`` inside ``C``.
    """
    bd = space.boundary(C).mask
    g = {x: x for x in C}
    stages = [dict(g)]
    cells = list(C)
    for _ in range(steps):
        for _ in range(10):
            x = rng.choice(cells)
            cand = space.adj[g[x]] & ~(1 << g[x])
            for w in iter_bits(space.down[x] & C.mask & ~(1 << x)):
                cand &= space.up[g[w]]
            for y in iter_bits(space.up[x] & C.mask & ~(1 << x)):
                cand &= space.down[g[y]]
            if bd >> x & 1:
                cand &= C.mask
            if cand:
                g[x] = rng.choice(list(iter_bits(cand)))
                stages.append(dict(g))
                break
    return stages
