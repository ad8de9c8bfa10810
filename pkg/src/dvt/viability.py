"""Viability filtration, witness orbits, and machine checks of its structure.

The filtration starts at ``C_0 = X`` and ``C_1 = C``.  For a cell map,
``C_{n+1}`` holds the cells of ``C`` sent into ``C_n``; for a set-valued map,
the cells whose image meets ``C_n``.  ``iter`` is the last index with a
nonempty level, or ``math.inf`` when the chain stabilises on a nonempty set.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

from .errors import (BadParameter, DomainMismatch, EmptyC, FPPUndecidable, GateFailure,
                     InternalInvariant, NotARetraction, PreconditionViolated, TooLarge)
from .maps import (FAILS, HOLDS, NA, CellMap, Check, HypothesisReport, SetValuedMap,
                   check_continuous, check_hypotheses)
from .topology import FiniteSpace, PointSet, iter_bits, lowest_bit

INF = math.inf
UNDECIDED = "undecided"


@dataclass(frozen=True)
class Orbit:
    prefix: tuple[str, ...]
    cycle: tuple[str, ...] | None = None

    @property
    def steps(self):
        return INF if self.cycle else len(self.prefix) - 1

    def __str__(self):
        body = " -> ".join(self.prefix)
        if self.cycle:
            body += f" -> ({' -> '.join(self.cycle)})*"
        return body


@dataclass
class ViabilityReport:
    space: FiniteSpace
    C: PointSet
    f: object
    filtration: list[PointSet]
    iter: float
    stabilized_at: int | None
    hypotheses: HypothesisReport
    c_closed: bool
    witness: Orbit | None = None

    def level(self, n: int) -> PointSet:
        """``C_n`` for any ``n >= 0``, extended past the computed prefix."""
        if n < 0:
            raise BadParameter("level index must be nonnegative")
        if n < len(self.filtration):
            return self.filtration[n]
        return self.filtration[-1]

    def layer(self, n: int) -> PointSet:
        return self.level(n) - self.level(n + 1)

    @property
    def layers(self) -> list[PointSet]:
        last = len(self.filtration) - 1
        return [self.layer(n) for n in range(last)]

    @property
    def core(self) -> PointSet:
        """The nonempty stable level when ``iter`` is infinite, else empty."""
        if self.iter == INF:
            return self.filtration[-1]
        return self.space.empty()

    @property
    def finite(self) -> bool:
        return self.iter != INF


def _step(f, C: int, prev: int) -> int:
    nxt = 0
    for x in iter_bits(C):
        if f.image_mask(x) & prev:
            nxt |= 1 << x
    return nxt


def viability_sequence(space: FiniteSpace, C: PointSet, f) -> ViabilityReport:
    if not C:
        raise EmptyC("C must be nonempty")
    if f.space is not space or f.domain != C:
        raise DomainMismatch("the map's domain must equal C")
    levels = [space.whole(), C]
    stabilized_at = None
    while True:
        nxt = _step(f, C.mask, levels[-1].mask)
        if nxt == levels[-1].mask:
            stabilized_at = len(levels) - 1
            break
        if nxt & ~levels[-1].mask:
            raise InternalInvariant("filtration is not nested")
        levels.append(space.from_mask(nxt))
        if not nxt:
            break
    if stabilized_at is not None:
        it = INF
    else:
        it = len(levels) - 2
    report = ViabilityReport(space, C, f, levels, it, stabilized_at,
                             check_hypotheses(f, C), space.is_closed(C))
    report.witness = extract_orbit(report, f)
    return report


def extract_orbit(report: ViabilityReport, f) -> Orbit:
    cells = report.space.cells
    if report.finite:
        k = int(report.iter)
        x = lowest_bit(report.level(k).mask)
        path = [x]
        for i in range(k):
            nxt = f.image_mask(x) & report.level(k - i - 1).mask
            if not nxt:
                raise InternalInvariant(f"no successor of {cells[x]!r} in level {k - i - 1}")
            x = lowest_bit(nxt)
            path.append(x)
        return Orbit(tuple(cells[i] for i in path))
    D = report.core.mask
    x = lowest_bit(D)
    seen: dict[int, int] = {}
    path = []
    while x not in seen:
        seen[x] = len(path)
        path.append(x)
        nxt = f.image_mask(x) & D
        if not nxt:
            raise InternalInvariant(f"{cells[x]!r} leaves the stable core")
        x = lowest_bit(nxt)
    start = seen[x]
    return Orbit(tuple(cells[i] for i in path[:start + 1]),
                 tuple(cells[i] for i in path[start:]))


def max_orbit_bruteforce(space: FiniteSpace, C: PointSet, f) -> float:
    """Longest orbit length by depth-first search on the step graph."""
    dom = C.mask
    memo: dict[int, float] = {}
    on_stack: set[int] = set()

    def longest(x: int) -> float:
        if x in memo:
            return memo[x]
        on_stack.add(x)
        best = 0.0
        for y in iter_bits(f.image_mask(x)):
            if not dom >> y & 1:
                continue
            if y in on_stack:
                best = INF
                break
            best = max(best, longest(y))
            if best == INF:
                break
        on_stack.discard(x)
        memo[x] = 1 + best
        return memo[x]

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * len(space) + 100))
    try:
        result = max((longest(x) for x in iter_bits(dom)), default=0)
    finally:
        sys.setrecursionlimit(limit)
    return result if result == INF else int(result)


def decompose_open_set(space: FiniteSpace, U: PointSet, K1: PointSet, K2: PointSet):
    """Split an open set into the components whose boundary lies near ``K1`` or ``K2``."""
    if not U:
        return space.empty(), space.empty()
    if not K1.isdisjoint(K2):
        raise PreconditionViolated("i", "K1 and K2 intersect")
    if not space.is_open(U):
        raise PreconditionViolated("i", "U is not open")
    bd = space.boundary(U)
    if not bd <= K1 | K2:
        raise PreconditionViolated("ii", f"boundary cells {(bd - K1 - K2).ids()} outside K1 and K2")
    if not (space.is_closed(bd & K1) and space.is_closed(bd & K2)):
        raise PreconditionViolated("iii", "boundary pieces are not closed")
    if not space.is_connected(~U):
        raise PreconditionViolated("iv", "complement of U is disconnected")
    U1 = U2 = 0
    for comp in space.connected_components(U):
        b = space.boundary(comp)
        meets1, meets2 = not b.isdisjoint(K1), not b.isdisjoint(K2)
        if meets1 and meets2:
            raise GateFailure(comp, b)
        if meets2:
            U2 |= comp.mask
        else:
            U1 |= comp.mask
    U1s, U2s = space.from_mask(U1), space.from_mask(U2)
    if not (space.boundary(U1s) <= space.closure(K1) and space.boundary(U2s) <= space.closure(K2)):
        raise InternalInvariant("decomposition boundaries escape their closures")
    return U1s, U2s


# ---------------------------------------------------------------- propositions

@dataclass(frozen=True)
class StatementResult:
    name: str
    status: str
    witness: tuple[str, ...] | None = None
    note: str = ""

    @property
    def failed(self) -> bool:
        return self.status == FAILS


def _result(name, bad, space, note=""):
    if bad is None:
        return StatementResult(name, HOLDS, note=note)
    if isinstance(bad, int):
        bad = (space.cells[bad],)
    return StatementResult(name, FAILS, tuple(bad), note)


def _first(mask: int):
    return None if not mask else lowest_bit(mask)


def _horizon(report: ViabilityReport) -> int:
    return len(report.filtration) + 2


def _set_theoretic(space, C, f, report) -> list[StatementResult]:
    N = _horizon(report)
    L = report.level
    out = []
    oracle = max_orbit_bruteforce(space, C, f)
    out.append(_result("orbit_length", None if oracle == report.iter
                       else (f"iter={report.iter}", f"oracle={oracle}"), space))

    bad = None
    for n in range(N):
        if not L(n + 1) <= L(n):
            bad = _first((L(n + 1) - L(n)).mask)
            break
    out.append(_result("nested", bad, space))

    bad = None
    for n in range(1, N):
        if _step(f, C.mask, L(n).mask) != L(n + 1).mask:
            bad = (f"level {n + 1}",)
            break
        if L(n + 1) == L(n) and any(L(m) != L(n) for m in range(n, N + 1)):
            bad = (f"level {n}",)
            break
    out.append(_result("stabilizes", bad, space))

    single = f.kind == "function"
    bad = None
    for n in range(N):
        for x in L(n + 1):
            if not f.image_mask(x) & L(n).mask:
                bad = x
                break
        if bad is not None:
            break
    out.append(_result("step_into_previous" if single else "step_meets_previous", bad, space))

    bad = None
    for n in range(N):
        below = space.full & ~L(n + 1).mask
        for x in report.layer(n + 1):
            m = f.image_mask(x)
            if single:
                ok = m & report.layer(n).mask
            else:
                ok = m & report.layer(n).mask and not m & ~below
            if not ok:
                bad = x
                break
        if bad is not None:
            break
    out.append(_result("layer_steps_down" if single else "layer_image_below", bad, space))

    bad = None
    if report.finite:
        k = int(report.iter)
        for i in range(N):
            if bool(report.layer(i)) != (i <= k):
                bad = (f"layer {i}",)
                break
        out.append(_result("layers_nonempty_below_iter", bad, space))
    else:
        out.append(StatementResult("layers_nonempty_below_iter", NA, note="iter is infinite"))
    return out


def _rel_bd(space, n, L):
    return space.relative_boundary(L(n + 1), L(n))


def _function_topological(space, C, f, report) -> list[StatementResult]:
    N = _horizon(report)
    L = report.level
    out = []
    bad = None
    for n in range(N):
        if not space.is_closed(L(n)):
            bad = (f"level {n}",)
            break
    out.append(_result("closed_levels", bad, space))

    bad = None
    for n in range(N):
        src = _rel_bd(space, n + 1, L)
        dst = _rel_bd(space, n, L).mask
        for x in src:
            if not dst >> f.values[x] & 1:
                bad = x
                break
        if bad is not None:
            break
    out.append(_result("relative_boundary_maps_to_boundary", bad, space))

    bad = None
    for n in range(N):
        extra = _rel_bd(space, n, L) - L(n + 2)
        if extra:
            bad = extra.first()
            break
    out.append(_result("relative_boundary_in_next_level", bad, space))

    bad = None
    for n in range(N):
        if not space.is_closed(report.layer(n) | L(n + 2)):
            bad = (f"layer {n}",)
            break
    out.append(_result("layer_union_closed", bad, space))
    return out


def _setvalued_topological(space, C, f, report) -> list[StatementResult]:
    N = _horizon(report)
    L, A = report.level, report.layer
    out = []
    bad = None
    for n in range(N):
        if not space.is_closed(L(n)):
            bad = (f"level {n}",)
            break
    out.append(_result("closed_levels", bad, space))

    bad = None
    for n in (0, 1):
        if not space.is_open(A(n)):
            bad = (f"layer {n}",)
    out.append(_result("first_layers_open", bad, space))

    def boundary_in(name, n, target):
        extra = _rel_bd(space, n, L) - L(target)
        out.append(_result(name, extra.first() if extra else None, space))

    def union_closed(name, n):
        ok = space.is_closed(A(n) | L(n + 2))
        out.append(_result(name, None if ok else (f"layer {n}",), space))

    boundary_in("relative_boundary_1_in_3", 1, 3)
    union_closed("layer1_union_c3_closed", 1)
    boundary_in("relative_boundary_2_in_4", 2, 4)
    union_closed("layer2_union_c4_closed", 2)

    bad = None
    for x in _rel_bd(space, 3, L) & A(4):
        m = f.image_mask(x)
        if not (m & A(2).mask and m & A(3).mask):
            bad = x
            break
    out.append(_result("boundary_3_4_meets_layers_2_3", bad, space))
    return out


FUNCTION_TOPOLOGICAL = ("closed_levels", "relative_boundary_maps_to_boundary",
                        "relative_boundary_in_next_level", "layer_union_closed")
SETVALUED_TOPOLOGICAL = ("closed_levels", "first_layers_open", "relative_boundary_1_in_3",
                         "layer1_union_c3_closed", "relative_boundary_2_in_4",
                         "layer2_union_c4_closed", "boundary_3_4_meets_layers_2_3")


def topological_hypotheses_hold(report: ViabilityReport) -> tuple[bool, str]:
    h = report.hypotheses
    if not report.c_closed:
        return False, "C is not closed"
    if report.f.kind == "function":
        needed = {"continuous": h.continuous, "bdr_function": h.bdr_function}
    else:
        needed = {"usc": h.usc, "bdr_w": h.bdr_w, "conn": h.conn}
    missing = [k for k, v in needed.items() if not v.holds]
    return (not missing), ("missing " + ", ".join(missing) if missing else "")


def verify_propositions(space: FiniteSpace, C: PointSet, f,
                        report: ViabilityReport) -> list[StatementResult]:
    """Evaluate every structural statement about the filtration on this instance.

    Set-theoretic statements always apply.  The topological ones apply only
    when the hypotheses hold; otherwise they are reported as ``n/a``.
    """
    out = _set_theoretic(space, C, f, report)
    ok, why = topological_hypotheses_hold(report)
    names = FUNCTION_TOPOLOGICAL if f.kind == "function" else SETVALUED_TOPOLOGICAL
    if not ok:
        out.extend(StatementResult(n, NA, note=why) for n in names)
    elif f.kind == "function":
        out.extend(_function_topological(space, C, f, report))
    else:
        out.extend(_setvalued_topological(space, C, f, report))
    return out


def restriction_identity(report: ViabilityReport, n: int) -> tuple[float, float]:
    """Return ``(iter, n + iter')`` where ``iter'`` uses ``C_{n+1}`` inside ``C_n``.

    Only meaningful when ``C_{n+1}`` is nonempty.
    """
    space, f = report.space, report.f
    inner = report.level(n + 1)
    if not inner:
        raise BadParameter(f"level {n + 1} is empty")
    outer = report.level(n)
    sub = space.subspace(outer)
    pos = {i: k for k, i in enumerate(iter_bits(outer.mask))}

    def relabel(mask):
        return sum(1 << pos[j] for j in iter_bits(mask & outer.mask))

    dom = sub.from_mask(relabel(inner.mask))
    images = {pos[x]: relabel(f.image_mask(x)) for x in inner}
    g = SetValuedMap(sub, dom, images)
    sub_iter = viability_sequence(sub, dom, g).iter
    return report.iter, n + sub_iter


# ---------------------------------------------------------------- theorem bounds

@dataclass(frozen=True)
class BoundCheck:
    name: str
    bound: int
    applies: bool
    satisfied: bool
    reason: str = ""

    @property
    def violated(self) -> bool:
        return self.applies and not self.satisfied


@dataclass
class BoundReport:
    checks: list[BoundCheck]
    iter: float
    gate: str = NA
    gate_witness: tuple[str, ...] | None = None

    @property
    def asserted(self) -> int:
        return max((c.bound for c in self.checks if c.applies), default=1)

    @property
    def violations(self) -> list[BoundCheck]:
        return [c for c in self.checks if c.violated]


def check_theorem_bounds(space: FiniteSpace, C: PointSet, f, report: ViabilityReport,
                         gate_cap: int = 16, gate=None) -> BoundReport:
    """Lower bounds on ``iter`` implied by the hypotheses that hold here.

    ``gate`` may be passed as a precomputed ``Check`` for the boundary
    connectedness property; otherwise it is enumerated for spaces with at
    most ``gate_cap`` cells and left undecided above that.
    """
    from .cohomology import gate_boundary_connectedness

    h = report.hypotheses
    it = report.iter
    closed = report.c_closed
    bd_nonempty = bool(space.boundary(C))
    x_conn = space.is_connected(space.whole())
    c_conn = space.is_connected(C)
    if f.kind == "function":
        base = closed and h.continuous.holds and h.bdr_function.holds
        two = base and bd_nonempty
        three = base and x_conn
        four = three and c_conn
        five_pre = four
    else:
        two = closed and bd_nonempty and h.bdr_w.holds
        three = closed and x_conn and h.usc.holds and h.bdr_w.holds and h.conn.holds
        four = three and c_conn
        five_pre = four and h.bdr_s.holds

    gate_status, gate_witness = NA, None
    if five_pre:
        if gate is None:
            try:
                rep = gate_boundary_connectedness(space, cap=gate_cap)
            except TooLarge:
                gate = Check(UNDECIDED)
            else:
                gate = rep.as_check()
        gate_status, gate_witness = gate.status, gate.witness
    five = five_pre and gate_status == HOLDS

    def mk(name, bound, applies, reason):
        return BoundCheck(name, bound, applies, it >= bound, reason)

    checks = [
        mk("boundary_nonempty", 2, two, "nonempty boundary of C"),
        mk("space_connected", 3, three, "X connected"),
        mk("space_and_domain_connected", 4, four, "X and C connected"),
        mk("gate_property", 5, five, "X and C connected, gate property holds"),
    ]
    return BoundReport(checks, it, gate_status, gate_witness)


# ---------------------------------------------------------------- fixed points

def _monotone_self_maps_without_fixed_point(space: FiniteSpace) -> dict[int, int] | None:
    """A fixed-point-free monotone self-map of ``space``, or None if none exists."""
    order = space.linear_extension()
    n = len(space)
    below = [space.down[i] & ~(1 << i) for i in range(n)]
    g: dict[int, int] = {}

    def rec(k: int) -> bool:
        if k == n:
            return True
        x = order[k]
        allowed = space.full & ~(1 << x)
        for w in iter_bits(below[x]):
            allowed &= space.up[g[w]]
        for z in iter_bits(allowed):
            g[x] = z
            if rec(k + 1):
                return True
        g.pop(x, None)
        return False

    return dict(g) if rec(0) else None


def has_fixed_point_property(space: FiniteSpace) -> bool:
    return _monotone_self_maps_without_fixed_point(space) is None


def fixed_point_via_retraction(space: FiniteSpace, C: PointSet, f: CellMap, r: CellMap,
                               fpp: bool | None = None, fpp_cap: int = 8) -> str | None:
    """Find a fixed cell of ``f`` in ``C`` using a retraction onto the boundary.

    Returns the cell id, or None when none exists and ``C`` lacks the fixed
    point property.
    """
    for x in C:
        if f.values[x] == x:
            return space.cells[x]
    hyp = check_hypotheses(f, C)
    if not (hyp.continuous.holds and hyp.bdr_function.holds):
        raise BadParameter("f must be continuous with boundary cells sent into C")
    if not space.is_closed(C):
        raise BadParameter("C must be closed")
    bd = space.boundary(C)
    dom = ~space.interior(C)
    if r.space is not space or r.domain != dom:
        raise NotARetraction("retraction must be defined exactly on the complement of Int C")
    if not check_continuous(r).holds:
        raise NotARetraction("retraction is not continuous")
    for x in dom:
        if not bd.mask >> r.values[x] & 1:
            raise NotARetraction(f"{space.cells[x]!r} is not sent to the boundary")
    for x in bd:
        if r.values[x] != x:
            raise NotARetraction(f"{space.cells[x]!r} on the boundary is moved")

    g = {}
    for x in C:
        y = f.values[x]
        if C.mask >> y & 1:
            if y in r.values and r.values[y] != y:
                raise InternalInvariant("composite map is ill-defined on the boundary")
            g[x] = y
        else:
            g[x] = r.values[y]

    if fpp is None:
        if len(C) > fpp_cap:
            raise FPPUndecidable(f"|C| = {len(C)} exceeds {fpp_cap}; pass fpp explicitly")
        fpp = has_fixed_point_property(space.subspace(C))

    for x in C:
        if g[x] == x:
            if f.values[x] == x:
                return space.cells[x]
            raise InternalInvariant(
                f"{space.cells[x]!r} is fixed by the composite map but not by f")
    if fpp:
        raise InternalInvariant("C has the fixed point property but the composite has no fixed cell")
    return None


__all__ = [
    "INF", "Orbit", "ViabilityReport", "viability_sequence", "extract_orbit",
    "max_orbit_bruteforce", "decompose_open_set", "StatementResult", "verify_propositions",
    "restriction_identity", "BoundCheck", "BoundReport", "check_theorem_bounds",
    "has_fixed_point_property", "fixed_point_via_retraction",
]
