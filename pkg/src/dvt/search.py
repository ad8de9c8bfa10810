"""Randomised falsification harness over small finite models.

Each instance ``i`` of a run with seed ``S`` draws from its own generator
seeded with ``S * 1000003 + i``, so any instance can be replayed alone and
the summary does not depend on evaluation order.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .certificates import HomotopyCertificate, verify_certificate
from .instance import Instance, write_instance
from .maps import FAILS, NA, CellMap
from .random_instances import (random_any_function, random_any_setvalued, random_closed,
                               random_fence, random_monotone, random_space, random_usc)
from .viability import (INF, check_theorem_bounds, max_orbit_bruteforce, verify_propositions,
                        viability_sequence)

MODES = ("props", "theorem4", "homotopy", "oracle")


def instance_rng(seed: int, i: int) -> random.Random:
    return random.Random(seed * 1000003 + i)


@dataclass
class SearchSummary:
    mode: str
    seed: int
    instances: int
    max_cells: int
    evaluated: int = 0
    skipped: int = 0
    tallies: Counter = field(default_factory=Counter)
    violations: list[str] = field(default_factory=list)
    findings: list[str] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        """True when a proven statement or the oracle was contradicted."""
        return bool(self.violations)

    def render(self) -> str:
        out = [f"mode {self.mode}  seed {self.seed}  instances {self.instances}"
               f"  max-cells {self.max_cells}",
               f"evaluated {self.evaluated}  skipped {self.skipped}"]
        for k in sorted(self.tallies):
            out.append(f"  {k:<52}{self.tallies[k]}")
        out.append(f"violations {len(self.violations)}")
        out.extend(f"  {v}" for v in self.violations)
        if self.mode == "homotopy":
            out.append(f"findings {len(self.findings)}")
            out.extend(f"  {v}" for v in self.findings)
        return "\n".join(out) + "\n"


def _draw_function(rng, max_cells):
    space = random_space(rng, max_cells)
    C = random_closed(rng, space)
    return space, C, random_monotone(rng, space, C, boundary=True, descend=rng.random() < 0.6)


def _draw_usc(rng, max_cells, bdr="w"):
    space = random_space(rng, max_cells)
    C = random_closed(rng, space)
    return space, C, random_usc(rng, space, C, conn=True, bdr=bdr, descend=rng.random() < 0.6)


def _dump(summary, dump_dir, i, space, C, f, cert=None) -> str:
    name = f"{summary.mode}-seed{summary.seed}-i{i}"
    if dump_dir is None:
        return name
    path = Path(dump_dir) / f"{name}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    write_instance(Instance(name, space, C, f, cert), path)
    return str(path)


def _props(summary, rng, i, dump_dir):
    track = "function" if i % 2 == 0 else "setvalued"
    space, C, f = (_draw_function if track == "function" else _draw_usc)(rng, summary.max_cells)
    if f is None:
        summary.skipped += 1
        return
    summary.evaluated += 1
    rep = viability_sequence(space, C, f)
    for s in verify_propositions(space, C, f, rep):
        summary.tallies[f"{track} {s.name} {s.status}"] += 1
        if s.status == FAILS:
            where = _dump(summary, dump_dir, i, space, C, f)
            summary.violations.append(f"instance {i}: {track} {s.name} fails ({where})")


def _theorem4(summary, rng, i, dump_dir):
    track = "function" if i % 2 == 0 else "setvalued"
    if track == "function":
        space, C, f = _draw_function(rng, summary.max_cells)
    else:
        space, C, f = _draw_usc(rng, summary.max_cells, bdr=rng.choice(("w", "s")))
    if f is None:
        summary.skipped += 1
        return
    summary.evaluated += 1
    rep = viability_sequence(space, C, f)
    b = check_theorem_bounds(space, C, f, rep, gate_cap=summary.max_cells)
    if b.gate != NA:
        summary.tallies[f"{track} gate {b.gate}"] += 1
    for c in b.checks:
        if c.applies:
            summary.tallies[f"{track} bound >= {c.bound} applied"] += 1
        if c.violated:
            where = _dump(summary, dump_dir, i, space, C, f)
            summary.violations.append(
                f"instance {i}: {track} iter {rep.iter} below bound {c.bound} ({where})")


def _homotopy(summary, rng, i, dump_dir):
    space = random_space(rng, summary.max_cells)
    C = random_closed(rng, space)
    stages = random_fence(rng, space, C, rng.randint(1, 10))
    f = CellMap(space, C, stages[-1])
    cert = HomotopyCertificate(space, C, stages)
    verdict = verify_certificate(cert, C, f)
    if not verdict:
        summary.violations.append(f"instance {i}: generated fence does not verify: {verdict}")
        return
    summary.evaluated += 1
    rep = viability_sequence(space, C, f)
    key = "inf" if rep.iter == INF else ">= 5" if rep.iter >= 5 else f"= {int(rep.iter)}"
    summary.tallies[f"iter {key}"] += 1
    if rep.iter < 5:
        where = _dump(summary, dump_dir, i, space, C, f, cert)
        summary.findings.append(
            f"instance {i}: fence of {len(stages)} stages, iter {int(rep.iter)} < 5 ({where})")


def _oracle(summary, rng, i, dump_dir):
    space = random_space(rng, summary.max_cells)
    C = random_closed(rng, space)
    kind = rng.choice(("any-function", "any-setvalued", "monotone", "usc"))
    if kind == "any-function":
        f = random_any_function(rng, space, C)
    elif kind == "any-setvalued":
        f = random_any_setvalued(rng, space, C)
    elif kind == "monotone":
        f = random_monotone(rng, space, C, boundary=rng.random() < 0.5,
                            descend=rng.random() < 0.5)
    else:
        f = random_usc(rng, space, C, conn=rng.random() < 0.5, bdr=rng.choice(("", "w", "s")),
                       descend=rng.random() < 0.5)
    if f is None:
        summary.skipped += 1
        return
    summary.evaluated += 1
    it = viability_sequence(space, C, f).iter
    oracle = max_orbit_bruteforce(space, C, f)
    summary.tallies[f"{kind} {'infinite' if it == INF else 'finite'}"] += 1
    if it != oracle:
        where = _dump(summary, dump_dir, i, space, C, f)
        summary.violations.append(f"instance {i}: iter {it} but oracle {oracle} ({where})")


_RUNNERS = {"props": _props, "theorem4": _theorem4, "homotopy": _homotopy, "oracle": _oracle}


def run_search(seed: int, instances: int, max_cells: int = 16, mode: str = "props",
               dump_dir=None) -> SearchSummary:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if instances < 1 or max_cells < 1:
        raise ValueError("instances and max-cells must be positive")
    summary = SearchSummary(mode, seed, instances, max_cells)
    runner = _RUNNERS[mode]
    for i in range(instances):
        runner(summary, instance_rng(seed, i), i, dump_dir)
    return summary


__all__ = ["MODES", "SearchSummary", "instance_rng", "run_search"]
