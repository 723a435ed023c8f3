"""Level-by-level propagation with optional cross-checks against direct evaluation."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .core import LatticePoint
from .grassmann import GrassmannianElement
from .lattice import LatticeEvaluation
from .recurrences import (
    B3,
    HexahedronState,
    OctahedronGrid,
    hexahedron_propagate,
    hexahedron_ready,
    octahedron_level_targets,
    octahedron_propagate,
)
from .tau import miwa_shift, tau_eval


@dataclass
class Produced:
    """One propagated value and, when an oracle exists, its direct evaluation."""

    family: str
    site: tuple[int, ...]
    value: Fraction
    direct: Fraction | None = None

    @property
    def matches(self) -> bool | None:
        return None if self.direct is None else self.value == self.direct


@dataclass
class PropagationResult:
    produced: list[Produced] = field(default_factory=list)
    levels: int = 0


def octahedron_tau(w: GrassmannianElement, t0: Sequence[Fraction], grid: OctahedronGrid, site: tuple[int, int, int]) -> Fraction:
    l, m, n = site
    t = miwa_shift(miwa_shift(miwa_shift(tuple(t0), grid.a, l), grid.b, m), grid.c, n)
    return tau_eval(w, t)


def octahedron_window(levels: int, seed_level: int, n_range: tuple[int, int], lm_extent: int) -> list[tuple[int, int, int]]:
    """Two seed slabs l+m in {seed_level, seed_level+1}; n widened for the cone."""
    lo, hi = n_range
    out = []
    for s in (seed_level, seed_level + 1):
        for l in range(-lm_extent, lm_extent + 1):
            m = s - l
            for n in range(lo, hi + levels + 1):
                out.append((l, m, n))
    return out


def seed_octahedron(w: GrassmannianElement, t0: Sequence[Fraction], grid: OctahedronGrid, sites: Sequence[tuple[int, int, int]]) -> None:
    for site in sites:
        grid.values[site] = octahedron_tau(w, t0, grid, site)


def propagate_octahedron(
    grid: OctahedronGrid,
    start_level: int,
    levels: int,
    w: GrassmannianElement | None = None,
    t0: Sequence[Fraction] | None = None,
) -> PropagationResult:
    """Fill heights start_level .. start_level+levels-1; sites on one level are independent."""
    result = PropagationResult()
    for s in range(start_level, start_level + levels):
        targets = octahedron_level_targets(grid, s)
        if not targets:
            break
        for target in targets:
            value = octahedron_propagate(grid, target)
            direct = octahedron_tau(w, t0, grid, target) if w is not None and t0 is not None else None
            result.produced.append(Produced("tau", target, value, direct))
        result.levels += 1
    return result


def b3_height(p: B3) -> int:
    return p[0] + p[1] + p[2]


def b3_box(radius: int) -> list[B3]:
    r = range(-radius, radius + 1)
    return [p for p in product(r, r, r)]


def seed_hexahedron(ev: LatticeEvaluation, radius: int, height: int = 0) -> HexahedronState:
    """Plain values on heights h..h+2 and hook values on height h, inside a box."""
    state = HexahedronState()
    for p in b3_box(radius):
        hp = b3_height(p)
        if height <= hp <= height + 2:
            state.plain[p] = ev.checkerboard(*p, "plain")
        if hp == height:
            for kind in ("x", "y", "z"):
                state.family(kind)[p] = ev.checkerboard(*p, kind)
    return state


def propagate_hexahedron(
    state: HexahedronState,
    start_height: int,
    steps: int,
    ev: LatticeEvaluation | None = None,
) -> PropagationResult:
    """Run ``steps`` levels; each level uses every ready base of that height."""
    result = PropagationResult()
    outputs = (("x", (1, 0, 0)), ("y", (0, 1, 0)), ("z", (0, 0, 1)), ("plain", (1, 1, 1)))
    for s in range(start_height, start_height + steps):
        bases = sorted(p for p in state.plain if b3_height(p) == s and hexahedron_ready(state, p))
        if not bases:
            break
        for base in bases:
            values = hexahedron_propagate(state, base)
            for (kind, d), value in zip(outputs, values):
                site = (base[0] + d[0], base[1] + d[1], base[2] + d[2])
                direct = ev.checkerboard(*site, kind) if ev is not None else None
                result.produced.append(Produced(kind, site, value, direct))
        result.levels += 1
    return result


def b3_point(p: B3) -> LatticePoint:
    return LatticePoint.from_b3(*p)
