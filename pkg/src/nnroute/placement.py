"""Qubit-to-vertex placements, swap steps and routing solutions."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

# One routing cycle: a vertex-disjoint set of swapped edges, canonically sorted.
SwapStep = tuple[tuple[int, int], ...]


def canonical_step(edges) -> SwapStep:
    return tuple(sorted((u, v) if u < v else (v, u) for u, v in edges))


@dataclass(frozen=True)
class Placement:
    """Injective map qubit id -> vertex id; unmapped vertices are empty slots."""

    positions: tuple[int, ...]

    @classmethod
    def identity(cls, n: int) -> "Placement":
        return cls(tuple(range(n)))

    @property
    def n(self) -> int:
        return len(self.positions)

    @cached_property
    def occupant(self) -> dict[int, int]:
        return {v: q for q, v in enumerate(self.positions)}

    def vertex_of(self, qubit: int) -> int:
        return self.positions[qubit]

    def qubit_at(self, vertex: int) -> int | None:
        return self.occupant.get(vertex)

    def is_injective(self) -> bool:
        return len(set(self.positions)) == self.n

    def apply(self, step: SwapStep) -> "Placement":
        """Placement after swapping every edge of one step."""
        pos = list(self.positions)
        occ = self.occupant
        for u, v in step:
            qu, qv = occ.get(u), occ.get(v)
            if qu is not None:
                pos[qu] = v
            if qv is not None:
                pos[qv] = u
        return Placement(tuple(pos))

def pairs_met(positions: tuple[int, ...], pairs, edge_set) -> bool:
    """True when every qubit pair of ``pairs`` sits on an edge of ``edge_set``."""
    for p, q in pairs:
        a, b = positions[p], positions[q]
        if ((a, b) if a < b else (b, a)) not in edge_set:
            return False
    return True


def replay(start: Placement, steps) -> list[Placement]:
    """Placements before each cycle plus the final one; length len(steps)+1."""
    out = [start]
    for step in steps:
        out.append(out[-1].apply(step))
    return out


@dataclass(frozen=True)
class RoutingSolution:
    """Cycle-by-cycle swap schedule plus reported metrics.

    ``level_cycle`` maps level index -> activation cycle for joint schedules
    and is None for interaction-only routing.  ``total_delay`` follows the
    reporting convention: interaction count plus swap cycles when gates and
    swaps never share cycles, otherwise one plus the last activation cycle.
    """

    start: Placement
    steps: tuple[SwapStep, ...]
    level_cycle: dict[int, int] | None = None
    swap_count: int = 0
    swap_delay: int = 0
    total_delay: int = 0
    optimal: bool = True

    @classmethod
    def build(
        cls,
        start: Placement,
        steps,
        n_interactions: int,
        level_cycle: dict[int, int] | None = None,
        optimal: bool = True,
    ) -> "RoutingSolution":
        steps = tuple(canonical_step(s) for s in steps)
        swap_count = sum(len(s) for s in steps)
        swap_delay = sum(1 for s in steps if s)
        if level_cycle is None:
            total = n_interactions + swap_delay
        else:
            total = (max(level_cycle.values()) + 1) if level_cycle else 0
        return cls(start, steps, level_cycle, swap_count, swap_delay, total, optimal)
