"""Independent solution checker: replays a swap schedule cycle by cycle.

Deliberately separate from the search engines so it can audit both internal
solutions and ones imported from external solvers.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .ilp import Formulation, ProblemInstance
from .placement import RoutingSolution, pairs_met, replay


@dataclass(frozen=True)
class VerifyViolation:
    kind: str
    cycle: int
    message: str


@dataclass
class VerifyReport:
    """Recomputed metrics plus every violation found (empty means valid)."""

    violations: list[VerifyViolation] = field(default_factory=list)
    swap_count: int = 0
    swap_delay: int = 0
    total_delay: int = 0
    met_cycles: tuple[int, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_solution(instance: ProblemInstance, solution: RoutingSolution) -> VerifyReport:
    """Check matchings, chronological interaction meeting and swap blocking;
    recompute all reported metrics from the schedule itself."""
    graph = instance.graph
    edge_set = graph.edge_set
    report = VerifyReport()
    bad = report.violations

    for t, step in enumerate(solution.steps):
        seen: set[int] = set()
        for u, v in step:
            key = (u, v) if u < v else (v, u)
            if key not in edge_set:
                bad.append(
                    VerifyViolation("MatchingViolation", t, f"swap ({u},{v}) is not an edge")
                )
            if u in seen or v in seen or u == v:
                bad.append(
                    VerifyViolation(
                        "MatchingViolation", t, f"swap ({u},{v}) shares a vertex in cycle {t}"
                    )
                )
            seen.update((u, v))

    placements = replay(solution.start, solution.steps)

    def placement_at(cycle: int):
        return placements[min(cycle, len(placements) - 1)]

    report.swap_count = sum(len(s) for s in solution.steps)
    report.swap_delay = sum(1 for s in solution.steps if s)

    if instance.formulation is Formulation.P3 and solution.level_cycle is not None:
        cycles = solution.level_cycle
        n_levels = len(instance.interactions)
        if sorted(cycles) != list(range(n_levels)):
            bad.append(
                VerifyViolation(
                    "OrderViolation", -1, f"levels scheduled: {sorted(cycles)}, want 0..{n_levels - 1}"
                )
            )
            return report
        previous = -1
        met = []
        for i, inter in enumerate(instance.interactions):
            cycle = cycles[i]
            if cycle <= previous:
                bad.append(
                    VerifyViolation(
                        "OrderViolation",
                        cycle,
                        f"level {i} at cycle {cycle} not after level {i - 1}",
                    )
                )
            previous = cycle
            pos = placement_at(cycle).positions
            if not pairs_met(pos, inter.pairs, edge_set):
                bad.append(
                    VerifyViolation(
                        "AdjacencyViolation",
                        cycle,
                        f"interaction {i} not met at its activation cycle {cycle}",
                    )
                )
            if cycle < len(solution.steps):
                busy = {pos[q] for q in inter.active}
                for u, v in solution.steps[cycle]:
                    if u in busy or v in busy:
                        bad.append(
                            VerifyViolation(
                                "BlockingViolation",
                                cycle,
                                f"swap ({u},{v}) touches level {i} during its activation",
                            )
                        )
            met.append(cycle)
        report.met_cycles = tuple(met)
        report.total_delay = (met[-1] + 1) if met else 0
    else:
        cycle = 0
        met = []
        for i, inter in enumerate(instance.interactions):
            while cycle < len(placements) and not pairs_met(
                placements[cycle].positions, inter.pairs, edge_set
            ):
                cycle += 1
            if cycle == len(placements):
                bad.append(
                    VerifyViolation(
                        "OrderViolation",
                        len(solution.steps),
                        f"interaction {i} is never met in order within the schedule",
                    )
                )
                break
            met.append(cycle)
        report.met_cycles = tuple(met)
        report.total_delay = len(instance.interactions) + report.swap_delay

    claimed = (solution.swap_count, solution.swap_delay, solution.total_delay)
    recomputed = (report.swap_count, report.swap_delay, report.total_delay)
    if not bad and claimed != recomputed:
        bad.append(
            VerifyViolation(
                "MetricMismatch", -1, f"claimed {claimed}, recomputed {recomputed}"
            )
        )
    return report
