"""Partition a circuit into parallel levels and derive per-level adjacency needs.

A gate joins the earliest level where all of its qubits are free, so gates in
one level never share a qubit and source order is respected.  Each level's
interaction lists the qubit pairs that must sit on adjacent vertices for the
level to execute.
"""
from __future__ import annotations

from dataclasses import dataclass

from .circuit import Gate, QuantumCircuit


@dataclass(frozen=True)
class LevelSchedule:
    """Ordered levels; each level is a tuple of gate indices in source order."""

    levels: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.levels)


@dataclass(frozen=True)
class Interaction:
    """Adjacency requirements of one level.

    ``pairs`` holds unordered qubit-id pairs stored as (lo, hi); ``active``
    is every qubit touched by the level's gates, including single-qubit ones.
    """

    pairs: frozenset[tuple[int, int]]
    active: frozenset[int]

    @classmethod
    def from_pairs(cls, pairs) -> "Interaction":
        norm = frozenset((min(p, q), max(p, q)) for p, q in pairs)
        return cls(norm, frozenset(q for pair in norm for q in pair))

    @property
    def pair_qubits(self) -> frozenset[int]:
        return frozenset(q for pair in self.pairs for q in pair)


def compute_levels(circuit: QuantumCircuit) -> LevelSchedule:
    """Greedy level assignment: each gate lands in the first level where none
    of its qubits are claimed by an earlier-or-parallel gate."""
    free = [0] * circuit.n
    levels: list[list[int]] = []
    for idx, gate in enumerate(circuit.gates):
        lvl = max(free[q] for q in gate.qubits)
        if lvl == len(levels):
            levels.append([])
        levels[lvl].append(idx)
        for q in gate.qubits:
            free[q] = lvl + 1
    return LevelSchedule(tuple(tuple(level) for level in levels))


def _ordered(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def gate_pairs(gate: Gate) -> frozenset[tuple[int, int]]:
    """Adjacency pairs one gate requires.

    Single-target gates need every control adjacent to the target.  Two-target
    gates need the target pair adjacent and every control adjacent to the
    first target.
    """
    if len(gate.targets) == 1:
        t = gate.targets[0]
        return frozenset(_ordered(c, t) for c in gate.controls)
    t1, t2 = gate.targets
    pairs = {_ordered(t1, t2)}
    pairs.update(_ordered(c, t1) for c in gate.controls)
    return frozenset(pairs)


def interactions(circuit: QuantumCircuit, schedule: LevelSchedule) -> list[Interaction]:
    """Per-level union of gate adjacency pairs plus the level's active qubits."""
    out = []
    for level in schedule.levels:
        pairs: set[tuple[int, int]] = set()
        active: set[int] = set()
        for idx in level:
            gate = circuit.gates[idx]
            pairs.update(gate_pairs(gate))
            active.update(gate.qubits)
        out.append(Interaction(frozenset(pairs), frozenset(active)))
    return out
