"""Shared fixtures and independent helpers for the test suite."""
from __future__ import annotations

import random
from pathlib import Path

import pytest

from nnroute.circuit import Gate, GateKind, QuantumCircuit
from nnroute.leveling import compute_levels
from nnroute.placement import pairs_met

DATA = Path(__file__).parent / "data"

# Golden routing of every 4-qubit target configuration on the 1D path,
# start [a, b, c, d]: configuration -> (#S, D).
TABLE1 = {
    "a b c d": (0, 0), "a b d c": (1, 1), "a c b d": (1, 1), "a c d b": (2, 2),
    "a d b c": (2, 2), "a d c b": (3, 3), "b a c d": (1, 1), "b a d c": (2, 1),
    "b c a d": (2, 2), "b c d a": (3, 3), "b d a c": (3, 2), "b d c a": (2, 2),
    "c a b d": (2, 2), "c a d b": (3, 2), "c b a d": (3, 3), "c b d a": (2, 2),
    "c d a b": (2, 1), "c d b a": (1, 1), "d a b c": (3, 3), "d a c b": (2, 2),
    "d b a c": (2, 2), "d b c a": (1, 1), "d c a b": (1, 1), "d c b a": (0, 0),
}


def table1_pairs(config: str) -> frozenset[tuple[int, int]]:
    ids = {"a": 0, "b": 1, "c": 2, "d": 3}
    order = [ids[token] for token in config.split()]
    return frozenset((min(u, v), max(u, v)) for u, v in zip(order, order[1:]))


@pytest.fixture(scope="session")
def corpus() -> dict[str, str]:
    return {path.stem: path.read_text() for path in sorted(DATA.glob("*.real"))}


def load(name: str) -> str:
    return (DATA / f"{name}.real").read_text()


# ---------------------------------------------------------------------------
# Independent joint-schedule enumerator (oracle for the P3 engine)


def p3_brute(graph, start, inters, max_cycles: int):
    """Exhaustive search over joint schedules: returns the optimal
    (makespan, sum of activation cycles, swap count) or None within the cap."""
    edge_set = graph.edge_set
    edges = list(graph.edges)
    pair_list = [i.pairs for i in inters]
    active = [i.active for i in inters]
    best: list[tuple | None] = [None]

    def matchings(banned):
        usable = [e for e in edges if e[0] not in banned and e[1] not in banned]
        found = [()]

        def rec(k, used, acc):
            for j in range(k, len(usable)):
                u, v = usable[j]
                if u in used or v in used:
                    continue
                found.append(tuple(acc + [(u, v)]))
                rec(j + 1, used | {u, v}, acc + [(u, v)])

        rec(0, set(), [])
        return found

    def apply(pos, step):
        out = list(pos)
        occ = {v: q for q, v in enumerate(pos)}
        for u, v in step:
            qu, qv = occ.get(u), occ.get(v)
            if qu is not None:
                out[qu] = v
            if qv is not None:
                out[qv] = u
        return tuple(out)

    def rec(pos, lvl, cycle, sact, swaps):
        if lvl == len(pair_list):
            cand = (cycle, sact, swaps)
            if best[0] is None or cand < best[0]:
                best[0] = cand
            return
        if cycle >= max_cycles:
            return
        if best[0] is not None and cycle + (len(pair_list) - lvl) > best[0][0]:
            return
        can_act = pairs_met(pos, pair_list[lvl], edge_set)
        for act in ((True, False) if can_act else (False,)):
            banned = {pos[q] for q in active[lvl]} if act else set()
            for m in matchings(banned):
                if not act and not m:
                    continue
                rec(
                    apply(pos, m),
                    lvl + (1 if act else 0),
                    cycle + 1,
                    sact + (cycle if act else 0),
                    swaps + len(m),
                )

    rec(start.positions, 0, 0, 0, 0)
    return best[0]


# ---------------------------------------------------------------------------
# Random instance generators (seeded by the caller)


def random_circuit(rng: random.Random, n_qubits: int, max_levels: int = 5) -> QuantumCircuit:
    """Random circuit from the supported gate set, level count capped; every
    multi-qubit gate stays routable on degree-2 topologies."""
    names = tuple(f"q{i}" for i in range(n_qubits))
    gates: list[Gate] = []
    for _ in range(rng.randint(1, 10)):
        kind = rng.choice(
            [GateKind.NOT, GateKind.CNOT, GateKind.CNOT, GateKind.TOFFOLI, GateKind.SWAP]
        )
        if kind is GateKind.NOT:
            gate = Gate(kind, (), (rng.randrange(n_qubits),))
        elif kind is GateKind.CNOT:
            c, t = rng.sample(range(n_qubits), 2)
            gate = Gate(kind, (c,), (t,))
        elif kind is GateKind.TOFFOLI:
            if n_qubits < 3:
                continue
            c1, c2, t = rng.sample(range(n_qubits), 3)
            gate = Gate(kind, (c1, c2), (t,))
        else:
            t1, t2 = rng.sample(range(n_qubits), 2)
            gate = Gate(kind, (), (t1, t2))
        gates.append(gate)
        if len(compute_levels(QuantumCircuit(names, tuple(gates)))) > max_levels:
            gates.pop()
            break
    if not gates:
        gates.append(Gate(GateKind.CNOT, (0,), (1,)))
    return QuantumCircuit(names, tuple(gates))


def random_interaction_pairs(rng: random.Random, n_qubits: int) -> frozenset[tuple[int, int]]:
    """One random gate's adjacency pattern (a 1- or 2-edge star/chain)."""
    shape = rng.choice(("cnot", "toffoli", "fredkin"))
    if shape == "cnot" or n_qubits < 3:
        c, t = rng.sample(range(n_qubits), 2)
        return frozenset({(min(c, t), max(c, t))})
    a, b, c = rng.sample(range(n_qubits), 3)
    if shape == "toffoli":
        pairs = {(a, c), (b, c)}
    else:
        pairs = {(b, c), (a, b)}
    return frozenset((min(u, v), max(u, v)) for u, v in pairs)
