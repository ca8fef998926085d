"""End-to-end routing: block decomposition, chained solving, swap insertion
into an output circuit, and report generation."""
from __future__ import annotations

import time
from dataclasses import dataclass, replace

from .circuit import Gate, GateKind, QuantumCircuit, validate
from .ilp import Formulation
from .leveling import Interaction, LevelSchedule, compute_levels, interactions
from .placement import Placement, RoutingSolution, pairs_met, replay
from .solver import Unsatisfiable, find_embedding, solve_p2, solve_p3
from .topology import TopologyGraph, TopologyKind, build_topology


class VerificationFailed(Exception):
    """The emitted circuit does not replay to a compliant schedule."""


@dataclass(frozen=True)
class Block:
    """Contiguous level range [lo, hi] routed as one sub-problem."""

    lo: int
    hi: int
    interactions: tuple[Interaction, ...] = ()
    entry: Placement | None = None


def split_blocks(schedule: LevelSchedule, block_size: int) -> list[Block]:
    """Partition levels into ceil((k+1)/b) blocks; only the last may be short."""
    if block_size < 1:
        raise ValueError("block size must be >= 1")
    count = len(schedule)
    return [Block(lo, min(lo + block_size - 1, count - 1)) for lo in range(0, count, block_size)]


@dataclass
class RoutedCircuit:
    """Routing outcome: per-block solutions plus the merged compliant circuit."""

    circuit: QuantumCircuit
    graph: TopologyGraph
    formulation: Formulation
    block_size: int
    start: Placement
    blocks: tuple[Block, ...]
    solutions: tuple[RoutingSolution, ...]
    merged: QuantumCircuit
    line_vertices: tuple[int, ...]
    cycles: tuple[tuple[int, ...], ...]
    inserted: frozenset[int]
    n_levels: int
    swap_count: int
    swap_delay: int
    total_delay: int
    wall_time_s: float = 0.0

    @property
    def optimal(self) -> bool:
        return all(s.optimal for s in self.solutions)


def parse_placement(text: str, circuit: QuantumCircuit, graph: TopologyGraph) -> Placement:
    """Placement file: one ``qubit_name vertex_index`` per line, every qubit
    listed exactly once."""
    by_name: dict[str, int] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ValueError(f"placement line {line_no}: expected 'name vertex'")
        name, vertex_text = tokens
        if name not in circuit.qubit_names:
            raise ValueError(f"placement line {line_no}: unknown qubit '{name}'")
        if name in by_name:
            raise ValueError(f"placement line {line_no}: duplicate qubit '{name}'")
        try:
            vertex = int(vertex_text)
        except ValueError as exc:
            raise ValueError(f"placement line {line_no}: bad vertex {vertex_text!r}") from exc
        if not 0 <= vertex < graph.num_vertices:
            raise ValueError(f"placement line {line_no}: vertex {vertex} out of range")
        by_name[name] = vertex
    missing = [name for name in circuit.qubit_names if name not in by_name]
    if missing:
        raise ValueError(f"placement misses qubits: {', '.join(missing)}")
    positions = tuple(by_name[name] for name in circuit.qubit_names)
    if len(set(positions)) != len(positions):
        raise ValueError("placement maps two qubits to one vertex")
    return Placement(positions)


def route_circuit(
    circuit: QuantumCircuit,
    kind: TopologyKind,
    start: Placement | None = None,
    formulation: Formulation = Formulation.P2,
    block_size: int | None = None,
    budget: float | None = None,
) -> RoutedCircuit:
    """Route a circuit block by block, chaining each block's exit placement
    into the next, and emit the merged nearest-neighbor-compliant circuit."""
    t0 = time.monotonic()
    problems = validate(circuit)
    if problems:
        raise ValueError(f"invalid circuit: {problems[0].rule} at gate {problems[0].gate_index}")
    schedule = compute_levels(circuit)
    inters = interactions(circuit, schedule)
    graph = build_topology(kind, max(circuit.n, 1))
    if start is None:
        start = Placement.identity(circuit.n)
    if not start.is_injective() or any(
        not 0 <= v < graph.num_vertices for v in start.positions
    ):
        raise ValueError("start placement must map qubits injectively onto vertices")

    for i, inter in enumerate(inters):
        if find_embedding(graph, inter.pairs) is None:
            raise Unsatisfiable(
                f"level {i} (gates {list(schedule.levels[i])}) needs pairs "
                f"{sorted(inter.pairs)} which cannot be embedded in {kind.value}"
            )

    if block_size is None:
        block_size = max(len(schedule), 1)
    blocks = split_blocks(schedule, block_size) if len(schedule) else []

    solve = solve_p2 if formulation is Formulation.P2 else solve_p3
    entry = start
    solved_blocks: list[Block] = []
    solutions: list[RoutingSolution] = []
    for block in blocks:
        block_inters = tuple(inters[block.lo : block.hi + 1])
        block = replace(block, interactions=block_inters, entry=entry)
        solution = solve(graph, entry, block_inters, budget=budget)
        solved_blocks.append(block)
        solutions.append(solution)
        entry = replay(entry, solution.steps)[-1]

    merged, lines, cycles, inserted = insert_swaps(
        circuit, graph, start, formulation, solved_blocks, solutions
    )
    return RoutedCircuit(
        circuit=circuit,
        graph=graph,
        formulation=formulation,
        block_size=block_size,
        start=start,
        blocks=tuple(solved_blocks),
        solutions=tuple(solutions),
        merged=merged,
        line_vertices=lines,
        cycles=cycles,
        inserted=inserted,
        n_levels=len(schedule),
        swap_count=sum(s.swap_count for s in solutions),
        swap_delay=sum(s.swap_delay for s in solutions),
        total_delay=sum(s.total_delay for s in solutions),
        wall_time_s=time.monotonic() - t0,
    )


def _fresh_name(base: str, taken: set[str]) -> str:
    name = base
    while name in taken:
        name += "_"
    taken.add(name)
    return name


def insert_swaps(
    circuit: QuantumCircuit,
    graph: TopologyGraph,
    start: Placement,
    formulation: Formulation,
    blocks,
    solutions,
) -> tuple[QuantumCircuit, tuple[int, ...], tuple[tuple[int, ...], ...], frozenset[int]]:
    """Merge routing solutions into one circuit over physical lines.

    Original gates land in their activation cycles rewritten onto current
    line positions; swap cycles precede the level they serve (sequential
    formulation) or interleave per the joint schedule.  Raises
    VerificationFailed when the combined schedule does not replay cleanly.
    """
    schedule = compute_levels(circuit) if circuit.gates else LevelSchedule(())
    edge_set = graph.edge_set

    # Cycle plan: (level index or None, swap step, placement before the cycle).
    plan: list[tuple[int | None, tuple, Placement]] = []
    for block, solution in zip(blocks, solutions):
        placements = replay(block.entry, solution.steps)
        if formulation is Formulation.P3 and solution.level_cycle is not None:
            n_cycles = len(solution.steps)
            if solution.level_cycle:
                n_cycles = max(n_cycles, max(solution.level_cycle.values()) + 1)
            by_cycle = {c: lvl for lvl, c in solution.level_cycle.items()}
            for t in range(n_cycles):
                level = by_cycle.get(t)
                step = solution.steps[t] if t < len(solution.steps) else ()
                plan.append(
                    (
                        block.lo + level if level is not None else None,
                        step,
                        placements[min(t, len(placements) - 1)],
                    )
                )
        else:
            cycle = 0
            for j, inter in enumerate(block.interactions):
                first = cycle
                while cycle < len(placements) and not pairs_met(
                    placements[cycle].positions, inter.pairs, edge_set
                ):
                    cycle += 1
                if cycle == len(placements):
                    raise VerificationFailed(
                        f"interaction {block.lo + j} is never met by its block schedule"
                    )
                for t in range(first, cycle):
                    plan.append((None, solution.steps[t], placements[t]))
                plan.append((block.lo + j, (), placements[cycle]))

    used = sorted(
        set(start.positions)
        | {v for _, step, _ in plan for edge in step for v in edge}
    )
    line_of = {v: i for i, v in enumerate(used)}
    taken = set(circuit.qubit_names)
    names = []
    for v in used:
        q = start.qubit_at(v)
        names.append(circuit.qubit_names[q] if q is not None else _fresh_name(f"anc{v}", taken))

    gates: list[Gate] = []
    cycles: list[tuple[int, ...]] = []
    inserted: set[int] = set()
    origin: dict[int, int] = {}  # merged gate index -> source gate index
    for level, step, placement in plan:
        indices = []
        if level is not None:
            for gate_idx in schedule.levels[level]:
                gate = circuit.gates[gate_idx]
                mapped = Gate(
                    gate.kind,
                    tuple(line_of[placement.positions[q]] for q in gate.controls),
                    tuple(line_of[placement.positions[q]] for q in gate.targets),
                )
                origin[len(gates)] = gate_idx
                indices.append(len(gates))
                gates.append(mapped)
        for u, v in step:
            inserted.add(len(gates))
            indices.append(len(gates))
            gates.append(Gate(GateKind.SWAP, (), (line_of[u], line_of[v])))
        cycles.append(tuple(indices))

    identity_lines = names == list(circuit.qubit_names)
    merged = QuantumCircuit(
        tuple(names),
        tuple(gates),
        circuit.version,
        circuit.extra_directives if identity_lines else (),
    )
    _check_emission(circuit, merged, graph, start, used, inserted, cycles, origin)
    return merged, tuple(used), tuple(cycles), frozenset(inserted)


def _check_emission(circuit, merged, graph, start, used, inserted, cycles, origin) -> None:
    """Replay the emitted circuit: inserted swaps move line contents, original
    gates must find exactly their own qubits on adjacent lines."""
    from .leveling import gate_pairs

    edge_set = graph.edge_set
    content: dict[int, int] = {}
    for line, vertex in enumerate(used):
        q = start.qubit_at(vertex)
        if q is not None:
            content[line] = q

    emitted = 0
    for cycle in cycles:
        for idx in cycle:
            gate = merged.gates[idx]
            if idx in inserted:
                continue
            emitted += 1
            for a, b in gate_pairs(gate):
                va, vb = used[a], used[b]
                key = (va, vb) if va < vb else (vb, va)
                if key not in edge_set:
                    raise VerificationFailed(
                        f"gate {idx} pair (lines {a},{b}) not adjacent on the topology"
                    )
            want = circuit.gates[origin[idx]]
            got_controls = tuple(content.get(line) for line in gate.controls)
            got_targets = tuple(content.get(line) for line in gate.targets)
            if got_controls != want.controls or got_targets != want.targets:
                raise VerificationFailed(
                    f"gate {idx}: lines hold {got_controls}/{got_targets}, "
                    f"expected {want.controls}/{want.targets}"
                )
        for idx in cycle:
            if idx in inserted:
                a, b = merged.gates[idx].targets
                qa, qb = content.pop(a, None), content.pop(b, None)
                if qa is not None:
                    content[b] = qa
                if qb is not None:
                    content[a] = qb
    if emitted != len(circuit.gates):
        raise VerificationFailed("emitted circuit lost original gates")


# ---------------------------------------------------------------------------
# Reporting


@dataclass(frozen=True)
class RouteReport:
    """Machine-readable routing record mirroring the benchmark tables."""

    name: str
    n_qubits: int
    n_gates: int
    n_levels: int
    topology: str
    formulation: str
    block_size: int
    swap_count: int
    swap_delay: int
    total_delay: int
    block_optimal: tuple[bool, ...]
    wall_time_s: float


def report(routed: RoutedCircuit, name: str = "circuit") -> RouteReport:
    return RouteReport(
        name=name,
        n_qubits=routed.circuit.n,
        n_gates=len(routed.circuit.gates),
        n_levels=routed.n_levels,
        topology=routed.graph.kind.value,
        formulation=routed.formulation.value,
        block_size=routed.block_size,
        swap_count=routed.swap_count,
        swap_delay=routed.swap_delay,
        total_delay=routed.total_delay,
        block_optimal=tuple(s.optimal for s in routed.solutions),
        wall_time_s=routed.wall_time_s,
    )


def report_record(rep: RouteReport) -> str:
    """One key/value record per benchmark.  Wall time is excluded here so the
    written report files are byte-stable across runs."""
    lines = [
        f"name {rep.name}",
        f"vars {rep.n_qubits}",
        f"gates {rep.n_gates}",
        f"levels {rep.n_levels}",
        f"topology {rep.topology}",
        f"formulation {rep.formulation}",
        f"block_size {rep.block_size}",
        f"swaps {rep.swap_count}",
        f"swap_delay {rep.swap_delay}",
        f"total_delay {rep.total_delay}",
        "block_optimal " + ("-" if not rep.block_optimal
                            else ",".join("1" if b else "0" for b in rep.block_optimal)),
    ]
    return "\n".join(lines) + "\n"


_TABLE_COLUMNS = (
    ("name", lambda r: r.name),
    ("vars", lambda r: str(r.n_qubits)),
    ("gates", lambda r: str(r.n_gates)),
    ("levels", lambda r: str(r.n_levels)),
    ("topo", lambda r: r.topology),
    ("form", lambda r: r.formulation),
    ("b", lambda r: str(r.block_size)),
    ("S", lambda r: str(r.swap_count)),
    ("swapD", lambda r: str(r.swap_delay)),
    ("D", lambda r: str(r.total_delay)),
    ("opt", lambda r: "yes" if all(r.block_optimal) else "no"),
    ("time", lambda r: f"{r.wall_time_s:.2f}s"),
)


def reports_table(reports) -> str:
    """Human-readable aligned table over one or more reports."""
    rows = [[fn(rep) for _, fn in _TABLE_COLUMNS] for rep in reports]
    headers = [name for name, _ in _TABLE_COLUMNS]
    widths = [
        max(len(headers[i]), *(len(row[i]) for row in rows)) if rows else len(headers[i])
        for i in range(len(headers))
    ]
    def fmt(cells):
        return "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(cells)).rstrip()
    return "\n".join([fmt(headers)] + [fmt(row) for row in rows]) + "\n"
