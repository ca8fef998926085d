"""Solver-agnostic integer linear models of the routing problems.

Boolean definitions are linearized exactly: z = x AND y becomes z <= x,
z <= y, z >= x + y - 1; z = OR(x_i) becomes z >= x_i for all i and
z <= sum x_i.  Models export as CPLEX-LP text and solutions import back as
``name value`` lines.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .leveling import Interaction
from .placement import Placement, RoutingSolution, pairs_met, replay
from .topology import TopologyGraph


class Formulation(Enum):
    P2 = "p2"
    P3 = "p3"


class InvalidPlacement(ValueError):
    pass


@dataclass(frozen=True)
class ProblemInstance:
    """One routing instance: graph, start placement, ordered interactions."""

    graph: TopologyGraph
    start: Placement
    interactions: tuple[Interaction, ...]
    formulation: Formulation = Formulation.P2
    horizon: int = 0


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str  # "binary" | "integer"
    lb: int = 0
    ub: int | None = 1


@dataclass(frozen=True)
class Constraint:
    name: str
    terms: tuple[tuple[float, str], ...]
    sense: str  # "<=" | ">=" | "="
    rhs: float
    family: str


@dataclass
class IlpModel:
    """Variables, tagged linear constraints and a minimization objective."""

    objective: tuple[tuple[float, str], ...]
    variables: dict[str, Variable]
    constraints: list[Constraint]
    horizon: int
    params: dict[str, object]
    sense: str = "min"


# Expressions are (constant, ((coef, var), ...)) and stay in {0, 1}.
Expr = tuple[float, tuple[tuple[float, str], ...]]


def _v(name: str) -> Expr:
    return (0.0, ((1.0, name),))


def _not(name: str) -> Expr:
    return (1.0, ((-1.0, name),))


class _Builder:
    def __init__(self) -> None:
        self.variables: dict[str, Variable] = {}
        self.constraints: list[Constraint] = []
        self._counters: dict[str, int] = {}

    def var(self, name: str, kind: str = "binary", lb: int = 0, ub: int | None = 1) -> str:
        if name not in self.variables:
            self.variables[name] = Variable(name, kind, lb, ub)
        return name

    def add(self, family: str, terms, sense: str, rhs: float) -> None:
        merged: dict[str, float] = {}
        for coef, name in terms:
            merged[name] = merged.get(name, 0.0) + coef
        k = self._counters.get(family, 0)
        self._counters[family] = k + 1
        self.constraints.append(
            Constraint(
                f"{family}_{k}",
                tuple((c, n) for n, c in merged.items() if c != 0),
                sense,
                rhs,
                family,
            )
        )

    def define_and(self, family: str, z: str, operands: list[Expr]) -> None:
        """z = AND over {0,1}-valued affine operands."""
        for const, terms in operands:
            self.add(family, [(1.0, z)] + [(-c, n) for c, n in terms], "<=", const)
        total_const = sum(const for const, _ in operands)
        all_terms = [(1.0, z)] + [(-c, n) for const, terms in operands for c, n in terms]
        self.add(family, all_terms, ">=", total_const - (len(operands) - 1))

    def define_or(self, family: str, z: str, operands: list[Expr]) -> None:
        """z = OR over {0,1}-valued affine operands."""
        if not operands:
            self.add(family, [(1.0, z)], "=", 0.0)
            return
        for const, terms in operands:
            self.add(family, [(1.0, z)] + [(-c, n) for c, n in terms], ">=", const)
        total_const = sum(const for const, _ in operands)
        all_terms = [(1.0, z)] + [(-c, n) for const, terms in operands for c, n in terms]
        self.add(family, all_terms, "<=", total_const)


def _validate_instance(instance: ProblemInstance) -> None:
    start, graph = instance.start, instance.graph
    if not start.is_injective():
        raise InvalidPlacement("start placement maps two qubits to one vertex")
    if any(not 0 <= v < graph.num_vertices for v in start.positions):
        raise InvalidPlacement("start placement references a vertex outside the graph")
    if not instance.interactions:
        raise ValueError("instance needs at least one interaction")
    if instance.horizon < 0:
        raise ValueError("horizon must be >= 0")


def _build_base(b: _Builder, instance: ProblemInstance) -> None:
    """Constraints shared by both formulations: interaction-met flags,
    adjacency detection, position dynamics, matching and initialization."""
    graph, start = instance.graph, instance.start
    inters = instance.interactions
    T = instance.horizon
    n = start.n
    K = len(inters) - 1
    edges = list(graph.edges)
    pairs_all = sorted({pair for inter in inters for pair in inter.pairs})

    m = lambda i, t: b.var(f"m_{i}_{t}")
    x = lambda v, q, t: b.var(f"x_{v}_{q}_{t}")
    s = lambda v, w, t: b.var(f"s_{v}_{w}_{t}")
    nn = lambda p, q, t: b.var(f"n_{p}_{q}_{t}")

    for i in range(K + 1):
        for t in range(T + 1):
            m(i, t)
    for v in range(graph.num_vertices):
        for q in range(n):
            for t in range(T + 1):
                x(v, q, t)
    for v, w in edges:
        for t in range(T):
            s(v, w, t)

    # Met flags never revert and interactions are met in order.
    for i in range(K + 1):
        for t in range(T):
            b.add("chronological", [(1.0, m(i, t)), (-1.0, m(i, t + 1))], ">=", 0.0)
    for i in range(K):
        for t in range(T + 1):
            b.add("chronological", [(1.0, m(i + 1, t)), (-1.0, m(i, t))], ">=", 0.0)

    # An interaction is met when all its pairs are adjacent; once met,
    # later positions no longer matter.
    for i, inter in enumerate(inters):
        L = len(inter.pairs)
        if L == 0:
            for t in range(T + 1):
                if i == 0:
                    b.add("successful", [(1.0, m(0, t))], "=", 0.0)
                else:
                    b.add("successful", [(1.0, m(i, t)), (-1.0, m(i - 1, t))], "<=", 0.0)
            continue
        for t in range(T + 1):
            terms = [(float(L), m(i, t))]
            terms += [(1.0, nn(p, q, t)) for p, q in sorted(inter.pairs)]
            terms += [(-float(L), m(i, tp)) for tp in range(t)]
            b.add("successful", terms, ">=", float(L) - float(L) * t)

    # Adjacency detection restricted to pairs used by some interaction.
    for p, q in pairs_all:
        for t in range(T + 1):
            or_terms: list[Expr] = []
            for v, w in edges:
                pv = b.var(f"p_{p}_{v}_{q}_{w}_{t}")
                b.define_and("nearest_neighbor", pv, [_v(x(v, p, t)), _v(x(w, q, t))])
                pw = b.var(f"p_{p}_{w}_{q}_{v}_{t}")
                b.define_and("nearest_neighbor", pw, [_v(x(w, p, t)), _v(x(v, q, t))])
                or_terms += [_v(pv), _v(pw)]
            b.define_or("nearest_neighbor", nn(p, q, t), or_terms)

    # Position dynamics: stay unless swapped away, arrive via a swapped edge.
    incident: list[list[tuple[int, int]]] = [[] for _ in range(graph.num_vertices)]
    for v, w in edges:
        incident[v].append((v, w))
        incident[w].append((v, w))
    for t in range(T):
        for v in range(graph.num_vertices):
            inc = incident[v]
            for q in range(n):
                u = b.var(f"u_{v}_{q}_{t + 1}")
                b.define_and(
                    "position_update",
                    u,
                    [_v(x(v, q, t))] + [_not(s(a, w, t)) for a, w in inc],
                )
                c = b.var(f"c_{v}_{q}_{t + 1}")
                for a, w in inc:
                    other = w if v == a else a
                    b.add(
                        "position_update",
                        [(1.0, c), (-1.0, s(a, w, t)), (-1.0, x(other, q, t))],
                        ">=",
                        -1.0,
                    )
                    b.add(
                        "position_update",
                        [(1.0, c), (-1.0, x(other, q, t)), (1.0, s(a, w, t))],
                        "<=",
                        1.0,
                    )
                b.add(
                    "position_update",
                    [(1.0, c)] + [(-1.0, s(a, w, t)) for a, w in inc],
                    "<=",
                    0.0,
                )
                b.define_or("position_update", x(v, q, t + 1), [_v(u), _v(c)])

    # One position per qubit; a vertex joins at most one swap per cycle.
    for q in range(n):
        for t in range(T + 1):
            b.add(
                "location_swap",
                [(1.0, x(v, q, t)) for v in range(graph.num_vertices)],
                "=",
                1.0,
            )
    for t in range(T):
        for v in range(graph.num_vertices):
            if incident[v]:
                b.add(
                    "location_swap", [(1.0, s(a, w, t)) for a, w in incident[v]], "<=", 1.0
                )

    # Fix cycle-0 positions from the start placement.
    for v in range(graph.num_vertices):
        for q in range(n):
            b.add(
                "initialization",
                [(1.0, x(v, q, 0))],
                "=",
                1.0 if start.positions[q] == v else 0.0,
            )


def _params(instance: ProblemInstance) -> dict[str, object]:
    return {
        "n": instance.start.n,
        "num_vertices": instance.graph.num_vertices,
        "k_plus_1": len(instance.interactions),
        "pair_counts": tuple(len(i.pairs) for i in instance.interactions),
        "horizon": instance.horizon,
        "formulation": instance.formulation.value,
    }


def build_p2_model(instance: ProblemInstance) -> IlpModel:
    """Sequential formulation: minimize the number of cycles until the last
    interaction is met.  The delay variable is bounded by the horizon, so a
    horizon too small to meet every interaction makes the model infeasible.
    """
    _validate_instance(instance)
    b = _Builder()
    T = instance.horizon
    K = len(instance.interactions) - 1
    delay = b.var("delay", kind="integer", lb=0, ub=T)
    _build_base(b, instance)
    terms = [(1.0, f"m_{K}_{t}") for t in range(T + 1)] + [(-1.0, delay)]
    b.add("objective", terms, "=", 0.0)
    return IlpModel(((1.0, delay),), b.variables, b.constraints, T, _params(instance))


def build_p3_model(instance: ProblemInstance) -> IlpModel:
    """Joint formulation: schedule one level per cycle, in order, each only
    once its interaction is met, while swaps avoid the qubits of the level
    activated in the same cycle;  minimize the sum of activation cycles.
    """
    _validate_instance(instance)
    inters = instance.interactions
    T = instance.horizon
    K = len(inters) - 1
    if T < K:
        raise ValueError(f"horizon {T} cannot schedule {K + 1} levels")
    b = _Builder()
    _build_base(b, instance)
    graph, n = instance.graph, instance.start.n
    edges = list(graph.edges)

    a = lambda i, t: b.var(f"a_{i}_{t}")
    for i in range(K + 1):
        for t in range(T + 1):
            a(i, t)

    # Every level exactly once, at most one level per cycle, only when met,
    # and in level order.
    for i in range(K + 1):
        b.add("level_scheduling", [(1.0, a(i, t)) for t in range(T + 1)], "=", 1.0)
    for t in range(T + 1):
        b.add("level_scheduling", [(1.0, a(i, t)) for i in range(K + 1)], "<=", 1.0)
    for i in range(K + 1):
        for t in range(T + 1):
            b.add("level_scheduling", [(1.0, a(i, t)), (1.0, f"m_{i}_{t}")], "<=", 1.0)
    for i in range(K):
        for t in range(T + 1):
            terms = [(1.0, a(i + 1, tp)) for tp in range(t + 1)]
            terms += [(-1.0, a(i, tp)) for tp in range(t + 1)]
            b.add("level_scheduling", terms, "<=", 0.0)

    # Swap blocking: a met-but-unscheduled level freezes its pair qubits and
    # an activating level shields every qubit it touches for that cycle.
    for t in range(T):
        for i in range(K + 1):
            eb = b.var(f"eb_{i}_{t}")
            met: Expr = (1.0, ((-1.0, f"m_{i}_{t}"),))
            pending: Expr = (1.0, tuple((-1.0, a(i, tp)) for tp in range(t + 1)))
            b.define_and("swap_blocking", eb, [met, pending])
        for q in range(n):
            bq = b.var(f"b_{q}_{t}")
            operands: list[Expr] = []
            for i, inter in enumerate(inters):
                if q in inter.active:
                    operands.append(_v(a(i, t)))
                if q in inter.pair_qubits:
                    operands.append(_v(f"eb_{i}_{t}"))
            b.define_or("swap_blocking", bq, operands)
        for v in range(graph.num_vertices):
            for q in range(n):
                bv = b.var(f"bv_{v}_{q}_{t}")
                b.define_and("swap_blocking", bv, [_v(f"b_{q}_{t}"), _v(f"x_{v}_{q}_{t}")])
        for v, w in edges:
            sb = b.var(f"sb_{v}_{w}_{t}")
            operands = [_v(f"bv_{v}_{q}_{t}") for q in range(n)]
            operands += [_v(f"bv_{w}_{q}_{t}") for q in range(n)]
            b.define_or("swap_blocking", sb, operands)
            b.add("swap_blocking", [(1.0, f"s_{v}_{w}_{t}"), (1.0, sb)], "<=", 1.0)

    objective = tuple(
        (float(t), a(i, t)) for i in range(K + 1) for t in range(T + 1)
    )
    return IlpModel(objective, b.variables, b.constraints, T, _params(instance))


# ---------------------------------------------------------------------------
# CPLEX-LP export

_MAX_LINE = 200  # hard LP-format cap is 255 chars per line


def _num(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(value)


def _term_tokens(terms) -> list[str]:
    tokens = []
    for idx, (coef, name) in enumerate(terms):
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        body = name if mag == 1 else f"{_num(mag)} {name}"
        if idx == 0:
            tokens.append(body if sign == "+" else f"- {body}")
        else:
            tokens.append(f"{sign} {body}")
    return tokens


def _wrap(prefix: str, tokens: list[str], out: list[str]) -> None:
    line = prefix
    for token in tokens:
        if len(line) + len(token) + 1 > _MAX_LINE:
            out.append(line)
            line = " " + token
        else:
            line = f"{line} {token}" if line else token
    out.append(line)


def export_lp(model: IlpModel) -> str:
    """Render the model as CPLEX-LP text: Minimize / Subject To / Bounds /
    Binaries / Generals sections with deterministic names and ordering."""
    out: list[str] = ["Minimize"]
    obj_tokens = _term_tokens(model.objective) or ["0 " + next(iter(model.variables))]
    _wrap(" obj:", obj_tokens, out)
    out.append("Subject To")
    for con in model.constraints:
        tokens = _term_tokens(con.terms) or ["0 " + next(iter(model.variables))]
        tokens += [con.sense, _num(con.rhs)]
        _wrap(f" {con.name}:", tokens, out)
    generals = [v for v in model.variables.values() if v.kind == "integer"]
    if generals:
        out.append("Bounds")
        for var in generals:
            ub = "+inf" if var.ub is None else _num(var.ub)
            out.append(f" {_num(var.lb)} <= {var.name} <= {ub}")
    binaries = [v.name for v in model.variables.values() if v.kind == "binary"]
    if binaries:
        out.append("Binaries")
        _wrap("", binaries, out)
    if generals:
        out.append("Generals")
        _wrap("", [v.name for v in generals], out)
    out.append("End")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Solution import

def parse_solution_text(text: str) -> dict[str, float]:
    """Parse ``name value`` lines; ``#`` comments and blank lines are skipped
    and unknown variables are the caller's concern."""
    values: dict[str, float] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) < 2:
            raise ValueError(f"solution line {line_no}: expected 'name value'")
        try:
            values[tokens[0]] = float(tokens[1])
        except ValueError as exc:
            raise ValueError(f"solution line {line_no}: bad value {tokens[1]!r}") from exc
    return values


def solution_to_routing(instance: ProblemInstance, values: dict[str, float]) -> RoutingSolution:
    """Rebuild a routing solution from an assignment of model variables.

    Swap steps come from the s variables, activation cycles from the a
    variables; metrics are recomputed from the schedule rather than trusted.
    Trailing cycles after the goal is reached are dropped.
    """
    graph, start = instance.graph, instance.start
    T = instance.horizon
    steps = []
    for t in range(T):
        cycle = [
            (v, w)
            for v, w in graph.edges
            if values.get(f"s_{v}_{w}_{t}", 0.0) > 0.5
        ]
        steps.append(tuple(cycle))

    if instance.formulation is Formulation.P3:
        level_cycle: dict[int, int] = {}
        for i in range(len(instance.interactions)):
            for t in range(T + 1):
                if values.get(f"a_{i}_{t}", 0.0) > 0.5:
                    level_cycle[i] = t
                    break
        last = max(level_cycle.values()) if level_cycle else 0
        steps = steps[: last + 1]
        while steps and not steps[-1]:
            steps.pop()
        return RoutingSolution.build(
            start, steps, len(instance.interactions), level_cycle
        )

    # Sequential formulation: find the earliest in-order met cycles and trim.
    placements = replay(start, steps)
    edge_set = graph.edge_set
    cycle = 0
    for inter in instance.interactions:
        while cycle < len(placements) and not pairs_met(
            placements[cycle].positions, inter.pairs, edge_set
        ):
            cycle += 1
        if cycle == len(placements):
            break  # never met; keep the full schedule for the verifier to flag
    else:
        steps = steps[:cycle]
    while steps and not steps[-1]:
        steps.pop()
    return RoutingSolution.build(start, steps, len(instance.interactions))
