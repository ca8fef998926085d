"""HTTP service wrapping the routing pipeline.

Endpoints accept circuits as ``.real`` text and return reports, compliant
circuits, exported LP models or verification verdicts as JSON.
"""
from __future__ import annotations

from typing import Literal

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .circuit import RealParseError, parse_real, write_real
from .ilp import (
    Formulation,
    ProblemInstance,
    build_p2_model,
    build_p3_model,
    export_lp,
    parse_solution_text,
    solution_to_routing,
)
from .leveling import compute_levels, interactions
from .pipeline import parse_placement, report, report_record, reports_table, route_circuit, split_blocks
from .placement import Placement, replay
from .solver import Unsatisfiable, greedy_upper_bound
from .topology import TopologyKind, build_topology
from .verify import verify_solution

TopologyName = Literal["1d", "cycle", "mesh2d", "torus", "grid3d", "cbn", "full"]
FormulationName = Literal["p2", "p3"]

# Per-block solver budgets (seconds) used when the request leaves them unset.
DEFAULT_BLOCK_BUDGET = 600.0
DEFAULT_FULL_BUDGET = 7200.0

app = FastAPI(title="nnroute", version=__version__)


class SolveRequest(BaseModel):
    circuit: str = Field(description=".real document text")
    topology: TopologyName = "1d"
    formulation: FormulationName = "p2"
    block_size: int | None = Field(default=None, ge=1, description="levels per block; default: whole circuit")
    placement: str = Field(default="identity", description="'identity' or placement file text")
    budget_seconds: float | None = Field(default=None, gt=0)
    name: str = "circuit"


class ReportModel(BaseModel):
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
    block_optimal: list[bool]
    wall_time_s: float


class SolveResponse(BaseModel):
    report: ReportModel
    routed_circuit: str
    report_record: str
    table: str
    final_placement: dict[str, int]
    optimal: bool


class ExportLpRequest(BaseModel):
    circuit: str
    topology: TopologyName = "1d"
    formulation: FormulationName = "p2"
    block_size: int | None = Field(default=None, ge=1)
    placement: str = "identity"
    horizon: int | None = Field(default=None, ge=0, description="cycle horizon; default: greedy upper bound")


class LpBlockModel(BaseModel):
    index: int
    level_lo: int
    level_hi: int
    horizon: int
    lp: str


class ExportLpResponse(BaseModel):
    blocks: list[LpBlockModel]


class VerifyRequest(BaseModel):
    circuit: str
    topology: TopologyName = "1d"
    formulation: FormulationName = "p2"
    placement: str = "identity"
    solution: str = Field(description="solver output as 'name value' lines")


class ViolationModel(BaseModel):
    kind: str
    cycle: int
    message: str


class VerifyResponse(BaseModel):
    ok: bool
    violations: list[ViolationModel]
    swap_count: int
    swap_delay: int
    total_delay: int
    met_cycles: list[int]


def _parse_circuit(text: str):
    try:
        return parse_real(text)
    except RealParseError as exc:
        raise HTTPException(status_code=400, detail=f"circuit parse error: {exc}")


def _start_placement(source: str, circuit, graph) -> Placement:
    if source.strip() == "identity":
        return Placement.identity(circuit.n)
    try:
        return parse_placement(source, circuit, graph)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=f"placement error: {exc}")


def _prepared(circuit: str, topology: str, placement: str):
    parsed = _parse_circuit(circuit)
    kind = TopologyKind(topology)
    graph = build_topology(kind, max(parsed.n, 1))
    start = _start_placement(placement, parsed, graph)
    schedule = compute_levels(parsed)
    inters = tuple(interactions(parsed, schedule))
    return parsed, kind, graph, start, schedule, inters


@app.get("/health")
def health() -> dict[str, str]:
    return {"status": "ok", "version": __version__}


@app.post("/solve", response_model=SolveResponse)
def solve(request: SolveRequest) -> SolveResponse:
    parsed = _parse_circuit(request.circuit)
    kind = TopologyKind(request.topology)
    graph = build_topology(kind, max(parsed.n, 1))
    start = _start_placement(request.placement, parsed, graph)
    schedule = compute_levels(parsed)
    block_size = request.block_size or max(len(schedule), 1)
    budget = request.budget_seconds
    if budget is None:
        multi_block = len(schedule) > block_size
        budget = DEFAULT_BLOCK_BUDGET if multi_block else DEFAULT_FULL_BUDGET
    try:
        routed = route_circuit(
            parsed,
            kind,
            start=start,
            formulation=Formulation(request.formulation),
            block_size=block_size,
            budget=budget,
        )
    except Unsatisfiable as exc:
        raise HTTPException(status_code=409, detail=str(exc))
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    rep = report(routed, name=request.name)
    final = routed.start
    for solution in routed.solutions:
        final = replay(final, solution.steps)[-1]
    return SolveResponse(
        report=ReportModel(**rep.__dict__),
        routed_circuit=write_real(routed.merged),
        report_record=report_record(rep),
        table=reports_table([rep]),
        final_placement={
            parsed.qubit_names[q]: v for q, v in enumerate(final.positions)
        },
        optimal=routed.optimal,
    )


@app.post("/export-lp", response_model=ExportLpResponse)
def export_lp_models(request: ExportLpRequest) -> ExportLpResponse:
    parsed, kind, graph, start, schedule, inters = _prepared(
        request.circuit, request.topology, request.placement
    )
    if not inters:
        raise HTTPException(status_code=400, detail="circuit has no levels to model")
    formulation = Formulation(request.formulation)
    block_size = request.block_size or len(schedule)
    blocks = split_blocks(schedule, block_size)
    build = build_p2_model if formulation is Formulation.P2 else build_p3_model

    out: list[LpBlockModel] = []
    entry = start
    for i, block in enumerate(blocks):
        block_inters = inters[block.lo : block.hi + 1]
        greedy = None
        try:
            greedy = greedy_upper_bound(graph, entry, block_inters)
        except Unsatisfiable as exc:
            if request.horizon is None or len(blocks) > 1:
                raise HTTPException(status_code=409, detail=str(exc))
        if request.horizon is not None:
            horizon = request.horizon
        elif formulation is Formulation.P2:
            horizon = greedy.swap_delay
        else:
            horizon = greedy.swap_count + len(block_inters) - 1
        instance = ProblemInstance(graph, entry, block_inters, formulation, horizon)
        try:
            model = build(instance)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        out.append(
            LpBlockModel(
                index=i, level_lo=block.lo, level_hi=block.hi, horizon=horizon, lp=export_lp(model)
            )
        )
        if greedy is not None:
            entry = replay(entry, greedy.steps)[-1]
    return ExportLpResponse(blocks=out)


@app.post("/verify", response_model=VerifyResponse)
def verify(request: VerifyRequest) -> VerifyResponse:
    parsed, kind, graph, start, schedule, inters = _prepared(
        request.circuit, request.topology, request.placement
    )
    if not inters:
        raise HTTPException(status_code=400, detail="circuit has no levels to verify against")
    formulation = Formulation(request.formulation)
    try:
        values = parse_solution_text(request.solution)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    horizon = 0
    for name in values:
        parts = name.split("_")
        if parts[0] in ("s", "a") and parts[-1].isdigit():
            horizon = max(horizon, int(parts[-1]) + 1)
    instance = ProblemInstance(graph, start, inters, formulation, horizon)
    solution = solution_to_routing(instance, values)
    result = verify_solution(instance, solution)
    return VerifyResponse(
        ok=result.ok,
        violations=[ViolationModel(**v.__dict__) for v in result.violations],
        swap_count=result.swap_count,
        swap_delay=result.swap_delay,
        total_delay=result.total_delay,
        met_cycles=list(result.met_cycles),
    )
