"""Depth-minimizing SWAP insertion for nearest-neighbor compliance of quantum
circuits on arbitrary qubit topologies.

Core pieces: a ``.real`` circuit model, level/interaction computation,
topology graph families, exact best-first routing engines, exportable
integer linear models, and a block-wise routing pipeline.  A FastAPI service
(:mod:`nnroute.api`) exposes the pipeline over HTTP and the CLI
(:mod:`nnroute.cli`) is a thin client of it.
"""

__version__ = "0.1.0"

from .circuit import Gate, GateKind, QuantumCircuit, parse_real, validate, write_real
from .ilp import (
    Formulation,
    IlpModel,
    ProblemInstance,
    build_p2_model,
    build_p3_model,
    export_lp,
    parse_solution_text,
    solution_to_routing,
)
from .leveling import Interaction, LevelSchedule, compute_levels, interactions
from .pipeline import (
    Block,
    RoutedCircuit,
    RouteReport,
    insert_swaps,
    report,
    report_record,
    reports_table,
    route_circuit,
    split_blocks,
)
from .placement import Placement, RoutingSolution, replay
from .solver import (
    GuardExceeded,
    Unsatisfiable,
    brute_force_route,
    find_satisfying_placement,
    greedy_upper_bound,
    solve_p2,
    solve_p3,
)
from .topology import TopologyGraph, TopologyKind, build_topology, edge_list_text, shortest_distances
from .verify import VerifyReport, VerifyViolation, verify_solution

__all__ = [
    "Block",
    "Formulation",
    "Gate",
    "GateKind",
    "GuardExceeded",
    "IlpModel",
    "Interaction",
    "LevelSchedule",
    "Placement",
    "ProblemInstance",
    "QuantumCircuit",
    "RoutedCircuit",
    "RouteReport",
    "RoutingSolution",
    "TopologyGraph",
    "TopologyKind",
    "Unsatisfiable",
    "VerifyReport",
    "VerifyViolation",
    "brute_force_route",
    "build_p2_model",
    "build_p3_model",
    "build_topology",
    "compute_levels",
    "edge_list_text",
    "export_lp",
    "find_satisfying_placement",
    "greedy_upper_bound",
    "insert_swaps",
    "interactions",
    "parse_real",
    "parse_solution_text",
    "replay",
    "report",
    "report_record",
    "reports_table",
    "route_circuit",
    "shortest_distances",
    "solution_to_routing",
    "solve_p2",
    "solve_p3",
    "split_blocks",
    "validate",
    "verify_solution",
    "write_real",
]
