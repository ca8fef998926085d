from dataclasses import replace

from nnroute.ilp import Formulation, ProblemInstance
from nnroute.leveling import Interaction
from nnroute.placement import Placement, RoutingSolution
from nnroute.solver import solve_p2, solve_p3
from nnroute.topology import TopologyKind, build_topology
from nnroute.verify import verify_solution
from conftest import table1_pairs

PATH4 = build_topology(TopologyKind.PATH_1D, 4)
PATH3 = build_topology(TopologyKind.PATH_1D, 3)
START4 = Placement.identity(4)
START3 = Placement.identity(3)


def p2_instance(graph, start, pair_sets):
    inters = tuple(Interaction.from_pairs(p) for p in pair_sets)
    return ProblemInstance(graph, start, inters, Formulation.P2, 4)


def p3_instance(graph, start, pair_sets):
    inters = tuple(Interaction.from_pairs(p) for p in pair_sets)
    return ProblemInstance(graph, start, inters, Formulation.P3, 4)


def test_valid_single_swap_report():
    inst = p2_instance(PATH4, START4, [table1_pairs("a b d c")])
    solution = RoutingSolution.build(START4, [((2, 3),)], 1)
    report = verify_solution(inst, solution)
    assert report.ok
    assert report.swap_count == 1
    assert report.swap_delay == 1


def test_matching_violation_shared_vertex():
    inst = p2_instance(PATH4, START4, [table1_pairs("a b d c")])
    solution = RoutingSolution.build(START4, [((1, 2), (2, 3))], 1)
    report = verify_solution(inst, solution)
    assert any(v.kind == "MatchingViolation" for v in report.violations)


def test_matching_violation_non_edge():
    inst = p2_instance(PATH4, START4, [table1_pairs("a b d c")])
    solution = RoutingSolution.build(START4, [((0, 3),)], 1)
    report = verify_solution(inst, solution)
    assert any(v.kind == "MatchingViolation" for v in report.violations)


def test_order_violation_second_met_only_before_first():
    # After the swap, interaction 0 is met but interaction 1 never again.
    inst = p2_instance(PATH3, START3, [[(0, 2)], [(0, 1)]])
    solution = RoutingSolution.build(START3, [((1, 2),)], 2)
    report = verify_solution(inst, solution)
    assert any(v.kind == "OrderViolation" for v in report.violations)


def test_metric_mismatch_detected():
    inst = p2_instance(PATH4, START4, [table1_pairs("a b d c")])
    good = RoutingSolution.build(START4, [((2, 3),)], 1)
    tampered = replace(good, swap_count=0)
    report = verify_solution(inst, tampered)
    assert any(v.kind == "MetricMismatch" for v in report.violations)


def test_p3_valid_solution():
    inters = [[(0, 2)], [(0, 1)]]
    inst = p3_instance(PATH3, START3, inters)
    solution = solve_p3(PATH3, START3, inst.interactions)
    report = verify_solution(inst, solution)
    assert report.ok
    assert report.total_delay == solution.total_delay == 3


def test_p3_blocking_violation():
    # Swapping the activated level's qubits during its own cycle is illegal.
    inst = p3_instance(PATH3, START3, [[(0, 1)]])
    solution = RoutingSolution(
        start=START3,
        steps=(((0, 1),),),
        level_cycle={0: 0},
        swap_count=1,
        swap_delay=1,
        total_delay=1,
    )
    report = verify_solution(inst, solution)
    assert any(v.kind == "BlockingViolation" for v in report.violations)


def test_p3_adjacency_violation():
    inst = p3_instance(PATH3, START3, [[(0, 2)]])
    solution = RoutingSolution(
        start=START3, steps=(), level_cycle={0: 0}, swap_count=0, swap_delay=0, total_delay=1
    )
    report = verify_solution(inst, solution)
    assert any(v.kind == "AdjacencyViolation" for v in report.violations)


def test_p3_missing_level():
    inst = p3_instance(PATH3, START3, [[(0, 1)], [(1, 2)]])
    solution = RoutingSolution(
        start=START3, steps=(), level_cycle={0: 0}, swap_count=0, swap_delay=0, total_delay=1
    )
    report = verify_solution(inst, solution)
    assert any(v.kind == "OrderViolation" for v in report.violations)


def test_every_exact_solution_verifies(corpus):
    # Spot check: exact engines always produce verifier-clean schedules.
    for config in ("b d a c", "c a d b", "d a b c"):
        inst = p2_instance(PATH4, START4, [table1_pairs(config)])
        solution = solve_p2(PATH4, START4, inst.interactions)
        assert verify_solution(inst, solution).ok
