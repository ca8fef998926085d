"""Optimal routing engines plus a brute-force oracle and a greedy upper bound.

The exact searches run best-first over (placement, progress) states where one
transition is one cycle.  Delay is the primary objective, swap count breaks
ties, and the lexicographically smallest step sequence breaks the rest so
results are byte-stable.
"""
from __future__ import annotations

import time
from heapq import heappush, heappop

from .leveling import Interaction
from .placement import Placement, RoutingSolution, SwapStep, pairs_met
from .topology import TopologyGraph, shortest_distances


class Unsatisfiable(Exception):
    """Some interaction's pair pattern cannot be embedded in the graph."""


class GuardExceeded(Exception):
    """Brute-force oracle invoked outside its size guard."""


# Oracle guard: small enough for exhaustive enumeration to stay honest.
ORACLE_MAX_VERTICES = 9
ORACLE_MAX_HORIZON = 6


# ---------------------------------------------------------------------------
# Embeddings and satisfiability


def _pair_adjacency(pairs) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {}
    for p, q in pairs:
        adj.setdefault(p, set()).add(q)
        adj.setdefault(q, set()).add(p)
    return adj


def _embed_order(pairs) -> list[int]:
    """Qubits ordered so each (after the first per component) has a placed partner."""
    adj = _pair_adjacency(pairs)
    order: list[int] = []
    seen: set[int] = set()
    for seed in sorted(adj, key=lambda q: (-len(adj[q]), q)):
        if seed in seen:
            continue
        queue = [seed]
        seen.add(seed)
        while queue:
            q = queue.pop(0)
            order.append(q)
            for nb in sorted(adj[q]):
                if nb not in seen:
                    seen.add(nb)
                    queue.append(nb)
    return order


def find_embedding(
    graph: TopologyGraph,
    pairs,
    prefer: Placement | None = None,
) -> dict[int, int] | None:
    """Injective map of the pair qubits onto vertices with every pair adjacent.

    With ``prefer`` given, minimizes total hop displacement from the current
    placement (ties broken lexicographically); otherwise returns the first
    embedding in canonical search order.  None when no embedding exists.
    """
    pairs = sorted(pairs)
    if not pairs:
        return {}
    order = _embed_order(pairs)
    adj = _pair_adjacency(pairs)
    dist = shortest_distances(graph) if prefer is not None else None

    best: dict[str, object] = {"cost": None, "map": None}

    def extend(i: int, mapping: dict[int, int], used: set[int], cost: int) -> bool:
        if best["cost"] is not None and prefer is not None and cost >= best["cost"]:
            return False
        if i == len(order):
            if prefer is None:
                best["map"] = dict(mapping)
                return True
            key = tuple(mapping[q] for q in sorted(mapping))
            if best["cost"] is None or cost < best["cost"] or (
                cost == best["cost"] and key < best["key"]
            ):
                best["cost"], best["map"], best["key"] = cost, dict(mapping), key
            return False
        q = order[i]
        placed_partners = [mapping[p] for p in adj[q] if p in mapping]
        if placed_partners:
            candidates = set(graph.neighbors[placed_partners[0]])
            for v in placed_partners[1:]:
                candidates &= set(graph.neighbors[v])
            candidates = sorted(candidates - used)
        else:
            candidates = [v for v in range(graph.num_vertices) if v not in used]
        for v in candidates:
            step = dist[prefer.positions[q]][v] if prefer is not None else 0
            mapping[q] = v
            used.add(v)
            if extend(i + 1, mapping, used, cost + step):
                return True
            del mapping[q]
            used.remove(v)
        return False

    extend(0, {}, set(), 0)
    return best["map"]


def check_satisfiable(graph: TopologyGraph, interactions) -> None:
    """Raise Unsatisfiable naming the first interaction whose pairs don't embed."""
    for i, inter in enumerate(interactions):
        pairs = inter.pairs if isinstance(inter, Interaction) else inter
        if find_embedding(graph, pairs) is None:
            raise Unsatisfiable(
                f"interaction {i} with pairs {sorted(pairs)} cannot be embedded "
                f"in {graph.kind.value} topology ({graph.num_vertices} vertices)"
            )


def find_satisfying_placement(graph: TopologyGraph, pairs, n: int) -> Placement:
    """Full placement of ``n`` qubits meeting all pairs; raises Unsatisfiable."""
    embed = find_embedding(graph, pairs, prefer=Placement.identity(n))
    if embed is None:
        raise Unsatisfiable(f"pairs {sorted(pairs)} cannot be embedded")
    used = set(embed.values())
    free = iter(v for v in range(graph.num_vertices) if v not in used)
    positions = []
    for q in range(n):
        positions.append(embed[q] if q in embed else next(free))
    return Placement(tuple(positions))


# ---------------------------------------------------------------------------
# Matching enumeration (one cycle of parallel swaps)


def iter_matchings(edges, banned=frozenset(), include_empty=False):
    """Yield canonical matchings of ``edges`` avoiding ``banned`` vertices,
    in lexicographic order."""
    usable = [e for e in edges if e[0] not in banned and e[1] not in banned]

    def rec(start: int, used: set[int], acc: list[tuple[int, int]]):
        for i in range(start, len(usable)):
            u, v = usable[i]
            if u in used or v in used:
                continue
            acc.append((u, v))
            used.update((u, v))
            yield tuple(acc)
            yield from rec(i + 1, used, acc)
            acc.pop()
            used.difference_update((u, v))

    if include_empty:
        yield ()
    yield from rec(0, set(), [])


def _useful_edges(graph: TopologyGraph, positions) -> list[tuple[int, int]]:
    """Edges with at least one occupied endpoint; swapping two empty slots is a no-op."""
    occupied = set(positions)
    return [e for e in graph.edges if e[0] in occupied or e[1] in occupied]


def _apply(positions: tuple[int, ...], occ: dict[int, int], step) -> tuple[int, ...]:
    pos = list(positions)
    for u, v in step:
        qu, qv = occ.get(u), occ.get(v)
        if qu is not None:
            pos[qu] = v
        if qv is not None:
            pos[qv] = u
    return tuple(pos)


def _occupancy(positions) -> dict[int, int]:
    return {v: q for q, v in enumerate(positions)}


# ---------------------------------------------------------------------------
# Greedy upper bound


def _spanning_tree(graph: TopologyGraph) -> list[set[int]]:
    adj: list[set[int]] = [set() for _ in range(graph.num_vertices)]
    seen = {0}
    queue = [0]
    while queue:
        u = queue.pop(0)
        for v in graph.neighbors[u]:
            if v not in seen:
                seen.add(v)
                adj[u].add(v)
                adj[v].add(u)
                queue.append(v)
    return adj


def _tree_path(tree, alive, src: int, dst: int) -> list[int]:
    parent = {src: src}
    queue = [src]
    while queue:
        u = queue.pop(0)
        if u == dst:
            break
        for v in sorted(tree[u]):
            if v in alive and v not in parent:
                parent[v] = u
                queue.append(v)
    path = [dst]
    while path[-1] != src:
        path.append(parent[path[-1]])
    path.reverse()
    return path


def _complete_assignment(
    graph: TopologyGraph, pos: list[int], embed: dict[int, int], dist
) -> dict[int, int | None]:
    """Extend a partial embedding to a target content for every vertex.

    Embedded qubits keep their embedding; every other qubit stays put when
    possible, else moves to the nearest free vertex; leftover vertices want
    to end up empty.
    """
    target_of: dict[int, int] = dict(embed)
    claimed = set(embed.values())
    displaced = []
    for q in range(len(pos)):
        if q in target_of:
            continue
        if pos[q] not in claimed:
            target_of[q] = pos[q]
            claimed.add(pos[q])
        else:
            displaced.append(q)
    free = [v for v in range(graph.num_vertices) if v not in claimed]
    for q in displaced:
        best = min(free, key=lambda v: (dist[pos[q]][v], v))
        free.remove(best)
        target_of[q] = best
    assignment: dict[int, int | None] = {v: None for v in range(graph.num_vertices)}
    for q, v in target_of.items():
        assignment[v] = q
    return assignment


def _route_assignment(
    graph, tree, pos: list[int], assignment: dict[int, int | None], done
) -> list[SwapStep]:
    """Realize a full vertex-content assignment, one swap per cycle, stopping
    as soon as ``done(pos)`` holds.

    Leaf-first over a spanning tree: the current leaf receives its final
    content (a qubit routed to it, or a hole walked to it) and is retired,
    so no later swap disturbs it.  Terminates on any connected graph.
    """
    steps: list[SwapStep] = []
    occ = {v: q for q, v in enumerate(pos)}

    def swap(u: int, v: int) -> bool:
        qu, qv = occ.pop(u, None), occ.pop(v, None)
        if qu is not None:
            pos[qu] = v
            occ[v] = qu
        if qv is not None:
            pos[qv] = u
            occ[u] = qv
        steps.append(((u, v) if u < v else (v, u),))
        return done(pos)

    alive = set(range(graph.num_vertices))
    while len(alive) > 1:
        leaf = min(v for v in alive if len(tree[v] & alive) <= 1)
        want = assignment[leaf]
        if want is not None:
            path = _tree_path(tree, alive, pos[want], leaf)
            for nxt in path[1:]:
                if swap(pos[want], nxt):
                    return steps
        elif leaf in occ:
            # Walk the nearest hole onto the leaf, then retire it empty.
            seen = {leaf}
            frontier = [leaf]
            hole = None
            while hole is None:
                nxt_frontier = []
                for u in frontier:
                    for v in sorted(tree[u] & alive):
                        if v not in seen:
                            seen.add(v)
                            nxt_frontier.append(v)
                            if v not in occ:
                                hole = v
                                break
                    if hole is not None:
                        break
                frontier = nxt_frontier
            path = _tree_path(tree, alive, hole, leaf)
            for nxt in path[1:]:
                if swap(hole, nxt):
                    return steps
                hole = nxt
        alive.discard(leaf)
    return steps


def _greedy_segments(graph: TopologyGraph, start: Placement, interactions):
    """Per-interaction swap segments (one swap per cycle) meeting them in order."""
    edge_set = graph.edge_set
    tree = _spanning_tree(graph)
    dist = shortest_distances(graph)
    pos = list(start.positions)
    segments: list[list[SwapStep]] = []
    for i, inter in enumerate(interactions):
        pairs = inter.pairs if isinstance(inter, Interaction) else frozenset(inter)
        if pairs_met(tuple(pos), pairs, edge_set):
            segments.append([])
            continue
        embed = find_embedding(graph, pairs, prefer=Placement(tuple(pos)))
        if embed is None:
            raise Unsatisfiable(f"interaction {i} with pairs {sorted(pairs)} not embeddable")
        assignment = _complete_assignment(graph, pos, embed, dist)
        met = lambda p: pairs_met(tuple(p), pairs, edge_set)
        segments.append(_route_assignment(graph, tree, pos, assignment, met))
    return segments


def greedy_upper_bound(graph: TopologyGraph, start: Placement, interactions) -> RoutingSolution:
    """Feasible (generally suboptimal) schedule; its swap_delay seeds horizons."""
    segments = _greedy_segments(graph, start, interactions)
    steps = [step for seg in segments for step in seg]
    return RoutingSolution.build(start, steps, len(list(interactions)), optimal=False)


# ---------------------------------------------------------------------------
# Brute-force oracle


def brute_force_route(
    graph: TopologyGraph, start: Placement, interactions, horizon: int
) -> tuple[int, int] | None:
    """True optimum (swap_count, swap_delay) by exhaustive breadth-first
    enumeration of matching sequences, or None if not solvable within
    ``horizon`` cycles.  Intentionally independent of the best-first engines.
    """
    if graph.num_vertices > ORACLE_MAX_VERTICES or horizon > ORACLE_MAX_HORIZON:
        raise GuardExceeded(
            f"oracle guard: |V| <= {ORACLE_MAX_VERTICES} and T <= {ORACLE_MAX_HORIZON}"
        )
    edge_set = graph.edge_set
    pair_list = [
        inter.pairs if isinstance(inter, Interaction) else frozenset(inter)
        for inter in interactions
    ]

    def advance(positions, i: int) -> int:
        while i < len(pair_list) and pairs_met(positions, pair_list[i], edge_set):
            i += 1
        return i

    # Local matching enumeration, deliberately not shared with the solvers.
    edges = list(graph.edges)

    def matchings(positions):
        occupied = set(positions)
        usable = [e for e in edges if e[0] in occupied or e[1] in occupied]

        def rec(k, used, acc):
            for j in range(k, len(usable)):
                u, v = usable[j]
                if u in used or v in used:
                    continue
                yield acc + ((u, v),)
                yield from rec(j + 1, used | {u, v}, acc + ((u, v),))

        yield from rec(0, set(), ())

    i0 = advance(start.positions, 0)
    if i0 == len(pair_list):
        return (0, 0)
    frontier: dict[tuple, int] = {(start.positions, i0): 0}
    for depth in range(1, horizon + 1):
        nxt: dict[tuple, int] = {}
        goal_swaps: int | None = None
        for (positions, i), swaps in frontier.items():
            occ = _occupancy(positions)
            for m in matchings(positions):
                new_pos = _apply(positions, occ, m)
                ni = advance(new_pos, i)
                total = swaps + len(m)
                if ni == len(pair_list):
                    if goal_swaps is None or total < goal_swaps:
                        goal_swaps = total
                else:
                    key = (new_pos, ni)
                    if key not in nxt or total < nxt[key]:
                        nxt[key] = total
        if goal_swaps is not None:
            return (goal_swaps, depth)
        frontier = nxt
    return None


# ---------------------------------------------------------------------------
# Exact search: interactions only (sequential meeting, swaps get own cycles)


def solve_p2(
    graph: TopologyGraph,
    start: Placement,
    interactions,
    budget: float | None = None,
    use_heuristic: bool = True,
) -> RoutingSolution:
    """Minimal swap-cycle schedule meeting all interactions in order.

    Ties: fewest swaps, then lexicographically smallest matching sequence.
    On budget expiry returns the greedy incumbent flagged non-optimal.
    """
    interactions = list(interactions)
    check_satisfiable(graph, interactions)
    incumbent = greedy_upper_bound(graph, start, interactions)
    edge_set = graph.edge_set
    dist = shortest_distances(graph)
    pair_list = [
        inter.pairs if isinstance(inter, Interaction) else frozenset(inter)
        for inter in interactions
    ]
    deadline = time.monotonic() + budget if budget is not None else None

    def advance(positions, i: int) -> int:
        while i < len(pair_list) and pairs_met(positions, pair_list[i], edge_set):
            i += 1
        return i

    def h(positions, i: int) -> int:
        if not use_heuristic or i >= len(pair_list):
            return 0
        # Each cycle shortens a pair's distance by at most 2 (both ends hop).
        worst = 0
        for p, q in pair_list[i]:
            d = dist[positions[p]][positions[q]]
            if d > 1:
                worst = max(worst, (d - 1 + 1) // 2)
        return worst

    i0 = advance(start.positions, 0)
    start_state = (start.positions, i0)
    if i0 == len(pair_list):
        return RoutingSolution.build(start, [], len(pair_list))

    best: dict[tuple, tuple] = {start_state: (0, 0, ())}
    heap = [(h(start.positions, i0), 0, (), 0, start_state)]
    while heap:
        f, swaps, path, g, state = heappop(heap)
        if deadline is not None and time.monotonic() > deadline:
            return incumbent
        if best.get(state, (g, swaps, path)) < (g, swaps, path):
            continue
        positions, i = state
        if i == len(pair_list):
            return RoutingSolution.build(start, list(path), len(pair_list))
        occ = _occupancy(positions)
        edges = _useful_edges(graph, positions)
        for m in iter_matchings(edges):
            new_pos = _apply(positions, occ, m)
            ni = advance(new_pos, i)
            key = (new_pos, ni)
            cand = (g + 1, swaps + len(m), path + (m,))
            if key not in best or cand < best[key]:
                best[key] = cand
                heappush(heap, (cand[0] + h(new_pos, ni), cand[1], cand[2], cand[0], key))
    raise Unsatisfiable("search space exhausted without meeting all interactions")


# ---------------------------------------------------------------------------
# Exact search: joint schedule of level activations and swaps


def _as_interaction(obj) -> Interaction:
    return obj if isinstance(obj, Interaction) else Interaction.from_pairs(obj)


def _greedy_joint(graph: TopologyGraph, start: Placement, interactions) -> RoutingSolution:
    """Feasible joint schedule: greedy swap segments with one activation cycle
    appended after each interaction is met."""
    segments = _greedy_segments(graph, start, interactions)
    steps: list[SwapStep] = []
    level_cycle: dict[int, int] = {}
    for i, seg in enumerate(segments):
        steps.extend(seg)
        level_cycle[i] = len(steps)
        steps.append(())
    return RoutingSolution.build(start, steps, len(segments), level_cycle, optimal=False)


def solve_p3(
    graph: TopologyGraph,
    start: Placement,
    interactions,
    budget: float | None = None,
    use_heuristic: bool = True,
) -> RoutingSolution:
    """Minimal-makespan joint schedule of level activations and swaps.

    One cycle holds at most one level activation plus a swap matching that
    must not touch the activated level's qubits.  A level activates only when
    its pairs are adjacent at the start of that cycle, in level order.
    Ties: smallest sum of activation cycles, then fewest swaps, then the
    lexicographically smallest step sequence.
    """
    levels = [_as_interaction(x) for x in interactions]
    check_satisfiable(graph, levels)
    incumbent = _greedy_joint(graph, start, levels)
    edge_set = graph.edge_set
    dist = shortest_distances(graph)
    n_levels = len(levels)
    deadline = time.monotonic() + budget if budget is not None else None

    def d_term(positions, lvl: int) -> int:
        worst = 0
        for p, q in levels[lvl].pairs:
            d = dist[positions[p]][positions[q]]
            if d > 1:
                worst = max(worst, (d - 1 + 1) // 2)
        return worst

    def heuristics(positions, lvl: int, g: int) -> tuple[int, int]:
        remaining = n_levels - lvl
        if remaining == 0:
            return 0, 0
        lead = d_term(positions, lvl) if use_heuristic else 0
        h_makespan = lead + remaining
        h_sum = sum(g + lead + j for j in range(remaining))
        return h_makespan, h_sum

    if n_levels == 0:
        return RoutingSolution.build(start, [], 0, {})

    start_state = (start.positions, 0)
    hm0, hs0 = heuristics(start.positions, 0, 0)
    # heap entries: (g+h_m, sact+h_s, swaps, path, g, sact, state)
    heap = [(hm0, hs0, 0, (), 0, 0, start_state)]
    best: dict[tuple, tuple] = {start_state: (0, 0, 0, ())}
    while heap:
        _, _, swaps, path, g, sact, state = heappop(heap)
        if deadline is not None and time.monotonic() > deadline:
            return incumbent
        if best.get(state, (g, sact, swaps, path)) < (g, sact, swaps, path):
            continue
        positions, lvl = state
        if lvl == n_levels:
            steps = [m for m, _ in path]
            level_cycle = {}
            at = 0
            for cycle, (_, activated) in enumerate(path):
                if activated:
                    level_cycle[at] = cycle
                    at += 1
            return RoutingSolution.build(start, steps, n_levels, level_cycle)
        occ = _occupancy(positions)
        edges = _useful_edges(graph, positions)
        can_activate = pairs_met(positions, levels[lvl].pairs, edge_set)
        for activate in (True, False) if can_activate else (False,):
            if activate:
                banned = frozenset(positions[q] for q in levels[lvl].active)
            else:
                banned = frozenset()
            for m in iter_matchings(edges, banned, include_empty=activate):
                new_pos = _apply(positions, occ, m) if m else positions
                nl = lvl + 1 if activate else lvl
                key = (new_pos, nl)
                nsact = sact + (g if activate else 0)
                cand = (g + 1, nsact, swaps + len(m), path + ((m, activate),))
                if key not in best or cand < best[key]:
                    best[key] = cand
                    hm, hs = heuristics(new_pos, nl, g + 1)
                    heappush(
                        heap,
                        (cand[0] + hm, cand[1] + hs, cand[2], cand[3], cand[0], cand[1], key),
                    )
    raise Unsatisfiable("search space exhausted without scheduling all levels")
