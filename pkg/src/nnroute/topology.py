"""Topology graph families: construction, adjacency and distance queries.

Each family has a minimum size; ``build_topology`` returns the smallest
member with enough vertices for the requested qubit count.  Extra vertices
are legal parking spots, qubit placement is injective but not surjective.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property


class TopologyKind(Enum):
    PATH_1D = "1d"
    CYCLE = "cycle"
    MESH_2D = "mesh2d"
    TORUS = "torus"
    GRID_3D = "grid3d"
    CYCLIC_BUTTERFLY = "cbn"
    FULLY_CONNECTED = "full"


class UnsupportedSize(ValueError):
    pass


class Disconnected(ValueError):
    pass


@dataclass(frozen=True)
class TopologyGraph:
    """Undirected graph over vertices 0..num_vertices-1 with canonical edges."""

    kind: TopologyKind
    num_vertices: int
    edges: tuple[tuple[int, int], ...]
    dims: tuple[int, ...] = ()

    @cached_property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.num_vertices)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(ns)) for ns in adj)

    def adjacent(self, u: int, v: int) -> bool:
        return (u, v) in self.edge_set or (v, u) in self.edge_set

    def degree(self, v: int) -> int:
        return len(self.neighbors[v])


def _canonical(edges: set[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    return tuple(sorted((u, v) if u < v else (v, u) for u, v in edges))


def _mesh_shape(n: int) -> tuple[int, int]:
    """Smallest r*c >= max(n, 9) with r, c >= 3; squarest shape on ties."""
    product = max(n, 9)
    while True:
        best = None
        for r in range(3, int(product**0.5) + 1):
            if product % r == 0 and product // r >= 3:
                best = r
        if best is not None:
            return best, product // best
        product += 1


def _grid3_shape(n: int) -> tuple[int, int, int]:
    """Smallest a*b*c >= max(n, 8), every dim >= 2; squarest shape on ties."""
    product = max(n, 8)
    while True:
        best = None
        for a in range(2, int(round(product ** (1 / 3))) + 2):
            if product % a:
                continue
            rest = product // a
            for b in range(a, int(rest**0.5) + 1):
                if rest % b == 0 and rest // b >= b:
                    shape = (a, b, rest // b)
                    if best is None or (shape[0], shape[1]) > (best[0], best[1]):
                        best = shape
        if best is not None:
            return best
        product += 1


def _mesh_edges(rows: int, cols: int, wrap: bool) -> set[tuple[int, int]]:
    edges = set()
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.add((v, v + 1))
            elif wrap:
                edges.add((v, r * cols))
            if r + 1 < rows:
                edges.add((v, v + cols))
            elif wrap:
                edges.add((v, c))
    return edges


def _grid3_edges(a: int, b: int, c: int) -> set[tuple[int, int]]:
    def vid(x: int, y: int, z: int) -> int:
        return x + a * (y + b * z)

    edges = set()
    for z in range(c):
        for y in range(b):
            for x in range(a):
                if x + 1 < a:
                    edges.add((vid(x, y, z), vid(x + 1, y, z)))
                if y + 1 < b:
                    edges.add((vid(x, y, z), vid(x, y + 1, z)))
                if z + 1 < c:
                    edges.add((vid(x, y, z), vid(x, y, z + 1)))
    return edges


def _butterfly_order(n: int) -> int:
    order = 3
    while order * 2**order < n:
        order += 1
    return order


def _butterfly_edges(order: int) -> set[tuple[int, int]]:
    words = 2**order
    edges = set()
    for level in range(order):
        nxt = (level + 1) % order
        for w in range(words):
            u = level * words + w
            edges.add((u, nxt * words + w))
            edges.add((u, nxt * words + (w ^ (1 << level))))
    return edges


def build_topology(kind: TopologyKind, n: int) -> TopologyGraph:
    """Smallest member of ``kind`` with at least ``n`` vertices."""
    if n < 1:
        raise UnsupportedSize(f"qubit count must be >= 1, got {n}")
    if kind is TopologyKind.PATH_1D:
        size = max(n, 2)
        edges = {(v, v + 1) for v in range(size - 1)}
        return TopologyGraph(kind, size, _canonical(edges), (size,))
    if kind is TopologyKind.CYCLE:
        size = max(n, 3)
        edges = {(v, (v + 1) % size) for v in range(size)}
        return TopologyGraph(kind, size, _canonical(edges), (size,))
    if kind in (TopologyKind.MESH_2D, TopologyKind.TORUS):
        rows, cols = _mesh_shape(n)
        edges = _mesh_edges(rows, cols, wrap=kind is TopologyKind.TORUS)
        return TopologyGraph(kind, rows * cols, _canonical(edges), (rows, cols))
    if kind is TopologyKind.GRID_3D:
        a, b, c = _grid3_shape(n)
        return TopologyGraph(kind, a * b * c, _canonical(_grid3_edges(a, b, c)), (a, b, c))
    if kind is TopologyKind.CYCLIC_BUTTERFLY:
        order = _butterfly_order(n)
        size = order * 2**order
        return TopologyGraph(kind, size, _canonical(_butterfly_edges(order)), (order,))
    if kind is TopologyKind.FULLY_CONNECTED:
        edges = {(u, v) for u in range(n) for v in range(u + 1, n)}
        return TopologyGraph(kind, n, _canonical(edges), (n,))
    raise UnsupportedSize(f"unknown topology kind {kind!r}")


def shortest_distances(graph: TopologyGraph) -> list[list[int]]:
    """All-pairs BFS hop counts; raises Disconnected on unreachable pairs."""
    size = graph.num_vertices
    dist = [[-1] * size for _ in range(size)]
    for src in range(size):
        row = dist[src]
        row[src] = 0
        queue = [src]
        while queue:
            nxt = []
            for u in queue:
                for v in graph.neighbors[u]:
                    if row[v] < 0:
                        row[v] = row[u] + 1
                        nxt.append(v)
            queue = nxt
        if any(d < 0 for d in row):
            raise Disconnected(f"vertex {row.index(-1)} unreachable from {src}")
    return dist


def edge_list_text(graph: TopologyGraph) -> str:
    """Edge list as one ``u v`` pair per line (debug export)."""
    return "\n".join(f"{u} {v}" for u, v in graph.edges) + "\n"
