"""Exact ground truth: cycle and pattern counts, edge-disjoint cycle sets, distances."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import TYPE_CHECKING

import numpy as np

from .const import CYCLE_MAX_K, ENUMERATION_MAX_N, EXACT_DISTANCE_MAX_M
from .exceptions import InvalidCertificateError, SizeLimitError
from .graph import Edge, Graph, PatternGraph, edge_key
from .models import DisjointCycleSet, DistanceBounds, VerifyReport

if TYPE_CHECKING:
    from collections.abc import Iterator, Sequence

Cycle = tuple[int, ...]


def _check_size(graph: Graph, k: int) -> None:
    if graph.n > ENUMERATION_MAX_N:
        msg = f"Exact enumeration needs n <= {ENUMERATION_MAX_N}, got {graph.n}"
        raise SizeLimitError(msg)
    if not 3 <= k <= CYCLE_MAX_K:
        msg = f"Cycle length must be in 3..{CYCLE_MAX_K}, got {k}"
        raise SizeLimitError(msg)


def _sorted_adjacency(graph: Graph) -> list[list[int]]:
    return [sorted(neighbors) for neighbors in graph.adjacency]


def enumerate_cycles(
    graph: Graph, k: int, blocked: set[Edge] | None = None
) -> Iterator[Cycle]:
    """Yield every k-cycle once, in canonical form and lexicographic order.

    The canonical form starts at the smallest vertex and visits its smaller
    cycle neighbor second. Edges in `blocked` are never used; the set may
    grow while the generator is consumed.

    Raises
    ------
        SizeLimitError: n or k above the enumeration caps.

    """
    _check_size(graph, k)
    adjacency = _sorted_adjacency(graph)
    blocked = blocked if blocked is not None else set()
    path: list[int] = []
    on_path: set[int] = set()

    def usable(u: int, v: int) -> bool:
        return edge_key(u, v) not in blocked

    def extend(start: int) -> Iterator[Cycle]:
        current = path[-1]
        if len(path) == k:
            if (
                path[1] < path[-1]
                and start in graph.neighbor_sets[current]
                and usable(current, start)
            ):
                yield tuple(path)
            return
        for nxt in adjacency[current]:
            if nxt <= start or nxt in on_path or not usable(current, nxt):
                continue
            path.append(nxt)
            on_path.add(nxt)
            yield from extend(start)
            path.pop()
            on_path.discard(nxt)

    for start in range(graph.n):
        path.append(start)
        on_path.add(start)
        yield from extend(start)
        path.pop()
        on_path.discard(start)


def cycle_edges(cycle: Sequence[int]) -> list[Edge]:
    """Return the edges of a cycle as sorted pairs."""
    return [edge_key(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))]


def count_cycles(graph: Graph, k: int) -> int:
    """Return the number of k-cycles."""
    return sum(1 for _ in enumerate_cycles(graph, k))


def _pattern_order(pattern: PatternGraph) -> list[int]:
    """Order pattern vertices so that each one follows a neighbor when possible."""
    order: list[int] = []
    placed: set[int] = set()
    while len(order) < pattern.k:
        frontier = [
            w for w in range(pattern.k)
            if w not in placed and any(x in placed for x in pattern.adjacency[w])
        ]
        if not frontier:
            frontier = [
                max(
                    (w for w in range(pattern.k) if w not in placed),
                    key=lambda w: len(pattern.adjacency[w]),
                )
            ]
        order.append(frontier[0])
        placed.add(frontier[0])
    return order


def count_embeddings(graph: Graph, pattern: PatternGraph) -> int:
    """Return the number of injective edge-preserving maps of the pattern."""
    order = _pattern_order(pattern)
    neighbor_sets = graph.neighbor_sets
    image: dict[int, int] = {}

    def extend(depth: int) -> int:
        if depth == len(order):
            return 1
        w = order[depth]
        mapped = [x for x in pattern.adjacency[w] if x in image]
        if mapped:
            candidates = set(neighbor_sets[image[mapped[0]]])
            for x in mapped[1:]:
                candidates &= neighbor_sets[image[x]]
        else:
            candidates = set(range(graph.n))
        candidates -= set(image.values())
        total = 0
        for candidate in candidates:
            image[w] = candidate
            total += extend(depth + 1)
            del image[w]
        return total

    return extend(0)


@lru_cache(maxsize=128)
def automorphisms(pattern: PatternGraph) -> int:
    """Return the number of automorphisms of a pattern."""
    return count_embeddings(Graph.from_edges(pattern.k, sorted(pattern.edges)), pattern)


def count_pattern(graph: Graph, pattern: PatternGraph) -> int:
    """Return the number of subgraphs of the graph isomorphic to the pattern.

    Cycles use the canonical cycle enumeration; other patterns count
    embeddings and divide by the automorphisms of the pattern.

    Raises
    ------
        SizeLimitError: n above the enumeration cap.

    """
    if pattern.is_cycle():
        return count_cycles(graph, pattern.k)
    if graph.n > ENUMERATION_MAX_N:
        msg = f"Exact enumeration needs n <= {ENUMERATION_MAX_N}, got {graph.n}"
        raise SizeLimitError(msg)
    return count_embeddings(graph, pattern) // automorphisms(pattern)


def adjacency_matrix(graph: Graph) -> np.ndarray:
    """Return the dense 0/1 adjacency matrix."""
    matrix = np.zeros((graph.n, graph.n), dtype=np.int64)
    if graph.m:
        edges = np.asarray(graph.edge_list, dtype=np.int64)
        matrix[edges[:, 0], edges[:, 1]] = 1
        matrix[edges[:, 1], edges[:, 0]] = 1
    return matrix


def count_triangles_algebraic(graph: Graph) -> int:
    """Return trace(A^3) / 6."""
    matrix = adjacency_matrix(graph)
    return int(np.trace(matrix @ matrix @ matrix)) // 6


def count_c4_algebraic(graph: Graph) -> int:
    """Return the C4 count from codegrees: sum over u < v of C(codeg(u, v), 2), halved.

    Each C4 has two diagonals, so the sum counts it twice.
    """
    matrix = adjacency_matrix(graph)
    codegrees = (matrix @ matrix)[np.triu_indices(graph.n, k=1)]
    return int((codegrees * (codegrees - 1) // 2).sum()) // 2


def count_c4_ordered(graph: Graph) -> int:
    """Return the C4 count by degree-ordered wedge counting.

    Each C4 is counted once, from its highest-ranked vertex v, through the
    wedges v-u-w with u and w ranked below v. Rank orders by (degree, id).
    """
    degrees = graph.degrees
    rank = sorted(range(graph.n), key=lambda v: (degrees[v], v))
    position = [0] * graph.n
    for index, v in enumerate(rank):
        position[v] = index
    lower = [
        [u for u in graph.adjacency[v] if position[u] < position[v]]
        for v in range(graph.n)
    ]
    total = 0
    for v in range(graph.n):
        wedges: dict[int, int] = {}
        for u in lower[v]:
            for w in graph.adjacency[u]:
                if w != v and position[w] < position[v]:
                    wedges[w] = wedges.get(w, 0) + 1
        total += sum(count * (count - 1) // 2 for count in wedges.values())
    return total


def greedy_edge_disjoint(graph: Graph, k: int) -> DisjointCycleSet:
    """Return a maximal set of edge-disjoint k-cycles.

    Cycles are taken greedily in canonical enumeration order. The
    enumeration stops extending paths over used edges, which prunes most
    rejected cycles early.
    """
    used: set[Edge] = set()
    chosen: list[Cycle] = []
    for cycle in enumerate_cycles(graph, k, blocked=used):
        edges = cycle_edges(cycle)
        if used.isdisjoint(edges):
            chosen.append(cycle)
            used.update(edges)
    return DisjointCycleSet(k=k, cycles=tuple(chosen), maximal=True)


def distance_bounds(graph: Graph, k: int) -> DistanceBounds:
    """Return [|S|/m, min(1, k|S|/m)] for a maximal edge-disjoint k-cycle set S."""
    return bounds_from_set(graph, greedy_edge_disjoint(graph, k))


def bounds_from_set(graph: Graph, cycles: DisjointCycleSet) -> DistanceBounds:
    """Return the distance sandwich of an edge-disjoint cycle set."""
    return DistanceBounds(
        k=cycles.k, size=len(cycles), m=graph.m, maximal=cycles.maximal
    )


def is_free(graph: Graph, pattern: int | PatternGraph) -> bool:
    """Return if the graph has no copy of C_k (for an integer k) or of the pattern.

    C4 on graphs above the enumeration cap uses degree-ordered counting.
    """
    if isinstance(pattern, PatternGraph) and not pattern.is_cycle():
        return count_pattern(graph, pattern) == 0
    k = pattern if isinstance(pattern, int) else pattern.k
    if k == 4 and graph.n > ENUMERATION_MAX_N:
        return count_c4_ordered(graph) == 0
    return next(enumerate_cycles(graph, k), None) is None


def exact_distance(graph: Graph, k: int) -> float:
    """Return the fewest edges whose removal leaves no k-cycle, divided by m.

    Exhaustive minimum hitting set over the cycle edge sets.

    Raises
    ------
        SizeLimitError: More than 18 edges.

    """
    if graph.m > EXACT_DISTANCE_MAX_M:
        msg = f"Exact distance needs m <= {EXACT_DISTANCE_MAX_M}, got {graph.m}"
        raise SizeLimitError(msg)
    index = {edge_key(u, v): i for i, (u, v) in enumerate(graph.edge_list)}
    masks = {
        sum(1 << index[edge] for edge in cycle_edges(cycle))
        for cycle in enumerate_cycles(graph, k)
    }
    if not masks:
        return 0.0
    for size in range(1, graph.m + 1):
        for removed in combinations(range(graph.m), size):
            hit = sum(1 << i for i in removed)
            if all(mask & hit for mask in masks):
                return size / graph.m
    return 1.0


def certify_cycle_set(
    graph: Graph,
    cycles: Sequence[Sequence[int]],
    k: int,
    *,
    check_maximal: bool = True,
) -> DisjointCycleSet:
    """Check a claimed set of edge-disjoint k-cycles and decide if it is maximal.

    Maximality is decided by searching for a k-cycle among the edges no
    cycle of the set uses; with `check_maximal` off the set is reported
    as not maximal.

    Raises
    ------
        InvalidCertificateError: A member is not a k-cycle of the graph, or
            two members share an edge.

    """
    used: set[Edge] = set()
    for cycle in cycles:
        if len(cycle) != k or len(set(cycle)) != k:
            msg = f"{tuple(cycle)} is not a simple cycle of length {k}"
            raise InvalidCertificateError(msg)
        for u, v in cycle_edges(cycle):
            if not graph.has_edge(u, v):
                msg = f"Cycle {tuple(cycle)} uses the non-edge ({u}, {v})"
                raise InvalidCertificateError(msg)
            if (u, v) in used:
                msg = f"Cycle {tuple(cycle)} shares the edge ({u}, {v})"
                raise InvalidCertificateError(msg)
            used.add((u, v))
    maximal = (
        check_maximal and next(enumerate_cycles(graph, k, blocked=used), None) is None
    )
    return DisjointCycleSet(
        k=k, cycles=tuple(tuple(c) for c in cycles), maximal=maximal
    )


def verify(graph: Graph, k: int) -> VerifyReport:
    """Return the cycle count and distance sandwich of a graph for C_k."""
    bounds = distance_bounds(graph, k)
    return VerifyReport(
        k=k,
        count=count_cycles(graph, k),
        greedy_size=bounds.size,
        lower=bounds.lower,
        upper=bounds.upper,
    )
