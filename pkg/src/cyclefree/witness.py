"""Witness search over the explored subgraph."""

from __future__ import annotations

from typing import TYPE_CHECKING

from .graph import PatternGraph

if TYPE_CHECKING:
    from .oracle import ExploredGraph


def _path_between(
    explored: ExploredGraph, start: int, end: int, length: int, skip: tuple[int, int]
) -> list[int] | None:
    """Return a simple path of `length` edges from start to end, or None.

    The edge `skip` (the edge closing the cycle) is never used.
    """
    adjacency = explored.adjacency
    path = [start]
    on_path = {start}

    def extend(current: int, remaining: int) -> bool:
        if remaining == 1:
            if end in adjacency[current] and (current, end) != skip[::-1]:
                path.append(end)
                return True
            return False
        for nxt in adjacency[current]:
            if nxt in on_path or nxt == end:
                continue
            path.append(nxt)
            on_path.add(nxt)
            if extend(nxt, remaining - 1):
                return True
            path.pop()
            on_path.discard(nxt)
        return False

    return path if extend(start, length) else None


def find_cycle_through(
    explored: ExploredGraph, u: int, v: int, k: int
) -> tuple[int, ...] | None:
    """Return a k-cycle of the explored subgraph using edge {u, v}, or None."""
    path = _path_between(explored, v, u, k - 1, (u, v))
    return None if path is None else (u, *path[:-1])


def find_cycle(explored: ExploredGraph, k: int) -> tuple[int, ...] | None:
    """Return some k-cycle of the explored subgraph, or None."""
    for u, v in explored.edges():
        if (cycle := find_cycle_through(explored, u, v, k)) is not None:
            return cycle
    return None


def _pattern_order(pattern: PatternGraph, first: int, second: int) -> list[int]:
    """Order pattern vertices so that each one follows a neighbor when possible."""
    order = [first, second]
    placed = {first, second}
    while len(order) < pattern.k:
        frontier = [
            w for w in range(pattern.k)
            if w not in placed and any(x in placed for x in pattern.adjacency[w])
        ]
        nxt = frontier[0] if frontier else min(set(range(pattern.k)) - placed)
        order.append(nxt)
        placed.add(nxt)
    return order


def find_copy_through(
    explored: ExploredGraph, pattern: PatternGraph, u: int, v: int
) -> tuple[int, ...] | None:
    """Return an F-copy of the explored subgraph using edge {u, v}, or None.

    The copy is returned as the image of pattern vertices 0..k-1. Every
    pattern edge is tried as the preimage of {u, v}, in both directions.
    """
    adjacency = explored.adjacency
    for a, b in sorted(pattern.edges):
        for x, y in ((u, v), (v, u)):
            order = _pattern_order(pattern, a, b)
            image: dict[int, int] = {a: x, b: y}
            found = _extend(explored, pattern, order, 2, image, adjacency)
            if found is not None:
                return found
    return None


def _extend(
    explored: ExploredGraph,
    pattern: PatternGraph,
    order: list[int],
    depth: int,
    image: dict[int, int],
    adjacency: dict[int, set[int]],
) -> tuple[int, ...] | None:
    if depth == len(order):
        return tuple(image[w] for w in range(pattern.k))
    w = order[depth]
    mapped = [x for x in pattern.adjacency[w] if x in image]
    used = set(image.values())
    if mapped:
        candidates = set(adjacency[image[mapped[0]]])
        for x in mapped[1:]:
            candidates &= adjacency[image[x]]
    else:
        candidates = set(adjacency)
    for candidate in sorted(candidates - used):
        image[w] = candidate
        found = _extend(explored, pattern, order, depth + 1, image, adjacency)
        if found is not None:
            return found
        del image[w]
    return None


def find_copy(explored: ExploredGraph, pattern: PatternGraph) -> tuple[int, ...] | None:
    """Return some F-copy of the explored subgraph, or None."""
    for u, v in explored.edges():
        if (found := find_copy_through(explored, pattern, u, v)) is not None:
            return found
    return None


def is_valid_witness(
    explored: ExploredGraph, pattern: PatternGraph, witness: tuple[int, ...]
) -> bool:
    """Return if the witness is an F-copy made of explored edges.

    For cycles, the witness is the vertex sequence around the cycle.
    """
    if len(witness) != pattern.k or len(set(witness)) != pattern.k:
        return False
    if pattern.is_cycle():
        return all(
            explored.has_edge(witness[i], witness[(i + 1) % pattern.k])
            for i in range(pattern.k)
        )
    return all(explored.has_edge(witness[a], witness[b]) for a, b in pattern.edges)


class WitnessSearch:
    """Incremental search for a pattern in a growing explored subgraph.

    Each call to `step` examines only the edges revealed since the previous
    call; a copy that exists in the explored subgraph is found by the call
    following the arrival of its last edge.
    """

    def __init__(self, explored: ExploredGraph, pattern: PatternGraph) -> None:
        """Search `explored` for copies of `pattern`."""
        self.explored = explored
        self.pattern = pattern
        self._cycle = pattern.is_cycle()

    def step(self) -> tuple[int, ...] | None:
        """Examine new edges; return a witness or None."""
        for u, v in self.explored.drain():
            if self._cycle:
                found = find_cycle_through(self.explored, u, v, self.pattern.k)
            else:
                found = find_copy_through(self.explored, self.pattern, u, v)
            if found is not None:
                return found
        return None


def find_witness(
    explored: ExploredGraph, pattern: PatternGraph | int
) -> tuple[int, ...] | None:
    """Return a copy of the pattern, or of C_k for an integer k, in `explored`."""
    if isinstance(pattern, int):
        pattern = PatternGraph.cycle(pattern)
    if pattern.is_cycle():
        return find_cycle(explored, pattern.k)
    return find_copy(explored, pattern)
