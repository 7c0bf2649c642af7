"""Path subdivision of tripartite graphs and its on-the-fly query oracle.

Every edge between parts a < b of a tripartite graph is replaced by a path
from its endpoint in part a to its endpoint in part b. Path lengths per
part pair are chosen so that they add up to k around a triangle, which
turns every triangle into a k-cycle and creates no other k-cycle.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from .const import LOGGER
from .exceptions import NotTripartiteError, ParameterError, SubdivisionAbortError
from .graph import Edge, Graph, edge_key
from .oracle import OracleSession, QueryAccess

if TYPE_CHECKING:
    from collections.abc import Sequence

    import numpy as np

PART_PAIRS: tuple[tuple[int, int], ...] = ((0, 1), (1, 2), (0, 2))


def path_lengths(k: int) -> dict[tuple[int, int], int]:
    """Return the path length of every part pair.

    With k = 3q + r the first r pairs get q + 1 edges and the others q, so
    k = 7 gives lengths 3, 2, 2. A base 4-cycle becomes a cycle of at
    least 4q edges; k = 8 is refused because 4q = k there.
    """
    if k < 6 or k == 8:
        msg = f"The subdivision needs k >= 6 and k != 8, got {k}"
        raise ParameterError(msg)
    q, r = divmod(k, 3)
    return {pair: q + (1 if index < r else 0) for index, pair in enumerate(PART_PAIRS)}


def _oriented(edge: Edge, parts: Sequence[int]) -> tuple[tuple[int, int], int, int]:
    """Return (part pair, tail, head) with the tail in the lower part."""
    u, v = edge
    if parts[u] == parts[v]:
        msg = f"Edge ({u}, {v}) lies inside part {parts[u]}"
        raise NotTripartiteError(msg)
    if parts[u] > parts[v]:
        u, v = v, u
    return (parts[u], parts[v]), u, v


def _check_parts(graph: Graph, parts: Sequence[int]) -> None:
    if len(parts) != graph.n or any(part not in (0, 1, 2) for part in parts):
        msg = "Parts must label every vertex with 0, 1 or 2"
        raise NotTripartiteError(msg)


class _Layout:
    """Id layout of a subdivided graph: originals first, then one region per part pair.

    Region p holds `slots[p]` consecutive blocks of `lengths[p] - 1` path
    vertices; the block of a slot lists the path from tail to head.
    """

    def __init__(self, n: int, k: int, slots: dict[tuple[int, int], int]) -> None:
        self.base_n = n
        self.lengths = path_lengths(k)
        self.slots = slots
        self.offsets: dict[tuple[int, int], int] = {}
        offset = n
        for pair in PART_PAIRS:
            self.offsets[pair] = offset
            offset += slots[pair] * (self.lengths[pair] - 1)
        self.n = offset

    def path(self, pair: tuple[int, int], slot: int, tail: int, head: int) -> list[int]:
        """Return the path vertices of a slot, tail and head included."""
        inner = self.lengths[pair] - 1
        start = self.offsets[pair] + slot * inner
        return [tail, *range(start, start + inner), head]

    def locate(self, x: int) -> tuple[tuple[int, int], int, int]:
        """Return (pair, slot, position 1..L-1) of a path vertex."""
        for pair in reversed(PART_PAIRS):
            if x >= self.offsets[pair]:
                slot, position = divmod(x - self.offsets[pair], self.lengths[pair] - 1)
                return pair, slot, position + 1
        msg = f"Vertex {x} is an original vertex"
        raise ValueError(msg)


def _materialize(
    base: Graph, parts: Sequence[int], layout: _Layout, slot_of: dict[Edge, int]
) -> Graph:
    """Build the subdivided graph, inserting paths in base edge order."""
    edges: list[Edge] = []
    for edge in base.edge_list:
        pair, tail, head = _oriented(edge, parts)
        path = layout.path(pair, slot_of[edge_key(tail, head)], tail, head)
        edges.extend(zip(path, path[1:], strict=False))
    return Graph.from_edges(layout.n, edges)


def subdivide_for_ck(g_prime: Graph, k: int, parts: Sequence[int]) -> Graph:
    """Replace every edge of a tripartite graph by a path so triangles become C_k.

    Args:
    ----
        g_prime: The tripartite base graph.
        k: Target cycle length, at least 6.
        parts: Part label 0, 1 or 2 of every base vertex.

    Returns:
    -------
        The subdivided graph. Original ids are kept; path vertices follow,
        ordered by (part pair, edge index within the pair, position).

    Raises:
    ------
        NotTripartiteError: An edge lies inside a part.

    """
    _check_parts(g_prime, parts)
    slot_of: dict[Edge, int] = {}
    slots = dict.fromkeys(PART_PAIRS, 0)
    for edge in g_prime.edge_list:
        pair, tail, head = _oriented(edge, parts)
        slot_of[edge_key(tail, head)] = slots[pair]
        slots[pair] += 1
    return _materialize(g_prime, parts, _Layout(g_prime.n, k, slots), slot_of)


class SubdividedOracle(QueryAccess):
    """Query access to the subdivided graph of a regular tripartite base graph.

    Original vertices keep their ids and degree d. Path-vertex slots are
    bound to base edges lazily: a neighbor query on an original vertex binds
    the revealed edge to the lowest free slot of its region, and a query on
    a path vertex of an unbound slot samples a base edge of the right part
    pair by rejection. Every answer reveals the whole path.

    Simulated queries are counted by this object; base queries by `base`.
    """

    def __init__(
        self,
        base: OracleSession,
        k: int,
        parts: Sequence[int],
        *,
        seed: int | np.random.SeedSequence | None = None,
        budget: int | None = None,
        record_transcript: bool = False,
    ) -> None:
        """Wrap a session over a d-regular tripartite graph.

        Raises
        ------
            NotTripartiteError: The base graph is not tripartite with d/2
                neighbors of every vertex in each other part.

        """
        graph = base.graph
        _check_parts(graph, parts)
        self.base = base
        self.parts = tuple(parts)
        self.members: tuple[tuple[int, ...], ...] = tuple(
            tuple(v for v in range(graph.n) if parts[v] == part) for part in range(3)
        )
        self.d = graph.degree(0) if graph.n else 0
        self._check_regular(graph)
        self.layout = _Layout(
            graph.n,
            k,
            {(a, b): len(self.members[a]) * self.d // 2 for a, b in PART_PAIRS},
        )
        self.k = k
        self.slot_of: dict[Edge, int] = {}
        self.edge_at: dict[tuple[tuple[int, int], int], Edge] = {}
        self.free = dict.fromkeys(PART_PAIRS, 0)
        super().__init__(
            self.layout.n, seed=seed, budget=budget, record_transcript=record_transcript
        )

    def _check_regular(self, graph: Graph) -> None:
        if self.d % 2:
            msg = f"Base degree {self.d} is odd"
            raise NotTripartiteError(msg)
        for v in range(graph.n):
            if graph.degree(v) != self.d:
                msg = f"Base graph is not regular: d({v}) = {graph.degree(v)}"
                raise NotTripartiteError(msg)
            per_part = [0, 0, 0]
            for u in graph.adjacency[v]:
                per_part[self.parts[u]] += 1
            if per_part[self.parts[v]]:
                msg = f"Vertex {v} has a neighbor in its own part"
                raise NotTripartiteError(msg)
            if any(
                count != self.d // 2
                for part, count in enumerate(per_part)
                if part != self.parts[v]
            ):
                msg = f"Vertex {v} does not have d/2 neighbors in each other part"
                raise NotTripartiteError(msg)

    @property
    def base_queries(self) -> int:
        """Return the number of queries made to the base graph."""
        return self.base.total

    def is_original(self, v: int) -> bool:
        """Return if v is a vertex of the base graph."""
        return v < self.layout.base_n

    def _bind(self, edge: Edge, slot: int | None = None) -> int:
        """Bind a base edge to a slot; the lowest free one when not given."""
        pair, tail, head = _oriented(edge, self.parts)
        key = edge_key(tail, head)
        if key in self.slot_of:
            return self.slot_of[key]
        if slot is None:
            while (pair, self.free[pair]) in self.edge_at:
                self.free[pair] += 1
            slot = self.free[pair]
        self.slot_of[key] = slot
        self.edge_at[pair, slot] = (tail, head)
        self.explored.add_path(self.layout.path(pair, slot, tail, head))
        return slot

    def _resolve(self, x: int) -> tuple[list[int], int]:
        """Return the path through path vertex x and the position of x on it."""
        pair, slot, position = self.layout.locate(x)
        if (pair, slot) not in self.edge_at:
            tail_part, head_part = pair
            while True:
                tails = self.members[tail_part]
                w = tails[int(self.rng.integers(len(tails)))]
                y = self.base.neighbor(w, int(self.rng.integers(1, self.d + 1)))
                if self.parts[y] == head_part:
                    break
            if edge_key(w, y) in self.slot_of:
                msg = f"Sampled base edge ({w}, {y}) was already revealed"
                LOGGER.debug(msg)
                raise SubdivisionAbortError(msg)
            self._bind((w, y), slot)
        tail, head = self.edge_at[pair, slot]
        return self.layout.path(pair, slot, tail, head), position

    def _true_degree(self, v: int) -> int:
        return self.d if self.is_original(v) else 2

    def _answer_degree(self, v: int) -> int:
        if self.is_original(v):
            return self.base.degree(v)
        return 2

    def _answer_neighbor(self, v: int, i: int) -> int:
        if self.is_original(v):
            w = self.base.neighbor(v, i)
            pair, tail, head = _oriented((v, w), self.parts)
            path = self.layout.path(pair, self._bind((v, w)), tail, head)
            return path[1] if v == tail else path[-2]
        path, position = self._resolve(v)
        return path[position - 1] if i == 1 else path[position + 1]

    def _answer_pair(self, u: int, v: int) -> bool:
        if self.is_original(u) and self.is_original(v):
            return False
        if self.is_original(u):
            u, v = v, u
        path, position = self._resolve(u)
        return v in (path[position - 1], path[position + 1])

    def materialize(self) -> Graph:
        """Return the subdivided graph consistent with every answer so far.

        Base edges never bound are placed, in base edge order, into the free
        slots of their region in increasing order.
        """
        graph = self.base.graph
        slot_of = dict(self.slot_of)
        taken: dict[tuple[int, int], set[int]] = {pair: set() for pair in PART_PAIRS}
        for pair, slot in self.edge_at:
            taken[pair].add(slot)
        cursor = dict.fromkeys(PART_PAIRS, 0)
        for edge in graph.edge_list:
            pair, tail, head = _oriented(edge, self.parts)
            key = edge_key(tail, head)
            if key in slot_of:
                continue
            while cursor[pair] in taken[pair]:
                cursor[pair] += 1
            slot_of[key] = cursor[pair]
            taken[pair].add(cursor[pair])
        return _materialize(graph, self.parts, self.layout, slot_of)


def subdivided_session(
    base: OracleSession,
    k: int,
    parts: Sequence[int],
    seed: int | np.random.SeedSequence | None = None,
    *,
    budget: int | None = None,
    record_transcript: bool = False,
) -> SubdividedOracle:
    """Open a subdivided-graph oracle over a session on a regular tripartite graph."""
    return SubdividedOracle(
        base, k, parts, seed=seed, budget=budget, record_transcript=record_transcript
    )


def tripartition(graph: Graph) -> list[int]:
    """Return a proper 3-coloring of a graph by backtracking.

    Meant for small base graphs whose parts are not known.

    Raises
    ------
        NotTripartiteError: No 3-coloring exists.

    """
    order = sorted(range(graph.n), key=lambda v: -graph.degree(v))
    colors = [-1] * graph.n

    def assign(index: int) -> bool:
        if index == len(order):
            return True
        v = order[index]
        used = {colors[u] for u in graph.adjacency[v]}
        for color in range(3):
            if color not in used:
                colors[v] = color
                if assign(index + 1):
                    return True
        colors[v] = -1
        return False

    if not assign(0):
        msg = "The graph is not 3-colorable"
        raise NotTripartiteError(msg)
    return colors


def is_tripartite(graph: Graph, parts: Sequence[int]) -> bool:
    """Return if no edge lies inside a part."""
    return all(parts[u] != parts[v] for u, v in graph.edge_list)

