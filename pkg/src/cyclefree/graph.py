"""Graphs, pattern graphs and arboricity utilities."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np

from .const import EXACT_ARBORICITY_MAX_N, PATTERN_MAX_K
from .exceptions import (
    DuplicateEdgeError,
    MalformedEdgeListError,
    PatternError,
    SelfLoopError,
    SizeLimitError,
    VertexRangeError,
)
from .models import ArboricityBound

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

Edge = tuple[int, int]


def edge_key(u: int, v: int) -> Edge:
    """Return the unordered edge {u, v} as a sorted pair."""
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph on vertices 0..n-1.

    Neighbor order is the insertion order of the edge list: adding edge
    (u, v) appends v to the list of u and u to the list of v.
    """

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    edge_list: tuple[Edge, ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> Graph:
        """Build a graph from an edge sequence, validating every edge.

        Args:
        ----
            n: Number of vertices.
            edges: Edges as (u, v) pairs, in the order that fixes the
                neighbor order.

        Returns:
        -------
            The graph.

        Raises:
        ------
            VertexRangeError: An endpoint is outside 0..n-1.
            SelfLoopError: An edge joins a vertex to itself.
            DuplicateEdgeError: An edge appears twice.

        """
        return _build(n, ((None, u, v) for u, v in edges))

    @property
    def m(self) -> int:
        """Return the number of edges."""
        return len(self.edge_list)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        """Return the degree of every vertex."""
        return tuple(len(neighbors) for neighbors in self.adjacency)

    @cached_property
    def degree_array(self) -> np.ndarray:
        """Return the degrees as a NumPy array."""
        return np.fromiter(self.degrees, dtype=np.int64, count=self.n)

    @cached_property
    def neighbor_sets(self) -> tuple[frozenset[int], ...]:
        """Return the neighborhoods as sets, for constant-time pair lookups."""
        return tuple(frozenset(neighbors) for neighbors in self.adjacency)

    def degree(self, v: int) -> int:
        """Return the degree of v."""
        return len(self.adjacency[v])

    def neighbor(self, v: int, i: int) -> int:
        """Return the i-th neighbor of v, 1-based."""
        return self.adjacency[v][i - 1]

    def has_edge(self, u: int, v: int) -> bool:
        """Return if {u, v} is an edge."""
        return v in self.neighbor_sets[u]

    def edges(self) -> tuple[Edge, ...]:
        """Return the edges in insertion order."""
        return self.edge_list

    def induced_edges(self, vertices: Iterable[int]) -> list[Edge]:
        """Return the edges with both endpoints in the given set."""
        inside = set(vertices)
        return [(u, v) for u, v in self.edge_list if u in inside and v in inside]

    def __repr__(self) -> str:
        """Return a short description."""
        return f"Graph(n={self.n}, m={self.m})"


def _build(n: int, rows: Iterable[tuple[int | None, int, int]]) -> Graph:
    """Build a graph from (line, u, v) rows; line is None outside a file."""
    if n < 0:
        msg = f"Vertex count must be non-negative, got {n}"
        raise VertexRangeError(msg)
    adjacency: list[list[int]] = [[] for _ in range(n)]
    seen: set[Edge] = set()
    edges: list[Edge] = []
    for line, u, v in rows:
        if not (0 <= u < n and 0 <= v < n):
            msg = f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}"
            raise VertexRangeError(msg, line)
        if u == v:
            msg = f"self-loop at vertex {u}"
            raise SelfLoopError(msg, line)
        key = edge_key(u, v)
        if key in seen:
            msg = f"duplicate edge ({u}, {v})"
            raise DuplicateEdgeError(msg, line)
        seen.add(key)
        edges.append((u, v))
        adjacency[u].append(v)
        adjacency[v].append(u)
    return Graph(
        n=n,
        adjacency=tuple(tuple(neighbors) for neighbors in adjacency),
        edge_list=tuple(edges),
    )


def _parse_pair(line: str, number: int) -> tuple[int, int]:
    """Parse a line holding exactly two integers."""
    fields = line.split()
    if len(fields) != 2:
        msg = f"expected two integers, got {line.strip()!r}"
        raise MalformedEdgeListError(msg, number)
    try:
        return int(fields[0]), int(fields[1])
    except ValueError as exception:
        msg = f"expected two integers, got {line.strip()!r}"
        raise MalformedEdgeListError(msg, number) from exception


def load_edge_list(text: bytes | str) -> Graph:
    """Parse the edge-list format: a header `n m`, then m lines `u v`.

    Blank lines are ignored. Every error names the 1-based line it
    happened on.

    Raises
    ------
        MalformedEdgeListError: Missing header, bad line or wrong edge count.
        VertexRangeError: An endpoint is outside 0..n-1.
        SelfLoopError: An edge joins a vertex to itself.
        DuplicateEdgeError: An edge appears twice, in either orientation.

    """
    if isinstance(text, bytes):
        try:
            text = text.decode()
        except UnicodeDecodeError as exception:
            msg = "edge list is not valid UTF-8 text"
            raise MalformedEdgeListError(msg) from exception

    lines = [
        (number, line)
        for number, line in enumerate(text.splitlines(), start=1)
        if line.strip()
    ]
    if not lines:
        msg = "missing `n m` header"
        raise MalformedEdgeListError(msg)

    header_line, header = lines[0]
    n, m = _parse_pair(header, header_line)
    if n < 0 or m < 0:
        msg = f"negative size in header {header.strip()!r}"
        raise MalformedEdgeListError(msg, header_line)
    body = lines[1:]
    if len(body) != m:
        msg = f"header announces {m} edges, found {len(body)}"
        raise MalformedEdgeListError(msg, header_line)
    return _build(n, ((number, *_parse_pair(line, number)) for number, line in body))


def save_edge_list(graph: Graph) -> bytes:
    """Serialize a graph to the edge-list format, edges in insertion order."""
    lines = [f"{graph.n} {graph.m}"]
    lines.extend(f"{u} {v}" for u, v in graph.edge_list)
    return ("\n".join(lines) + "\n").encode()


def read_edge_list(path: str | Path) -> Graph:
    """Load a graph from an edge-list file."""
    return load_edge_list(Path(path).read_bytes())


def write_edge_list(path: str | Path, graph: Graph) -> None:
    """Write a graph to an edge-list file."""
    Path(path).write_bytes(save_edge_list(graph))


def disjoint_union(graphs: Sequence[Graph]) -> tuple[Graph, tuple[int, ...]]:
    """Place graphs side by side, shifting vertex ids.

    Returns
    -------
        The union and the id offset of every input graph.

    """
    offsets: list[int] = []
    edges: list[Edge] = []
    total = 0
    for graph in graphs:
        offsets.append(total)
        edges.extend((u + total, v + total) for u, v in graph.edge_list)
        total += graph.n
    return Graph.from_edges(total, edges), tuple(offsets)


def degeneracy(graph: Graph) -> int:
    """Return the degeneracy: the largest minimum degree seen while peeling.

    Bucket-queue peeling, linear in n + m. Forests give 1, cycles 2.
    """
    degrees = list(graph.degrees)
    if not degrees:
        return 0
    buckets: list[set[int]] = [set() for _ in range(max(degrees) + 1)]
    for v, d in enumerate(degrees):
        buckets[d].add(v)
    removed = [False] * graph.n
    result = 0
    current = 0
    for _ in range(graph.n):
        current = max(current - 1, 0)
        while not buckets[current]:
            current += 1
        v = buckets[current].pop()
        removed[v] = True
        result = max(result, current)
        for u in graph.adjacency[v]:
            if removed[u]:
                continue
            buckets[degrees[u]].discard(u)
            degrees[u] -= 1
            buckets[degrees[u]].add(u)
    return result


def exact_arboricity(graph: Graph) -> int:
    """Return the Nash-Williams arboricity max ceil(|E(S)| / (|S| - 1)).

    Every vertex subset is visited: edge counts of all subsets are built
    by doubling, adding the highest vertex and its edges to lower ones.

    Raises
    ------
        SizeLimitError: The graph has more than 20 vertices.

    """
    n = graph.n
    if n > EXACT_ARBORICITY_MAX_N:
        msg = f"exact arboricity needs n <= {EXACT_ARBORICITY_MAX_N}, got {n}"
        raise SizeLimitError(msg)
    if graph.m == 0:
        return 0

    lower = np.zeros(n, dtype=np.uint32)
    for u, v in graph.edge_list:
        low, high = edge_key(u, v)
        lower[high] |= np.uint32(1 << low)

    masks = np.arange(1 << n, dtype=np.uint32)
    counts = np.zeros(1 << n, dtype=np.int64)
    for v in range(n):
        half = 1 << v
        counts[half : 2 * half] = counts[:half] + np.bitwise_count(
            masks[:half] & lower[v]
        )

    sizes = np.bitwise_count(masks).astype(np.int64)
    usable = sizes >= 2
    ratio = -(-counts[usable] // (sizes[usable] - 1))
    return int(ratio.max())


def arboricity_bound(graph: Graph) -> ArboricityBound:
    """Return the degeneracy, plus the exact arboricity on small graphs."""
    exact = exact_arboricity(graph) if graph.n <= EXACT_ARBORICITY_MAX_N else None
    return ArboricityBound(degeneracy=degeneracy(graph), exact_nash_williams=exact)


_PATTERN_NAME = re.compile(
    r"^(?:(?P<cycle>C)(?P<ck>\d+)|(?P<path>P)(?P<pk>\d+)"
    r"|K(?P<a>\d+),(?P<b>\d+)|K(?P<kk>\d+)|(?P<edge>edge)|(?P<tri>triangle))$",
    re.IGNORECASE,
)


@dataclass(frozen=True)
class PatternGraph:
    """Small pattern F on vertices 0..k-1; simple and without isolated vertices."""

    k: int
    edges: frozenset[Edge]
    name: str | None = None

    def __post_init__(self) -> None:
        """Validate the pattern."""
        if not 2 <= self.k <= PATTERN_MAX_K:
            msg = f"Pattern size must be in 2..{PATTERN_MAX_K}, got {self.k}"
            raise PatternError(msg)
        touched: set[int] = set()
        for u, v in self.edges:
            if not (0 <= u < v < self.k):
                msg = f"Pattern edge ({u}, {v}) is not a sorted pair in 0..{self.k - 1}"
                raise PatternError(msg)
            touched.update((u, v))
        if len(touched) != self.k:
            isolated = sorted(set(range(self.k)) - touched)
            msg = f"Pattern has isolated vertices: {isolated}"
            raise PatternError(msg)

    @classmethod
    def from_edges(
        cls, k: int, edges: Iterable[Edge], name: str | None = None
    ) -> PatternGraph:
        """Build a pattern, sorting every pair and rejecting loops and repeats."""
        keys: set[Edge] = set()
        for u, v in edges:
            if u == v:
                msg = f"Pattern has a self-loop at {u}"
                raise PatternError(msg)
            key = edge_key(u, v)
            if key in keys:
                msg = f"Pattern repeats edge ({u}, {v})"
                raise PatternError(msg)
            keys.add(key)
        return cls(k=k, edges=frozenset(keys), name=name)

    @classmethod
    def from_graph(cls, graph: Graph) -> PatternGraph:
        """Turn a loaded graph into a pattern."""
        return cls.from_edges(graph.n, graph.edge_list)

    @classmethod
    def edge(cls) -> PatternGraph:
        """Return the single edge."""
        return cls.from_edges(2, [(0, 1)], name="edge")

    @classmethod
    def cycle(cls, k: int) -> PatternGraph:
        """Return the cycle C_k."""
        if k < 3:
            msg = f"A cycle needs at least 3 vertices, got {k}"
            raise PatternError(msg)
        return cls.from_edges(k, [(i, (i + 1) % k) for i in range(k)], name=f"C{k}")

    @classmethod
    def path(cls, k: int) -> PatternGraph:
        """Return the path on k vertices."""
        return cls.from_edges(k, [(i, i + 1) for i in range(k - 1)], name=f"P{k}")

    @classmethod
    def star(cls, leaves: int) -> PatternGraph:
        """Return the star K_{1,leaves}; vertex 0 is the center."""
        return cls.from_edges(
            leaves + 1, [(0, i) for i in range(1, leaves + 1)], name=f"K1,{leaves}"
        )

    @classmethod
    def complete(cls, k: int) -> PatternGraph:
        """Return the clique K_k."""
        return cls.from_edges(
            k, [(u, v) for u in range(k) for v in range(u + 1, k)], name=f"K{k}"
        )

    @classmethod
    def complete_bipartite(cls, a: int, b: int) -> PatternGraph:
        """Return K_{a,b}; the first a vertices form one side."""
        if a == 1:
            return cls.star(b)
        return cls.from_edges(
            a + b,
            [(u, a + v) for u in range(a) for v in range(b)],
            name=f"K{a},{b}",
        )

    @classmethod
    def parse(cls, name: str) -> PatternGraph:
        """Return a pattern by name: `C5`, `P4`, `K4`, `K1,3`, `edge` or `triangle`.

        Raises
        ------
            PatternError: The name is not understood.

        """
        match = _PATTERN_NAME.match(name.strip())
        if match is None:
            msg = (
                f"Unknown pattern {name!r}; expected Ck, Pk, Kk, Ka,b, edge or triangle"
            )
            raise PatternError(msg)
        if match["cycle"]:
            return cls.cycle(int(match["ck"]))
        if match["path"]:
            return cls.path(int(match["pk"]))
        if match["a"]:
            return cls.complete_bipartite(int(match["a"]), int(match["b"]))
        if match["kk"]:
            return cls.complete(int(match["kk"]))
        if match["edge"]:
            return cls.edge()
        return cls.cycle(3)

    @property
    def label(self) -> str:
        """Return the pattern name, or a description."""
        return self.name or f"F(k={self.k}, m={len(self.edges)})"

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Return sorted neighbor lists."""
        neighbors: list[list[int]] = [[] for _ in range(self.k)]
        for u, v in sorted(self.edges):
            neighbors[u].append(v)
            neighbors[v].append(u)
        return tuple(tuple(sorted(items)) for items in neighbors)

    def is_cycle(self) -> bool:
        """Return if the pattern is a single cycle through all its vertices."""
        if self.k < 3 or len(self.edges) != self.k:
            return False
        if any(len(items) != 2 for items in self.adjacency):
            return False
        previous, current, steps = 0, self.adjacency[0][0], 1
        while current != 0:
            previous, current = current, next(
                u for u in self.adjacency[current] if u != previous
            )
            steps += 1
        return steps == self.k


def is_vertex_cover(pattern: PatternGraph, mask: int) -> bool:
    """Return if the vertex set encoded by the bitmask touches every edge."""
    return all(mask >> u & 1 or mask >> v & 1 for u, v in pattern.edges)


def min_vertex_cover_size(pattern: PatternGraph) -> int:
    """Return the size of a minimum vertex cover, by exhaustive search."""
    return min(
        mask.bit_count()
        for mask in range(1 << pattern.k)
        if is_vertex_cover(pattern, mask)
    )


@lru_cache(maxsize=256)
def largest_minimal_cover(pattern: PatternGraph) -> int:
    """Return the maximum over vertex covers Z of the smallest cover inside Z.

    best[Z] holds the smallest cover contained in Z; it comes from Z itself
    or from Z minus one vertex, so masks are filled in increasing order.
    """
    size = 1 << pattern.k
    infinity = pattern.k + 1
    best = [infinity] * size
    ell = 0
    for mask in range(size):
        if is_vertex_cover(pattern, mask):
            value = mask.bit_count()
            bits = mask
            while bits:
                low = bits & -bits
                value = min(value, best[mask ^ low])
                bits ^= low
            best[mask] = value
            ell = max(ell, value)
    return ell


@lru_cache(maxsize=256)
def ell_of(pattern: PatternGraph) -> int:
    """Return the number of light vertices the general tester must hit in a copy.

    For a cycle this is ceil(k/2), the size of its minimum vertex cover.
    Every other pattern uses the largest minimal vertex cover.
    """
    if pattern.is_cycle():
        return -(-pattern.k // 2)
    return largest_minimal_cover(pattern)
