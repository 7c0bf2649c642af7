"""Query access to a graph: degree, neighbor and pair queries."""

from __future__ import annotations

import re
from abc import ABC, abstractmethod
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from .const import LOGGER
from .exceptions import QueryBudgetExhaustedError, QueryError
from .graph import Edge, edge_key
from .models import QueryStats
from .utils import make_rng, seed_record

if TYPE_CHECKING:
    from collections.abc import Iterator, Sequence

    import numpy as np

    from .graph import Graph


@dataclass
class ExploredGraph:
    """The part of the graph revealed by queries so far.

    Every degree stored here is a true degree and every edge a true edge.
    New edges are buffered until the witness search drains them.
    """

    degrees: dict[int, int] = field(default_factory=dict)
    adjacency: dict[int, set[int]] = field(default_factory=dict)
    pending: list[Edge] = field(default_factory=list)
    m: int = 0

    def add_vertex(self, v: int, degree: int | None = None) -> None:
        """Record a vertex, and its degree when revealed."""
        self.adjacency.setdefault(v, set())
        if degree is not None:
            self.degrees[v] = degree

    def add_edge(self, u: int, v: int) -> bool:
        """Record an edge; return if it was new."""
        neighbors = self.adjacency.setdefault(u, set())
        if v in neighbors:
            return False
        neighbors.add(v)
        self.adjacency.setdefault(v, set()).add(u)
        self.pending.append(edge_key(u, v))
        self.m += 1
        return True

    def add_path(self, vertices: Sequence[int]) -> None:
        """Record every edge of a walk."""
        for u, v in zip(vertices, vertices[1:], strict=False):
            self.add_edge(u, v)

    def has_edge(self, u: int, v: int) -> bool:
        """Return if {u, v} is a revealed edge."""
        return v in self.adjacency.get(u, ())

    def neighbors(self, v: int) -> set[int]:
        """Return the revealed neighbors of v."""
        return self.adjacency.get(v, set())

    def drain(self) -> list[Edge]:
        """Return and clear the edges added since the last drain."""
        pending, self.pending = self.pending, []
        return pending

    def edges(self) -> list[Edge]:
        """Return every revealed edge once, as sorted pairs."""
        return sorted(
            (u, v)
            for u, neighbors in self.adjacency.items()
            for v in neighbors
            if u < v
        )

    @property
    def n(self) -> int:
        """Return the number of revealed vertices."""
        return len(self.adjacency)


class QueryAccess(ABC):
    """Counting, budget and randomness shared by every query oracle.

    Subclasses answer the three queries; this class validates arguments,
    charges the counters, grows the explored subgraph and keeps the
    optional transcript.
    """

    def __init__(
        self,
        n: int,
        *,
        seed: int | np.random.SeedSequence | None = None,
        budget: int | None = None,
        record_transcript: bool = False,
    ) -> None:
        """Initialize the access state.

        Args:
        ----
            n: Number of vertices, known to the tester up front.
            seed: Seed of the session RNG.
            budget: Maximum total number of queries, or None.
            record_transcript: Keep one text line per query.

        """
        self.n = n
        self.seed, self.spawn_key = seed_record(seed)
        self.budget = budget
        self.degree_queries = 0
        self.neighbor_queries = 0
        self.pair_queries = 0
        self.rng = make_rng(seed)
        self.explored = ExploredGraph()
        self.transcript: list[str] | None = [] if record_transcript else None

    @property
    def total(self) -> int:
        """Return the total number of queries so far."""
        return self.degree_queries + self.neighbor_queries + self.pair_queries

    def stats(self, wall_time: float | None = None) -> QueryStats:
        """Return the counters as a QueryStats snapshot."""
        return QueryStats(
            degree=self.degree_queries,
            neighbor=self.neighbor_queries,
            pair=self.pair_queries,
            wall_time=wall_time,
        )

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            msg = f"Vertex {v} is outside 0..{self.n - 1}"
            raise QueryError(msg)

    def _charge(self) -> None:
        if self.budget is not None and self.total >= self.budget:
            msg = f"Query budget of {self.budget} exhausted"
            raise QueryBudgetExhaustedError(msg)

    def _log(self, line: str) -> None:
        if self.transcript is not None:
            self.transcript.append(line)

    def degree(self, v: int) -> int:
        """Return d(v).

        Raises
        ------
            QueryError: v is out of range.
            QueryBudgetExhaustedError: No queries left.

        """
        self._check_vertex(v)
        known = self.explored.degrees.get(v)
        self._charge()
        self.degree_queries += 1
        answer = self._answer_degree(v) if known is None else known
        self.explored.add_vertex(v, answer)
        self._log(f"D {v} -> {answer}")
        return answer

    def neighbor(self, v: int, i: int) -> int:
        """Return the i-th neighbor of v, 1-based.

        Raises
        ------
            QueryError: v is out of range or i is not in 1..d(v).
            QueryBudgetExhaustedError: No queries left.

        """
        self._check_vertex(v)
        if i < 1 or i > self._true_degree(v):
            msg = f"Neighbor index {i} of {v} is outside 1..{self._true_degree(v)}"
            raise QueryError(msg)
        self._charge()
        self.neighbor_queries += 1
        answer = self._answer_neighbor(v, i)
        self.explored.add_edge(v, answer)
        self._log(f"N {v} {i} -> {answer}")
        return answer

    def pair(self, u: int, v: int) -> bool:
        """Return if {u, v} is an edge.

        Raises
        ------
            QueryError: u equals v, or either is out of range.
            QueryBudgetExhaustedError: No queries left.

        """
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            msg = f"Pair query needs two distinct vertices, got {u} twice"
            raise QueryError(msg)
        self._charge()
        self.pair_queries += 1
        answer = self._answer_pair(u, v)
        if answer:
            self.explored.add_edge(u, v)
        self._log(f"P {u} {v} -> {int(answer)}")
        return answer

    def known_degree(self, v: int) -> int:
        """Return d(v), querying it only if it was never revealed."""
        known = self.explored.degrees.get(v)
        return self.degree(v) if known is None else known

    def random_neighbor(self, v: int, degree: int | None = None) -> int:
        """Return a uniform neighbor of v with one neighbor query.

        Args:
        ----
            v: The vertex.
            degree: d(v) when the caller knows it; otherwise the revealed
                degree is used, queried first if never revealed.

        Raises:
        ------
            QueryError: v is isolated.

        """
        d = self.known_degree(v) if degree is None else degree
        if d == 0:
            msg = f"Vertex {v} has no neighbors"
            raise QueryError(msg)
        return self.neighbor(v, int(self.rng.integers(1, d + 1)))

    def sample_neighbors(self, v: int, s: int, degree: int) -> list[int]:
        """Return min(s, d) distinct uniform neighbors of v.

        Indices are drawn by rejection when s <= d/2 and from a permutation
        otherwise; s >= d enumerates the whole list in order.
        """
        if s >= degree:
            indices = range(1, degree + 1)
        elif 2 * s <= degree:
            chosen: dict[int, None] = {}
            while len(chosen) < s:
                chosen.setdefault(int(self.rng.integers(1, degree + 1)))
            indices = chosen.keys()
        else:
            indices = (self.rng.permutation(degree)[:s] + 1).tolist()
        return [self.neighbor(v, i) for i in indices]

    def uniform_vertex(self) -> int:
        """Return a uniform vertex id."""
        return int(self.rng.integers(0, self.n))

    def uniform_index(self, k: int) -> int:
        """Return a uniform integer in 1..k."""
        return int(self.rng.integers(1, k + 1))

    def coin(self, p: float) -> bool:
        """Return True with probability p."""
        return bool(self.rng.random() < p)

    @contextmanager
    def capped(self, limit: int) -> Iterator[None]:
        """Allow at most `limit` further queries inside the block."""
        saved = self.budget
        cap = self.total + limit
        self.budget = cap if saved is None else min(saved, cap)
        LOGGER.debug("Query cap set to %s (limit %s)", self.budget, limit)
        try:
            yield
        finally:
            self.budget = saved

    @abstractmethod
    def _true_degree(self, v: int) -> int:
        """Return d(v) without charging a query."""

    @abstractmethod
    def _answer_degree(self, v: int) -> int:
        """Answer a degree query."""

    @abstractmethod
    def _answer_neighbor(self, v: int, i: int) -> int:
        """Answer a neighbor query with a valid index."""

    @abstractmethod
    def _answer_pair(self, u: int, v: int) -> bool:
        """Answer a pair query on distinct vertices."""


class OracleSession(QueryAccess):
    """Query access to an in-memory graph.

    Answers are pure functions of the graph. One session belongs to one
    tester run; many sessions may share the same graph.
    """

    def __init__(
        self,
        graph: Graph,
        *,
        seed: int | np.random.SeedSequence | None = None,
        budget: int | None = None,
        record_transcript: bool = False,
    ) -> None:
        """Open a session over a graph."""
        super().__init__(
            graph.n, seed=seed, budget=budget, record_transcript=record_transcript
        )
        self.graph = graph

    def _true_degree(self, v: int) -> int:
        return self.graph.degree(v)

    def _answer_degree(self, v: int) -> int:
        return self.graph.degree(v)

    def _answer_neighbor(self, v: int, i: int) -> int:
        return self.graph.neighbor(v, i)

    def _answer_pair(self, u: int, v: int) -> bool:
        return self.graph.has_edge(u, v)


_TRANSCRIPT_LINE = re.compile(
    r"^(?:D (?P<dv>\d+) -> (?P<d>\d+)"
    r"|N (?P<nv>\d+) (?P<i>\d+) -> (?P<u>\d+)"
    r"|P (?P<pu>\d+) (?P<pv>\d+) -> (?P<p>[01]))$"
)


def replay(transcript: Sequence[str], access: QueryAccess) -> list[str]:
    """Re-issue every query of a transcript and compare the answers.

    Returns
    -------
        The lines whose answer differs, or that cannot be parsed. An empty
        list means the transcript is consistent with the oracle.

    """
    mismatches: list[str] = []
    for line in transcript:
        match = _TRANSCRIPT_LINE.match(line)
        if match is None:
            mismatches.append(line)
            continue
        try:
            if match["dv"] is not None:
                ok = access.degree(int(match["dv"])) == int(match["d"])
            elif match["nv"] is not None:
                answer = access.neighbor(int(match["nv"]), int(match["i"]))
                ok = answer == int(match["u"])
            else:
                adjacent = access.pair(int(match["pu"]), int(match["pv"]))
                ok = adjacent == bool(int(match["p"]))
        except QueryError:
            ok = False
        if not ok:
            mismatches.append(line)
    return mismatches
